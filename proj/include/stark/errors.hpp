// Exception types shared across the spectral toolkit

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stark {

// Parameter outside the region where an operation is defined (e.g. gamma >= omega
// for the renormalization map, g = 0 for the confluence functions).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Spectral parameter x(E) sits within pole_guard of an integer pole of G.
class PoleProximity : public std::runtime_error {
public:
    PoleProximity(const std::string& what, double x, long pole)
        : std::runtime_error(what), x_(x), pole_(pole) {}
    double x() const noexcept { return x_; }
    long pole() const noexcept { return pole_; }

private:
    double x_;
    long pole_;
};

// Iterative numerics that did not meet their stopping criterion.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, std::size_t iterations, double residual)
        : std::runtime_error(what), iterations_(iterations), residual_(residual) {}
    std::size_t iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    std::size_t iterations_;
    double residual_;
};

// Finite-difference box too small for the requested number of levels.
class BoundaryTooTight : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace stark
