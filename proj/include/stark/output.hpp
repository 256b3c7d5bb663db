// Spectrum tables (CSV / JSON), crosscheck reports and the
// metadata sidecar.
//
// CSV: header `g,level_index,energy,parity,photon_content,source`, numbers with
// 17 significant digits, LF line endings. Quantities a source does not provide
// are written as `nan`; parity 0 means not parity resolved. The schema version
// lives in the JSON outputs and the sidecar.

#pragma once

#include "stark/crosscheck.hpp"

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace stark {

inline constexpr int kSchemaVersion = 1;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SpectrumRow {
    double g{0.0};
    std::size_t level_index{0};
    double energy{0.0};
    int parity{0};
    double photon_content{0.0};
    std::string source;
};

// 17 significant digits (%.17g); nan, inf and -inf spelled out.
std::string format_number(double value);

void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumRow>& rows);
void write_spectrum_json(std::ostream& out, const std::vector<SpectrumRow>& rows);

// CSV header `check,g,level_index,parity,reference,candidate,discrepancy,tolerance,flag`.
void write_crosscheck_csv(std::ostream& out, const CrosscheckReport& report);
void write_crosscheck_json(std::ostream& out, const CrosscheckReport& report);

// Writes content to path, throwing IoError on failure.
void write_file(const std::string& path, const std::string& content);

// <output path>.meta.json
std::string sidecar_path(const std::string& output_path);

}  // namespace stark
