// `stark-spectra <mode> --config <path> [--out <path>] [--threads N]`

#include "stark/config.hpp"
#include "stark/runner.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <iostream>
#include <string>

namespace {

// STARK_SPECTRA_THREADS, when set to a positive integer.
std::optional<unsigned> threads_from_env() {
    const char* raw = std::getenv("STARK_SPECTRA_THREADS");
    if (raw == nullptr) return std::nullopt;
    const std::string text(raw);
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || value == 0) return std::nullopt;
    return value;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectra of the quantum Rabi-Stark model"};
    std::string mode_name;
    std::string config_path;
    std::string out_path;
    unsigned threads = 0;
    app.add_option("mode", mode_name, "sweep | gfunction | confluence | slowmode | crosscheck")
        ->required()
        ->check(CLI::IsMember({"sweep", "gfunction", "confluence", "slowmode", "crosscheck"}));
    app.add_option("--config", config_path, "INI-style run configuration")->required();
    app.add_option("--out", out_path, "Output path (overrides [output] path)");
    app.add_option("--threads", threads, "Worker threads (default: STARK_SPECTRA_THREADS, else config)")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : stark::exit_config;
    }

    stark::RunConfig config;
    try {
        config = stark::load_config(config_path, stark::parse_mode(mode_name));
        if (!out_path.empty()) config.output_path = out_path;
        if (threads > 0) {
            config.threads = threads;
        } else if (const auto env = threads_from_env()) {
            config.threads = *env;
        }
        config.validate();
    } catch (const stark::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return stark::exit_config;
    }
    return stark::run(config, std::cerr);
}
