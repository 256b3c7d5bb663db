#include "stark/config.hpp"

#include "stark/output.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace stark {

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::sweep: return "sweep";
        case Mode::gfunction: return "gfunction";
        case Mode::confluence: return "confluence";
        case Mode::slowmode: return "slowmode";
        case Mode::crosscheck: return "crosscheck";
    }
    return "unknown";
}

Mode parse_mode(const std::string& text) {
    for (Mode m : {Mode::sweep, Mode::gfunction, Mode::confluence, Mode::slowmode, Mode::crosscheck}) {
        if (text == to_string(m)) return m;
    }
    throw ConfigError("unknown mode '" + text + "'");
}

std::string to_string(OutputFormat format) { return format == OutputFormat::csv ? "csv" : "json"; }

std::vector<double> GridSpec::values() const {
    std::vector<double> out;
    if (count == 1) return {start};
    for (std::size_t i = 0; i < count; ++i) {
        // Both endpoints exact.
        const double t = static_cast<double>(i) / static_cast<double>(count - 1);
        out.push_back(i + 1 == count ? stop : start + (stop - start) * t);
    }
    return out;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty() || !std::isfinite(out)) {
        throw ConfigError(key + ": expected a finite number, got '" + v + "'");
    }
    return out;
}

long long parse_integer(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    }
    return out;
}

std::size_t parse_count(const std::string& key, const std::string& raw) {
    const long long v = parse_integer(key, raw);
    if (v < 0) throw ConfigError(key + ": must be >= 0");
    return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& key, const std::string& raw) {
    std::string v = trim(raw);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"model.omega", [](RunConfig& c, auto& k, auto& v) { c.params.omega = parse_double(k, v); }},
        {"model.gamma", [](RunConfig& c, auto& k, auto& v) { c.params.gamma = parse_double(k, v); }},
        {"model.delta", [](RunConfig& c, auto& k, auto& v) { c.params.delta = parse_double(k, v); }},
        {"grid.g_start", [](RunConfig& c, auto& k, auto& v) { c.grid.start = parse_double(k, v); }},
        {"grid.g_stop", [](RunConfig& c, auto& k, auto& v) { c.grid.stop = parse_double(k, v); }},
        {"grid.g_count", [](RunConfig& c, auto& k, auto& v) { c.grid.count = parse_count(k, v); }},
        {"solver.k_levels", [](RunConfig& c, auto& k, auto& v) { c.k_levels = parse_count(k, v); }},
        {"solver.n_trunc", [](RunConfig& c, auto& k, auto& v) { c.n_trunc = parse_count(k, v); }},
        {"solver.adaptive", [](RunConfig& c, auto& k, auto& v) { c.adaptive = parse_bool(k, v); }},
        {"solver.rel_tol", [](RunConfig& c, auto& k, auto& v) { c.rel_tol = parse_double(k, v); }},
        {"solver.n_start", [](RunConfig& c, auto& k, auto& v) { c.n_start = parse_count(k, v); }},
        {"solver.n_cap", [](RunConfig& c, auto& k, auto& v) { c.n_cap = parse_count(k, v); }},
        {"solver.solver",
         [](RunConfig& c, auto& k, auto& v) {
             const std::string s = trim(v);
             if (s == "parity_blocks") c.solver = SolverKind::parity_blocks;
             else if (s == "dense") c.solver = SolverKind::dense;
             else throw ConfigError(k + ": expected parity_blocks or dense, got '" + s + "'");
         }},
        {"solver.parity",
         [](RunConfig& c, auto& k, auto& v) {
             const std::string s = trim(v);
             if (s == "both") c.parity.reset();
             else if (s == "+" || s == "+1" || s == "positive") c.parity = Parity::positive;
             else if (s == "-" || s == "-1" || s == "negative") c.parity = Parity::negative;
             else throw ConfigError(k + ": expected both, + or -, got '" + s + "'");
         }},
        {"solver.gap_window", [](RunConfig& c, auto& k, auto& v) { c.gap_window = parse_count(k, v); }},
        {"gfunction.n_terms_max", [](RunConfig& c, auto& k, auto& v) { c.gseries.n_terms_max = parse_count(k, v); }},
        {"gfunction.tail_tolerance",
         [](RunConfig& c, auto& k, auto& v) { c.gseries.tail_tolerance = parse_double(k, v); }},
        {"gfunction.pole_guard", [](RunConfig& c, auto& k, auto& v) { c.gseries.pole_guard = parse_double(k, v); }},
        {"gfunction.scan_points", [](RunConfig& c, auto& k, auto& v) { c.scan_points = parse_count(k, v); }},
        {"confluence.n_max",
         [](RunConfig& c, auto& k, auto& v) { c.confluence_n_max = static_cast<int>(parse_count(k, v)); }},
        {"confluence.solver_tol", [](RunConfig& c, auto& k, auto& v) { c.confluence_tol = parse_double(k, v); }},
        {"slowmode.n_max", [](RunConfig& c, auto& k, auto& v) { c.slow_n_max = static_cast<int>(parse_count(k, v)); }},
        {"slowmode.k_levels", [](RunConfig& c, auto& k, auto& v) { c.slow_k_levels = parse_count(k, v); }},
        {"slowmode.q_half_width", [](RunConfig& c, auto& k, auto& v) { c.q_half_width = parse_double(k, v); }},
        {"slowmode.n_points", [](RunConfig& c, auto& k, auto& v) { c.n_points = parse_count(k, v); }},
        {"slowmode.potential_points",
         [](RunConfig& c, auto& k, auto& v) { c.potential_points = parse_count(k, v); }},
        {"crosscheck.checks",
         [](RunConfig& c, auto& k, auto& v) {
             c.check_gfunction = c.check_bic = c.check_harmonic = false;
             std::stringstream ss(v);
             std::string item;
             while (std::getline(ss, item, ',')) {
                 item = trim(item);
                 if (item == "gfunction") c.check_gfunction = true;
                 else if (item == "bic") c.check_bic = true;
                 else if (item == "harmonic") c.check_harmonic = true;
                 else if (!item.empty()) throw ConfigError(k + ": unknown check '" + item + "'");
             }
         }},
        {"crosscheck.gfunction_tol", [](RunConfig& c, auto& k, auto& v) { c.gfunction_tol = parse_double(k, v); }},
        {"crosscheck.bic_tol", [](RunConfig& c, auto& k, auto& v) { c.bic_tol = parse_double(k, v); }},
        {"crosscheck.bic_n_max",
         [](RunConfig& c, auto& k, auto& v) { c.bic_n_max = static_cast<int>(parse_count(k, v)); }},
        {"crosscheck.bic_levels", [](RunConfig& c, auto& k, auto& v) { c.bic_levels = parse_count(k, v); }},
        {"crosscheck.harmonic_tol", [](RunConfig& c, auto& k, auto& v) { c.harmonic_tol = parse_double(k, v); }},
        {"crosscheck.harmonic_n_max",
         [](RunConfig& c, auto& k, auto& v) { c.harmonic_n_max = static_cast<int>(parse_count(k, v)); }},
        {"crosscheck.harmonic_levels",
         [](RunConfig& c, auto& k, auto& v) { c.harmonic_levels = parse_count(k, v); }},
        {"crosscheck.harmonic_fraction",
         [](RunConfig& c, auto& k, auto& v) { c.harmonic_fraction = parse_double(k, v); }},
        {"output.path", [](RunConfig& c, auto&, auto& v) { c.output_path = trim(v); }},
        {"output.format",
         [](RunConfig& c, auto& k, auto& v) {
             const std::string s = trim(v);
             if (s == "csv") c.format = OutputFormat::csv;
             else if (s == "json") c.format = OutputFormat::json;
             else throw ConfigError(k + ": expected csv or json, got '" + s + "'");
         }},
        {"run.threads", [](RunConfig& c, auto& k, auto& v) { c.threads = static_cast<unsigned>(parse_count(k, v)); }},
    };
    return table;
}

}  // namespace

void RunConfig::validate() const {
    try {
        params.validate();
    } catch (const std::exception& ex) {
        throw ConfigError(std::string("model: ") + ex.what());
    }
    if (grid.count < 1) throw ConfigError("grid.g_count must be >= 1");
    if (grid.start < 0.0 || grid.stop < grid.start) throw ConfigError("grid: need 0 <= g_start <= g_stop");
    if (grid.count == 1 && grid.stop != grid.start) throw ConfigError("grid: g_count = 1 needs g_start == g_stop");
    if (k_levels < 1) throw ConfigError("solver.k_levels must be >= 1");
    if (n_trunc < 2) throw ConfigError("solver.n_trunc must be >= 2");
    if (!adaptive && k_levels > (parity ? n_trunc : 2 * n_trunc)) {
        throw ConfigError("solver.k_levels exceeds the truncated space");
    }
    if (adaptive && n_cap < std::max<std::size_t>(k_levels, n_start)) {
        throw ConfigError("solver.n_cap must be >= k_levels and n_start");
    }
    if (!(rel_tol > 0.0)) throw ConfigError("solver.rel_tol must be > 0");
    if (gap_window < 1) throw ConfigError("solver.gap_window must be >= 1");
    try {
        gseries.validate();
    } catch (const std::exception& ex) {
        throw ConfigError(std::string("gfunction: ") + ex.what());
    }
    if (scan_points < 2) throw ConfigError("gfunction.scan_points must be >= 2");
    if (!(confluence_tol > 0.0)) throw ConfigError("confluence.solver_tol must be > 0");
    if (n_points < 101 || n_points % 2 == 0) throw ConfigError("slowmode.n_points must be odd and >= 101");
    if (!(q_half_width > 0.0)) throw ConfigError("slowmode.q_half_width must be > 0");
    if (slow_k_levels < 1) throw ConfigError("slowmode.k_levels must be >= 1");
    if (potential_points == 1) throw ConfigError("slowmode.potential_points must be 0 or >= 2");
    if (!(gfunction_tol > 0.0) || !(bic_tol > 0.0) || !(harmonic_tol > 0.0) || !(harmonic_fraction > 0.0)) {
        throw ConfigError("crosscheck: tolerances must be > 0");
    }
    if (bic_levels < 1 || harmonic_levels < 1) throw ConfigError("crosscheck: level counts must be >= 1");
    if (mode == Mode::gfunction && !params.subcritical()) {
        throw ConfigError("gfunction mode requires gamma < omega");
    }
    if (output_path.empty()) throw ConfigError("output.path must not be empty");
}

RunConfig parse_config(std::istream& in, Mode mode) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& ex) {
        throw ConfigError(std::string("config syntax: ") + ex.what());
    }
    RunConfig config;
    config.mode = mode;
    for (const auto& [section, body] : tree) {
        if (!body.data().empty()) throw ConfigError("key '" + section + "' outside any [section]");
        for (const auto& [key, node] : body) {
            const std::string name = section + "." + key;
            const auto it = setters().find(name);
            if (it == setters().end()) throw ConfigError("unknown setting '" + name + "'");
            it->second(config, name, node.data());
        }
    }
    config.validate();
    return config;
}

RunConfig load_config(const std::string& path, Mode mode) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, mode);
}

std::vector<std::pair<std::string, std::string>> describe(const RunConfig& c) {
    const auto num = [](double v) { return format_number(v); };
    const auto cnt = [](auto v) { return std::to_string(v); };
    const auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
    std::string checks;
    for (const auto& [on, name] : {std::pair{c.check_gfunction, "gfunction"}, std::pair{c.check_bic, "bic"},
                                   std::pair{c.check_harmonic, "harmonic"}}) {
        if (!on) continue;
        if (!checks.empty()) checks += ",";
        checks += name;
    }
    return {
        {"run.mode", to_string(c.mode)},
        {"run.threads", cnt(c.threads)},
        {"model.omega", num(c.params.omega)},
        {"model.gamma", num(c.params.gamma)},
        {"model.delta", num(c.params.delta)},
        {"grid.g_start", num(c.grid.start)},
        {"grid.g_stop", num(c.grid.stop)},
        {"grid.g_count", cnt(c.grid.count)},
        {"solver.k_levels", cnt(c.k_levels)},
        {"solver.n_trunc", cnt(c.n_trunc)},
        {"solver.adaptive", flag(c.adaptive)},
        {"solver.rel_tol", num(c.rel_tol)},
        {"solver.n_start", cnt(c.n_start)},
        {"solver.n_cap", cnt(c.n_cap)},
        {"solver.solver", to_string(c.solver)},
        {"solver.parity", c.parity ? (*c.parity == Parity::positive ? "+" : "-") : "both"},
        {"solver.gap_window", cnt(c.gap_window)},
        {"gfunction.n_terms_max", cnt(c.gseries.n_terms_max)},
        {"gfunction.tail_tolerance", num(c.gseries.tail_tolerance)},
        {"gfunction.pole_guard", num(c.gseries.pole_guard)},
        {"gfunction.scan_points", cnt(c.scan_points)},
        {"confluence.n_max", cnt(c.confluence_n_max)},
        {"confluence.solver_tol", num(c.confluence_tol)},
        {"slowmode.n_max", cnt(c.slow_n_max)},
        {"slowmode.k_levels", cnt(c.slow_k_levels)},
        {"slowmode.q_half_width", num(c.q_half_width)},
        {"slowmode.n_points", cnt(c.n_points)},
        {"slowmode.potential_points", cnt(c.potential_points)},
        {"slowmode.mass", "1"},
        {"crosscheck.checks", checks},
        {"crosscheck.gfunction_tol", num(c.gfunction_tol)},
        {"crosscheck.bic_tol", num(c.bic_tol)},
        {"crosscheck.bic_n_max", cnt(c.bic_n_max)},
        {"crosscheck.bic_levels", cnt(c.bic_levels)},
        {"crosscheck.harmonic_tol", num(c.harmonic_tol)},
        {"crosscheck.harmonic_n_max", cnt(c.harmonic_n_max)},
        {"crosscheck.harmonic_levels", cnt(c.harmonic_levels)},
        {"crosscheck.harmonic_fraction", num(c.harmonic_fraction)},
        {"output.path", c.output_path},
        {"output.format", to_string(c.format)},
    };
}

}  // namespace stark
