#include "stark/output.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace stark {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumRow>& rows) {
    out << "g,level_index,energy,parity,photon_content,source\n";
    for (const auto& r : rows) {
        out << format_number(r.g) << ',' << r.level_index << ',' << format_number(r.energy) << ',' << r.parity << ','
            << format_number(r.photon_content) << ',' << r.source << '\n';
    }
}

void write_spectrum_json(std::ostream& out, const std::vector<SpectrumRow>& rows) {
    nlohmann::json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["columns"] = {"g", "level_index", "energy", "parity", "photon_content", "source"};
    nlohmann::json data = nlohmann::json::array();
    for (const auto& r : rows) {
        data.push_back({number_or_null(r.g), r.level_index, number_or_null(r.energy), r.parity,
                        number_or_null(r.photon_content), r.source});
    }
    doc["rows"] = std::move(data);
    out << doc.dump(1) << '\n';
}

void write_crosscheck_csv(std::ostream& out, const CrosscheckReport& report) {
    out << "check,g,level_index,parity,reference,candidate,discrepancy,tolerance,flag\n";
    for (const auto& e : report.entries) {
        out << e.check << ',' << format_number(e.g) << ',' << e.level_index << ',' << e.parity << ','
            << format_number(e.reference) << ',' << format_number(e.candidate) << ','
            << format_number(e.discrepancy) << ',' << format_number(e.tolerance) << ',' << (e.flagged ? 1 : 0)
            << '\n';
    }
}

void write_crosscheck_json(std::ostream& out, const CrosscheckReport& report) {
    nlohmann::json doc;
    doc["schema_version"] = kSchemaVersion;
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : report.entries) {
        entries.push_back({{"check", e.check},
                           {"g", number_or_null(e.g)},
                           {"level_index", e.level_index},
                           {"parity", e.parity},
                           {"reference", number_or_null(e.reference)},
                           {"candidate", number_or_null(e.candidate)},
                           {"discrepancy", number_or_null(e.discrepancy)},
                           {"tolerance", number_or_null(e.tolerance)},
                           {"flag", e.flagged}});
    }
    nlohmann::json notes = nlohmann::json::array();
    for (const auto& n : report.notes) notes.push_back({{"check", n.check}, {"g", n.g}, {"message", n.message}});
    doc["entries"] = std::move(entries);
    doc["notes"] = std::move(notes);
    out << doc.dump(1) << '\n';
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

std::string sidecar_path(const std::string& output_path) { return output_path + ".meta.json"; }

}  // namespace stark
