#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "hexprint/analysis.hpp"
#include "hexprint/scenario.hpp"

namespace hexprint {

/// Column order of trace.csv.
extern const char* const kTraceCsvHeader;

std::string trace_csv(const std::vector<RunRecord>& records);
std::vector<RunRecord> parse_trace_csv(const std::string& text);

/// Bead trace plus everything analysis needs to recompute the report offline.
nlohmann::json bead_json(const RunTrace& trace);
/// Restores the bead/target half of a run from bead.json; records come from trace.csv.
RunTrace run_from_json(const nlohmann::json& bead, std::vector<RunRecord> records);

nlohmann::json report_json(const PrintReport& report);
PrintReport report_from_json(const nlohmann::json& j);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Writes trace.csv, bead.json, report.json (when the run has a print phase) and render.svg.
void write_run_outputs(const RunTrace& trace, const std::filesystem::path& dir);
RunTrace load_run(const std::filesystem::path& dir);

}  // namespace hexprint
