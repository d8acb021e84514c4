#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace rdfront {

struct ReportRow {
    std::string dir;
    std::string name;
    std::string kind;    // "experiment" | "counterexample"
    std::string regime;
    double c_star = 0;
    double max_Q = 0, max_eta_pp = 0;
    bool complete = false;
    bool pass = false;
    std::vector<std::string> verdict_lines;
};

struct ConsolidatedReport {
    std::vector<ReportRow> rows;
    bool all_pass = true;
    nlohmann::json to_json() const;
    std::string to_text() const;
};

// Reads run_manifest.json / counterexample_report.json from each directory;
// missing artifacts mark the row incomplete (non-fatal).
ConsolidatedReport make_report(const std::vector<std::string>& run_dirs);

}  // namespace rdfront
