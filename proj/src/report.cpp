#include "rdfront/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace rdfront {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

ConsolidatedReport make_report(const std::vector<std::string>& run_dirs) {
    ConsolidatedReport rep;
    for (const auto& d : run_dirs) {
        ReportRow row;
        row.dir = d;
        const fs::path man = fs::path(d) / "run_manifest.json";
        const fs::path cex = fs::path(d) / "counterexample_report.json";
        try {
            if (fs::exists(man)) {
                std::ifstream in(man);
                json j = json::parse(in);
                row.kind = "experiment";
                row.name = j.at("config").at("name").get<std::string>();
                row.regime = j.at("wave").at("regime").get<std::string>();
                row.c_star = j.at("wave").at("c_star").get<double>();
                row.max_Q = j.at("wave").at("maxQ").get<double>();
                row.max_eta_pp = j.at("wave").at("maxEtaPP").get<double>();
                row.complete = true;
                row.pass = true;
                for (const auto& f : j.at("fit_verdicts")) {
                    const bool p = f.at("pass").get<bool>();
                    row.pass = row.pass && p;
                    row.verdict_lines.push_back(
                        f.at("model").get<std::string>() + ": measured " +
                        fmt(f.at("measured").get<double>()) + " target " +
                        fmt(f.at("target").get<double>()) + " +- " +
                        fmt(f.at("tolerance").get<double>()) +
                        (p ? " [pass]" : " [FAIL]"));
                }
            } else if (fs::exists(cex)) {
                std::ifstream in(cex);
                json j = json::parse(in);
                row.kind = "counterexample";
                row.name = "counterexample";
                row.regime = "pushmi_pullyu";
                row.c_star = j.at("closure_c_star").get<double>();
                row.max_Q = j.at("max_Q").get<double>();
                row.complete = true;
                row.pass = j.at("pass").get<bool>();
                row.verdict_lines.push_back(
                    std::string("max Q = ") + fmt(row.max_Q) + " > 1, margin " +
                    fmt(j.at("margin_mid").get<double>()) +
                    (row.pass ? " [pass]" : " [FAIL]"));
            } else {
                row.kind = "missing";
                row.complete = false;
                row.pass = false;
            }
        } catch (const std::exception& e) {
            row.complete = false;
            row.pass = false;
            row.verdict_lines.push_back(std::string("error: ") + e.what());
        }
        if (row.complete) rep.all_pass = rep.all_pass && row.pass;
        rep.rows.push_back(row);
    }
    return rep;
}

json ConsolidatedReport::to_json() const {
    json rows_j = json::array();
    for (const auto& r : rows)
        rows_j.push_back({{"dir", r.dir},
                          {"name", r.name},
                          {"kind", r.kind},
                          {"regime", r.regime},
                          {"c_star", r.c_star},
                          {"maxQ", r.max_Q},
                          {"maxEtaPP", r.max_eta_pp},
                          {"complete", r.complete},
                          {"pass", r.pass},
                          {"verdicts", r.verdict_lines}});
    return json{{"rows", rows_j}, {"all_pass", all_pass}};
}

std::string ConsolidatedReport::to_text() const {
    std::ostringstream os;
    os << "experiment            regime          c_star     maxQ      status\n";
    os << "------------------------------------------------------------------\n";
    for (const auto& r : rows) {
        os.width(22);
        os << std::left << r.name.substr(0, 21);
        os.width(16);
        os << std::left << r.regime;
        os.width(11);
        os << std::left << fmt(r.c_star);
        os.width(10);
        os << std::left << fmt(r.max_Q);
        os << (r.complete ? (r.pass ? "pass" : "FAIL") : "incomplete") << "\n";
        for (const auto& v : r.verdict_lines) os << "    " << v << "\n";
    }
    os << (all_pass ? "ALL PASS\n" : "FAILURES PRESENT\n");
    return os.str();
}

}  // namespace rdfront
