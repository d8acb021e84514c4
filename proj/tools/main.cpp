#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rdfront/config.hpp"
#include "rdfront/counterexample.hpp"
#include "rdfront/csv.hpp"
#include "rdfront/experiment.hpp"
#include "rdfront/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rdfront;

namespace {

json wave_report_json(const ExperimentConfig& cfg, const std::string& out_root) {
    double c_star = 0;
    bool cached = false;
    WaveProfile wp = obtain_wave_profile(cfg, out_root, &c_star, &cached);
    auto st = check_structure(wp, cfg.delta0, cfg.delta1);
    return json{{"c_star", wp.c_star},
                {"lambda0", wp.lambda0},
                {"lambda1", wp.lambda1},
                {"regime", regime_name(wp.regime)},
                {"maxQ", st.max_Q},
                {"maxEtaPP", st.max_eta_pp},
                {"r0", st.r0},
                {"r1", st.r1},
                {"wave_from_cache", cached}};
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path, std::ios::binary);
        out << j.dump(2) << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reaction-diffusion front laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_path, out_root = "runs";
    int jobs = 1;

    auto add_config_opts = [&](CLI::App* sub, bool need_config) {
        auto* o = sub->add_option("-c,--config", config_path,
                                  "experiment config (JSON)");
        if (need_config) o->required();
        sub->add_option("-o,--out", out_path, "output file (default stdout)");
        sub->add_option("--out-root", out_root, "run output root directory");
    };

    auto* sp_config = app.add_subcommand("config", "configuration utilities");
    bool print_defaults = false;
    sp_config->add_flag("--print-defaults", print_defaults,
                        "emit the default config with every tolerance");
    sp_config->add_option("-o,--out", out_path, "output file");

    auto* sp_speed =
        app.add_subcommand("speed", "minimal wave speed for a nonlinearity");
    add_config_opts(sp_speed, true);

    auto* sp_profile = app.add_subcommand(
        "profile", "wave profile tables (eta, Q, R, U_*) and report");
    add_config_opts(sp_profile, true);
    std::string table_dir;
    sp_profile->add_option("--tables", table_dir,
                           "directory for the CSV tables");

    auto* sp_checkq =
        app.add_subcommand("check-q", "structure report (Q, eta'', R bounds)");
    add_config_opts(sp_checkq, true);

    auto* sp_sim = app.add_subcommand("simulate", "run experiments end to end");
    std::vector<std::string> config_paths;
    sp_sim->add_option("configs", config_paths, "config files")->required();
    sp_sim->add_option("--out-root", out_root, "run output root directory");
    sp_sim->add_option("-j,--jobs", jobs, "parallel workers");

    auto* sp_fit =
        app.add_subcommand("fit", "recompute fits from a run directory");
    std::string run_dir;
    sp_fit->add_option("run_dir", run_dir, "run directory")->required();

    auto* sp_cex = app.add_subcommand(
        "counterexample", "build and verify the Q > 1 construction");
    std::string cex_dir = "counterexample";
    sp_cex->add_option("-o,--out", cex_dir, "output directory");
    std::size_t cex_grid = 4096;
    sp_cex->add_option("--grid-n", cex_grid, "working grid size (>= 4096)");

    auto* sp_report =
        app.add_subcommand("report", "consolidated pass/fail report");
    std::vector<std::string> report_dirs;
    sp_report->add_option("dirs", report_dirs, "run directories");
    sp_report->add_option("-o,--out", out_path, "JSON output file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sp_config) {
            (void)print_defaults;
            emit(config_to_json(default_config()), out_path);
            return 0;
        }
        if (*sp_speed) {
            auto cfg = load_config(config_path);
            emit(wave_report_json(cfg, out_root), out_path);
            return 0;
        }
        if (*sp_profile) {
            auto cfg = load_config(config_path);
            double c_star = 0;
            bool cached = false;
            WaveProfile wp =
                obtain_wave_profile(cfg, out_root, &c_star, &cached);
            json j = wave_report_json(cfg, out_root);
            const std::string dir = table_dir.empty() ? "." : table_dir;
            fs::create_directories(dir);
            CsvTable t;
            t.header = {"u", "eta", "eta_p", "eta_pp", "Q", "R"};
            t.columns = {wp.u, wp.eta, wp.eta_p, wp.eta_pp, wp.Q, wp.R};
            write_csv((fs::path(dir) / "profile_tables.csv").string(), t);
            CsvTable p;
            p.header = {"x", "Ustar"};
            std::vector<double> xs(wp.x.rbegin(), wp.x.rend());
            std::vector<double> us(wp.u.rbegin(), wp.u.rend());
            p.columns = {xs, us};
            write_csv((fs::path(dir) / "ustar.csv").string(), p);
            j["tables_dir"] = dir;
            emit(j, out_path);
            return 0;
        }
        if (*sp_checkq) {
            auto cfg = load_config(config_path);
            emit(wave_report_json(cfg, out_root), out_path);
            return 0;
        }
        if (*sp_sim) {
            std::vector<ExperimentConfig> cfgs;
            for (const auto& p : config_paths) cfgs.push_back(load_config(p));
            auto arts = run_experiments(cfgs, out_root, jobs);
            bool all = true;
            for (const auto& a : arts) {
                std::cout << a.config.name << " -> " << a.dir
                          << (a.all_fits_pass ? " [fits pass]"
                                              : " [fit FAILURES]")
                          << "\n";
                all = all && a.all_fits_pass;
            }
            return all ? 0 : 1;
        }
        if (*sp_fit) {
            std::ifstream in(fs::path(run_dir) / "run_manifest.json");
            if (!in) throw std::runtime_error("fit: no run_manifest.json in " +
                                              run_dir);
            json man = json::parse(in);
            auto cfg = config_from_json(man.at("config"));
            auto series =
                read_series_csv((fs::path(run_dir) / "series.csv").string());
            const double c_star = man.at("wave").at("c_star").get<double>();
            json out = json::array();
            bool all = true;
            for (const auto& fs_ : cfg.fits) {
                FitWindow w{fs_.t_min, fs_.t_max};
                FitReport r;
                if (fs_.model == "front_delay")
                    r = fit_front_delay(series, c_star, w, fs_.target,
                                        fs_.tolerance);
                else if (fs_.model == "algebraic_rate")
                    r = fit_algebraic_rate(series,
                                           fit_field_from_string(fs_.field), w,
                                           fs_.target, fs_.tolerance);
                else if (fs_.model == "exponential_rate")
                    r = fit_exponential_rate(series,
                                             fit_field_from_string(fs_.field),
                                             w, fs_.target, fs_.tolerance);
                else if (fs_.model == "lower_bound_probe")
                    r = lower_bound_probe(series, w, c_star);
                else if (fs_.model == "phantom_slope")
                    r = fit_phantom_slope(series, w, fs_.target, fs_.tolerance);
                else
                    throw std::domain_error("unknown fit model " + fs_.model);
                out.push_back(fit_report_to_json(r));
                all = all && r.pass;
            }
            std::ofstream fout(fs::path(run_dir) / "fit_report.json",
                               std::ios::binary);
            fout << out.dump(2) << "\n";
            std::cout << out.dump(2) << "\n";
            return all ? 0 : 1;
        }
        if (*sp_cex) {
            auto rep = run_counterexample(cex_dir, cex_grid);
            std::cout << counterexample_report_to_json(rep).dump(2) << "\n";
            return rep.pass ? 0 : 1;
        }
        if (*sp_report) {
            auto rep = make_report(report_dirs);
            if (!out_path.empty()) {
                std::ofstream out(out_path, std::ios::binary);
                out << rep.to_json().dump(2) << "\n";
            }
            std::cout << rep.to_text();
            return rep.all_pass ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
