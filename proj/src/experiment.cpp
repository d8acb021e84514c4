#include "rdfront/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>
#include <atomic>
#include <limits>

#include "rdfront/csv.hpp"
#include "rdfront/sha256.hpp"

namespace rdfront {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

json wave_summary_json(const WaveProfile& wp, const StructureReport& st) {
    return json{{"c_star", wp.c_star},
                {"lambda0", wp.lambda0},
                {"lambda1", wp.lambda1},
                {"regime", regime_name(wp.regime)},
                {"maxQ", st.max_Q},
                {"maxEtaPP", st.max_eta_pp},
                {"r0", st.r0},
                {"r1", st.r1}};
}

}  // namespace

void save_profile(const std::string& path, const WaveProfile& wp) {
    CsvTable main;
    main.header = {"u", "eta", "eta_p", "eta_pp", "Q", "R", "x"};
    main.columns = {wp.u, wp.eta, wp.eta_p, wp.eta_pp, wp.Q, wp.R, wp.x};
    write_csv(path + ".main.csv", main);
    CsvTable tail;
    tail.header = {"u", "eta", "eta_p", "Q", "x"};
    tail.columns = {wp.tail_u, wp.tail_eta, wp.tail_eta_p, wp.tail_Q,
                    wp.tail_x};
    write_csv(path + ".tail.csv", tail);
    json meta{{"c_star", wp.c_star},
              {"lambda0", wp.lambda0},
              {"lambda1", wp.lambda1},
              {"regime", regime_name(wp.regime)},
              {"eta_p0", wp.eta_p0},
              {"Q0", wp.Q0},
              {"eta_p1", wp.eta_p1},
              {"Q1", wp.Q1},
              {"g_raw", std::vector<double>{wp.g_raw[0], wp.g_raw[1],
                                            wp.g_raw[2]}},
              {"g_extrap", wp.g_extrap},
              {"grid_n", wp.grid_spec.n},
              {"u_min", wp.grid_spec.u_min}};
    write_text(path + ".meta.json", meta.dump(2) + "\n");
}

std::optional<WaveProfile> load_profile(const std::string& path) {
    if (!fs::exists(path + ".meta.json") || !fs::exists(path + ".main.csv") ||
        !fs::exists(path + ".tail.csv"))
        return std::nullopt;
    WaveProfile wp;
    std::ifstream in(path + ".meta.json");
    json meta = json::parse(in);
    wp.c_star = meta.at("c_star").get<double>();
    wp.lambda0 = meta.at("lambda0").get<double>();
    wp.lambda1 = meta.at("lambda1").get<double>();
    const std::string reg = meta.at("regime").get<std::string>();
    wp.regime = reg == "pulled"          ? Regime::pulled
                : reg == "pushmi_pullyu" ? Regime::pushmi_pullyu
                : reg == "pushed"        ? Regime::pushed
                                         : Regime::ambiguous;
    wp.eta_p0 = meta.at("eta_p0").get<double>();
    wp.Q0 = meta.at("Q0").get<double>();
    wp.eta_p1 = meta.at("eta_p1").get<double>();
    wp.Q1 = meta.at("Q1").get<double>();
    auto g = meta.at("g_raw").get<std::vector<double>>();
    for (int k = 0; k < 3; ++k) wp.g_raw[k] = g[k];
    wp.g_extrap = meta.at("g_extrap").get<double>();
    wp.grid_spec.n = meta.at("grid_n").get<std::size_t>();
    wp.grid_spec.u_min = meta.at("u_min").get<double>();
    CsvTable main = read_csv(path + ".main.csv");
    wp.u = main.columns[0];
    wp.eta = main.columns[1];
    wp.eta_p = main.columns[2];
    wp.eta_pp = main.columns[3];
    wp.Q = main.columns[4];
    wp.R = main.columns[5];
    wp.x = main.columns[6];
    CsvTable tail = read_csv(path + ".tail.csv");
    wp.tail_u = tail.columns[0];
    wp.tail_eta = tail.columns[1];
    wp.tail_eta_p = tail.columns[2];
    wp.tail_Q = tail.columns[3];
    wp.tail_x = tail.columns[4];
    wp.rebuild_views();
    return wp;
}

WaveProfile obtain_wave_profile(const ExperimentConfig& cfg,
                                const std::string& out_root, double* c_star,
                                bool* from_cache) {
    json key{{"nonlinearity",
              {{"family", cfg.family},
               {"n", cfg.n},
               {"chi", cfg.chi},
               {"table_path", cfg.table_path}}},
             {"wave",
              {{"grid_n", cfg.wave.n},
               {"u_min", cfg.wave.u_min},
               {"ode_rtol", cfg.wave.ode_rtol},
               {"eps1", cfg.wave.eps1},
               {"eps0", cfg.wave.eps0},
               {"tail_u_min", cfg.wave.tail_u_min},
               {"speed_tol", cfg.speed_tol}}}};
    const std::string hash = sha256_hex(key.dump()).substr(0, 16);
    const fs::path cache_dir = fs::path(out_root) / "waves";
    fs::create_directories(cache_dir);
    const std::string base = (cache_dir / hash).string();
    if (auto cached = load_profile(base)) {
        if (c_star) *c_star = cached->c_star;
        if (from_cache) *from_cache = true;
        return *cached;
    }
    Nonlinearity f = nonlinearity_from_config(cfg);
    auto sp = minimal_speed(f, cfg.speed_tol, cfg.wave);
    WaveProfile wp = compute_eta(f, sp.c_star, cfg.wave);
    classify_regime(wp, cfg.speed_tol);
    save_profile(base, wp);
    if (c_star) *c_star = wp.c_star;
    if (from_cache) *from_cache = false;
    return wp;
}

void write_series_csv(const std::string& path, const DiagnosticsSeries& s) {
    CsvTable t;
    t.header = {"t",     "sigma",          "E_inf",     "E_front",
                "w_at_front", "w_max",     "D_hat",     "envelope_ratio",
                "recon_err",  "min_w",     "min_u",     "max_u"};
    t.columns.assign(t.header.size(), {});
    for (const auto& r : s) {
        t.columns[0].push_back(r.t);
        t.columns[1].push_back(r.sigma);
        t.columns[2].push_back(r.E_inf);
        t.columns[3].push_back(r.E_front);
        t.columns[4].push_back(r.w_at_front);
        t.columns[5].push_back(r.w_max);
        t.columns[6].push_back(r.has_D_hat
                                   ? r.D_hat
                                   : std::numeric_limits<double>::quiet_NaN());
        t.columns[7].push_back(r.envelope_ratio);
        t.columns[8].push_back(r.recon_err);
        t.columns[9].push_back(r.min_w);
        t.columns[10].push_back(r.min_u);
        t.columns[11].push_back(r.max_u);
    }
    write_csv(path, t);
}

namespace {

void write_series_extra(const std::string& path, const DiagnosticsSeries& s) {
    CsvTable t;
    t.header = {"t", "C_obs", "mono_defect", "recon_sens", "sup_s",
                "sign_err", "has_front", "has_D_hat"};
    t.columns.assign(t.header.size(), {});
    for (const auto& r : s) {
        t.columns[0].push_back(r.t);
        t.columns[1].push_back(r.C_obs);
        t.columns[2].push_back(r.mono_defect);
        t.columns[3].push_back(r.recon_sens);
        t.columns[4].push_back(r.sup_s);
        t.columns[5].push_back(r.sign_err);
        t.columns[6].push_back(r.has_front ? 1.0 : 0.0);
        t.columns[7].push_back(r.has_D_hat ? 1.0 : 0.0);
    }
    write_csv(path, t);
}

void merge_series_extra(const std::string& path, DiagnosticsSeries& s) {
    CsvTable t = read_csv(path);
    if (t.columns.empty() || t.columns[0].size() != s.size())
        throw std::runtime_error("series extras out of sync: " + path);
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i].C_obs = t.columns[1][i];
        s[i].mono_defect = t.columns[2][i];
        s[i].recon_sens = t.columns[3][i];
        s[i].sup_s = t.columns[4][i];
        s[i].sign_err = t.columns[5][i];
        s[i].has_front = t.columns[6][i] != 0.0;
        s[i].has_D_hat = t.columns[7][i] != 0.0;
    }
}

}  // namespace

DiagnosticsSeries read_series_csv(const std::string& path) {
    CsvTable t = read_csv(path);
    DiagnosticsSeries s;
    const std::size_t rows = t.columns.empty() ? 0 : t.columns[0].size();
    for (std::size_t i = 0; i < rows; ++i) {
        DiagnosticsRecord r;
        r.t = t.columns[0][i];
        r.sigma = t.columns[1][i];
        r.E_inf = t.columns[2][i];
        r.E_front = t.columns[3][i];
        r.w_at_front = t.columns[4][i];
        r.w_max = t.columns[5][i];
        r.D_hat = t.columns[6][i];
        r.has_D_hat = std::isfinite(r.D_hat);
        r.envelope_ratio = t.columns[7][i];
        r.recon_err = t.columns[8][i];
        r.min_w = t.columns[9][i];
        r.min_u = t.columns[10][i];
        r.max_u = t.columns[11][i];
        r.has_front = std::isfinite(r.sigma);
        s.push_back(r);
    }
    return s;
}

namespace {

struct RunnerState {
    Pde pde;
    SimState s;
};

// Advances the state to exactly step index `target` (t = target * dt).
void advance_to(Pde& pde, SimState& s, long target) {
    while (s.step_count < target) {
        pde.step(s);
        const long fc = pde.front_cell(s);
        if (fc >= 0) pde.shift_window(s, s.x_of(static_cast<std::size_t>(fc)));
    }
}

// Cellwise Richardson pair on the window intersection (offsets share the
// dx lattice, so cells align exactly).
SimState extrapolate_pair(const SimState& coarse, const SimState& fine,
                          double dx) {
    SimState out;
    out.t = fine.t;
    out.dx = dx;
    out.left_pad = fine.left_pad;
    out.right_pad = fine.right_pad;
    out.step_count = fine.step_count;
    const double lo = std::max(coarse.offset, fine.offset);
    const double hi = std::min(coarse.x_right(), fine.x_right());
    const long ic = std::lround((lo - coarse.offset) / dx);
    const long jf = std::lround((lo - fine.offset) / dx);
    const long m = std::lround((hi - lo) / dx) + 1;
    out.offset = fine.offset + double(jf) * dx;
    out.u.resize(static_cast<std::size_t>(m));
    for (long k = 0; k < m; ++k) {
        const double a = coarse.u[static_cast<std::size_t>(ic + k)];
        const double b = fine.u[static_cast<std::size_t>(jf + k)];
        out.u[static_cast<std::size_t>(k)] = (4.0 * b - a) / 3.0;
    }
    return out;
}

}  // namespace

RunArtifacts run_experiment(const ExperimentConfig& cfg,
                            const std::string& out_root) {
    validate_config(cfg);
    RunArtifacts art;
    art.config = cfg;
    const std::string cfg_dump = canonical_dump(cfg);
    const std::string hash = sha256_hex(cfg_dump).substr(0, 16);
    const fs::path dir = fs::path(out_root) / hash;
    fs::create_directories(dir);
    art.dir = dir.string();

    WaveProfile wp =
        obtain_wave_profile(cfg, out_root, &art.c_star, &art.wave_from_cache);
    art.regime = wp.regime;
    art.structure = check_structure(wp, cfg.delta0, cfg.delta1);
    Nonlinearity f = nonlinearity_from_config(cfg);
    art.hypotheses = check_general_eta_hypotheses(f, wp);

    // Content-addressed reuse: a completed run with the same config hash is
    // loaded instead of recomputed (fits are re-derived from the series).
    bool reused = false;
    if (fs::exists(dir / "run_manifest.json") &&
        fs::exists(dir / "series.csv") &&
        fs::exists(dir / "series_extra.csv")) {
        try {
            std::ifstream in(dir / "run_manifest.json");
            json man = json::parse(in);
            if (man.at("config_hash").get<std::string>() == hash) {
                art.series = read_series_csv((dir / "series.csv").string());
                merge_series_extra((dir / "series_extra.csv").string(),
                                   art.series);
                reused = true;
            }
        } catch (const std::exception&) {
            reused = false;
        }
    }

    const KernelSet& ks = select_kernels(cfg.kernel_variant);
    const auto times = make_sample_times(cfg.t_first_sample, cfg.sample_ratio,
                                         cfg.t_final, cfg.extra_samples);

    const IcKind ic = ic_kind_from_string(cfg.ic_kind);
    if (reused) {
        // series already loaded
    } else if (!cfg.richardson) {
        Pde pde(f, &wp, cfg.grid, &ks);
        SimState s = pde.init(ic, cfg.ic_table_path);
        long prev_target = -1;
        for (double t : times) {
            const long target = std::lround(t / cfg.grid.dt);
            if (target == prev_target) continue;
            prev_target = target;
            advance_to(pde, s, target);
            art.series.push_back(diagnose(s, wp, wp.regime, cfg.diag));
        }
    } else {
        GridConfig g2 = cfg.grid;
        g2.dt = 0.5 * cfg.grid.dt;
        Pde pa(f, &wp, cfg.grid, &ks);
        Pde pb(f, &wp, g2, &ks);
        SimState sa = pa.init(ic, cfg.ic_table_path);
        SimState sb = pb.init(ic, cfg.ic_table_path);
        long prev_target = -1;
        for (double t : times) {
            const long target = std::lround(t / cfg.grid.dt);
            if (target == prev_target) continue;
            prev_target = target;
            advance_to(pa, sa, target);
            advance_to(pb, sb, 2 * target);
            SimState se = extrapolate_pair(sa, sb, cfg.grid.dx);
            DiagnosticsRecord rec = diagnose(se, wp, wp.regime, cfg.diag);
            // invariant columns come from the raw fine sub-run
            DiagnosticsRecord raw = diagnose(sb, wp, wp.regime, cfg.diag);
            rec.min_w = raw.min_w;
            rec.min_u = raw.min_u;
            rec.max_u = raw.max_u;
            rec.mono_defect = raw.mono_defect;
            art.series.push_back(rec);
        }
    }

    for (const auto& fs_ : cfg.fits) {
        FitWindow w{fs_.t_min, fs_.t_max};
        FitReport r;
        if (fs_.model == "front_delay")
            r = fit_front_delay(art.series, art.c_star, w, fs_.target,
                                fs_.tolerance);
        else if (fs_.model == "algebraic_rate")
            r = fit_algebraic_rate(art.series,
                                   fit_field_from_string(fs_.field), w,
                                   fs_.target, fs_.tolerance);
        else if (fs_.model == "exponential_rate")
            r = fit_exponential_rate(art.series,
                                     fit_field_from_string(fs_.field), w,
                                     fs_.target, fs_.tolerance);
        else if (fs_.model == "lower_bound_probe")
            r = lower_bound_probe(art.series, w, art.c_star);
        else if (fs_.model == "phantom_slope")
            r = fit_phantom_slope(art.series, w, fs_.target, fs_.tolerance);
        else
            throw std::domain_error("unknown fit model " + fs_.model);
        art.fits.push_back(r);
        art.all_fits_pass = art.all_fits_pass && r.pass;
    }

    // Artifacts.
    write_series_csv((dir / "series.csv").string(), art.series);
    write_series_extra((dir / "series_extra.csv").string(), art.series);
    if (cfg.write_tables) {
        CsvTable t;
        t.header = {"u", "eta", "eta_p", "eta_pp", "Q", "R"};
        t.columns = {wp.u, wp.eta, wp.eta_p, wp.eta_pp, wp.Q, wp.R};
        write_csv((dir / "profile_tables.csv").string(), t);
        CsvTable p;
        p.header = {"x", "Ustar"};
        std::vector<double> xs(wp.x.rbegin(), wp.x.rend());
        std::vector<double> us(wp.u.rbegin(), wp.u.rend());
        p.columns = {xs, us};
        write_csv((dir / "ustar.csv").string(), p);
    }
    json fits_json = json::array();
    for (const auto& r : art.fits) fits_json.push_back(fit_report_to_json(r));
    write_text((dir / "fit_report.json").string(), fits_json.dump(2) + "\n");

    json manifest;
    manifest["tool"] = "rdfront";
    manifest["format_version"] = 1;
    manifest["config"] = config_to_json(cfg);
    manifest["config_hash"] = hash;
    manifest["kernel_variant"] = kernel_variant_name(ks.variant);
    manifest["wave"] = wave_summary_json(wp, art.structure);
    manifest["wave_from_cache"] = art.wave_from_cache;
    manifest["hypotheses"] = {{"case_i", art.hypotheses.case_i},
                              {"case_ii", art.hypotheses.case_ii},
                              {"case_iii", art.hypotheses.case_iii},
                              {"any_case", art.hypotheses.any_case}};
    json sums;
    for (const char* name : {"series.csv", "series_extra.csv", "fit_report.json"})
        sums[name] = sha256_file_hex((dir / name).string());
    if (cfg.write_tables)
        for (const char* name : {"profile_tables.csv", "ustar.csv"})
            sums[name] = sha256_file_hex((dir / name).string());
    manifest["checksums"] = sums;
    json fitv = json::array();
    for (const auto& r : art.fits)
        fitv.push_back({{"model", r.model},
                        {"measured", r.measured},
                        {"target", r.target},
                        {"tolerance", r.tolerance},
                        {"pass", r.pass}});
    manifest["fit_verdicts"] = fitv;
    write_text((dir / "run_manifest.json").string(), manifest.dump(2) + "\n");
    return art;
}

std::vector<RunArtifacts> run_experiments(
    const std::vector<ExperimentConfig>& cfgs, const std::string& out_root,
    int jobs) {
    std::vector<RunArtifacts> out(cfgs.size());
    std::vector<std::string> errors(cfgs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cfgs.size()) return;
            try {
                out[i] = run_experiment(cfgs[i], out_root);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const int nw = std::max(1, std::min<int>(jobs, int(cfgs.size())));
    std::vector<std::thread> pool;
    for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    for (std::size_t i = 0; i < cfgs.size(); ++i)
        if (!errors[i].empty())
            throw std::runtime_error("experiment '" + cfgs[i].name +
                                     "' failed: " + errors[i]);
    return out;
}

json fit_report_to_json(const FitReport& r) {
    return json{{"model", r.model},
                {"coefficients", r.coefficients},
                {"stderr", r.stderrs},
                {"window", {r.window.t_min, r.window.t_max}},
                {"n_points", r.n_points},
                {"residual_rms", r.residual_rms},
                {"measured", r.measured},
                {"target", r.target},
                {"tolerance", r.tolerance},
                {"pass", r.pass},
                {"note", r.note}};
}

json counterexample_report_to_json(const CounterexampleReport& r) {
    return json{{"endpoints_ok", r.endpoints_ok},
                {"positive_interior", r.positive_interior},
                {"fprime0", r.fprime0},
                {"second_diff_bounded", r.second_diff_bounded},
                {"max_second_diff", r.max_second_diff},
                {"max_eta_p", r.max_eta_p},
                {"max_Q", r.max_Q},
                {"max_Q_arg", r.max_Q_arg},
                {"maximizer_inside", r.maximizer_inside},
                {"margin_mid", r.margin_mid},
                {"margin_paper_form", r.margin_paper_form},
                {"eta_pp_positive_somewhere", r.eta_pp_positive_somewhere},
                {"supports_disjoint", r.supports_disjoint},
                {"f_matches_fkpp_outside", r.f_matches_fkpp_outside},
                {"closure_c_star", r.closure_c_star},
                {"closure_eta_err", r.closure_eta_err},
                {"closure_Q0", r.closure_Q0},
                {"closure_Q1", r.closure_Q1},
                {"pass", r.pass}};
}

CounterexampleReport run_counterexample(const std::string& dir,
                                        std::size_t grid_n) {
    fs::create_directories(dir);
    CounterexampleSpec sp = build_counterexample(grid_n);
    CounterexampleReport rep = verify_counterexample(sp);
    CsvTable t;
    t.header = {"u", "f", "eta", "Q"};
    t.columns.assign(4, {});
    const auto grid = chebyshev_grid(4097, 1e-6, 1.0 - 1e-6);
    for (double u : grid) {
        t.columns[0].push_back(u);
        t.columns[1].push_back(sp.f_new.f(u));
        t.columns[2].push_back(sp.eta_new(u));
        t.columns[3].push_back(sp.q_new(u));
    }
    write_csv((fs::path(dir) / "counterexample_f.csv").string(), t);
    json rj = counterexample_report_to_json(rep);
    rj["construction"] = {{"M", sp.M},
                          {"u1", sp.u1},
                          {"u2", sp.u2},
                          {"u3", sp.u3},
                          {"u4", sp.u4},
                          {"phi_mid", sp.phi_mid},
                          {"phi_d1_mid", sp.phi_d1_mid},
                          {"phi_d2_mid", sp.phi_d2_mid},
                          {"sup_abs_phi_p", sp.sup_abs_phi_p}};
    write_text((fs::path(dir) / "counterexample_report.json").string(),
               rj.dump(2) + "\n");
    return rep;
}

}  // namespace rdfront
