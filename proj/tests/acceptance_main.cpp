// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Long-horizon runs are shared between criteria and cached under
// acceptance_runs/ (content-addressed), so reruns are fast.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "rdfront/counterexample.hpp"
#include "rdfront/experiment.hpp"
#include "rdfront/nonlinearity.hpp"
#include "rdfront/pde.hpp"
#include "rdfront/wave.hpp"

using namespace rdfront;

namespace {

int failures = 0;

void verdict(int crit, const std::string& what, bool ok,
             const std::string& detail) {
    std::printf("[%s] criterion %2d: %-34s %s\n", ok ? "PASS" : "FAIL", crit,
                what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* pattern, double a, double b = 0, double c = 0,
                double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
    return buf;
}

const std::string kRoot = "acceptance_runs";

const WaveProfile& profile(double n, double chi) {
    static std::map<std::pair<double, double>, WaveProfile> cache;
    auto key = std::make_pair(n, chi);
    auto it = cache.find(key);
    if (it == cache.end()) {
        ExperimentConfig c;
        c.family = (chi == 0.0 && n == 2.0) ? "fkpp" : "hadeler_rothe";
        c.n = n;
        c.chi = chi;
        double cs = 0;
        bool cached = false;
        WaveProfile wp = obtain_wave_profile(c, kRoot, &cs, &cached);
        it = cache.emplace(key, std::move(wp)).first;
    }
    return it->second;
}

ExperimentConfig base_big_run(const std::string& name, double chi) {
    ExperimentConfig c;
    c.name = name;
    c.family = (chi == 0.0) ? "fkpp" : "hadeler_rothe";
    c.n = 2;
    c.chi = chi;
    c.grid.dx = 0.05;
    c.grid.dt = 0.025;
    c.grid.left_pad = 80.0;
    c.grid.right_pad_min = 120.0;
    c.t_final = 2000.0;
    c.extra_samples = {100.0, 500.0};
    return c;
}

// ---------------------------------------------------------------- crit 1
void criterion_1() {
    struct Case {
        double n, chi, expect;
    };
    std::vector<Case> cases = {
        {2, 0, 2.0}, {2, 0.5, 2.0}, {2, 1, 2.0}, {3, 1, 2.0}};
    for (double n : {2.0, 3.0})
        for (double chi : {2.0, 4.0, 9.0})
            cases.push_back({n, chi, std::sqrt(chi) + 1.0 / std::sqrt(chi)});
    double worst = 0;
    for (const auto& cs : cases) {
        auto sp = minimal_speed(make_hadeler_rothe(cs.n, cs.chi), 1e-8);
        worst = std::max(worst, std::abs(sp.c_star - cs.expect));
    }
    verdict(1, "speed law c_*(n, chi)", worst <= 1e-4,
            fmt("max |c - c_exact| = %.3g (tol 1e-4)", worst));
}

// ---------------------------------------------------------------- crit 2
void criterion_2() {
    double worst_eta = 0;
    for (double chi : {1.0, 2.0, 4.0}) {
        const auto& wp = profile(2, chi);
        const double s = std::sqrt(chi);
        for (std::size_t i = 0; i < wp.u.size(); ++i)
            worst_eta = std::max(
                worst_eta,
                std::abs(wp.eta[i] - s * (wp.u[i] - wp.u[i] * wp.u[i])));
    }
    const auto& wp1 = profile(2, 1);
    double worst_u = 0;
    for (std::size_t i = 0; i < wp1.u.size(); ++i)
        worst_u = std::max(
            worst_u, std::abs(wp1.u[i] - 1.0 / (1.0 + std::exp(wp1.x[i]))));
    for (double x = -16.0; x <= 16.0; x += 0.0137)
        worst_u = std::max(
            worst_u, std::abs(wp1.ustar_at(x) - 1.0 / (1.0 + std::exp(x))));
    const bool ok = worst_eta <= 1e-6 && worst_u <= 1e-8;
    verdict(2, "profile oracles (eta, U_*)", ok,
            fmt("sup|eta-exact| = %.2e (1e-6), sup|U-logistic| = %.2e (1e-8)",
                worst_eta, worst_u));
}

// ---------------------------------------------------------------- crit 3
void criterion_3() {
    double worst_q = -1e300, worst_epp = -1e300, worst_q0 = 0, worst_q1 = 0;
    for (double n : {2.0, 3.0, 4.0}) {
        for (double chi = 0.0; chi <= 4.0 + 1e-9; chi += 0.25) {
            const auto& wp = profile(n, chi);
            auto st = check_structure(wp, 0.009, 0.009);
            worst_q = std::max(worst_q, st.max_Q);
            worst_epp = std::max(worst_epp, st.max_eta_pp);
            worst_q0 = std::max(worst_q0, std::abs(wp.Q0 - 1.0));
            const double fp1 = make_hadeler_rothe(n, chi).fprime1;
            worst_q1 = std::max(worst_q1, std::abs(wp.Q1 - fp1));
        }
    }
    const bool ok = worst_q <= 1.0 + 1e-6 && worst_epp <= 1e-6 &&
                    worst_q0 <= 1e-3 && worst_q1 <= 1e-3;
    verdict(3, "structure sweep (Q<=1, eta''<=0)", ok,
            fmt("max Q = %.9f, max eta'' = %.2e, |Q0-1| = %.2e, "
                "|Q1-f'(1)| = %.2e",
                worst_q, worst_epp, worst_q0, worst_q1));
}

// ---------------------------------------------------------------- crit 4
void criterion_4() {
    const auto& wp = profile(2, 0);
    double C = 0;
    for (double e = -8.0; e <= -2.0; e += 0.0625) {
        const double u = std::pow(10.0, e);
        const double model = u + u / std::log(u);
        const double L = std::log(1.0 / u);
        C = std::max(
            C, std::abs(wp.eta_at(u) - model) / (u * std::log(L) / (L * L)));
    }
    verdict(4, "pulled eta asymptotics constant", C < 10.0 && C > 0.0,
            fmt("fitted C = %.3f (< 10)", C));
}

// ---------------------------------------------------------------- crit 5
void criterion_5() {
    auto f = make_hadeler_rothe(2, 1);
    const auto& wp = profile(2, 1);
    const KernelSet& ks = select_kernels("auto");
    auto drift = [&](double dx, double dt) {
        GridConfig gc;
        gc.dx = dx;
        gc.dt = dt;
        gc.left_pad = 60.0;
        gc.right_pad_min = 90.0;
        Pde pde(f, &wp, gc, &ks);
        SimState s = pde.init(IcKind::wave_profile);
        double worst = 0;
        const long steps = std::lround(10.0 / dt);
        const long probe = std::lround(0.5 / dt);
        for (long k = 0; k < steps; ++k) {
            pde.step(s);
            const long fc = pde.front_cell(s);
            if (fc >= 0)
                pde.shift_window(s, s.x_of(static_cast<std::size_t>(fc)));
            if ((k + 1) % probe == 0) {
                double d = 0;
                for (std::size_t i = 0; i < s.u.size(); ++i)
                    d = std::max(d,
                                 std::abs(s.u[i] - wp.ustar_at(
                                                       s.x_of(i) -
                                                       wp.c_star * s.t)));
                worst = std::max(worst, d);
            }
        }
        return worst;
    };
    const double e1 = drift(0.02, 0.01);
    const double e2 = drift(0.01, 0.005);
    const bool ok = e1 <= 1e-4 && e2 <= 2.5e-5 && e1 / e2 >= 3.0;
    verdict(5, "traveling-wave fixed point", ok,
            fmt("drift %.2e (1e-4), halved %.2e (2.5e-5), ratio %.2f (>=3)",
                e1, e2, e1 / e2));
}

// shared long runs -----------------------------------------------------
RunArtifacts run_fkpp, run_pp, run_half, run_pushed_delay, run_pushed_rates;

void execute_shared_runs() {
    ExperimentConfig fkpp = base_big_run("acc_fkpp_t2000", 0.0);
    fkpp.fits.push_back({"front_delay", "E_front", 200, 2000, -1.5, 0.2});
    fkpp.fits.push_back({"algebraic_rate", "E_front", 200, 2000, -1.0, 0.25});

    ExperimentConfig pp = base_big_run("acc_chi1_t2000", 1.0);
    pp.fits.push_back({"front_delay", "E_front", 200, 2000, -0.5, 0.2});
    pp.fits.push_back({"algebraic_rate", "E_front", 200, 2000, -1.0, 0.25});
    pp.fits.push_back({"algebraic_rate", "w_at_front", 200, 2000, -1.0, 0.25});

    ExperimentConfig half = base_big_run("acc_chi05_t2000", 0.5);
    half.fits.push_back({"algebraic_rate", "E_front", 200, 2000, -1.0, 0.25});

    ExperimentConfig pd;
    pd.name = "acc_chi4_delay";
    pd.family = "hadeler_rothe";
    pd.n = 2;
    pd.chi = 4.0;
    pd.grid.dx = 0.02;
    pd.grid.dt = 0.005;
    pd.t_final = 60.0;
    pd.fits.push_back({"front_delay", "E_front", 6, 60, 0.0, 0.2});

    ExperimentConfig pr;
    pr.name = "acc_chi4_rates";
    pr.family = "hadeler_rothe";
    pr.n = 2;
    pr.chi = 4.0;
    pr.grid.dx = 0.004;
    pr.grid.dt = 0.0004;
    pr.grid.left_pad = 60.0;
    pr.t_final = 42.0;
    pr.richardson = true;
    pr.fits.push_back({"exponential_rate", "E_front", 10, 40, -0.5625, 0.085});
    pr.fits.push_back({"lower_bound_probe", "E_front", 10, 40, -0.5625, 0.15});
    pr.fits.push_back({"phantom_slope", "D_hat", 10, 40, 0.5625, 0.0844});

    auto arts = run_experiments({fkpp, pp, half, pd, pr}, kRoot, 2);
    run_fkpp = arts[0];
    run_pp = arts[1];
    run_half = arts[2];
    run_pushed_delay = arts[3];
    run_pushed_rates = arts[4];
}

const FitReport& find_fit(const RunArtifacts& a, const std::string& model) {
    for (const auto& f : a.fits)
        if (f.model == model) return f;
    throw std::runtime_error("missing fit " + model);
}

// ---------------------------------------------------------------- crit 6
void criterion_6() {
    const auto& fa = find_fit(run_fkpp, "front_delay");
    const auto& fb = find_fit(run_pp, "front_delay");
    const auto& fc = find_fit(run_pushed_delay, "front_delay");
    double sig_dev = 0;
    for (const auto& r : run_pushed_delay.series)
        if (r.has_front)
            sig_dev = std::max(
                sig_dev, std::abs(r.sigma - run_pushed_delay.c_star * r.t));
    const bool ok =
        fa.pass && fb.pass && std::abs(fc.measured) <= 0.2 && sig_dev <= 3.0;
    verdict(6, "front-delay coefficients", ok,
            fmt("a(chi=0) = %.3f (-1.5+-0.2), a(chi=1) = %.3f (-0.5+-0.2), "
                "|a(chi=4)| = %.3f (<=0.2), |sigma-ct| <= %.2f (<=3)",
                fa.measured, fb.measured, std::abs(fc.measured), sig_dev));
}

// ---------------------------------------------------------------- crit 7
void criterion_7() {
    const double p0 = find_fit(run_fkpp, "algebraic_rate").measured;
    const double ph = find_fit(run_half, "algebraic_rate").measured;
    const double p1 = find_fit(run_pp, "algebraic_rate").measured;
    auto in_band = [](double p) { return p >= -1.25 && p <= -0.75; };
    const bool ok = in_band(p0) && in_band(ph) && in_band(p1);
    verdict(7, "algebraic convergence rate", ok,
            fmt("slope chi=0: %.3f, chi=0.5: %.3f, chi=1: %.3f "
                "(in [-1.25, -0.75])",
                p0, ph, p1));
}

// ---------------------------------------------------------------- crit 8
void criterion_8() {
    const auto& fe = find_fit(run_pushed_rates, "exponential_rate");
    const auto& lb = find_fit(run_pushed_rates, "lower_bound_probe");
    const bool ok = std::abs(fe.measured + 0.5625) <= 0.085 && lb.pass;
    verdict(8, "exponential rate with sharpness", ok,
            fmt("omega = %.4f (target -0.5625 +- 0.085), probe omega = %.4f "
                "(>= -0.7125)",
                fe.measured, lb.measured));
}

// ---------------------------------------------------------------- crit 9
void criterion_9() {
    auto env_band = [](const RunArtifacts& a, double t_lo) {
        double lo = 1e300, hi = 0;
        for (const auto& r : a.series)
            if (r.t >= t_lo && r.envelope_ratio > 0) {
                lo = std::min(lo, r.envelope_ratio);
                hi = std::max(hi, r.envelope_ratio);
            }
        return std::make_pair(lo, hi);
    };
    auto wt_band = [](const RunArtifacts& a) {
        std::vector<double> wt;
        for (const auto& r : a.series)
            if (r.t >= 200.0 && r.w_at_front > 0)
                wt.push_back(r.w_at_front * r.t);
        std::sort(wt.begin(), wt.end());
        const double med = wt[wt.size() / 2];
        return std::make_tuple(wt.front(), med, wt.back());
    };
    auto [e0lo, e0hi] = env_band(run_fkpp, 200.0);
    auto [e1lo, e1hi] = env_band(run_pp, 200.0);
    auto [eplo, ephi] = env_band(run_pushed_rates, 10.0);
    auto [w0lo, w0med, w0hi] = wt_band(run_fkpp);
    auto [w1lo, w1med, w1hi] = wt_band(run_pp);
    const auto& ds = find_fit(run_pushed_rates, "phantom_slope");
    const bool env_ok =
        e0hi / e0lo <= 10.0 && e1hi / e1lo <= 10.0 && ephi / eplo <= 10.0;
    const bool wt_ok = w0lo >= 0.05 * w0med && w0hi <= 20.0 * w0med &&
                       w1lo >= 0.05 * w1med && w1hi <= 20.0 * w1med;
    const bool ok = env_ok && wt_ok && ds.pass;
    verdict(9, "SDF envelopes and phantom lag", ok,
            fmt("env max/min: %.2f, %.2f, %.2f (<=10); D-hat slope %.4f "
                "(0.5625 +- 15%%)",
                e0hi / e0lo, e1hi / e1lo, ephi / eplo, ds.measured));
}

// --------------------------------------------------------------- crit 10
void criterion_10() {
    ExperimentConfig c;
    c.name = "acc_positivity";
    c.family = "fkpp";
    c.grid.dx = 0.02;
    c.grid.dt = 0.002;
    c.grid.left_pad = 60.0;
    c.grid.right_pad_min = 100.0;
    c.t_final = 50.0;
    auto art = run_experiment(c, kRoot);
    double minw = 1e300;
    for (const auto& r : art.series)
        if (r.t >= 1.0) minw = std::min(minw, r.min_w);

    // ordered initial data remain ordered (direct two-run comparison)
    auto f = make_fkpp();
    const auto& wp = profile(2, 0);
    const KernelSet& ks = select_kernels("auto");
    GridConfig gc = c.grid;
    Pde pa(f, &wp, gc, &ks);
    Pde pb(f, &wp, gc, &ks);
    SimState sa = pa.init(IcKind::step);
    SimState sb = pb.init(IcKind::step);
    for (std::size_t i = 0; i < sb.u.size(); ++i)
        sb.u[i] = (sb.x_of(i) <= -2.0) ? 1.0 : 0.0;
    double order_defect = 0;
    const long steps = std::lround(50.0 / gc.dt);
    const long probe = std::lround(2.0 / gc.dt);
    for (long k = 0; k < steps; ++k) {
        pa.step(sa);
        pb.step(sb);
        if ((k + 1) % probe == 0) {
            const double lo = std::max(sa.offset, sb.offset);
            const double hi = std::min(sa.x_right(), sb.x_right());
            const long ia = std::lround((lo - sa.offset) / gc.dx);
            const long ib = std::lround((lo - sb.offset) / gc.dx);
            const long m = std::lround((hi - lo) / gc.dx);
            for (long j = 0; j < m; ++j)
                order_defect =
                    std::min(order_defect,
                             sa.u[static_cast<std::size_t>(ia + j)] -
                                 sb.u[static_cast<std::size_t>(ib + j)]);
        }
        const long fa = pa.front_cell(sa);
        if (fa >= 0)
            pa.shift_window(sa, sa.x_of(static_cast<std::size_t>(fa)));
        const long fb = pb.front_cell(sb);
        if (fb >= 0)
            pb.shift_window(sb, sb.x_of(static_cast<std::size_t>(fb)));
    }
    const bool ok = minw >= -1e-8 && order_defect >= -1e-8;
    verdict(10, "positivity and comparison", ok,
            fmt("min w = %.2e (>= -1e-8), ordering defect = %.2e (>= -1e-8)",
                minw, order_defect));
}

// --------------------------------------------------------------- crit 11
void criterion_11() {
    bool ok = true;
    std::string detail;
    for (double tq : {100.0, 500.0}) {
        for (const auto& r : run_fkpp.series) {
            if (std::abs(r.t - tq) < 1e-6) {
                const bool here =
                    r.recon_err <= 0.1 * r.sup_s && r.sign_err <= 1e-8;
                ok = ok && here;
                detail += fmt("t=%g: recon/sup_s = %.2e, sign defect %.1e; ",
                              tq, r.recon_err / r.sup_s, r.sign_err);
            }
        }
    }
    verdict(11, "s-w reconstruction identity", ok, detail + "(<= 0.1)");
}

// --------------------------------------------------------------- crit 12
void criterion_12() {
    auto rep = run_counterexample(kRoot + "/counterexample", 4096);
    verdict(12, "Q > 1 counterexample", rep.pass,
            fmt("margin = %.3e vs phi-form %.3e (+-1e-3), f-match %.1e "
                "(<=1e-8), closure eta %.1e (<=1e-4)",
                rep.margin_mid, rep.margin_paper_form,
                rep.f_matches_fkpp_outside, rep.closure_eta_err));
}

}  // namespace

int main() {
    std::printf("acceptance suite (runs cached under %s)\n", kRoot.c_str());
    try {
        criterion_1();
        criterion_2();
        criterion_3();
        criterion_4();
        criterion_5();
        execute_shared_runs();
        criterion_6();
        criterion_7();
        criterion_8();
        criterion_9();
        criterion_10();
        criterion_11();
        criterion_12();
    } catch (const std::exception& e) {
        std::printf("[FAIL] acceptance aborted: %s\n", e.what());
        return 1;
    }
    std::printf("%s\n", failures == 0 ? "ALL CRITERIA PASS"
                                      : "CRITERIA FAILURES PRESENT");
    return failures == 0 ? 0 : 1;
}
