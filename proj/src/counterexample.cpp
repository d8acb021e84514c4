#include "rdfront/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace rdfront {

namespace {

constexpr double kFkppC = 2.0;

double f_fkpp(double u) { return u * (1.0 - u); }
double fp_fkpp(double u) { return 1.0 - 2.0 * u; }

// Crossing of eta_fkpp against level on a monotone branch [ua, ub].
double branch_crossing(const WaveProfile& wp, double level, double ua,
                       double ub) {
    double fa = wp.eta_at(ua) - level;
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (ua + ub);
        const double fm = wp.eta_at(m) - level;
        if ((fm > 0) == (fa > 0)) {
            ua = m;
            fa = fm;
        } else {
            ub = m;
        }
        if (ub - ua < 1e-15) break;
    }
    return 0.5 * (ua + ub);
}

}  // namespace

double CounterexampleSpec::psi(double x) const {
    if (x <= M / 3.0) return x;
    if (x >= psi_end) return 4.0 * M / 9.0;
    return psi_q.value(x);
}

double CounterexampleSpec::psi_d(double x, int order) const {
    if (x <= M / 3.0) return order == 1 ? 1.0 : 0.0;
    if (x >= psi_end) return 0.0;
    switch (order) {
        case 1: return psi_q.deriv(x);
        case 2: return psi_q.deriv2(x);
        default: return psi_q.deriv3(x);
    }
}

double CounterexampleSpec::phi(double u) const {
    if (u <= u2 || u >= u3) return 0.0;
    const double s = u - mid;
    const double rho2 = 0.25 * (u3 - u2) * (u3 - u2);
    const double w = rho2 - s * s;
    const double b = w * w * w;
    return b * phi_a * ((s + phi_s0) * (s + phi_s0) + phi_mu);
}

double CounterexampleSpec::phi_d(double u, int order) const {
    if (u <= u2 || u >= u3) return 0.0;
    const double s = u - mid;
    const double rho2 = 0.25 * (u3 - u2) * (u3 - u2);
    const double w = rho2 - s * s;
    const double b = w * w * w;
    const double bp = -6.0 * s * w * w;
    const double bpp = -6.0 * w * w + 24.0 * s * s * w;
    const double bppp = 72.0 * s * rho2 - 120.0 * s * s * s;
    const double q = phi_a * ((s + phi_s0) * (s + phi_s0) + phi_mu);
    const double qp = 2.0 * phi_a * (s + phi_s0);
    const double qpp = 2.0 * phi_a;
    switch (order) {
        case 1: return bp * q + b * qp;
        case 2: return bpp * q + 2.0 * bp * qp + b * qpp;
        default: return bppp * q + 3.0 * bpp * qp + 3.0 * bp * qpp;
    }
}

double CounterexampleSpec::eta_new(double u) const {
    return psi(eta_fkpp.eta_at(u)) + phi(u);
}

double CounterexampleSpec::eta_new_d(double u, int order) const {
    if (u <= 0.0) {
        // eta_fkpp' -> 1 and psi' = 1 near zero
        return order == 1 ? 1.0 : 0.0;
    }
    if (u >= 1.0) {
        return order == 1 ? -eta_fkpp.lambda1 : 0.0;
    }
    const double e = eta_fkpp.eta_at(u);
    const double e1 = kFkppC - f_fkpp(u) / e;                   // eta_F'
    const double e2 = (e1 * (kFkppC - e1) - fp_fkpp(u)) / e;    // eta_F''
    const double e3 = (e2 * (kFkppC - 3.0 * e1) - (-2.0)) / e;  // eta_F'''
    const double p1 = psi_d(e, 1), p2 = psi_d(e, 2), p3 = psi_d(e, 3);
    switch (order) {
        case 1: return p1 * e1 + phi_d(u, 1);
        case 2: return p2 * e1 * e1 + p1 * e2 + phi_d(u, 2);
        default:
            return p3 * e1 * e1 * e1 + 3.0 * p2 * e1 * e2 + p1 * e3 +
                   phi_d(u, 3);
    }
}

double CounterexampleSpec::q_new(double u) const {
    const double d1 = eta_new_d(u, 1);
    return d1 * (kFkppC - d1) + eta_new(u) * eta_new_d(u, 2);
}

CounterexampleSpec build_counterexample(std::size_t grid_n) {
    if (grid_n < 4096)
        throw std::domain_error("counterexample: grid_n must be >= 4096");
    CounterexampleSpec sp;

    auto fk = make_fkpp();
    sp.eta_fkpp = compute_eta(fk, 2.0);
    classify_regime(sp.eta_fkpp);

    // M = sup eta_fkpp from the table.
    std::size_t arg = 0;
    for (std::size_t i = 0; i < sp.eta_fkpp.u.size(); ++i)
        if (sp.eta_fkpp.eta[i] > sp.M) {
            sp.M = sp.eta_fkpp.eta[i];
            arg = i;
        }
    const double u_peak = sp.eta_fkpp.u[arg];

    // Thresholds by monotone bisection on the two branches.
    const double lo = sp.eta_fkpp.u.front(), hi = sp.eta_fkpp.u.back();
    sp.u1 = branch_crossing(sp.eta_fkpp, sp.M / 3.0, lo, u_peak);
    sp.u2 = branch_crossing(sp.eta_fkpp, 2.0 * sp.M / 3.0, lo, u_peak);
    sp.u3 = branch_crossing(sp.eta_fkpp, 2.0 * sp.M / 3.0, u_peak, hi);
    sp.u4 = branch_crossing(sp.eta_fkpp, sp.M / 3.0, u_peak, hi);
    sp.mid = 0.5 * (sp.u2 + sp.u3);

    // psi: quintic Hermite connector. On the full [M/3, 2M/3] the six
    // endpoint conditions force a convex stretch near the right end, so the
    // connector lives on [M/3, M/3 + 2M/9] (where it degenerates to a
    // quartic with p'' proportional to tau(tau-1) <= 0) and continues as the
    // constant 4M/9 through 2M/3 and beyond.
    sp.psi_end = sp.M / 3.0 + 2.0 * sp.M / 9.0;
    sp.psi_q = Quintic::hermite(sp.M / 3.0, sp.psi_end, sp.M / 3.0, 1.0, 0.0,
                                4.0 * sp.M / 9.0, 0.0, 0.0);
    for (int i = 0; i <= 10000; ++i) {
        const double x = sp.M / 3.0 + (sp.psi_end - sp.M / 3.0) * i / 10000.0;
        if (sp.psi_q.deriv(x) < -1e-12)
            throw std::runtime_error("counterexample: psi not nondecreasing");
        if (sp.psi_q.deriv2(x) > 1e-10)
            throw std::runtime_error("counterexample: psi not concave");
    }

    // phi: nonnegative sixth-order bump times a positive quadratic factor.
    // phi'(mid) = 1 pins the amplitude; phi''(mid) = eps stays small enough
    // that the paper-form margin phi(mid) phi''(mid) agrees with the exact
    // (4M/9 + phi(mid)) phi''(mid) within the 1e-3 tolerance.
    const double rho = 0.5 * (sp.u3 - sp.u2);
    double eps = 0.01;
    for (int attempt = 0; attempt < 8; ++attempt) {
        sp.phi_s0 = 0.5 * rho;
        sp.phi_mu = (rho * rho - 3.0 * sp.phi_s0 * sp.phi_s0 -
                     eps * sp.phi_s0 * rho * rho) /
                    3.0;
        const double rho6 = std::pow(rho, 6);
        sp.phi_a = 1.0 / (2.0 * sp.phi_s0 * rho6);
        if (sp.phi_mu <= 0.0)
            throw std::runtime_error("counterexample: phi positivity lost");
        sp.sup_abs_phi_p = 0.0;
        for (int i = 1; i < 20000; ++i) {
            const double u = sp.u2 + (sp.u3 - sp.u2) * i / 20000.0;
            sp.sup_abs_phi_p =
                std::max(sp.sup_abs_phi_p, std::abs(sp.phi_d(u, 1)));
        }
        sp.phi_mid = sp.phi(sp.mid);
        sp.phi_d1_mid = sp.phi_d(sp.mid, 1);
        sp.phi_d2_mid = sp.phi_d(sp.mid, 2);
        if (sp.sup_abs_phi_p < 2.0 && sp.phi_d2_mid > 0.0) break;
        eps *= 0.5;  // shrink the bump curvature and retry
    }
    if (!(sp.sup_abs_phi_p < 2.0))
        throw std::runtime_error("counterexample: sup|phi'| >= 2");
    if (!(std::abs(sp.phi_d1_mid - 1.0) < 1e-10))
        throw std::runtime_error("counterexample: phi'(mid) != 1");
    if (!(sp.phi_d2_mid > 0.0))
        throw std::runtime_error("counterexample: phi''(mid) <= 0");

    // Threshold invariants on the working grid.
    for (std::size_t i = 0; i <= grid_n; ++i) {
        const double u = 1e-6 + (1.0 - 2e-6) * double(i) / double(grid_n);
        const double e = sp.eta_fkpp.eta_at(u);
        if (u >= sp.u2 && u <= sp.u3 && e < 2.0 * sp.M / 3.0 - 1e-9)
            throw std::runtime_error("counterexample: eta < 2M/3 on [u2,u3]");
        if ((u <= sp.u1 || u >= sp.u4) && e > sp.M / 3.0 + 1e-9)
            throw std::runtime_error(
                "counterexample: eta > M/3 outside [u1,u4]");
    }

    sp.margin_mid = sp.q_new(sp.mid) - 1.0;
    sp.margin_paper_form = sp.phi_mid * sp.phi_d2_mid;

    // The nonlinearity f = eta (2 - eta'). The bundle holds a copy of the
    // construction so the Nonlinearity stays self-contained.
    auto keep = std::make_shared<CounterexampleSpec>(sp);
    FuncBundle eta;
    eta.value = [keep](double u) { return keep->eta_new(u); };
    eta.d1 = [keep](double u) { return keep->eta_new_d(u, 1); };
    eta.d2 = [keep](double u) { return keep->eta_new_d(u, 2); };
    eta.d3 = [keep](double u) { return keep->eta_new_d(u, 3); };
    sp.f_new = normalize(make_from_eta(eta, kFkppC));
    return sp;
}

CounterexampleReport verify_counterexample(const CounterexampleSpec& sp) {
    CounterexampleReport r;
    const auto& f = sp.f_new;
    r.endpoints_ok = std::abs(f.f(0.0)) < 1e-14 && std::abs(f.f(1.0)) < 1e-14;
    r.fprime0 = f.fprime0;

    r.positive_interior = true;
    r.max_eta_p = -1e300;
    for (double u : nonlinearity_sample_grid()) {
        if (!(f.f(u) > 0.0)) r.positive_interior = false;
        r.max_eta_p = std::max(r.max_eta_p, sp.eta_new_d(u, 1));
    }

    // C2 heuristic: bounded second differences across the gluing points.
    const double w2 = branch_crossing(sp.eta_fkpp, sp.psi_end,
                                      sp.eta_fkpp.u.front(), sp.mid);
    const double w3 = branch_crossing(sp.eta_fkpp, sp.psi_end, sp.mid,
                                      sp.eta_fkpp.u.back());
    r.max_second_diff = 0.0;
    const double h = 1e-4;
    for (double g : {sp.u1, sp.u2, sp.u3, sp.u4, w2, w3}) {
        for (int k = -3; k <= 3; ++k) {
            const double u = g + k * h;
            if (u - h <= 0.0 || u + h >= 1.0) continue;
            const double dd =
                (f.f(u + h) - 2.0 * f.f(u) + f.f(u - h)) / (h * h);
            r.max_second_diff = std::max(r.max_second_diff, std::abs(dd));
        }
    }
    r.second_diff_bounded = r.max_second_diff < 1e3;

    // Q scan: theory keeps Q <= 1 outside (u2,u3).
    r.max_Q = -1e300;
    for (int i = 1; i < 40000; ++i) {
        const double u = double(i) / 40000.0;
        const double q = sp.q_new(u);
        if (q > r.max_Q) {
            r.max_Q = q;
            r.max_Q_arg = u;
        }
    }
    r.maximizer_inside = r.max_Q_arg > sp.u2 && r.max_Q_arg < sp.u3;
    r.margin_mid = sp.margin_mid;
    r.margin_paper_form = sp.margin_paper_form;

    r.eta_pp_positive_somewhere = false;
    for (int i = 1; i < 2000; ++i) {
        const double u = sp.u2 + (sp.u3 - sp.u2) * i / 2000.0;
        if (sp.eta_new_d(u, 2) > 0.0) r.eta_pp_positive_somewhere = true;
    }

    r.supports_disjoint = true;
    for (int i = 0; i <= 20000; ++i) {
        const double u = 1e-6 + (1.0 - 2e-6) * i / 20000.0;
        const double e = sp.eta_fkpp.eta_at(u);
        const double cap_d = sp.psi_d(e, 1) *
                             (kFkppC - f_fkpp(u) / std::max(e, 1e-300));
        if (std::abs(cap_d) > 1e-12 && std::abs(sp.phi_d(u, 1)) > 1e-12)
            r.supports_disjoint = false;
    }

    r.f_matches_fkpp_outside = 0.0;
    for (int i = 0; i <= 20000; ++i) {
        const double u = double(i) / 20000.0;
        if (u > sp.u1 && u < sp.u4) continue;
        r.f_matches_fkpp_outside = std::max(r.f_matches_fkpp_outside,
                                            std::abs(f.f(u) - f_fkpp(u)));
    }

    // Closure: eta_new is the minimal-speed profile function of f_new.
    auto spd = minimal_speed(f, 1e-8);
    r.closure_c_star = spd.c_star;
    WaveProfile wp = compute_eta(f, spd.c_star);
    r.closure_eta_err = 0.0;
    for (std::size_t i = 0; i < wp.u.size(); ++i)
        r.closure_eta_err = std::max(r.closure_eta_err,
                                     std::abs(wp.eta[i] - sp.eta_new(wp.u[i])));
    r.closure_Q0 = wp.Q0;
    r.closure_Q1 = wp.Q1;

    r.pass = r.endpoints_ok && r.positive_interior &&
             std::abs(r.fprime0 - 1.0) < 1e-10 && r.second_diff_bounded &&
             r.max_eta_p < 2.0 && r.max_Q > 1.0 && r.maximizer_inside &&
             std::abs(r.margin_mid - r.margin_paper_form) <= 1e-3 &&
             r.eta_pp_positive_somewhere && r.supports_disjoint &&
             r.f_matches_fkpp_outside <= 1e-8 &&
             std::abs(r.closure_c_star - 2.0) <= 1e-4 &&
             r.closure_eta_err <= 1e-4;
    return r;
}

}  // namespace rdfront
