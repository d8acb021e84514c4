#include "rdfront/wave.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>
#include <Eigen/Dense>

#include "rdfront/csv.hpp"
#include "rdfront/interp.hpp"

namespace rdfront {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;  // (eta, x)

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::pulled: return "pulled";
        case Regime::pushmi_pullyu: return "pushmi_pullyu";
        case Regime::pushed: return "pushed";
        case Regime::ambiguous: return "ambiguous";
    }
    return "?";
}

LambdaRoots lambda_roots(double c, double fprime1) {
    if (!(c >= 2.0))
        throw std::domain_error(
            "lambda_roots: c < 2 is inconsistent with f'(0)=1");
    if (!(fprime1 < 0.0))
        throw std::domain_error(
            "lambda_roots: f'(1) >= 0 leaves lambda1 undefined");
    LambdaRoots r;
    r.lambda0 = 0.5 * (c + std::sqrt(c * c - 4.0));
    r.lambda1 = 0.5 * (-c + std::sqrt(c * c - 4.0 * fprime1));
    return r;
}

namespace {

// Series seed for the lambda0 branch at small u:
// eta = l0*u + b*u^2, b = -f''(0)/2 * l0 / (2*l0^2 - 1).
double seed_b_coeff(const Nonlinearity& f, double lambda0) {
    const double f2 = 0.5 * f.fpp(0.0);
    return -f2 * lambda0 / (2.0 * lambda0 * lambda0 - 1.0);
}

struct ShotDown {
    bool reached_floor = false;  // integrated down to u_stop
    double u_min_reached = 1.0;
    double eta_end = 0.0;        // eta at u_stop (if reached)
    double x_end = 0.0;
};

// Integrates eta' = c - f/eta downward from u = 1-eps1 (seed lambda1*(1-u)),
// in the variable s = 1-u. Optionally samples (eta, x) at given u-nodes
// (descending order of u) and can stop early at u_stop.
template <class SampleFn>
ShotDown shoot_down(const Nonlinearity& f, double c, const WaveGridSpec& gs,
                    double u_stop, SampleFn&& sample) {
    const double lam1 = lambda_roots(c, f.fprime1).lambda1;
    const double s0 = gs.eps1;
    const double s1 = 1.0 - u_stop;
    State y{lam1 * s0, 0.0};
    auto rhs = [&f, c](const State& y, State& dyds, double s) {
        const double u = 1.0 - s;
        const double eta = y[0];
        dyds[0] = f.f(u) / eta - c;
        dyds[1] = 1.0 / eta;
    };
    auto stepper = odeint::make_dense_output(
        1e-60, gs.ode_rtol, odeint::runge_kutta_dopri5<State>());
    stepper.initialize(y, s0, 1e-9);

    ShotDown out;
    double next_u = 1.0;
    bool have_next = sample(0, &next_u);  // query mode: fetch next sample u
    const double floor_eta = 1e-13;
    long guard = 0;
    while (stepper.current_time() < s1) {
        stepper.do_step(rhs);
        const double s_now = std::min(stepper.current_time(), s1);
        while (have_next && (1.0 - next_u) <= s_now + 1e-18) {
            State yy;
            stepper.calc_state(1.0 - next_u, yy);
            sample(&yy, &next_u);          // deliver, fetch next
            have_next = sample(0, &next_u);
        }
        const auto& cur = stepper.current_state();
        out.u_min_reached = 1.0 - std::min(stepper.current_time(), s1);
        if (!(cur[0] > floor_eta) && stepper.current_time() < s1) {
            return out;  // trajectory collapsed; not on the connection
        }
        if (!std::isfinite(cur[0])) return out;
        if (std::abs(stepper.current_time_step()) < 1e-16 || ++guard > 20000000)
            return out;
    }
    State yend;
    stepper.calc_state(s1, yend);
    out.reached_floor = true;
    out.u_min_reached = u_stop;
    out.eta_end = yend[0];
    out.x_end = yend[1];
    return out;
}

// Convenience: no sampling.
ShotDown shoot_down_plain(const Nonlinearity& f, double c,
                          const WaveGridSpec& gs, double u_stop) {
    auto nosample = [](State* y, double* u) {
        (void)y;
        (void)u;
        return false;
    };
    return shoot_down(f, c, gs, u_stop, nosample);
}

struct ShotUp {
    bool ok = false;  // reached u_hi without the branch collapsing
    double eta_end = 0.0;
    double x_end = 0.0;
};

// Integrates upward on [u_lo, u_hi] seeded on the lambda0 branch.
template <class SampleFn>
ShotUp shoot_up(const Nonlinearity& f, double c, const WaveGridSpec& gs,
                double u_lo, double u_hi, SampleFn&& sample) {
    const double lam0 = lambda_roots(c, f.fprime1).lambda0;
    const double b = seed_b_coeff(f, lam0);
    State y{lam0 * u_lo + b * u_lo * u_lo, 0.0};
    auto rhs = [&f, c](const State& y, State& dydu, double u) {
        dydu[0] = c - f.f(u) / y[0];
        dydu[1] = -1.0 / y[0];
    };
    auto stepper = odeint::make_dense_output(
        1e-60, gs.ode_rtol, odeint::runge_kutta_dopri5<State>());
    stepper.initialize(y, u_lo, 1e-9);
    double next_u = 0.0;
    bool have_next = sample(0, &next_u);
    long guard = 0;
    while (stepper.current_time() < u_hi) {
        stepper.do_step(rhs);
        const double u_now = std::min(stepper.current_time(), u_hi);
        while (have_next && next_u <= u_now + 1e-18) {
            State yy;
            stepper.calc_state(next_u, yy);
            sample(&yy, &next_u);
            have_next = sample(0, &next_u);
        }
        const double e = stepper.current_state()[0];
        if (!std::isfinite(e) || e <= 1e-300) return ShotUp{};
        if (std::abs(stepper.current_time_step()) < 1e-15 || ++guard > 20000000)
            return ShotUp{};
    }
    State yend;
    stepper.calc_state(u_hi, yend);
    return ShotUp{true, yend[0], yend[1]};
}

// Mismatch of the two legs at u = 1/2; root in c locates the pushed c_*.
// An up-leg collapse counts as a large negative mismatch (c below c_*).
double match_mismatch(const Nonlinearity& f, double c, const WaveGridSpec& gs) {
    auto nosample = [](State* y, double* u) {
        (void)y;
        (void)u;
        return false;
    };
    ShotDown down = shoot_down(f, c, gs, 0.5, nosample);
    if (!down.reached_floor)
        throw std::runtime_error("wave: downward leg collapsed above u=1/2");
    ShotUp up = shoot_up(f, c, gs, gs.u_min, 0.5, nosample);
    if (!up.ok) return -1e6;
    return up.eta_end - down.eta_end;
}

// Deep tail in s = ln u for g = eta/u: g' (in tau=-s) = g + (f/u)/g - c.
struct TailTables {
    std::vector<double> u, g, gp_s;  // gp_s = dg/ds
    std::vector<double> x;           // x along the tail, continued from x0
};

TailTables extend_tail(const Nonlinearity& f, double c, double u_start,
                       double g_start, double x_start, double u_deep,
                       double rtol) {
    TailTables t;
    const double tau0 = -std::log(u_start);
    const double tau1 = -std::log(u_deep);
    State y{g_start, x_start};
    auto rhs = [&f, c](const State& y, State& dydtau, double tau) {
        const double u = std::exp(-tau);
        const double fu_over_u = (u > 0.0) ? f.f(u) / u : 1.0;
        dydtau[0] = y[0] + fu_over_u / y[0] - c;
        dydtau[1] = 1.0 / y[0];
    };
    auto stepper = odeint::make_dense_output(1e-60, rtol,
                                             odeint::runge_kutta_dopri5<State>());
    stepper.initialize(y, tau0, 1e-4);
    // Sample exponents of 10 descending from u_start in steps of 0.25 decades.
    std::vector<double> taus;
    const double ln10 = std::log(10.0);
    double e = std::ceil((tau0 / ln10) * 16.0) / 16.0;
    if (e * ln10 <= tau0) e += 0.0625;
    for (; e * ln10 < tau1; e += 0.0625) taus.push_back(e * ln10);
    taus.push_back(tau1);
    std::size_t si = 0;
    while (stepper.current_time() < tau1) {
        stepper.do_step(rhs);
        const double now = std::min(stepper.current_time(), tau1);
        while (si < taus.size() && taus[si] <= now + 1e-12) {
            State yy;
            stepper.calc_state(taus[si], yy);
            const double u = std::exp(-taus[si]);
            const double fu_over_u = f.f(u) / u;
            t.u.push_back(u);
            t.g.push_back(yy[0]);
            t.gp_s.push_back(-(yy[0] + fu_over_u / yy[0] - c));
            t.x.push_back(yy[1]);
            ++si;
        }
    }
    // ascending u
    std::reverse(t.u.begin(), t.u.end());
    std::reverse(t.g.begin(), t.g.end());
    std::reverse(t.gp_s.begin(), t.gp_s.end());
    std::reverse(t.x.begin(), t.x.end());
    return t;
}

// Least squares with an arbitrary small basis; returns coefficients.
Eigen::VectorXd lsq_fit(const std::vector<std::vector<double>>& basis_cols,
                        const std::vector<double>& y) {
    const int m = static_cast<int>(y.size());
    const int k = static_cast<int>(basis_cols.size());
    Eigen::MatrixXd A(m, k);
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) {
        b(i) = y[i];
        for (int j = 0; j < k; ++j) A(i, j) = basis_cols[j][i];
    }
    return A.colPivHouseholderQr().solve(b);
}

}  // namespace

Admissibility speed_admissible(const Nonlinearity& f, double c,
                               const WaveGridSpec& gs) {
    // For positive monostable f the trajectory cannot cross eta = 0 at
    // interior u; speeds below c_* miss the origin and arrive at the u-floor
    // with eta = O(1) instead of O(u). Smallness at the floor is the test.
    ShotDown shot = shoot_down_plain(f, c, gs, gs.eps0);
    Admissibility a;
    if (!shot.reached_floor) {
        a.admissible = false;
        a.u_dip = shot.u_min_reached;
        return a;
    }
    // On the connection eta(eps0) is O(lambda * eps0); a miss levels off at
    // the O((c_* - c)^p) peel-off height instead.
    const double lam0 = lambda_roots(c, f.fprime1).lambda0;
    const double threshold = 3.0 * lam0 * gs.eps0;
    a.admissible = shot.eta_end <= threshold && shot.eta_end > 0.0;
    a.u_dip = gs.eps0;
    return a;
}

SpeedResult minimal_speed(const Nonlinearity& f, double tol,
                          const WaveGridSpec& gs) {
    if (!(tol > 0.0) || tol > 1e-3)
        throw std::domain_error("minimal_speed: tol must be in (0, 1e-3]");
    SpeedResult res;
    res.regime_hint = Regime::ambiguous;
    if (speed_admissible(f, 2.0, gs).admissible) {
        res.c_star = 2.0;
        return res;
    }
    double c_lo = 2.0, c_hi = 4.0;
    while (!speed_admissible(f, c_hi, gs).admissible) {
        c_lo = c_hi;
        c_hi *= 2.0;
        if (c_hi > 100.0)
            throw std::runtime_error(
                "minimal_speed: no admissible speed below 100; f violates the "
                "standing assumptions");
    }
    while (c_hi - c_lo > std::min(tol, 1e-6)) {
        const double c = 0.5 * (c_lo + c_hi);
        if (speed_admissible(f, c, gs).admissible)
            c_hi = c;
        else
            c_lo = c;
        ++res.bisections;
    }
    // Matched two-sided refinement: root of the u=1/2 mismatch in c.
    double a = std::max(2.0 + 1e-12, c_lo - 2e-3), b = c_hi + 2e-3;
    double Ma = match_mismatch(f, a, gs), Mb = match_mismatch(f, b, gs);
    int expand = 0;
    while (Ma * Mb > 0.0 && expand < 8) {
        a = std::max(2.0 + 1e-12, a - 5e-3 * (1 << expand));
        b = b + 5e-3 * (1 << expand);
        Ma = match_mismatch(f, a, gs);
        Mb = match_mismatch(f, b, gs);
        ++expand;
    }
    if (Ma * Mb > 0.0) {
        // Fall back to the bisection estimate.
        res.c_star = 0.5 * (c_lo + c_hi);
    } else {
        for (int it = 0; it < 80; ++it) {
            const double m = 0.5 * (a + b);
            const double Mm = match_mismatch(f, m, gs);
            if (Ma * Mm <= 0.0) {
                b = m;
                Mb = Mm;
            } else {
                a = m;
                Ma = Mm;
            }
            if (b - a < 1e-14 * b) break;
        }
        res.c_star = 0.5 * (a + b);
    }
    res.regime_hint =
        (res.c_star > 2.0 + tol) ? Regime::pushed : Regime::ambiguous;
    return res;
}

WaveProfile compute_eta(const Nonlinearity& f, double c_star,
                        const WaveGridSpec& gs) {
    WaveProfile wp;
    wp.c_star = c_star;
    wp.grid_spec = gs;
    const LambdaRoots lr = lambda_roots(c_star, f.fprime1);
    wp.lambda0 = lr.lambda0;
    wp.lambda1 = lr.lambda1;

    wp.u = chebyshev_grid(gs.n, gs.u_min, 1.0 - gs.u_min);
    const std::size_t n = gs.n;
    wp.eta.assign(n, 0.0);
    wp.x.assign(n, 0.0);

    const bool pushed_path = c_star > 2.0 + 1e-9;
    const double u_tail_hi = 1e-5;  // tail overlaps the grid; evaluators
                                    // route below this through the tail
    double tail_seed_g = 0.0, tail_seed_x = 0.0;

    if (!pushed_path) {
        // Single downward pass across the whole grid.
        std::size_t gi = n;  // deliver grid nodes in descending u
        auto sampler = [&](State* y, double* u) {
            if (y == nullptr) {
                if (gi == 0) return false;
                *u = wp.u[gi - 1];
                return true;
            }
            --gi;
            wp.eta[gi] = (*y)[0];
            wp.x[gi] = (*y)[1];
            *u = (gi > 0) ? wp.u[gi - 1] : 0.0;
            return gi > 0;
        };
        ShotDown shot = shoot_down(f, c_star, gs, gs.u_min, sampler);
        if (!shot.reached_floor || gi != 0)
            throw std::runtime_error(
                "compute_eta: trajectory not positive across the grid "
                "(propagated minimal_speed failure)");
        {
            const std::size_t i = bracket(wp.u, u_tail_hi);
            const double e0 = wp.eta[i], e1 = wp.eta[i + 1];
            const double d0 = c_star - f.f(wp.u[i]) / e0;
            const double d1 = c_star - f.f(wp.u[i + 1]) / e1;
            const double eh = hermite_value(u_tail_hi, wp.u[i], wp.u[i + 1],
                                            e0, e1, d0, d1);
            tail_seed_g = eh / u_tail_hi;
            tail_seed_x = hermite_value(u_tail_hi, wp.u[i], wp.u[i + 1],
                                        wp.x[i], wp.x[i + 1], -1.0 / e0,
                                        -1.0 / e1);
        }
    } else {
        // Matched two-sided tables: upward on [u_min, 1/2], downward above.
        std::size_t lo_count = 0;
        while (lo_count < n && wp.u[lo_count] <= 0.5) ++lo_count;
        std::size_t gi_up = 0;
        auto sampler_up = [&](State* y, double* u) {
            if (y == nullptr) {
                if (gi_up >= lo_count) return false;
                *u = wp.u[gi_up];
                return true;
            }
            wp.eta[gi_up] = (*y)[0];
            wp.x[gi_up] = (*y)[1];
            ++gi_up;
            if (gi_up >= lo_count) return false;
            *u = wp.u[gi_up];
            return true;
        };
        ShotUp up_end = shoot_up(f, c_star, gs, gs.u_min, 0.5, sampler_up);
        std::size_t gi_dn = n;
        auto sampler_dn = [&](State* y, double* u) {
            if (y == nullptr) {
                if (gi_dn <= lo_count) return false;
                *u = wp.u[gi_dn - 1];
                return true;
            }
            --gi_dn;
            wp.eta[gi_dn] = (*y)[0];
            wp.x[gi_dn] = (*y)[1];
            if (gi_dn <= lo_count) return false;
            *u = wp.u[gi_dn - 1];
            return true;
        };
        ShotDown shot = shoot_down(f, c_star, gs, 0.5, sampler_dn);
        if (!shot.reached_floor)
            throw std::runtime_error("compute_eta: downward leg collapsed");
        if (!up_end.ok)
            throw std::runtime_error("compute_eta: upward leg collapsed");
        // Anchor the two x-branches to a common frame at u = 1/2.
        for (std::size_t i = 0; i < lo_count; ++i) wp.x[i] -= up_end.x_end;
        for (std::size_t i = lo_count; i < n; ++i) wp.x[i] -= shot.x_end;
        {
            const std::size_t i = bracket(wp.u, u_tail_hi);
            tail_seed_x = hermite_value(u_tail_hi, wp.u[i], wp.u[i + 1],
                                        wp.x[i], wp.x[i + 1],
                                        -1.0 / wp.eta[i], -1.0 / wp.eta[i + 1]);
        }
    }

    // Derived tables from the defining identities.
    wp.eta_p.assign(n, 0.0);
    wp.eta_pp.assign(n, 0.0);
    wp.Q.assign(n, 0.0);
    wp.R.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = wp.u[i];
        const double e = wp.eta[i];
        const double fu = f.f(u), fpu = f.fp(u);
        const double ep = c_star - fu / e;
        // eta*eta'' = eta'(c - eta') - f', the cancellation-safe form near
        // both endpoints (O(1) terms cancel to O(u), O(1-u)).
        const double ee_pp = ep * (c_star - ep) - fpu;
        wp.eta_p[i] = ep;
        wp.eta_pp[i] = ee_pp / e;
        wp.Q[i] = ep * (c_star - ep) + ee_pp;
        wp.R[i] = 1.0 - wp.Q[i];
    }

    // Deep tail in log-space. The non-pushed tail continues the computed
    // trajectory (the branch is attracting downward there). The pushed
    // lambda0 branch is repelling downward, so its tail comes from the
    // series eta = l0 u + b u^2 instead, machine-accurate for u <= u_min.
    {
        TailTables tt;
        TailTables& t = tt;
        if (!pushed_path) {
            t = extend_tail(f, c_star, u_tail_hi, tail_seed_g, tail_seed_x,
                            gs.tail_u_min, gs.ode_rtol);
        } else {
            const double l0 = lr.lambda0;
            const double b = seed_b_coeff(f, l0);
            const double ln10 = std::log(10.0);
            const double e_hi = std::log10(u_tail_hi);
            const double e_lo = std::log10(gs.tail_u_min);
            for (double e = e_lo; e < e_hi + 1e-9; e += 0.0625) {
                const double uu = std::exp(e * ln10);
                t.u.push_back(uu);
                t.g.push_back(l0 + b * uu);
                t.gp_s.push_back(b * uu);  // dg/ds = u dg/du
                t.x.push_back(tail_seed_x + std::log(u_tail_hi / uu) / l0 +
                              (b / (l0 * l0)) * (u_tail_hi - uu));
            }
        }
        wp.tail_u = t.u;
        wp.tail_eta.resize(t.u.size());
        wp.tail_eta_p.resize(t.u.size());
        wp.tail_Q.resize(t.u.size());
        wp.tail_x = t.x;
        for (std::size_t i = 0; i < t.u.size(); ++i) {
            const double u = t.u[i];
            const double e = u * t.g[i];
            const double fu = f.f(u), fpu = f.fp(u);
            const double ep = c_star - fu / e;
            wp.tail_eta[i] = e;
            wp.tail_eta_p[i] = ep;
            wp.tail_Q[i] = 2.0 * ep * (c_star - ep) - fpu;
        }
    }

    wp.rebuild_views();

    compute_profile(wp);

    // Endpoint values. Right end converges like powers of (1-u): table edge.
    wp.eta_p1 = wp.eta_p.back();
    wp.Q1 = wp.Q.back();
    if (pushed_path) {
        wp.eta_p0 = wp.eta_p.front();
        wp.Q0 = wp.Q.front();
    } else {
        // Pulled-form extrapolation on the deep tail: bases from the small-u
        // asymptotics of eta' and Q. Harmless for pushmi-pullyu profiles,
        // where the corrections vanish faster than the bases.
        std::vector<double> one, invL, llL2, invL2, llL3, invL3, yep, yQ;
        for (std::size_t i = 0; i < wp.tail_u.size(); ++i) {
            const double L = -wp.tail_s_[i];
            if (L < 25.0) continue;
            one.push_back(1.0);
            invL.push_back(1.0 / L);
            llL2.push_back(std::log(L) / (L * L));
            invL2.push_back(1.0 / (L * L));
            llL3.push_back(std::log(L) / (L * L * L));
            invL3.push_back(1.0 / (L * L * L));
            yep.push_back(wp.tail_eta_p[i]);
            yQ.push_back(wp.tail_Q[i]);
        }
        if (one.size() >= 8) {
            Eigen::VectorXd ce = lsq_fit({one, invL, llL2, invL2}, yep);
            Eigen::VectorXd cq = lsq_fit({one, invL2, llL3, invL3}, yQ);
            wp.eta_p0 = ce(0);
            wp.Q0 = cq(0);
        } else {
            wp.eta_p0 = wp.tail_eta_p.front();
            wp.Q0 = wp.tail_Q.front();
        }
    }

    // Classification signature g(u) = (eta/u - 1) ln(1/u).
    for (int k = 0; k < 3; ++k) {
        const double u = std::pow(10.0, -4.0 - k);
        wp.g_raw[k] = (wp.eta_at(u) / u - 1.0) * std::log(1.0 / u);
    }
    {
        // Fit g = g_inf + b * lnln(1/u)/ln(1/u) on the three samples.
        std::vector<double> one(3, 1.0), bb(3), y(3);
        for (int k = 0; k < 3; ++k) {
            const double L = (4.0 + k) * std::log(10.0);
            bb[k] = std::log(L) / L;
            y[k] = wp.g_raw[k];
        }
        Eigen::VectorXd cg = lsq_fit({one, bb}, y);
        wp.g_extrap = cg(0);
    }

    wp.rebuild_views();
    return wp;
}

void WaveProfile::rebuild_views() {
    tail_s_.resize(tail_u.size());
    tail_g_.resize(tail_u.size());
    tail_gp_.resize(tail_u.size());
    for (std::size_t i = 0; i < tail_u.size(); ++i) {
        tail_s_[i] = std::log(tail_u[i]);
        tail_g_[i] = tail_eta[i] / tail_u[i];
        tail_gp_[i] = tail_eta_p[i] - tail_g_[i];
    }
    xr_.clear();
    ur_.clear();
    const double handoff = tail_u.empty() ? 0.0 : tail_u.back();
    for (std::size_t i = u.size(); i-- > 0;) {
        if (u[i] < handoff) continue;
        xr_.push_back(x[i]);
        ur_.push_back(u[i]);
    }
    for (std::size_t i = tail_u.size(); i-- > 0;) {
        xr_.push_back(tail_x[i]);
        ur_.push_back(tail_u[i]);
    }
}

void compute_profile(WaveProfile& wp) {
    // Anchor x so that U_*(0) = 1/2 by construction.
    HermiteTable xt = [&] {
        std::vector<double> du(wp.u.size());
        for (std::size_t i = 0; i < wp.u.size(); ++i) du[i] = -1.0 / wp.eta[i];
        return HermiteTable(wp.u, wp.x, du);
    }();
    const double x_half = xt(0.5);
    for (auto& v : wp.x) v -= x_half;
    for (auto& v : wp.tail_x) v -= x_half;
    for (std::size_t i = 0; i < wp.xr_.size() && i < wp.ur_.size(); ++i)
        wp.xr_[i] -= x_half;
}

double WaveProfile::eta_at(double uu) const {
    if (uu <= 0.0 || uu >= 1.0) return 0.0;
    if (!tail_u.empty() && uu < tail_u.back() && uu >= tail_u.front()) {
        const double s = std::log(uu);
        const std::size_t i = bracket(tail_s_, s);
        const double g = hermite_value(s, tail_s_[i], tail_s_[i + 1], tail_g_[i],
                                       tail_g_[i + 1], tail_gp_[i],
                                       tail_gp_[i + 1]);
        return uu * g;
    }
    if (uu >= u.front() && uu <= u.back()) {
        const std::size_t i = bracket(u, uu);
        return hermite_value(uu, u[i], u[i + 1], eta[i], eta[i + 1], eta_p[i],
                             eta_p[i + 1]);
    }
    if (uu > u.back()) return lambda1 * (1.0 - uu);
    if (!tail_u.empty() && uu >= tail_u.front()) {
        const double s = std::log(uu);
        const std::size_t i = bracket(tail_s_, s);
        const double g = hermite_value(s, tail_s_[i], tail_s_[i + 1], tail_g_[i],
                                       tail_g_[i + 1], tail_gp_[i],
                                       tail_gp_[i + 1]);
        return uu * g;
    }
    // Below the deep tail: branch models.
    if (c_star > 2.0 + 1e-9) return lambda0 * uu;
    return uu * (1.0 + 1.0 / std::log(uu));
}

double WaveProfile::eta_p_at(double uu) const {
    if (!tail_u.empty() && uu < tail_u.back() && uu >= tail_u.front()) {
        const double s = std::log(std::max(uu, tail_u.front()));
        const std::size_t i = bracket(tail_s_, s);
        const double t = (s - tail_s_[i]) / (tail_s_[i + 1] - tail_s_[i]);
        return (1.0 - t) * tail_eta_p[i] + t * tail_eta_p[i + 1];
    }
    if (uu >= u.front() && uu <= u.back()) {
        const std::size_t i = bracket(u, uu);
        return hermite_value(uu, u[i], u[i + 1], eta_p[i], eta_p[i + 1],
                             eta_pp[i], eta_pp[i + 1]);
    }
    if (uu > u.back()) return -lambda1;
    if (!tail_u.empty() && uu >= tail_u.front()) {
        const double s = std::log(std::max(uu, tail_u.front()));
        const std::size_t i = bracket(tail_s_, s);
        const double t = (s - tail_s_[i]) / (tail_s_[i + 1] - tail_s_[i]);
        return (1.0 - t) * tail_eta_p[i] + t * tail_eta_p[i + 1];
    }
    if (c_star > 2.0 + 1e-9) return lambda0;
    return 1.0 + 1.0 / std::log(std::min(uu, 0.5));
}

double WaveProfile::x_of_u(double uu) const {
    if (!tail_u.empty() && uu < tail_u.back() && uu >= tail_u.front()) {
        const double s = std::log(uu);
        const std::size_t i = bracket(tail_s_, s);
        return hermite_value(s, tail_s_[i], tail_s_[i + 1], tail_x[i],
                             tail_x[i + 1], -1.0 / tail_g_[i],
                             -1.0 / tail_g_[i + 1]);
    }
    if (uu >= u.front() && uu <= u.back()) {
        const std::size_t i = bracket(u, uu);
        return hermite_value(uu, u[i], u[i + 1], x[i], x[i + 1], -1.0 / eta[i],
                             -1.0 / eta[i + 1]);
    }
    if (uu > u.back()) {
        const double v = 1.0 - uu;
        const double vref = 1.0 - u.back();
        return x.back() - std::log(vref / v) / lambda1;
    }
    if (!tail_u.empty() && uu >= tail_u.front()) {
        const double s = std::log(uu);
        const std::size_t i = bracket(tail_s_, s);
        // dx/ds = -1/g along the tail
        return hermite_value(s, tail_s_[i], tail_s_[i + 1], tail_x[i],
                             tail_x[i + 1], -1.0 / tail_g_[i],
                             -1.0 / tail_g_[i + 1]);
    }
    const double uref = tail_u.empty() ? u.front() : tail_u.front();
    const double xref = tail_u.empty() ? x.front() : tail_x.front();
    return xref + std::log(uref / uu) / ((c_star > 2.0 + 1e-9) ? lambda0 : 1.0);
}

double WaveProfile::ustar_at(double xx) const {
    if (xr_.size() < 2) throw std::runtime_error("ustar_at: empty profile");
    if (xx <= xr_.front()) {
        // Far left: 1 - U decays like exp(lambda1 * x).
        const double uref = ur_.front();
        return 1.0 - (1.0 - uref) * std::exp(lambda1 * (xx - xr_.front()));
    }
    if (xx >= xr_.back()) {
        const double uref = ur_.back();
        return uref * std::exp(-lambda0 * (xx - xr_.back()));
    }
    const std::size_t i = bracket(xr_, xx);
    const double d0 = -eta_at(ur_[i]);
    const double d1 = -eta_at(ur_[i + 1]);
    return hermite_value(xx, xr_[i], xr_[i + 1], ur_[i], ur_[i + 1], d0, d1);
}

Regime classify_regime(WaveProfile& wp, double tol) {
    if (wp.c_star > 2.0 + tol) {
        wp.regime = Regime::pushed;
        return wp.regime;
    }
    const double g = wp.g_extrap;
    if (g < -0.6)
        wp.regime = Regime::pulled;
    else if (g > -0.4)
        wp.regime = Regime::pushmi_pullyu;
    else
        wp.regime = Regime::ambiguous;
    return wp.regime;
}

StructureReport check_structure(const WaveProfile& wp, double delta0,
                                double delta1) {
    if (!(delta0 > 0.0 && delta0 < 0.01 + 1e-12) ||
        !(delta1 > 0.0 && delta1 < 0.01 + 1e-12))
        throw std::domain_error("check_structure: deltas must lie in (0, 1/100)");
    StructureReport r;
    r.delta0 = delta0;
    r.delta1 = delta1;
    r.max_eta_pp = -1e300;
    r.max_Q = -1e300;
    r.r0 = 1e300;
    r.r1 = 1e300;
    for (std::size_t i = 0; i < wp.u.size(); ++i) {
        r.max_eta_pp = std::max(r.max_eta_pp, wp.eta_pp[i]);
        r.max_Q = std::max(r.max_Q, wp.Q[i]);
        const double u = wp.u[i];
        if (u >= delta0 && u <= 1.0 - delta1) r.r0 = std::min(r.r0, wp.R[i]);
        if (u >= 1.0 - delta1) r.r1 = std::min(r.r1, wp.R[i] - 1.0);
    }
    // Pulled refinement: R >= 2/ln^2 u - C lnln(1/u)/ln^3(1/u) below delta0.
    if (wp.c_star <= 2.0 + 1e-9) {
        r.pulled_checked = true;
        double C = 0.0;
        auto scan = [&](double u, double Q) {
            if (u > delta0) return;
            const double L = std::log(1.0 / u);
            if (L < 3.0) return;
            const double R = 1.0 - Q;
            const double deficit = (2.0 / (L * L) - R) * (L * L * L) / std::log(L);
            C = std::max(C, deficit);
        };
        for (std::size_t i = 0; i < wp.u.size(); ++i) scan(wp.u[i], wp.Q[i]);
        for (std::size_t i = 0; i < wp.tail_u.size(); ++i)
            scan(wp.tail_u[i], wp.tail_Q[i]);
        r.pulled_C_fit = C;
        double margin = 1e300;
        auto scan2 = [&](double u, double Q) {
            if (u > delta0) return;
            const double L = std::log(1.0 / u);
            if (L < 3.0) return;
            const double R = 1.0 - Q;
            margin = std::min(margin, R - 2.0 / (L * L) +
                                          C * std::log(L) / (L * L * L));
        };
        for (std::size_t i = 0; i < wp.u.size(); ++i) scan2(wp.u[i], wp.Q[i]);
        for (std::size_t i = 0; i < wp.tail_u.size(); ++i)
            scan2(wp.tail_u[i], wp.tail_Q[i]);
        r.pulled_margin_min = margin;
    }
    return r;
}

HypothesisReport check_general_eta_hypotheses(const Nonlinearity& f,
                                              const WaveProfile& wp) {
    HypothesisReport h;
    const auto& grid = nonlinearity_sample_grid();
    const double tol = 1e-10;
    bool nonpos = true;
    for (double u : grid)
        if (f.fpp(u) > tol) {
            nonpos = false;
            break;
        }
    h.case_i = nonpos;
    if (!nonpos) {
        // one sign change + -> - allowed
        int phase = 0;  // 0: in the >=0 head, 1: in the <=0 tail
        bool ok = true;
        double u0 = 0.0;
        for (double u : grid) {
            const double v = f.fpp(u);
            if (phase == 0) {
                if (v < -tol) {
                    phase = 1;
                    u0 = u;
                }
            } else if (v > tol) {
                ok = false;
                break;
            }
        }
        h.case_ii = ok && phase == 1;
        h.case_ii_u0 = u0;
    }
    h.case_iii = f.has_aux && f.chi >= 1.0 && f.aux_convex &&
                 (f.chi == 1.0 || f.aux_d3_nonneg);
    h.any_case = h.case_i || h.case_ii || h.case_iii;
    StructureReport s = check_structure(wp, 0.009, 0.009);
    h.max_eta_pp = s.max_eta_pp;
    h.max_Q = s.max_Q;
    return h;
}

}  // namespace rdfront
