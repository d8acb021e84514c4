#include "rdfront/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rdfront/interp.hpp"

namespace rdfront {

double front_location(const SimState& s) {
    const auto& u = s.u;
    const std::size_t n = u.size();
    if (n < 6 || u.front() < 0.5 || u.back() >= 0.5)
        throw std::runtime_error("front_location: no u=1/2 crossing in window");
    std::size_t lo = 0, hi = n - 1;
    while (hi - lo > 1) {
        const std::size_t m = (lo + hi) / 2;
        if (u[m] >= 0.5)
            lo = m;
        else
            hi = m;
    }
    // Four bracketing cells lo-1 .. lo+2, monotone cubic through them.
    const std::size_t i0 = (lo == 0) ? 0 : lo - 1;
    const std::size_t count = std::min<std::size_t>(4, n - i0);
    std::vector<double> xs(count), ys(count);
    for (std::size_t k = 0; k < count; ++k) {
        xs[k] = s.x_of(i0 + k);
        ys[k] = -u[i0 + k];  // increasing for the interpolator
    }
    auto ds = pchip_slopes(xs, ys);
    const std::size_t seg = lo - i0;
    return hermite_solve(-0.5, xs[seg], xs[seg + 1], ys[seg], ys[seg + 1],
                         ds[seg], ds[seg + 1]);
}

std::vector<double> shape_defect(const SimState& s, const WaveProfile& wp) {
    const std::size_t n = s.u.size();
    std::vector<double> ux(n), w(n);
    const KernelSet& ks = select_kernels("scalar");
    ks.diff4(s.u.data(), n, s.dx, ux.data());
    for (std::size_t i = 0; i < n; ++i) {
        const double uc = std::clamp(s.u[i], 0.0, 1.0);
        w[i] = -ux[i] - wp.eta_at(uc);
    }
    return w;
}

ShapeError shape_error(const SimState& s, const WaveProfile& wp, double sigma,
                       double lambda_front) {
    ShapeError e{0.0, 0.0};
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        const double x = s.x_of(i) - sigma;
        const double d = std::abs(s.u[i] - wp.ustar_at(x));
        e.E_inf = std::max(e.E_inf, d);
        if (x >= -lambda_front) e.E_front = std::max(e.E_front, d);
    }
    return e;
}

namespace {

// Interpolate a cell-sampled field at x (4-point cubic via pchip).
double sample_field(const SimState& s, const std::vector<double>& v,
                    double x) {
    const std::size_t n = v.size();
    const double fi = (x - s.offset) / s.dx;
    long i = static_cast<long>(std::floor(fi));
    i = std::clamp<long>(i, 1, static_cast<long>(n) - 3);
    std::vector<double> xs(4), ys(4);
    for (int k = 0; k < 4; ++k) {
        xs[k] = s.x_of(static_cast<std::size_t>(i - 1 + k));
        ys[k] = v[static_cast<std::size_t>(i - 1 + k)];
    }
    auto ds = pchip_slopes(xs, ys);
    const std::size_t seg = (x >= xs[1]) ? ((x >= xs[2]) ? 2 : 1) : 0;
    return hermite_value(x, xs[seg], xs[seg + 1], ys[seg], ys[seg + 1], ds[seg],
                         ds[seg + 1]);
}

}  // namespace

ReconResult reconstruct_s(const SimState& s, const WaveProfile& wp,
                          double sigma, const std::vector<double>& w,
                          const DiagnosticsConfig& cfg) {
    // s(t,x) = -int_0^x exp(-int_y^x eta'(xi(z)) dz) w(y) dy on the shifted
    // subwindow; xi is realized as the midpoint of (u, U_*), with the two
    // segment endpoints evaluated as a sensitivity bracket.
    const std::size_t n = s.u.size();
    std::vector<std::size_t> idx;
    std::vector<double> y;  // shifted coordinates
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = s.x_of(i) - sigma;
        if (xi >= -cfg.recon_left && xi <= cfg.recon_right) {
            idx.push_back(i);
            y.push_back(xi);
        }
    }
    ReconResult r{0, 0, 0, 0};
    if (idx.size() < 8) return r;
    const std::size_t m = idx.size();

    std::vector<double> sdir(m), ustar(m);
    for (std::size_t k = 0; k < m; ++k) {
        ustar[k] = wp.ustar_at(y[k]);
        sdir[k] = s.u[idx[k]] - ustar[k];
        r.sup_s = std::max(r.sup_s, std::abs(sdir[k]));
        // sign pattern: s <= 0 for x > 0, s >= 0 for x < 0
        if (y[k] > 0.5) r.sign_err = std::max(r.sign_err, sdir[k]);
        if (y[k] < -0.5) r.sign_err = std::max(r.sign_err, -sdir[k]);
    }

    // index of the cell pair bracketing y = 0
    std::size_t k0 = 0;
    while (k0 + 1 < m && y[k0 + 1] <= 0.0) ++k0;

    auto run_proxy = [&](int mode) {
        // mode 0: midpoint, 1: u-endpoint, 2: U_*-endpoint
        std::vector<double> a(m);
        for (std::size_t k = 0; k < m; ++k) {
            const double uu = std::clamp(s.u[idx[k]], 0.0, 1.0);
            const double xi = mode == 0 ? 0.5 * (uu + ustar[k])
                              : mode == 1 ? uu
                                          : ustar[k];
            a[k] = wp.eta_p_at(std::clamp(xi, 0.0, 1.0));
        }
        // A(y) = int_0^y a, trapezoid from the y=0 anchor.
        std::vector<double> A(m, 0.0);
        {
            // anchor within the (k0, k0+1) cell
            const double f0 = -y[k0] / (y[k0 + 1] - y[k0]);
            const double a_at0 = a[k0] + f0 * (a[k0 + 1] - a[k0]);
            A[k0] = -0.5 * (a_at0 + a[k0]) * (0.0 - y[k0]);
            for (std::size_t k = k0; k-- > 0;)
                A[k] = A[k + 1] - 0.5 * (a[k] + a[k + 1]) * (y[k + 1] - y[k]);
            A[k0 + 1] = 0.5 * (a_at0 + a[k0 + 1]) * (y[k0 + 1] - 0.0);
            for (std::size_t k = k0 + 2; k < m; ++k)
                A[k] = A[k - 1] + 0.5 * (a[k - 1] + a[k]) * (y[k] - y[k - 1]);
        }
        // T(y) = int_0^y exp(A) w similarly.
        std::vector<double> T(m, 0.0);
        std::vector<double> g(m);
        for (std::size_t k = 0; k < m; ++k)
            g[k] = std::exp(A[k]) * w[idx[k]];
        {
            const double f0 = -y[k0] / (y[k0 + 1] - y[k0]);
            const double g_at0 = g[k0] + f0 * (g[k0 + 1] - g[k0]);
            T[k0] = -0.5 * (g_at0 + g[k0]) * (0.0 - y[k0]);
            for (std::size_t k = k0; k-- > 0;)
                T[k] = T[k + 1] - 0.5 * (g[k] + g[k + 1]) * (y[k + 1] - y[k]);
            T[k0 + 1] = 0.5 * (g_at0 + g[k0 + 1]) * (y[k0 + 1] - 0.0);
            for (std::size_t k = k0 + 2; k < m; ++k)
                T[k] = T[k - 1] + 0.5 * (g[k - 1] + g[k]) * (y[k] - y[k - 1]);
        }
        std::vector<double> srec(m);
        for (std::size_t k = 0; k < m; ++k)
            srec[k] = -std::exp(-A[k]) * T[k];
        return srec;
    };

    auto s_mid = run_proxy(0);
    auto s_lo = run_proxy(1);
    auto s_hi = run_proxy(2);
    for (std::size_t k = 0; k < m; ++k) {
        r.recon_err = std::max(r.recon_err, std::abs(sdir[k] - s_mid[k]));
        const double spread = std::max(std::abs(s_mid[k] - s_lo[k]),
                                       std::abs(s_mid[k] - s_hi[k]));
        r.recon_sens = std::max(r.recon_sens, spread);
    }
    return r;
}

double phantom_lag(double w_at_front) {
    if (!(w_at_front > 0.0))
        throw std::domain_error("phantom_lag: w(t, sigma) <= 0");
    return -std::log(w_at_front);
}

double envelope_ratio(const SimState& s, const std::vector<double>& w,
                      double sigma, double t, const WaveProfile& wp,
                      Regime regime, const DiagnosticsConfig& cfg) {
    if (t <= 0.0) return 0.0;
    double best = 0.0;
    const double C = cfg.envelope_c;
    const double cs = wp.c_star;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double x = s.x_of(i) - sigma;
        if (x < 0.0) continue;
        if (!(w[i] > 1e-280)) continue;
        double lnB;
        switch (regime) {
            case Regime::pushed:
                lnB = -0.5 * std::log(t) - 0.25 * (cs * cs - 4.0) * t -
                      0.5 * cs * x - x * x / (4.0 * t);
                break;
            case Regime::pushmi_pullyu:
                lnB = std::log1p(x) - x - x * x / (C * t) - std::log(t);
                break;
            default:  // pulled and ambiguous
                lnB = 2.0 * std::log1p(x) - x - x * x / (C * t) - std::log(t);
                break;
        }
        if (lnB < -680.0) continue;  // envelope underflows; ratio unusable
        best = std::max(best, std::exp(std::log(w[i]) - lnB));
    }
    return best;
}

DiagnosticsRecord diagnose(const SimState& s, const WaveProfile& wp,
                           Regime regime, const DiagnosticsConfig& cfg) {
    DiagnosticsRecord r;
    r.t = s.t;
    const KernelSet& ks = select_kernels("scalar");
    double mn, mx;
    ks.minmax(s.u.data(), s.u.size(), &mn, &mx);
    r.min_u = mn;
    r.max_u = mx;

    r.mono_defect = 0.0;
    for (std::size_t i = 0; i + 1 < s.u.size(); ++i)
        r.mono_defect = std::max(r.mono_defect, s.u[i + 1] - s.u[i]);

    r.sigma = front_location(s);
    r.has_front = true;

    const auto w = shape_defect(s, wp);
    double wmn, wmx;
    ks.minmax(w.data(), w.size(), &wmn, &wmx);
    r.min_w = wmn;
    r.w_max = wmx;
    r.w_at_front = sample_field(s, w, r.sigma);

    const auto e = shape_error(s, wp, r.sigma, cfg.lambda_front);
    r.E_inf = e.E_inf;
    r.E_front = e.E_front;

    if (r.w_at_front > 0.0) {
        r.D_hat = phantom_lag(r.w_at_front);
        r.has_D_hat = true;
    }
    r.envelope_ratio = envelope_ratio(s, w, r.sigma, s.t, wp, regime, cfg);

    const auto rec = reconstruct_s(s, wp, r.sigma, w, cfg);
    r.recon_err = rec.recon_err;
    r.recon_sens = rec.recon_sens;
    r.sup_s = rec.sup_s;
    r.sign_err = rec.sign_err;

    // Steepness bracket: smallest C with U_*(x+C) <= u <= U_*(x-C).
    // Behind the front only x(u) - x > -C binds is the lower bound
    // (x(u) <= x + C); ahead only the upper one (x(u) >= x - C).
    r.C_obs = 0.0;
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        const double uu = s.u[i];
        if (uu < 1e-6 || uu > 1.0 - 1e-6) continue;
        const double y = s.x_of(i) - r.sigma;
        const double shift = wp.x_of_u(uu) - y;
        r.C_obs = std::max(r.C_obs, y < 0.0 ? shift : -shift);
    }
    return r;
}

}  // namespace rdfront
