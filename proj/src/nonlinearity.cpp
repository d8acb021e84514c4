#include "rdfront/nonlinearity.hpp"

#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "rdfront/csv.hpp"
#include "rdfront/interp.hpp"

namespace rdfront {

std::string family_name(Family f) {
    switch (f) {
        case Family::hadeler_rothe: return "hadeler_rothe";
        case Family::generalized_hr: return "generalized_hr";
        case Family::fkpp: return "fkpp";
        case Family::custom_eta_derived: return "custom_eta_derived";
        case Family::tabulated: return "tabulated";
    }
    return "?";
}

const std::vector<double>& nonlinearity_sample_grid() {
    static const std::vector<double> grid =
        chebyshev_grid(4097, 1e-6, 1.0 - 1e-6);
    return grid;
}

namespace {

// Derivative of a polynomial fit through k points, evaluated at x0.
// Used for one-sided endpoint extrapolation on tabulated data.
double polyfit_deriv_at(const std::vector<double>& xs,
                        const std::vector<double>& ys, double x0) {
    const int k = static_cast<int>(xs.size());
    // Newton divided differences in shifted coordinates.
    std::vector<double> t(k), c(ys.begin(), ys.end());
    for (int i = 0; i < k; ++i) t[i] = xs[i] - x0;
    for (int j = 1; j < k; ++j)
        for (int i = k - 1; i >= j; --i)
            c[i] = (c[i] - c[i - 1]) / (t[i] - t[i - j]);
    // p(x) = c0 + c1 (x-t0) + c2 (x-t0)(x-t1) + ...; differentiate at 0.
    // Evaluate via accumulating products P_j = prod_{i<j} (0 - t_i) and their
    // derivatives dP_j.
    double p = 0, dp = 0, prod = 1, dprod = 0;
    for (int j = 0; j < k; ++j) {
        p += c[j] * prod;
        dp += c[j] * dprod;
        dprod = dprod * (0.0 - t[j]) + prod;
        prod *= (0.0 - t[j]);
    }
    (void)p;
    return dp;
}

}  // namespace

namespace {

// u - u^n without cancellation near u = 1. Integer n uses the factorization
// u(1-u)(1 + u + ... + u^{n-2}); real n goes through expm1/log1p.
double hr_gap(double u, double n) {
    const double ni = std::round(n);
    if (std::abs(n - ni) < 1e-14 && ni >= 2 && ni <= 16) {
        double s = 1.0, p = 1.0;
        for (int k = 1; k + 1 < static_cast<int>(ni); ++k) {
            p *= u;
            s += p;
        }
        return u * (1.0 - u) * s;
    }
    if (u <= 0.0 || u >= 1.0) return u - std::pow(u, n);
    return -u * std::expm1((n - 1.0) * std::log1p(u - 1.0));
}

}  // namespace

Nonlinearity make_hadeler_rothe(double n, double chi) {
    if (!(n >= 2.0)) throw std::domain_error("hadeler_rothe: requires n >= 2");
    if (!(chi >= 0.0)) throw std::domain_error("hadeler_rothe: requires chi >= 0");
    Nonlinearity nl;
    nl.family = (chi == 0.0 && n == 2.0) ? Family::fkpp : Family::hadeler_rothe;
    nl.n = n;
    nl.chi = chi;
    nl.fprime0 = 1.0;
    nl.fprime1 = -(n - 1.0) * (1.0 + chi * n);
    nl.has_aux = true;  // A(u) = u^n
    nl.aux_convex = true;
    nl.aux_d3_nonneg = true;
    nl.f = [n, chi](double u) {
        return hr_gap(u, n) * (1.0 + chi * n * std::pow(u, n - 1.0));
    };
    nl.fp = [n, chi](double u) {
        const double un1 = std::pow(u, n - 1.0);
        const double g = 1.0 + chi * n * un1;
        const double gp = chi * n * (n - 1.0) * std::pow(u, n - 2.0);
        return (1.0 - n * un1) * g + hr_gap(u, n) * gp;
    };
    nl.fpp = [n, chi](double u) {
        const double un1 = std::pow(u, n - 1.0);
        const double un2 = std::pow(u, n - 2.0);
        const double un3 = (n > 2.0) ? std::pow(u, n - 3.0) : 0.0;
        const double g = 1.0 + chi * n * un1;
        const double gp = chi * n * (n - 1.0) * un2;
        const double gpp = (n == 2.0) ? 0.0 : chi * n * (n - 1.0) * (n - 2.0) * un3;
        const double ap = 1.0 - n * un1;
        const double app = -n * (n - 1.0) * un2;
        return app * g + 2.0 * ap * gp + hr_gap(u, n) * gpp;
    };
    return nl;
}

Nonlinearity make_fkpp() { return make_hadeler_rothe(2.0, 0.0); }

Nonlinearity make_generalized_hr(const FuncBundle& A, double chi) {
    if (!(chi >= 0.0)) throw std::domain_error("generalized_hr: requires chi >= 0");
    if (!A.value || !A.d1 || !A.d2)
        throw std::domain_error("generalized_hr: A needs value, d1, d2");
    const double tol = 1e-10;
    if (std::abs(A.value(0.0)) > tol || std::abs(A.d1(0.0)) > tol ||
        std::abs(A.value(1.0) - 1.0) > tol) {
        std::ostringstream os;
        os << "generalized_hr: endpoint conditions violated: A(0)=" << A.value(0.0)
           << " A'(0)=" << A.d1(0.0) << " A(1)=" << A.value(1.0);
        throw std::domain_error(os.str());
    }
    Nonlinearity nl;
    nl.family = Family::generalized_hr;
    nl.chi = chi;
    nl.fprime0 = 1.0;
    nl.fprime1 = (1.0 - A.d1(1.0)) * (1.0 + chi * A.d1(1.0));
    nl.has_aux = true;
    auto Av = A.value, A1 = A.d1, A2 = A.d2, A3 = A.d3;
    nl.f = [Av, A1, chi](double u) {
        return (u - Av(u)) * (1.0 + chi * A1(u));
    };
    nl.fp = [Av, A1, A2, chi](double u) {
        return (1.0 - A1(u)) * (1.0 + chi * A1(u)) + (u - Av(u)) * chi * A2(u);
    };
    if (A.d3) {
        nl.fpp = [Av, A1, A2, A3, chi](double u) {
            return -A2(u) * (1.0 + chi * A1(u)) + 2.0 * (1.0 - A1(u)) * chi * A2(u) +
                   (u - Av(u)) * chi * A3(u);
        };
    } else {
        auto fp = nl.fp;
        nl.fpp = [fp](double u) {
            const double h = 1e-6;
            const double lo = std::max(0.0, u - h), hi = std::min(1.0, u + h);
            return (fp(hi) - fp(lo)) / (hi - lo);
        };
    }
    // Hypothesis flags for the concavity lemma, sampled on the shared grid.
    nl.aux_convex = true;
    nl.aux_d3_nonneg = static_cast<bool>(A.d3);
    for (double u : nonlinearity_sample_grid()) {
        if (A.d2(u) < -1e-12) nl.aux_convex = false;
        if (A.d3 && A.d3(u) < -1e-12) nl.aux_d3_nonneg = false;
    }
    return nl;
}

Nonlinearity make_from_eta(const FuncBundle& eta, double c) {
    if (!eta.value || !eta.d1)
        throw std::domain_error("make_from_eta: eta needs value and d1");
    const double tol = 1e-10;
    if (std::abs(eta.value(0.0)) > tol || std::abs(eta.value(1.0)) > tol)
        throw std::domain_error("make_from_eta: eta must vanish at 0 and 1");
    for (double u : nonlinearity_sample_grid()) {
        if (eta.d1(u) >= c) {
            std::ostringstream os;
            os << "make_from_eta: eta'(u) >= c at u=" << u
               << " (eta'=" << eta.d1(u) << ", c=" << c << "), f <= 0 there";
            throw std::domain_error(os.str());
        }
        if (!(eta.value(u) > 0.0)) {
            std::ostringstream os;
            os << "make_from_eta: eta(u) <= 0 at u=" << u;
            throw std::domain_error(os.str());
        }
    }
    Nonlinearity nl;
    nl.family = Family::custom_eta_derived;
    auto ev = eta.value, e1 = eta.d1, e2 = eta.d2, e3 = eta.d3;
    nl.f = [ev, e1, c](double u) { return ev(u) * (c - e1(u)); };
    if (e2) {
        nl.fp = [ev, e1, e2, c](double u) {
            return e1(u) * (c - e1(u)) - ev(u) * e2(u);
        };
    } else {
        auto f = nl.f;
        nl.fp = [f](double u) {
            const double h = 1e-6;
            const double lo = std::max(0.0, u - h), hi = std::min(1.0, u + h);
            return (f(hi) - f(lo)) / (hi - lo);
        };
    }
    if (e2 && e3) {
        nl.fpp = [ev, e1, e2, e3, c](double u) {
            return e2(u) * (c - e1(u)) - 2.0 * e1(u) * e2(u) - ev(u) * e3(u);
        };
    } else {
        auto fp = nl.fp;
        nl.fpp = [fp](double u) {
            const double h = 1e-5;
            const double lo = std::max(0.0, u - h), hi = std::min(1.0, u + h);
            return (fp(hi) - fp(lo)) / (hi - lo);
        };
    }
    nl.fprime0 = eta.d1(0.0) * (c - eta.d1(0.0));
    nl.fprime1 = eta.d1(1.0) * (c - eta.d1(1.0));
    return nl;
}

Nonlinearity make_tabulated(const std::string& csv_path) {
    CsvTable t = read_csv(csv_path);
    if (t.header.size() < 2)
        throw std::domain_error("tabulated: expected u,f columns");
    const auto& us = t.columns[0];
    const auto& fs = t.columns[1];
    if (us.size() < 8) throw std::domain_error("tabulated: table too small");
    for (std::size_t i = 0; i + 1 < us.size(); ++i)
        if (!(us[i] < us[i + 1]))
            throw std::domain_error("tabulated: u must be strictly increasing");
    if (std::abs(us.front()) > 1e-12 || std::abs(us.back() - 1.0) > 1e-12)
        throw std::domain_error("tabulated: u must cover [0,1]");

    auto ftab = std::make_shared<HermiteTable>(us, fs);
    // Derivative table: sample f' of the interpolant at the nodes, then
    // interpolate those samples for f''.
    std::vector<double> fps(us.size());
    for (std::size_t i = 0; i < us.size(); ++i) fps[i] = ftab->deriv(us[i]);
    auto fptab = std::make_shared<HermiteTable>(us, fps);

    // Heuristic C2 check: bounded second differences (the table cannot
    // certify C2 regularity; documented, not resolved).
    double h2max = 0;
    for (std::size_t i = 1; i + 1 < us.size(); ++i) {
        const double h = 0.5 * (us[i + 1] - us[i - 1]);
        const double dd = (fs[i + 1] - 2 * fs[i] + fs[i - 1]) / (h * h);
        h2max = std::max(h2max, std::abs(dd));
    }
    if (!(h2max < 1e6))
        throw std::domain_error("tabulated: second differences unbounded");

    Nonlinearity nl;
    nl.family = Family::tabulated;
    nl.table_path = csv_path;
    nl.f = [ftab](double u) { return (*ftab)(u); };
    nl.fp = [ftab](double u) { return ftab->deriv(u); };
    nl.fpp = [fptab](double u) { return fptab->deriv(u); };
    // One-sided quartic extrapolation of f' at the endpoints.
    const std::size_t m = us.size();
    std::vector<double> xs0(us.begin(), us.begin() + 5),
        ys0(fs.begin(), fs.begin() + 5);
    std::vector<double> xs1(us.end() - 5, us.end()), ys1(fs.end() - 5, fs.end());
    nl.fprime0 = polyfit_deriv_at(xs0, ys0, 0.0);
    nl.fprime1 = polyfit_deriv_at(xs1, ys1, 1.0);
    (void)m;
    return nl;
}

Nonlinearity normalize(const Nonlinearity& raw) {
    const double r = raw.fprime0;
    if (!(r > 0.0))
        throw std::domain_error("normalize: f'(0) <= 0 violates positivity assumptions");
    if (r == 1.0) {
        Nonlinearity nl = raw;
        nl.scale = raw.scale;
        return nl;
    }
    Nonlinearity nl = raw;
    nl.scale = raw.scale * r;
    auto f = raw.f, fp = raw.fp, fpp = raw.fpp;
    nl.f = [f, r](double u) { return f(u) / r; };
    nl.fp = [fp, r](double u) { return fp(u) / r; };
    nl.fpp = [fpp, r](double u) { return fpp(u) / r; };
    nl.fprime0 = 1.0;
    nl.fprime1 = raw.fprime1 / r;
    return nl;
}

void validate(const Nonlinearity& nl) {
    const double tol_end = 1e-12;
    if (std::abs(nl.f(0.0)) > tol_end || std::abs(nl.f(1.0)) > tol_end)
        throw std::domain_error("nonlinearity: f(0), f(1) must vanish");
    if (std::abs(nl.fprime0 - 1.0) > 1e-10)
        throw std::domain_error("nonlinearity: f'(0) != 1 (normalize first)");
    for (double u : nonlinearity_sample_grid()) {
        if (!(nl.f(u) > 0.0)) {
            std::ostringstream os;
            os << "nonlinearity: f(u) <= 0 at u=" << u;
            throw std::domain_error(os.str());
        }
    }
    // Derivative consistency against centered differences, O(h^2).
    const double h = 1e-5;
    for (std::size_t i = 0; i < nonlinearity_sample_grid().size(); i += 64) {
        const double u = nonlinearity_sample_grid()[i];
        if (u - h < 0.0 || u + h > 1.0) continue;
        const double fd = (nl.f(u + h) - nl.f(u - h)) / (2 * h);
        if (std::abs(nl.fp(u) - fd) > 1e-7 * (1.0 + std::abs(nl.fp(u)))) {
            std::ostringstream os;
            os << "nonlinearity: fp inconsistent with FD at u=" << u;
            throw std::domain_error(os.str());
        }
        // fpp check at a coarser h: the h=1e-5 roundoff floor of a second
        // difference (~4 eps |f| / h^2) exceeds the truncation term.
        const double h2 = 1e-4;
        if (u - h2 >= 0.0 && u + h2 <= 1.0) {
            const double fd2 =
                (nl.f(u + h2) - 2 * nl.f(u) + nl.f(u - h2)) / (h2 * h2);
            if (std::abs(nl.fpp(u) - fd2) > 1e-4 * (1.0 + std::abs(nl.fpp(u)))) {
                std::ostringstream os;
                os << "nonlinearity: fpp inconsistent with FD at u=" << u;
                throw std::domain_error(os.str());
            }
        }
    }
}

HrForm hr_form(const Nonlinearity& nl) {
    HrForm h;
    if ((nl.family == Family::hadeler_rothe || nl.family == Family::fkpp) &&
        nl.scale == 1.0) {
        const double nr = std::round(nl.n);
        if (std::abs(nl.n - nr) < 1e-14 && nr >= 2 && nr <= 8) {
            h.valid = true;
            h.n_int = static_cast<int>(nr);
            h.chi = nl.chi;
        }
    }
    return h;
}

}  // namespace rdfront
