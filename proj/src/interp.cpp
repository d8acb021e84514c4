#include "rdfront/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rdfront {

double hermite_value(double x, double x0, double x1, double y0, double y1,
                     double d0, double d1) {
    const double h = x1 - x0;
    const double t = (x - x0) / h;
    const double t2 = t * t, t3 = t2 * t;
    return y0 * (2 * t3 - 3 * t2 + 1) + y1 * (-2 * t3 + 3 * t2) +
           h * (d0 * (t3 - 2 * t2 + t) + d1 * (t3 - t2));
}

double hermite_deriv(double x, double x0, double x1, double y0, double y1,
                     double d0, double d1) {
    const double h = x1 - x0;
    const double t = (x - x0) / h;
    const double t2 = t * t;
    return (y0 * (6 * t2 - 6 * t) + y1 * (-6 * t2 + 6 * t)) / h +
           d0 * (3 * t2 - 4 * t + 1) + d1 * (3 * t2 - 2 * t);
}

std::size_t bracket(std::span<const double> xs, double x) {
    if (xs.size() < 2) return 0;
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.begin()) return 0;
    std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
    if (i > xs.size() - 2) i = xs.size() - 2;
    return i;
}

std::vector<double> pchip_slopes(std::span<const double> xs,
                                 std::span<const double> ys) {
    const std::size_t n = xs.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = xs[i + 1] - xs[i];
        delta[i] = (ys[i + 1] - ys[i]) / h[i];
    }
    if (n == 2) {
        d[0] = d[1] = delta[0];
        return d;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            d[i] = 0.0;
        } else {
            const double w1 = 2 * h[i] + h[i - 1];
            const double w2 = h[i] + 2 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    // One-sided endpoint slopes (shape-preserving limiter).
    auto end_slope = [](double h0, double h1, double del0, double del1) {
        double d0 = ((2 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
        if (d0 * del0 <= 0.0)
            d0 = 0.0;
        else if (del0 * del1 < 0.0 && std::abs(d0) > 3 * std::abs(del0))
            d0 = 3 * del0;
        return d0;
    };
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    return d;
}

HermiteTable::HermiteTable(std::vector<double> xs, std::vector<double> ys,
                           std::vector<double> ds)
    : xs_(std::move(xs)), ys_(std::move(ys)), ds_(std::move(ds)) {
    if (xs_.size() != ys_.size() || xs_.size() != ds_.size() || xs_.size() < 2)
        throw std::invalid_argument("HermiteTable: inconsistent table sizes");
}

HermiteTable::HermiteTable(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size() || xs_.size() < 2)
        throw std::invalid_argument("HermiteTable: inconsistent table sizes");
    ds_ = pchip_slopes(xs_, ys_);
}

double HermiteTable::operator()(double x) const {
    const std::size_t i = bracket(xs_, x);
    return hermite_value(x, xs_[i], xs_[i + 1], ys_[i], ys_[i + 1], ds_[i],
                         ds_[i + 1]);
}

double HermiteTable::deriv(double x) const {
    const std::size_t i = bracket(xs_, x);
    return hermite_deriv(x, xs_[i], xs_[i + 1], ys_[i], ys_[i + 1], ds_[i],
                         ds_[i + 1]);
}

double Quintic::value(double x) const {
    const double t = (x - a) / (b - a);
    return ((((c[5] * t + c[4]) * t + c[3]) * t + c[2]) * t + c[1]) * t + c[0];
}

double Quintic::deriv(double x) const {
    const double L = b - a;
    const double t = (x - a) / L;
    const double v =
        (((5 * c[5] * t + 4 * c[4]) * t + 3 * c[3]) * t + 2 * c[2]) * t + c[1];
    return v / L;
}

double Quintic::deriv2(double x) const {
    const double L = b - a;
    const double t = (x - a) / L;
    const double v = ((20 * c[5] * t + 12 * c[4]) * t + 6 * c[3]) * t + 2 * c[2];
    return v / (L * L);
}

double Quintic::deriv3(double x) const {
    const double L = b - a;
    const double t = (x - a) / L;
    const double v = (60 * c[5] * t + 24 * c[4]) * t + 6 * c[3];
    return v / (L * L * L);
}

Quintic Quintic::hermite(double a, double b, double ya, double da, double sa,
                         double yb, double db, double sb) {
    // In tau units: p(0)=ya, p'(0)=da*L, p''(0)=sa*L^2; likewise at tau=1.
    Quintic q;
    q.a = a;
    q.b = b;
    const double L = b - a;
    const double d0 = da * L, d1 = db * L;
    const double s0 = sa * L * L, s1 = sb * L * L;
    q.c[0] = ya;
    q.c[1] = d0;
    q.c[2] = s0 / 2;
    // Remaining three from conditions at tau = 1.
    const double r0 = yb - (ya + d0 + s0 / 2);
    const double r1 = d1 - (d0 + s0);
    const double r2 = s1 - s0;
    // [1 1 1; 3 4 5; 6 12 20] [c3 c4 c5]^T = [r0 r1 r2]^T
    q.c[3] = 10 * r0 - 4 * r1 + r2 / 2;
    q.c[4] = -15 * r0 + 7 * r1 - r2;
    q.c[5] = 6 * r0 - 3 * r1 + r2 / 2;
    return q;
}

double hermite_solve(double y, double x0, double x1, double y0, double y1,
                     double d0, double d1) {
    double lo = x0, hi = x1;
    const bool incr = y1 > y0;
    double x = x0 + (x1 - x0) * (incr ? (y - y0) / (y1 - y0) : (y0 - y) / (y0 - y1));
    for (int it = 0; it < 60; ++it) {
        const double v = hermite_value(x, x0, x1, y0, y1, d0, d1) - y;
        if ((v > 0) == incr)
            hi = x;
        else
            lo = x;
        const double dv = hermite_deriv(x, x0, x1, y0, y1, d0, d1);
        double step = (dv != 0.0) ? v / dv : 0.0;
        double xn = x - step;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        if (std::abs(xn - x) < 1e-15 * (std::abs(x1) + std::abs(x0) + 1.0)) {
            x = xn;
            break;
        }
        x = xn;
    }
    return x;
}

}  // namespace rdfront
