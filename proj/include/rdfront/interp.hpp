#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rdfront {

// Cubic Hermite evaluation on one segment [x0,x1] with endpoint values/slopes.
double hermite_value(double x, double x0, double x1, double y0, double y1,
                     double d0, double d1);
double hermite_deriv(double x, double x0, double x1, double y0, double y1,
                     double d0, double d1);

// Index of the segment [xs[i], xs[i+1]] containing x (xs strictly increasing).
// Clamps to the first/last segment for out-of-range x.
std::size_t bracket(std::span<const double> xs, double x);

// Monotonicity-preserving (Fritsch-Carlson) slopes for tabulated data.
std::vector<double> pchip_slopes(std::span<const double> xs,
                                 std::span<const double> ys);

// Tabulated function with per-node derivatives; piecewise cubic Hermite.
class HermiteTable {
public:
    HermiteTable() = default;
    HermiteTable(std::vector<double> xs, std::vector<double> ys,
                 std::vector<double> ds);
    // Slopes from Fritsch-Carlson if not supplied.
    HermiteTable(std::vector<double> xs, std::vector<double> ys);

    double operator()(double x) const;
    double deriv(double x) const;
    bool empty() const { return xs_.empty(); }
    std::span<const double> xs() const { return xs_; }
    std::span<const double> ys() const { return ys_; }
    std::span<const double> ds() const { return ds_; }
    double x_front() const { return xs_.front(); }
    double x_back() const { return xs_.back(); }

private:
    std::vector<double> xs_, ys_, ds_;
};

// Quintic with prescribed value/slope/curvature at both ends of [a,b].
struct Quintic {
    double a = 0, b = 1;
    double c[6] = {0, 0, 0, 0, 0, 0};  // coefficients in tau = (x-a)/(b-a)

    double value(double x) const;
    double deriv(double x) const;
    double deriv2(double x) const;
    double deriv3(double x) const;

    static Quintic hermite(double a, double b, double ya, double da, double sa,
                           double yb, double db, double sb);
};

// Root of a monotone cubic Hermite segment: solves H(x) = y on [x0,x1].
double hermite_solve(double y, double x0, double x1, double y0, double y1,
                     double d0, double d1);

}  // namespace rdfront
