#include "rdfront/fits.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace rdfront {

FitField fit_field_from_string(const std::string& s) {
    if (s == "E_front") return FitField::E_front;
    if (s == "E_inf") return FitField::E_inf;
    if (s == "w_at_front") return FitField::w_at_front;
    if (s == "D_hat") return FitField::D_hat;
    throw std::domain_error("unknown fit field: " + s);
}

std::string fit_field_name(FitField f) {
    switch (f) {
        case FitField::E_front: return "E_front";
        case FitField::E_inf: return "E_inf";
        case FitField::w_at_front: return "w_at_front";
        case FitField::D_hat: return "D_hat";
    }
    return "?";
}

namespace {

double field_value(const DiagnosticsRecord& r, FitField f) {
    switch (f) {
        case FitField::E_front: return r.E_front;
        case FitField::E_inf: return r.E_inf;
        case FitField::w_at_front: return r.w_at_front;
        case FitField::D_hat: return r.D_hat;
    }
    return 0;
}

struct Lsq {
    Eigen::VectorXd coef;
    Eigen::VectorXd stderr_;
    double residual_rms;
    double cond;
};

Lsq solve_lsq(const std::vector<std::vector<double>>& cols,
              const std::vector<double>& y) {
    const int m = static_cast<int>(y.size());
    const int k = static_cast<int>(cols.size());
    Eigen::MatrixXd X(m, k);
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) {
        b(i) = y[i];
        for (int j = 0; j < k; ++j) X(i, j) = cols[j][i];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU |
                                                 Eigen::ComputeThinV);
    Lsq out;
    out.cond = svd.singularValues()(0) /
               std::max(svd.singularValues()(k - 1), 1e-300);
    out.coef = svd.solve(b);
    const Eigen::VectorXd res = b - X * out.coef;
    out.residual_rms = std::sqrt(res.squaredNorm() / m);
    const double s2 = res.squaredNorm() / std::max(m - k, 1);
    const Eigen::MatrixXd xtx_inv =
        (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(k, k));
    out.stderr_.resize(k);
    for (int j = 0; j < k; ++j)
        out.stderr_(j) = std::sqrt(std::max(s2 * xtx_inv(j, j), 0.0));
    return out;
}

std::vector<const DiagnosticsRecord*> window_records(
    const DiagnosticsSeries& series, FitWindow w) {
    std::vector<const DiagnosticsRecord*> out;
    for (const auto& r : series)
        if (r.t >= w.t_min && r.t <= w.t_max && r.has_front) out.push_back(&r);
    return out;
}

}  // namespace

FitReport fit_front_delay(const DiagnosticsSeries& series, double c_star,
                          FitWindow window, double target, double tolerance) {
    auto recs = window_records(series, window);
    if (recs.size() < 30)
        throw std::runtime_error("fit_front_delay: needs >= 30 samples");
    std::vector<double> lnt, one, isqrt, y;
    for (auto* r : recs) {
        lnt.push_back(std::log(r->t));
        one.push_back(1.0);
        isqrt.push_back(1.0 / std::sqrt(r->t));
        y.push_back(r->sigma - c_star * r->t);
    }
    auto ls = solve_lsq({lnt, one, isqrt}, y);
    if (ls.cond > 1e8)
        throw std::runtime_error("fit_front_delay: ill-conditioned design");
    FitReport rep;
    rep.model = "front_delay";
    rep.coefficients["a"] = ls.coef(0);
    rep.coefficients["intercept"] = ls.coef(1);
    rep.coefficients["nuisance_isqrt"] = ls.coef(2);
    rep.stderrs["a"] = ls.stderr_(0);
    rep.stderrs["intercept"] = ls.stderr_(1);
    rep.stderrs["nuisance_isqrt"] = ls.stderr_(2);
    rep.window = window;
    rep.n_points = static_cast<int>(recs.size());
    rep.residual_rms = ls.residual_rms;
    rep.measured = ls.coef(0);
    rep.target = target;
    rep.tolerance = tolerance;
    rep.has_target = true;
    rep.pass = std::abs(rep.measured - target) <= tolerance;
    return rep;
}

namespace {

FitReport rate_fit(const DiagnosticsSeries& series, FitField field,
                   FitWindow window, double target, double tolerance,
                   bool exponential) {
    auto recs = window_records(series, window);
    std::vector<double> t1, one, y;
    std::string note;
    for (auto* r : recs) {
        const double v = field_value(*r, field);
        if (!(v > 0.0)) {
            note = "window truncated at nonpositive field values";
            continue;
        }
        t1.push_back(exponential ? r->t : std::log(r->t));
        one.push_back(1.0);
        y.push_back(exponential ? std::log(v) + 0.5 * std::log(r->t)
                                : std::log(v));
    }
    if (t1.size() < 8)
        throw std::runtime_error("rate fit: too few positive samples");
    auto ls = solve_lsq({t1, one}, y);
    FitReport rep;
    rep.model = exponential ? "exponential_rate" : "algebraic_rate";
    rep.coefficients[exponential ? "omega" : "p"] = ls.coef(0);
    rep.coefficients["intercept"] = ls.coef(1);
    rep.stderrs[exponential ? "omega" : "p"] = ls.stderr_(0);
    rep.stderrs["intercept"] = ls.stderr_(1);
    rep.window = window;
    rep.n_points = static_cast<int>(t1.size());
    rep.residual_rms = ls.residual_rms;
    rep.measured = ls.coef(0);
    rep.target = target;
    rep.tolerance = tolerance;
    rep.has_target = true;
    rep.pass = std::abs(rep.measured - target) <= tolerance;
    rep.note = note;
    return rep;
}

}  // namespace

FitReport fit_algebraic_rate(const DiagnosticsSeries& series, FitField field,
                             FitWindow window, double target,
                             double tolerance) {
    return rate_fit(series, field, window, target, tolerance, false);
}

FitReport fit_exponential_rate(const DiagnosticsSeries& series, FitField field,
                               FitWindow window, double target,
                               double tolerance) {
    return rate_fit(series, field, window, target, tolerance, true);
}

FitReport lower_bound_probe(const DiagnosticsSeries& series, FitWindow window,
                            double c_star) {
    const double sharp = -(c_star * c_star - 4.0) / 4.0;
    FitReport rep =
        rate_fit(series, FitField::E_front, window, sharp, 0.15, true);
    rep.model = "lower_bound_probe";
    // one-sided: decay must not be faster than the sharp rate
    rep.pass = rep.measured >= sharp - 0.15;
    return rep;
}

FitReport fit_phantom_slope(const DiagnosticsSeries& series, FitWindow window,
                            double target, double tolerance) {
    auto recs = window_records(series, window);
    std::vector<double> t1, lnt, one, y;
    for (auto* r : recs) {
        if (!r->has_D_hat) continue;
        t1.push_back(r->t);
        lnt.push_back(std::log(r->t));
        one.push_back(1.0);
        y.push_back(r->D_hat);
    }
    if (t1.size() < 8)
        throw std::runtime_error("fit_phantom_slope: too few samples");
    auto ls = solve_lsq({t1, lnt, one}, y);
    FitReport rep;
    rep.model = "phantom_slope";
    rep.coefficients["slope_t"] = ls.coef(0);
    rep.coefficients["slope_lnt"] = ls.coef(1);
    rep.coefficients["intercept"] = ls.coef(2);
    rep.stderrs["slope_t"] = ls.stderr_(0);
    rep.window = window;
    rep.n_points = static_cast<int>(t1.size());
    rep.residual_rms = ls.residual_rms;
    rep.measured = ls.coef(0);
    rep.target = target;
    rep.tolerance = tolerance;
    rep.has_target = true;
    rep.pass = std::abs(rep.measured - target) <= tolerance;
    return rep;
}

}  // namespace rdfront
