#pragma once

#include <map>
#include <string>
#include <vector>

#include "rdfront/diagnostics.hpp"

namespace rdfront {

enum class FitField { E_front, E_inf, w_at_front, D_hat };
FitField fit_field_from_string(const std::string& s);
std::string fit_field_name(FitField f);

struct FitWindow {
    double t_min = 0, t_max = 0;
};

struct FitReport {
    std::string model;
    std::map<std::string, double> coefficients;
    std::map<std::string, double> stderrs;
    FitWindow window;
    int n_points = 0;
    double residual_rms = 0;
    double measured = 0;  // headline coefficient
    double target = 0;
    double tolerance = 0;
    bool has_target = false;
    bool pass = false;
    std::string note;
};

// sigma(t) - c_star*t regressed on {ln t, 1, 1/sqrt(t)}; the 1/sqrt(t)
// nuisance term absorbs the slowly-decaying front correction and is
// reported but never judged. c_star is never co-fitted.
FitReport fit_front_delay(const DiagnosticsSeries& series, double c_star,
                          FitWindow window, double target, double tolerance);

// ln(field) on {ln t, 1}; slope p targets -1 for the algebraic rates.
FitReport fit_algebraic_rate(const DiagnosticsSeries& series, FitField field,
                             FitWindow window, double target,
                             double tolerance);

// ln(field) + (1/2) ln t on {t, 1}; slope omega targets -(c_*^2-4)/4.
FitReport fit_exponential_rate(const DiagnosticsSeries& series, FitField field,
                               FitWindow window, double target,
                               double tolerance);

// Sharpness probe: the fitted omega must not beat the theoretical rate,
// omega >= -(c_*^2-4)/4 - 0.15.
FitReport lower_bound_probe(const DiagnosticsSeries& series, FitWindow window,
                            double c_star);

// D_hat on {t, ln t, 1}; the t-slope estimates the phantom-lag rate
// (c_*^2-4)/4 in the pushed regime.
FitReport fit_phantom_slope(const DiagnosticsSeries& series, FitWindow window,
                            double target, double tolerance);

}  // namespace rdfront
