#pragma once

#include <vector>

#include "rdfront/pde.hpp"
#include "rdfront/wave.hpp"

namespace rdfront {

struct DiagnosticsConfig {
    double lambda_front = 20.0;  // front-restricted norm cut x >= -Lambda
    double envelope_c = 8.0;     // Gaussian-width constant in cases (i)-(ii)
    double recon_left = 40.0;    // reconstruction subwindow [-left, right]
    double recon_right = 60.0;
};

struct DiagnosticsRecord {
    double t = 0;
    double sigma = 0;
    double E_inf = 0;
    double E_front = 0;
    double w_at_front = 0;
    double w_max = 0;
    double D_hat = 0;
    double envelope_ratio = 0;
    double recon_err = 0;
    double min_w = 0;
    double min_u = 0;
    double max_u = 0;
    // extra fields, not part of the series.csv schema
    double C_obs = 0;       // steepness bracketing shift
    double mono_defect = 0; // max increase of u in x
    double recon_sens = 0;  // spread across the xi-proxy endpoints
    double sup_s = 0;       // sup |s_direct| on the recon subwindow
    double sign_err = 0;    // violation of the s sign pattern
    bool has_front = false;
    bool has_D_hat = false;
};

using DiagnosticsSeries = std::vector<DiagnosticsRecord>;

// Sub-cell u=1/2 level-set location via monotone cubic interpolation
// through the four cells bracketing the crossing. Throws if u never
// crosses 1/2 inside the window.
double front_location(const SimState& s);

// w = -u_x - eta(u), u_x by 4th-order differences (one-sided at the ends).
std::vector<double> shape_defect(const SimState& s, const WaveProfile& wp);

struct ShapeError {
    double E_inf, E_front;
};
ShapeError shape_error(const SimState& s, const WaveProfile& wp, double sigma,
                       double lambda_front);

struct ReconResult {
    double recon_err;   // sup |s_direct - s_reconstructed| (midpoint proxy)
    double recon_sens;  // max spread when xi is either segment endpoint
    double sup_s;
    double sign_err;
};
ReconResult reconstruct_s(const SimState& s, const WaveProfile& wp,
                          double sigma, const std::vector<double>& w,
                          const DiagnosticsConfig& cfg);

// D_hat = -ln w(t, sigma); valid only when w at the front is positive.
double phantom_lag(double w_at_front);

// max over x >= 0 of w(t, x + sigma) / B(t, x) for the regime's envelope.
double envelope_ratio(const SimState& s, const std::vector<double>& w,
                      double sigma, double t, const WaveProfile& wp,
                      Regime regime, const DiagnosticsConfig& cfg);

// Full record at one sample time.
DiagnosticsRecord diagnose(const SimState& s, const WaveProfile& wp,
                           Regime regime, const DiagnosticsConfig& cfg);

}  // namespace rdfront
