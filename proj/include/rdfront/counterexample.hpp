#pragma once

#include <cstddef>

#include "rdfront/interp.hpp"
#include "rdfront/nonlinearity.hpp"
#include "rdfront/wave.hpp"

namespace rdfront {

// Engineered nonlinearity whose Q exceeds 1: flatten the FKPP profile
// function with a concave cap psi, add a localized bump phi on the plateau,
// and read the nonlinearity back off f = eta (2 - eta').
struct CounterexampleSpec {
    WaveProfile eta_fkpp;  // minimal-speed profile of u(1-u)
    double M = 0;          // sup eta_fkpp
    double u1 = 0, u2 = 0, u3 = 0, u4 = 0;

    // psi: identity below M/3, quintic connector on [M/3, psi_end],
    // constant 4M/9 at and beyond psi_end (<= 2M/3).
    Quintic psi_q;
    double psi_end = 0;

    // phi = (u-u2)^3 (u3-u)^3 * a ((s + s0)^2 + mu), s = u - mid.
    double phi_a = 0, phi_s0 = 0, phi_mu = 0;
    double phi_mid = 0;      // phi at the midpoint
    double phi_d1_mid = 0;   // phi' there (constructed = 1)
    double phi_d2_mid = 0;   // phi'' there (constructed > 0)
    double sup_abs_phi_p = 0;

    double mid = 0;          // (u2+u3)/2
    double margin_mid = 0;         // Q(mid) - 1 from the analytic tables
    double margin_paper_form = 0;  // phi(mid) * phi''(mid)

    Nonlinearity f_new;      // custom_eta_derived, normalized

    double psi(double x) const;
    double psi_d(double x, int order) const;  // order in {1,2,3}
    double phi(double u) const;
    double phi_d(double u, int order) const;
    double eta_new(double u) const;
    double eta_new_d(double u, int order) const;
    double q_new(double u) const;  // Q of eta_new via the identities
};

// grid_n: working grid for the construction checks (>= 4096).
CounterexampleSpec build_counterexample(std::size_t grid_n = 4096);

struct CounterexampleReport {
    bool endpoints_ok = false;       // f(0) = f(1) = 0
    bool positive_interior = false;  // f > 0 on the sample grid
    double fprime0 = 0;              // should be 1
    bool second_diff_bounded = false;  // C2 heuristic at the gluing points
    double max_second_diff = 0;
    double max_eta_p = 0;            // must stay < 2 so f > 0
    double max_Q = 0;
    double max_Q_arg = 0;
    bool maximizer_inside = false;   // argmax in (u2, u3)
    double margin_mid = 0;
    double margin_paper_form = 0;
    bool eta_pp_positive_somewhere = false;  // inside (u2,u3)
    bool supports_disjoint = false;
    double f_matches_fkpp_outside = 0;  // sup |f - u(1-u)| outside (u1,u4)
    // closure: feed f_new through minimal_speed + compute_eta
    double closure_c_star = 0;
    double closure_eta_err = 0;  // sup |eta_shot - eta_new|
    double closure_Q0 = 0, closure_Q1 = 0;
    bool pass = false;
};

CounterexampleReport verify_counterexample(const CounterexampleSpec& spec);

}  // namespace rdfront
