#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "rdfront/nonlinearity.hpp"

namespace rdfront {

enum class Regime { pulled, pushmi_pullyu, pushed, ambiguous };
std::string regime_name(Regime r);

struct LambdaRoots {
    double lambda0;  // largest root of c*l = l^2 + f'(0)
    double lambda1;  // nonnegative root of -c*l = l^2 + f'(1)
};
// Requires c >= 2 and fprime1 < 0; throws domain_error otherwise.
LambdaRoots lambda_roots(double c, double fprime1);

struct WaveGridSpec {
    std::size_t n = 4097;    // Chebyshev-distributed nodes
    double u_min = 1e-7;     // grid covers [u_min, 1-u_min]
    double ode_rtol = 1e-12;
    double eps1 = 1e-8;      // integration starts at u = 1 - eps1
    double eps0 = 1e-10;     // admissibility u-floor
    double tail_u_min = 1e-100;  // deep log-space tail extent (pulled)
};

// Minimal-speed traveling wave, hence the phase-plane profile function
// eta(u) = -U_*' o U_*^{-1}, with derivatives, Q, R and the profile U_*.
struct WaveProfile {
    double c_star = 2.0;
    double lambda0 = 1.0, lambda1 = 1.0;
    Regime regime = Regime::ambiguous;
    WaveGridSpec grid_spec;

    // Main tables on the Chebyshev u-grid (ascending u).
    std::vector<double> u, eta, eta_p, eta_pp, Q, R, x;

    // Deep small-u tail, log-spaced (ascending u), continuing the trajectory.
    std::vector<double> tail_u, tail_eta, tail_eta_p, tail_Q, tail_x;

    // Endpoint values: extrapolated at u->0+, table-edge at u->1-.
    double eta_p0 = 0, Q0 = 0, eta_p1 = 0, Q1 = 0;

    // Classification diagnostics: g(u) = (eta/u - 1) ln(1/u) samples and limit.
    std::array<double, 3> g_raw{0, 0, 0};
    double g_extrap = 0;

    double eta_at(double uu) const;
    double eta_p_at(double uu) const;
    double x_of_u(double uu) const;   // U_*^{-1}, with x(1/2) = 0
    double ustar_at(double xx) const;

    // Rebuilds the interpolation views from the public tables (used after
    // construction and after loading a cached profile).
    void rebuild_views();

private:
    friend WaveProfile compute_eta(const Nonlinearity&, double,
                                   const WaveGridSpec&);
    friend void compute_profile(WaveProfile&);
    // Tail interpolation in s = ln u of g = eta/u (Hermite, dg/ds stored).
    std::vector<double> tail_s_, tail_g_, tail_gp_;
    // Combined (x ascending, u) view over tails + grid for ustar_at.
    std::vector<double> xr_, ur_;
};

struct SpeedResult {
    double c_star;
    Regime regime_hint;      // pushed iff c_star > 2 + tol; else ambiguous here
    int bisections = 0;
};

// Shooting admissibility: at speed c, integrate eta' = c - f/eta down from
// u = 1-eps1 with the series seed eta ~ lambda1(c)(1-u); admissible iff eta
// stays positive down to the u-floor. Returns the dip location if not.
struct Admissibility {
    bool admissible;
    double u_dip;  // meaningful when !admissible
};
Admissibility speed_admissible(const Nonlinearity& f, double c,
                               const WaveGridSpec& gs = {});

// c=2 is tested exactly first; otherwise bisection on (2, c_hi] with c_hi
// doubling until admissible (structural failure past c_hi = 100), then a
// matched two-sided refinement (mismatch at u = 1/2) to machine precision.
SpeedResult minimal_speed(const Nonlinearity& f, double tol = 1e-8,
                          const WaveGridSpec& gs = {});

// Dense eta/eta'/eta''/Q/R tables at the minimal speed, plus the deep tail.
WaveProfile compute_eta(const Nonlinearity& f, double c_star,
                        const WaveGridSpec& gs = {});

// Fills the x(u) table (quadrature of dx/du = -1/eta anchored at x(1/2)=0).
// compute_eta already performs this; exposed for re-anchoring custom grids.
void compute_profile(WaveProfile& wp);

// Sets wp.regime. Pushed iff c_star > 2 + tol; at c_star = 2 the tail
// signature g(u) extrapolated over u in {1e-4,1e-5,1e-6} decides:
// pulled if g -> -1, pushmi-pullyu if g -> 0; band [-0.6,-0.4] is ambiguous.
Regime classify_regime(WaveProfile& wp, double tol = 1e-6);

struct StructureReport {
    double max_eta_pp = 0;   // over interior grid
    double max_Q = 0;
    double r0 = 0;           // min R on [delta0, 1-delta1]
    double r1 = 0;           // min R on [1-delta1, 1] minus 1
    double delta0 = 0.01, delta1 = 0.01;
    bool pulled_checked = false;
    double pulled_C_fit = 0;      // fitted C in R >= 2/ln^2 u - C lnln/ln^3
    double pulled_margin_min = 0; // min of R - 2/ln^2 u + C_fit lnln/ln^3, u <= delta0
};
StructureReport check_structure(const WaveProfile& wp, double delta0 = 0.01,
                                double delta1 = 0.01);

struct HypothesisReport {
    bool case_i = false;    // f'' <= 0 on (0,1)
    bool case_ii = false;   // f'' >= 0 then <= 0 with one sign change
    double case_ii_u0 = 0;
    bool case_iii = false;  // generalized-HR with chi >= 1, A'' >= 0, A''' >= 0
    bool any_case = false;
    double max_eta_pp = 0, max_Q = 0;  // measured, to confront the conclusion
};
HypothesisReport check_general_eta_hypotheses(const Nonlinearity& f,
                                              const WaveProfile& wp);

}  // namespace rdfront
