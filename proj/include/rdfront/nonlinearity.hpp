#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rdfront {

enum class Family {
    hadeler_rothe,
    generalized_hr,
    fkpp,
    custom_eta_derived,
    tabulated
};

std::string family_name(Family f);

// Scalar function bundle with derivatives (A of the generalized family,
// or an eta profile for the eta-derived family). d2/d3 may be absent;
// consumers fall back to finite differences.
struct FuncBundle {
    std::function<double(double)> value;
    std::function<double(double)> d1;
    std::function<double(double)> d2;
    std::function<double(double)> d3;
};

// A reaction nonlinearity on [0,1]: f(0)=f(1)=0, f>0 inside, f'(0)=1 after
// normalization. Immutable after construction; shareable across threads.
struct Nonlinearity {
    Family family = Family::fkpp;
    double n = 2.0;       // Hadeler-Rothe exponent (>= 2, possibly non-integer)
    double chi = 0.0;     // Hadeler-Rothe strength (>= 0)
    double scale = 1.0;   // normalization divisor r: f = f_raw / r
    double fprime0 = 1.0; // f'(0)
    double fprime1 = -1.0;// f'(1)

    std::function<double(double)> f, fp, fpp;

    // generalized-HR hypothesis metadata (Lemma-style case (iii) inputs)
    bool has_aux = false;
    bool aux_convex = false;     // A'' >= 0 on the sample grid
    bool aux_d3_nonneg = false;  // A''' >= 0 on the sample grid
    std::string table_path;     // tabulated family provenance

    double operator()(double u) const { return f(u); }
};

// Shared sample grid for invariant checks: Chebyshev-distributed points on
// [1e-6, 1-1e-6], clustering resolution near the endpoints.
const std::vector<double>& nonlinearity_sample_grid();

// f(u) = (u - u^n)(1 + chi*n*u^(n-1)); n >= 2, chi >= 0.
Nonlinearity make_hadeler_rothe(double n, double chi);

// Classical Fisher-KPP f(u) = u(1-u); alias of HR(n=2, chi=0).
Nonlinearity make_fkpp();

// f(u) = (u - A(u))(1 + chi*A'(u)) with A(0)=A'(0)=0, A(1)=1.
Nonlinearity make_generalized_hr(const FuncBundle& A, double chi);

// f(u) = eta(u) * (c - eta'(u)); rejects if eta' >= c anywhere sampled.
Nonlinearity make_from_eta(const FuncBundle& eta, double c);

// Monotone-cubic interpolation of a (u, f) table; CSV columns u,f with
// strictly increasing u covering [0,1]. Derivatives from interpolant tables;
// f'(1) (and f'(0)) by one-sided quartic extrapolation. C2 regularity of
// tabulated data is only checked heuristically (bounded second differences).
Nonlinearity make_tabulated(const std::string& csv_path);

// Rescale so that f'(0) = 1; records the divisor r (speeds map back as
// c_raw = sqrt(r) * c_norm). Rejects r <= 0.
Nonlinearity normalize(const Nonlinearity& raw);

// Pointwise checks of the construction invariants; throws on violation.
void validate(const Nonlinearity& nl);

// Fast-path descriptor for vectorized reaction kernels.
struct HrForm {
    bool valid = false;
    int n_int = 0;
    double chi = 0.0;
};
HrForm hr_form(const Nonlinearity& nl);

}  // namespace rdfront
