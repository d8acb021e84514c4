#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "rdfront/simd_kernels.hpp"

using namespace rdfront;

namespace {

// Deterministic fill (tests must not depend on ambient randomness).
std::vector<double> test_vector(std::size_t n, double lo, double hi) {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

bool close(const std::vector<double>& a, const std::vector<double>& b,
           double tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > tol * (1.0 + std::abs(a[i]))) return false;
    return true;
}

}  // namespace

TEST_CASE("active SIMD variant matches the scalar reference") {
    const KernelSet& simd = select_kernels("auto");
    const KernelSet& ref = select_kernels("scalar");
    INFO("active variant: ", kernel_variant_name(simd.variant));

    for (std::size_t n : {std::size_t(1), std::size_t(5), std::size_t(64),
                          std::size_t(1001)}) {
        for (int npow : {2, 3, 4}) {
            auto u0 = test_vector(n, 0.0, 1.0);
            auto ua = u0, ub = u0;
            simd.reaction_rk4(ua.data(), n, 0.0125, npow, 2.5);
            ref.reaction_rk4(ub.data(), n, 0.0125, npow, 2.5);
            CHECK(close(ua, ub, 1e-14));
        }
        auto u = test_vector(n, -1.0, 2.0);
        std::vector<double> ra(n), rb(n);
        simd.tridiag_matvec(u.data(), n, -4.9, 10.8, 1.0, 0.0, ra.data());
        ref.tridiag_matvec(u.data(), n, -4.9, 10.8, 1.0, 0.0, rb.data());
        CHECK(close(ra, rb, 1e-14));

        double mna, mxa, mnb, mxb;
        simd.minmax(u.data(), n, &mna, &mxa);
        ref.minmax(u.data(), n, &mnb, &mxb);
        CHECK(mna == mnb);
        CHECK(mxa == mxb);

        if (n >= 16) {
            std::vector<double> da(n), db(n);
            simd.diff4(u.data(), n, 0.05, da.data());
            ref.diff4(u.data(), n, 0.05, db.data());
            CHECK(close(da, db, 1e-12));
        }
    }
}

TEST_CASE("reaction kernel integrates the logistic accurately") {
    // du/dt = u(1-u) has a closed form; 4-stage error ~ h^5 per step.
    const KernelSet& ks = select_kernels("auto");
    std::vector<double> u{0.2};
    const double h = 0.0125;
    for (int k = 0; k < 800; ++k) ks.reaction_rk4(u.data(), 1, h, 2, 0.0);
    const double t = 800 * h;
    const double exact = 0.2 * std::exp(t) / (1.0 + 0.2 * (std::exp(t) - 1.0));
    CHECK(std::abs(u[0] - exact) < 1e-10);

    // equilibria preserved exactly
    std::vector<double> fix{0.0, 1.0};
    ks.reaction_rk4(fix.data(), 2, h, 2, 3.0);
    CHECK(fix[0] == 0.0);
    CHECK(fix[1] == 1.0);
}

TEST_CASE("diff4 is 4th order on smooth data") {
    const KernelSet& ks = select_kernels("scalar");
    auto run = [&](double dx) {
        const std::size_t n = static_cast<std::size_t>(4.0 / dx) + 1;
        std::vector<double> u(n), du(n);
        for (std::size_t i = 0; i < n; ++i) u[i] = std::sin(1.7 * i * dx);
        ks.diff4(u.data(), n, dx, du.data());
        double worst = 0;
        for (std::size_t i = 0; i < n; ++i)
            worst = std::max(worst,
                             std::abs(du[i] - 1.7 * std::cos(1.7 * i * dx)));
        return worst;
    };
    const double e1 = run(0.02), e2 = run(0.01);
    CHECK(e1 / e2 > 12.0);  // ~16x for 4th order
}

TEST_CASE("thomas solves the CN system against direct multiplication") {
    const std::size_t n = 257;
    const double ao = 1.0 / 12.0 - 5.0, ad = 10.0 / 12.0 + 10.0;
    auto x = test_vector(n, -1.0, 1.0);
    std::vector<double> b(n);
    const KernelSet& ks = select_kernels("scalar");
    ks.tridiag_matvec(x.data(), n, ao, ad, 0.0, 0.0, b.data());
    std::vector<double> scratch(n);
    thomas_const(ao, ad, b.data(), scratch.data(), n);
    CHECK(close(b, x, 1e-12));
}
