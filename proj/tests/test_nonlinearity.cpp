#include <stdexcept>
#include <cmath>

#include "doctest.h"
#include "rdfront/nonlinearity.hpp"
#include "rdfront/csv.hpp"

using namespace rdfront;

TEST_CASE("hadeler-rothe basics") {
    // (n=2, chi=0) is the classical Fisher-KPP nonlinearity u(1-u)
    auto f = make_hadeler_rothe(2, 0);
    CHECK(f.f(0.3) == doctest::Approx(0.3 * 0.7).epsilon(1e-15));
    CHECK(f.fprime1 == doctest::Approx(-1.0));
    CHECK(f.f(0.0) == 0.0);
    CHECK(f.fp(0.0) == doctest::Approx(1.0));

    auto f31 = make_hadeler_rothe(2, 1);
    CHECK(f31.fprime1 == doctest::Approx(-3.0));  // -(n-1)(1+chi n)

    CHECK_THROWS_AS(make_hadeler_rothe(1.5, 0.0), std::domain_error);
    CHECK_THROWS_AS(make_hadeler_rothe(2.0, -0.1), std::domain_error);

    validate(f);
    validate(f31);
    validate(make_hadeler_rothe(3, 9));
    validate(make_hadeler_rothe(4, 0.25));
}

TEST_CASE("generalized HR reduces to HR for A=u^n") {
    for (double chi : {0.0, 1.0, 2.5}) {
        for (double n : {2.0, 3.0}) {
            FuncBundle A;
            A.value = [n](double u) { return std::pow(u, n); };
            A.d1 = [n](double u) { return n * std::pow(u, n - 1); };
            A.d2 = [n](double u) { return n * (n - 1) * std::pow(u, n - 2); };
            A.d3 = [n](double u) {
                return n * (n - 1) * (n - 2) * std::pow(u, std::max(n - 3, 0.0));
            };
            auto g = make_generalized_hr(A, chi);
            auto h = make_hadeler_rothe(n, chi);
            for (double u = 0.0; u <= 1.0; u += 0.0625)
                CHECK(g.f(u) == doctest::Approx(h.f(u)).epsilon(1e-12));
            CHECK(g.fprime1 == doctest::Approx(h.fprime1).epsilon(1e-12));
        }
    }
}

TEST_CASE("generalized HR direct value and hypothesis flags") {
    // A(u)=u^3, chi=1, u=1/2 -> f = (1/2 - 1/8)(1 + 3/4) = 21/32
    FuncBundle A;
    A.value = [](double u) { return u * u * u; };
    A.d1 = [](double u) { return 3 * u * u; };
    A.d2 = [](double u) { return 6 * u; };
    A.d3 = [](double) { return 6.0; };
    auto g = make_generalized_hr(A, 1.0);
    CHECK(g.f(0.5) == doctest::Approx(21.0 / 32.0).epsilon(1e-14));

    // A(u)=u^2, chi=2 -> A'' >= 0, A''' >= 0 both hold
    FuncBundle A2;
    A2.value = [](double u) { return u * u; };
    A2.d1 = [](double u) { return 2 * u; };
    A2.d2 = [](double) { return 2.0; };
    A2.d3 = [](double) { return 0.0; };
    auto g2 = make_generalized_hr(A2, 2.0);
    CHECK(g2.aux_convex);
    CHECK(g2.aux_d3_nonneg);

    // endpoint violation rejected
    FuncBundle bad = A2;
    bad.value = [](double u) { return 0.9 * u * u; };
    CHECK_THROWS_AS(make_generalized_hr(bad, 1.0), std::domain_error);
}

TEST_CASE("normalize") {
    // f_raw = 4u(1-u): r = 4, c_raw = 2 c_norm
    Nonlinearity raw = make_fkpp();
    auto f0 = raw.f, fp0 = raw.fp, fpp0 = raw.fpp;
    raw.f = [f0](double u) { return 4.0 * f0(u); };
    raw.fp = [fp0](double u) { return 4.0 * fp0(u); };
    raw.fpp = [fpp0](double u) { return 4.0 * fpp0(u); };
    raw.fprime0 = 4.0;
    raw.fprime1 = -4.0;
    auto nl = normalize(raw);
    CHECK(nl.scale == doctest::Approx(4.0));
    CHECK(nl.f(0.5) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(nl.fprime1 == doctest::Approx(-1.0));

    // already normalized: identity with r = 1
    auto id = normalize(make_fkpp());
    CHECK(id.scale == doctest::Approx(1.0));

    // f_raw = 2(u-u^2)(1+2u): r = 2 (differentiated at 0 symbolically)
    Nonlinearity raw2 = make_hadeler_rothe(2, 1);
    auto g0 = raw2.f, gp0 = raw2.fp, gpp0 = raw2.fpp;
    raw2.f = [g0](double u) { return 2.0 * g0(u); };
    raw2.fp = [gp0](double u) { return 2.0 * gp0(u); };
    raw2.fpp = [gpp0](double u) { return 2.0 * gpp0(u); };
    raw2.fprime0 = 2.0;
    raw2.fprime1 *= 2.0;
    auto nl2 = normalize(raw2);
    CHECK(nl2.scale == doctest::Approx(2.0));
    auto hr21 = make_hadeler_rothe(2, 1);
    for (double u = 0.1; u < 1.0; u += 0.2)
        CHECK(nl2.f(u) == doctest::Approx(hr21.f(u)).epsilon(1e-14));

    Nonlinearity deg = make_fkpp();
    deg.fprime0 = 0.0;
    CHECK_THROWS_AS(normalize(deg), std::domain_error);
}

TEST_CASE("make_from_eta recovers HR families") {
    // eta = u - u^2 with c = 2 gives (u-u^2)(1+2u): HR n=2, chi=1
    FuncBundle eta;
    eta.value = [](double u) { return u - u * u; };
    eta.d1 = [](double u) { return 1 - 2 * u; };
    eta.d2 = [](double) { return -2.0; };
    eta.d3 = [](double) { return 0.0; };
    auto f = make_from_eta(eta, 2.0);
    auto hr = make_hadeler_rothe(2, 1);
    for (double u = 0.05; u < 1.0; u += 0.05)
        CHECK(f.f(u) == doctest::Approx(hr.f(u)).epsilon(1e-13));

    // eta = sqrt(chi)(u-u^n), c = sqrt(chi)+1/sqrt(chi) recovers HR(n,chi)
    for (double chi : {1.0, 2.0, 4.0}) {
        for (double n : {2.0, 3.0}) {
            const double s = std::sqrt(chi);
            FuncBundle e;
            e.value = [s, n](double u) { return s * (u - std::pow(u, n)); };
            e.d1 = [s, n](double u) { return s * (1 - n * std::pow(u, n - 1)); };
            e.d2 = [s, n](double u) {
                return -s * n * (n - 1) * std::pow(u, n - 2);
            };
            e.d3 = [s, n](double u) {
                return -s * n * (n - 1) * (n - 2) * std::pow(u, std::max(n - 3, 0.0));
            };
            auto ff = make_from_eta(e, s + 1.0 / s);
            auto hh = make_hadeler_rothe(n, chi);
            double worst = 0;
            for (double u = 1e-6; u < 1.0 - 1e-6; u += 0.01)
                worst = std::max(worst, std::abs(ff.f(u) - hh.f(u)));
            CHECK(worst <= 1e-12);
        }
    }

    // eta'(0) = c -> f'(0) = 0, rejected after normalize
    FuncBundle e0;
    e0.value = [](double u) { return 2.0 * (u - u * u); };
    e0.d1 = [](double u) { return 2.0 * (1 - 2 * u); };
    e0.d2 = [](double) { return -4.0; };
    auto fdeg = make_from_eta(e0, 2.0);
    CHECK(fdeg.fprime0 == doctest::Approx(0.0));
    CHECK_THROWS_AS(normalize(fdeg), std::domain_error);

    // eta' >= c somewhere -> rejected with location
    FuncBundle ebad;
    ebad.value = [](double u) { return 3.0 * (u - u * u); };
    ebad.d1 = [](double u) { return 3.0 * (1 - 2 * u); };
    ebad.d2 = [](double) { return -6.0; };
    CHECK_THROWS_AS(make_from_eta(ebad, 2.0), std::domain_error);
}

TEST_CASE("derivative consistency against centered differences") {
    const double h = 1e-5;
    for (auto nl : {make_hadeler_rothe(2, 4), make_hadeler_rothe(3, 1),
                    make_hadeler_rothe(4, 0.5)}) {
        const auto& grid = nonlinearity_sample_grid();
        for (std::size_t i = 0; i < grid.size(); i += 97) {
            const double u = grid[i];
            if (u - h < 0 || u + h > 1) continue;
            const double fd = (nl.f(u + h) - nl.f(u - h)) / (2 * h);
            CHECK(std::abs(nl.fp(u) - fd) <= 1e-7 * (1.0 + std::abs(nl.fp(u))));
        }
    }
}

TEST_CASE("hr_form fast-path detection") {
    CHECK(hr_form(make_hadeler_rothe(2, 4)).valid);
    CHECK(hr_form(make_hadeler_rothe(3, 1)).n_int == 3);
    CHECK_FALSE(hr_form(make_hadeler_rothe(2.5, 1)).valid);
}

TEST_CASE("tabulated family round-trips an HR sample table") {
    // write a (u, f) table for HR(2,1) and rebuild the nonlinearity from it
    auto hr = make_hadeler_rothe(2, 1);
    CsvTable t;
    t.header = {"u", "f"};
    t.columns.assign(2, {});
    const int m = 2001;
    for (int i = 0; i <= m; ++i) {
        const double u = double(i) / m;
        t.columns[0].push_back(u);
        t.columns[1].push_back(hr.f(u));
    }
    const std::string path = "tab_test.csv";
    write_csv(path, t);
    auto nl = make_tabulated(path);
    CHECK(nl.family == Family::tabulated);
    for (double u = 0.05; u < 1.0; u += 0.05)
        CHECK(nl.f(u) == doctest::Approx(hr.f(u)).epsilon(1e-8));
    // one-sided quartic extrapolation of the endpoint derivatives
    CHECK(std::abs(nl.fprime0 - 1.0) <= 1e-6);
    CHECK(std::abs(nl.fprime1 - hr.fprime1) <= 1e-5);
    auto norm = normalize(nl);
    CHECK(std::abs(norm.fprime0 - 1.0) <= 1e-12);

    // strictly increasing u required
    t.columns[0][5] = t.columns[0][6];
    write_csv(path, t);
    CHECK_THROWS_AS(make_tabulated(path), std::domain_error);
}
