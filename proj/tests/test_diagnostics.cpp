#include <cmath>
#include <map>
#include <stdexcept>

#include "doctest.h"
#include "rdfront/diagnostics.hpp"
#include "rdfront/nonlinearity.hpp"
#include "rdfront/pde.hpp"

using namespace rdfront;

namespace {

const WaveProfile& profile(double n, double chi) {
    static std::map<std::pair<double, double>, WaveProfile> cache;
    auto key = std::make_pair(n, chi);
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto f = make_hadeler_rothe(n, chi);
        auto sp = minimal_speed(f, 1e-8);
        WaveProfile wp = compute_eta(f, sp.c_star);
        classify_regime(wp);
        it = cache.emplace(key, std::move(wp)).first;
    }
    return it->second;
}

SimState sampled_wave(const WaveProfile& wp, double shift, double dx,
                      double lp = 40.0, double rp = 40.0) {
    SimState s;
    s.dx = dx;
    s.offset = -lp + shift;
    s.left_pad = lp;
    s.right_pad = rp;
    const std::size_t n =
        static_cast<std::size_t>(std::llround((lp + rp) / dx)) + 1;
    s.u.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        s.u[i] = wp.ustar_at(s.x_of(i) - shift);
    return s;
}

}  // namespace

TEST_CASE("front location on an exactly shifted profile") {
    const auto& wp = profile(2, 1);
    SimState s = sampled_wave(wp, 7.3, 0.01);
    CHECK(std::abs(front_location(s) - 7.3) <= 1e-6);

    SimState s2 = sampled_wave(wp, -3.77, 0.05);
    CHECK(std::abs(front_location(s2) + 3.77) <= 1e-5);

    // no crossing -> error
    SimState flat = s;
    std::fill(flat.u.begin(), flat.u.end(), 0.0);
    CHECK_THROWS(front_location(flat));
}

TEST_CASE("shape defect vanishes on the wave and flags flat states") {
    const auto& wp = profile(2, 1);
    SimState s = sampled_wave(wp, 0.0, 0.02);
    auto w = shape_defect(s, wp);
    double worst = 0;
    for (std::size_t i = 2; i + 2 < w.size(); ++i)
        worst = std::max(worst, std::abs(w[i]));
    CHECK(worst <= 1e-6);

    SimState flat = s;
    std::fill(flat.u.begin(), flat.u.end(), 0.3);
    auto wf = shape_defect(flat, wp);
    CHECK(wf[wf.size() / 2] ==
          doctest::Approx(-wp.eta_at(0.3)).epsilon(1e-10));
    CHECK(wf[wf.size() / 2] < 0.0);
}

TEST_CASE("shape error alignment exactness") {
    const auto& wp = profile(2, 1);
    for (double a : {-2.0, 0.0, 5.5}) {
        SimState s = sampled_wave(wp, a, 0.02);
        const double sigma = front_location(s);
        auto e = shape_error(s, wp, sigma, 20.0);
        CHECK(e.E_inf <= 1e-6);
        CHECK(e.E_front <= e.E_inf + 1e-15);
    }
}

TEST_CASE("reconstruction is exact on the wave itself") {
    const auto& wp = profile(2, 1);
    SimState s = sampled_wave(wp, 0.0, 0.02, 45.0, 65.0);
    auto w = shape_defect(s, wp);
    DiagnosticsConfig cfg;
    auto r = reconstruct_s(s, wp, front_location(s), w, cfg);
    CHECK(r.sup_s <= 1e-6);
    CHECK(r.recon_err <= 1e-5);
}

TEST_CASE("phantom lag is the logarithm") {
    CHECK(phantom_lag(1.0 / 100.0) == doctest::Approx(std::log(100.0)));
    CHECK_THROWS_AS(phantom_lag(0.0), std::domain_error);
}

TEST_CASE("envelope ratio is zero for w == 0") {
    const auto& wp = profile(2, 1);
    SimState s = sampled_wave(wp, 0.0, 0.05);
    std::vector<double> w(s.u.size(), 0.0);
    DiagnosticsConfig cfg;
    CHECK(envelope_ratio(s, w, 0.0, 10.0, wp, Regime::pushmi_pullyu, cfg) ==
          0.0);
}

TEST_CASE("pushed envelope value at the front") {
    // B(t,0) = t^{-1/2} exp(-0.5625 t) for chi=4 (c_* = 2.5)
    const auto& wp = profile(2, 4);
    SimState s = sampled_wave(wp, 0.0, 0.05);
    std::vector<double> w(s.u.size(), 0.0);
    // put a unit spike at the front cell to read off 1/B(t,0)
    const std::size_t i0 =
        static_cast<std::size_t>(std::llround((0.0 - s.offset) / s.dx));
    const double t = 10.0;
    w[i0] = 1.0;
    DiagnosticsConfig cfg;
    const double ratio = envelope_ratio(s, w, 0.0, t, wp, Regime::pushed, cfg);
    const double B0 = std::exp(-0.5625 * t) / std::sqrt(t);
    CHECK(ratio == doctest::Approx(1.0 / B0).epsilon(1e-6));
}

TEST_CASE("steepness bracket is tiny for the exact wave") {
    const auto& wp = profile(2, 1);
    SimState s = sampled_wave(wp, 4.0, 0.02);
    DiagnosticsConfig cfg;
    auto rec = diagnose(s, wp, Regime::pushmi_pullyu, cfg);
    CHECK(rec.C_obs <= 0.01);
    CHECK(rec.mono_defect <= 0.0 + 1e-12);
    CHECK(rec.E_inf <= 1e-6);
}
