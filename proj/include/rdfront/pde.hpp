#pragma once

#include <string>
#include <vector>

#include "rdfront/nonlinearity.hpp"
#include "rdfront/simd_kernels.hpp"
#include "rdfront/wave.hpp"

namespace rdfront {

enum class IcKind { step, wave_profile, custom_table };
IcKind ic_kind_from_string(const std::string& s);

struct GridConfig {
    double dx = 0.05;
    double dt = 0.025;
    double left_pad = 80.0;
    double right_pad_min = 120.0;
};

// Moving-window state of u_t = u_xx + f(u).
struct SimState {
    double t = 0.0;
    double dx = 0.05;
    double offset = 0.0;  // x of the leftmost cell
    std::vector<double> u;
    double left_pad = 80.0, right_pad = 120.0;
    long step_count = 0;

    double x_of(std::size_t i) const { return offset + dx * double(i); }
    double x_right() const { return offset + dx * double(u.size() - 1); }
};

// Strang-split integrator: half-step reaction (classical 4-stage explicit),
// full trapezoidal implicit diffusion (tridiagonal solve, Dirichlet u=1
// left / u=0 right), half-step reaction. The spatial operator is a
// 4th-order compact stencil, so both sides of the solve stay tridiagonal.
// Rough initial data get a short backward-Euler startup (first 2 steps as
// 4 half-steps) to suppress trapezoidal ringing.
class Pde {
public:
    Pde(const Nonlinearity& f, const WaveProfile* wp, GridConfig gc,
        const KernelSet* kernels);

    SimState init(IcKind kind, const std::string& table_path = "") const;
    void step(SimState& s);

    // Recenters the window on sigma when the front drifts by more than 10%
    // of either pad; integer-cell translation, right pad grows with sqrt(t).
    void shift_window(SimState& s, double sigma) const;

    double right_pad_needed(double t) const;
    // Cheap front-cell estimate (index of the u=1/2 crossing).
    long front_cell(const SimState& s) const;

    const GridConfig& grid() const { return gc_; }
    const Nonlinearity& nonlinearity() const { return f_; }

private:
    void reaction_half(SimState& s);
    void diffusion(SimState& s, bool backward_euler_half_pair);

    Nonlinearity f_;
    const WaveProfile* wp_;
    GridConfig gc_;
    const KernelSet* ks_;
    HrForm hr_;
    bool rough_ic_ = false;  // set by init(step/custom); enables startup
    mutable std::vector<double> rhs_, scratch_;
};

// Integrates to t_final, invoking a callback at each sample time.
// Sample times are geometric t_k = t0 * ratio^k merged with extra_samples,
// always including 0 and t_final. Deterministic for a fixed configuration.
std::vector<double> make_sample_times(double t0, double ratio, double t_final,
                                      const std::vector<double>& extra);

}  // namespace rdfront
