#include "rdfront/pde.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rdfront/csv.hpp"
#include "rdfront/interp.hpp"

namespace rdfront {

IcKind ic_kind_from_string(const std::string& s) {
    if (s == "step") return IcKind::step;
    if (s == "wave_profile") return IcKind::wave_profile;
    if (s == "custom_table") return IcKind::custom_table;
    throw std::domain_error("unknown ic.kind: " + s);
}

Pde::Pde(const Nonlinearity& f, const WaveProfile* wp, GridConfig gc,
         const KernelSet* kernels)
    : f_(f), wp_(wp), gc_(gc), ks_(kernels), hr_(hr_form(f)) {
    if (!(gc_.dx > 0.0 && gc_.dx <= 0.2))
        throw std::domain_error("pde: dx must lie in (0, 0.2]");
    if (!(gc_.dt > 0.0 && gc_.dt <= gc_.dx))
        throw std::domain_error("pde: requires dt <= dx");
    if (!(gc_.left_pad > 0.0 && gc_.right_pad_min > 0.0))
        throw std::domain_error("pde: pads must be positive");
}

double Pde::right_pad_needed(double t) const {
    return std::max(gc_.right_pad_min, 12.0 * std::sqrt(std::max(t, 0.0)) + 50.0);
}

SimState Pde::init(IcKind kind, const std::string& table_path) const {
    SimState s;
    s.dx = gc_.dx;
    s.left_pad = gc_.left_pad;
    s.right_pad = right_pad_needed(0.0);
    s.offset = -gc_.left_pad;
    const std::size_t n =
        static_cast<std::size_t>(std::llround((s.left_pad + s.right_pad) / s.dx)) + 1;
    s.u.assign(n, 0.0);
    switch (kind) {
        case IcKind::step:
            for (std::size_t i = 0; i < n; ++i)
                s.u[i] = (s.x_of(i) <= 0.0) ? 1.0 : 0.0;
            const_cast<Pde*>(this)->rough_ic_ = true;
            break;
        case IcKind::wave_profile: {
            if (!wp_) throw std::domain_error("pde: wave_profile ic needs a profile");
            for (std::size_t i = 0; i < n; ++i) s.u[i] = wp_->ustar_at(s.x_of(i));
            const_cast<Pde*>(this)->rough_ic_ = false;
            break;
        }
        case IcKind::custom_table: {
            CsvTable t = read_csv(table_path);
            if (t.columns.size() < 2)
                throw std::domain_error("pde: custom ic table needs x,u columns");
            HermiteTable interp(t.columns[0], t.columns[1]);
            for (std::size_t i = 0; i < n; ++i) {
                const double x = s.x_of(i);
                double v;
                if (x <= interp.x_front())
                    v = t.columns[1].front();
                else if (x >= interp.x_back())
                    v = t.columns[1].back();
                else
                    v = interp(x);
                s.u[i] = std::clamp(v, 0.0, 1.0);
            }
            // Compact support on the right within the window.
            if (s.u.back() > 1e-12)
                throw std::domain_error(
                    "pde: custom ic must vanish at the right of the window");
            // Steeper-than-the-wave check: w0 = -u_x - eta(u) >= 0.
            if (wp_) {
                std::vector<double> ux(n);
                ks_->diff4(s.u.data(), n, s.dx, ux.data());
                for (std::size_t i = 0; i < n; ++i) {
                    const double w0 =
                        -ux[i] - wp_->eta_at(std::clamp(s.u[i], 0.0, 1.0));
                    if (w0 < -1e-8) {
                        std::ostringstream os;
                        os << "pde: custom ic rejected, w0 = " << w0
                           << " < 0 at x = " << s.x_of(i);
                        throw std::domain_error(os.str());
                    }
                }
            }
            const_cast<Pde*>(this)->rough_ic_ = true;
            break;
        }
    }
    return s;
}

void Pde::reaction_half(SimState& s) {
    const double h = 0.5 * gc_.dt;
    if (hr_.valid)
        ks_->reaction_rk4(s.u.data(), s.u.size(), h, hr_.n_int, hr_.chi);
    else
        reaction_rk4_generic(s.u.data(), s.u.size(), h, f_.f);
}

void Pde::diffusion(SimState& s, bool backward_euler_half_pair) {
    // Compact 4th-order B = tridiag(1,10,1)/12, D = tridiag(1,-2,1)/dx^2.
    // One pass solves (B - kl D) u_new = (B + kr D) u_old with Dirichlet
    // ghosts u=1 (left), u=0 (right) folded into the right-hand side.
    const std::size_t n = s.u.size();
    rhs_.resize(n);
    scratch_.resize(n);
    const double uL = 1.0, uR = 0.0;
    auto solve_pass = [&](double kl, double kr) {
        const double idx2 = 1.0 / (s.dx * s.dx);
        const double ao_rhs = 1.0 / 12.0 + kr * idx2;
        const double ad_rhs = 10.0 / 12.0 - 2.0 * kr * idx2;
        const double ao_lhs = 1.0 / 12.0 - kl * idx2;
        const double ad_lhs = 10.0 / 12.0 + 2.0 * kl * idx2;
        ks_->tridiag_matvec(s.u.data(), n, ao_rhs, ad_rhs, uL, uR, rhs_.data());
        rhs_[0] -= ao_lhs * uL;
        rhs_[n - 1] -= ao_lhs * uR;
        thomas_const(ao_lhs, ad_lhs, rhs_.data(), scratch_.data(), n);
        s.u.swap(rhs_);
    };
    if (backward_euler_half_pair) {
        solve_pass(0.5 * gc_.dt, 0.0);
        solve_pass(0.5 * gc_.dt, 0.0);
    } else {
        solve_pass(0.5 * gc_.dt, 0.5 * gc_.dt);
    }
}

void Pde::step(SimState& s) {
    reaction_half(s);
    diffusion(s, rough_ic_ && s.step_count < 2);
    reaction_half(s);
    ++s.step_count;
    s.t = gc_.dt * double(s.step_count);  // lattice time, no drift

    // Maximum-principle guard (scheme tolerance).
    double mn, mx;
    ks_->minmax(s.u.data(), s.u.size(), &mn, &mx);
    if (mn < -1e-6 || mx > 1.0 + 1e-6) {
        std::ostringstream os;
        os << "pde: solution left [0,1] at t=" << s.t << " (min=" << mn
           << ", max=" << mx << ")";
        throw std::runtime_error(os.str());
    }
}

long Pde::front_cell(const SimState& s) const {
    // u is monotone decreasing up to scheme tolerance; binary search.
    const auto& u = s.u;
    if (u.empty() || u.front() < 0.5 || u.back() >= 0.5) return -1;
    std::size_t lo = 0, hi = u.size() - 1;
    while (hi - lo > 1) {
        const std::size_t m = (lo + hi) / 2;
        if (u[m] >= 0.5)
            lo = m;
        else
            hi = m;
    }
    return static_cast<long>(lo);
}

void Pde::shift_window(SimState& s, double sigma) const {
    const double rp = right_pad_needed(s.t);
    const double lead = sigma - s.offset;             // distance to left edge
    const double trail = s.x_right() - sigma;         // distance to right edge
    const bool off_left = std::abs(lead - s.left_pad) > 0.1 * s.left_pad;
    const bool off_right = std::abs(trail - rp) > 0.1 * rp;
    if (!off_left && !off_right) return;

    const long k = std::lround((sigma - s.left_pad - s.offset) / s.dx);
    const double new_offset = s.offset + double(k) * s.dx;
    const std::size_t n_new =
        static_cast<std::size_t>(std::llround((s.left_pad + rp) / s.dx)) + 1;
    std::vector<double> nu(n_new);
    const long n_old = static_cast<long>(s.u.size());
    for (std::size_t j = 0; j < n_new; ++j) {
        const long src = static_cast<long>(j) + k;
        if (src < 0)
            nu[j] = 1.0;
        else if (src >= n_old)
            nu[j] = 0.0;
        else
            nu[j] = s.u[static_cast<std::size_t>(src)];
    }
    s.u.swap(nu);
    s.offset = new_offset;
    s.right_pad = rp;
}

std::vector<double> make_sample_times(double t0, double ratio, double t_final,
                                      const std::vector<double>& extra) {
    std::set<double> ts;
    ts.insert(0.0);
    ts.insert(t_final);
    for (double t = t0; t < t_final; t *= ratio) ts.insert(t);
    for (double t : extra)
        if (t > 0.0 && t <= t_final) ts.insert(t);
    return std::vector<double>(ts.begin(), ts.end());
}

}  // namespace rdfront
