#pragma once

#include <cstddef>
#include <functional>
#include <string>

namespace rdfront {

// Hot inner loops of the PDE integrator. Every kernel has a scalar
// reference implementation; AVX2 (x86-64) and NEON (aarch64) variants are
// selected at runtime and equivalence-tested against the reference.

enum class KernelVariant { scalar, avx2, neon };
std::string kernel_variant_name(KernelVariant v);

// One classical 4-stage (RK4) half-step of du/dt = f(u) per cell, for the
// analytic family f(u) = u(1-u)(1 + u + ... + u^{n-2})(1 + chi n u^{n-1}).
using ReactionFn = void (*)(double* u, std::size_t n, double h, int npow,
                            double chi);

// rhs[i] = ad*u[i] + ao*(u[i-1] + u[i+1]) with Dirichlet ghosts uL, uR.
using TridiagMatvecFn = void (*)(const double* u, std::size_t n, double ao,
                                 double ad, double uL, double uR, double* rhs);

// min/max over a vector.
using MinMaxFn = void (*)(const double* u, std::size_t n, double* mn,
                          double* mx);

// 4th-order first derivative (central; one-sided at the edges).
using Diff4Fn = void (*)(const double* u, std::size_t n, double dx,
                         double* du);

struct KernelSet {
    KernelVariant variant = KernelVariant::scalar;
    ReactionFn reaction_rk4 = nullptr;
    TridiagMatvecFn tridiag_matvec = nullptr;
    MinMaxFn minmax = nullptr;
    Diff4Fn diff4 = nullptr;
};

// variant: "auto" picks the best supported ISA; "scalar"/"avx2"/"neon"
// force one (throws if unsupported on this machine).
const KernelSet& select_kernels(const std::string& variant = "auto");

bool avx2_supported();
bool neon_supported();

// Constant-coefficient tridiagonal solve (Thomas), diag/off from the
// Crank-Nicolson system; rhs is overwritten with the solution.
// Sequential recurrence; shared by all variants.
void thomas_const(double ao, double ad, double* rhs, double* scratch,
                  std::size_t n);

// Scalar RK4 half-step for an arbitrary nonlinearity (generic fallback).
void reaction_rk4_generic(double* u, std::size_t n, double h,
                          const std::function<double(double)>& f);

}  // namespace rdfront
