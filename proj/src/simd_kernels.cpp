#include "rdfront/simd_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#if defined(__x86_64__) || defined(_M_X64)
#define RDF_X86 1
#include <immintrin.h>
#else
#define RDF_X86 0
#endif

#if defined(__aarch64__)
#define RDF_NEON 1
#include <arm_neon.h>
#else
#define RDF_NEON 0
#endif

namespace rdfront {

std::string kernel_variant_name(KernelVariant v) {
    switch (v) {
        case KernelVariant::scalar: return "scalar";
        case KernelVariant::avx2: return "avx2";
        case KernelVariant::neon: return "neon";
    }
    return "?";
}

namespace {

inline double f_hr(double u, int npow, double chi) {
    double s = 1.0, p = u;
    for (int k = 1; k <= npow - 2; ++k) {
        s += p;
        p *= u;
    }
    // p = u^{npow-1}
    return u * (1.0 - u) * s * (1.0 + chi * npow * p);
}

void reaction_rk4_scalar(double* u, std::size_t n, double h, int npow,
                         double chi) {
    for (std::size_t i = 0; i < n; ++i) {
        const double v = u[i];
        const double k1 = f_hr(v, npow, chi);
        const double k2 = f_hr(v + 0.5 * h * k1, npow, chi);
        const double k3 = f_hr(v + 0.5 * h * k2, npow, chi);
        const double k4 = f_hr(v + h * k3, npow, chi);
        u[i] = v + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    }
}

void tridiag_matvec_scalar(const double* u, std::size_t n, double ao,
                           double ad, double uL, double uR, double* rhs) {
    if (n == 0) return;
    if (n == 1) {
        rhs[0] = ad * u[0] + ao * (uL + uR);
        return;
    }
    rhs[0] = ad * u[0] + ao * (uL + u[1]);
    for (std::size_t i = 1; i + 1 < n; ++i)
        rhs[i] = ad * u[i] + ao * (u[i - 1] + u[i + 1]);
    rhs[n - 1] = ad * u[n - 1] + ao * (u[n - 2] + uR);
}

void minmax_scalar(const double* u, std::size_t n, double* mn, double* mx) {
    double lo = u[0], hi = u[0];
    for (std::size_t i = 1; i < n; ++i) {
        lo = std::min(lo, u[i]);
        hi = std::max(hi, u[i]);
    }
    *mn = lo;
    *mx = hi;
}

void diff4_scalar(const double* u, std::size_t n, double dx, double* du) {
    const double i12 = 1.0 / (12.0 * dx);
    for (std::size_t i = 2; i + 2 < n; ++i)
        du[i] = (u[i - 2] - 8.0 * u[i - 1] + 8.0 * u[i + 1] - u[i + 2]) * i12;
    auto one_sided = [&](std::size_t i, int dir) {
        // 4th-order biased stencil (-25/12, 4, -3, 4/3, -1/4) / dx
        const double v = -25.0 / 12.0 * u[i] + 4.0 * u[i + dir] -
                         3.0 * u[i + 2 * dir] + 4.0 / 3.0 * u[i + 3 * dir] -
                         0.25 * u[i + 4 * dir];
        return dir > 0 ? v / dx : -v / dx;
    };
    if (n >= 5) {
        du[0] = one_sided(0, +1);
        du[1] = one_sided(1, +1);
        du[n - 2] = one_sided(n - 2, -1);
        du[n - 1] = one_sided(n - 1, -1);
    }
}

#if RDF_X86

__attribute__((target("avx2,fma"))) inline __m256d f_hr_avx2(__m256d u,
                                                             int npow,
                                                             __m256d chin) {
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d s = one, p = u;
    for (int k = 1; k <= npow - 2; ++k) {
        s = _mm256_add_pd(s, p);
        p = _mm256_mul_pd(p, u);
    }
    const __m256d gap =
        _mm256_mul_pd(_mm256_mul_pd(u, _mm256_sub_pd(one, u)), s);
    const __m256d g = _mm256_fmadd_pd(chin, p, one);
    return _mm256_mul_pd(gap, g);
}

__attribute__((target("avx2,fma"))) void reaction_rk4_avx2(double* u,
                                                           std::size_t n,
                                                           double h, int npow,
                                                           double chi) {
    const __m256d chin = _mm256_set1_pd(chi * npow);
    const __m256d hh = _mm256_set1_pd(h);
    const __m256d half_h = _mm256_set1_pd(0.5 * h);
    const __m256d sixth = _mm256_set1_pd(1.0 / 6.0);
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(u + i);
        const __m256d k1 = f_hr_avx2(v, npow, chin);
        const __m256d k2 =
            f_hr_avx2(_mm256_fmadd_pd(half_h, k1, v), npow, chin);
        const __m256d k3 =
            f_hr_avx2(_mm256_fmadd_pd(half_h, k2, v), npow, chin);
        const __m256d k4 = f_hr_avx2(_mm256_fmadd_pd(hh, k3, v), npow, chin);
        __m256d acc = _mm256_fmadd_pd(two, k2, k1);
        acc = _mm256_fmadd_pd(two, k3, acc);
        acc = _mm256_add_pd(acc, k4);
        _mm256_storeu_pd(u + i,
                         _mm256_fmadd_pd(_mm256_mul_pd(hh, sixth), acc, v));
    }
    if (i < n) reaction_rk4_scalar(u + i, n - i, h, npow, chi);
}

__attribute__((target("avx2,fma"))) void tridiag_matvec_avx2(
    const double* u, std::size_t n, double ao, double ad, double uL, double uR,
    double* rhs) {
    if (n < 6) {
        tridiag_matvec_scalar(u, n, ao, ad, uL, uR, rhs);
        return;
    }
    const __m256d vao = _mm256_set1_pd(ao);
    const __m256d vad = _mm256_set1_pd(ad);
    rhs[0] = ad * u[0] + ao * (uL + u[1]);
    std::size_t i = 1;
    for (; i + 5 <= n; i += 4) {
        const __m256d um = _mm256_loadu_pd(u + i - 1);
        const __m256d uc = _mm256_loadu_pd(u + i);
        const __m256d up = _mm256_loadu_pd(u + i + 1);
        const __m256d v =
            _mm256_fmadd_pd(vad, uc, _mm256_mul_pd(vao, _mm256_add_pd(um, up)));
        _mm256_storeu_pd(rhs + i, v);
    }
    for (; i + 1 < n; ++i) rhs[i] = ad * u[i] + ao * (u[i - 1] + u[i + 1]);
    rhs[n - 1] = ad * u[n - 1] + ao * (u[n - 2] + uR);
}

__attribute__((target("avx2"))) void minmax_avx2(const double* u,
                                                 std::size_t n, double* mn,
                                                 double* mx) {
    if (n < 8) {
        minmax_scalar(u, n, mn, mx);
        return;
    }
    __m256d vlo = _mm256_loadu_pd(u);
    __m256d vhi = vlo;
    std::size_t i = 4;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(u + i);
        vlo = _mm256_min_pd(vlo, v);
        vhi = _mm256_max_pd(vhi, v);
    }
    double lo[4], hi[4];
    _mm256_storeu_pd(lo, vlo);
    _mm256_storeu_pd(hi, vhi);
    double l = std::min(std::min(lo[0], lo[1]), std::min(lo[2], lo[3]));
    double h = std::max(std::max(hi[0], hi[1]), std::max(hi[2], hi[3]));
    for (; i < n; ++i) {
        l = std::min(l, u[i]);
        h = std::max(h, u[i]);
    }
    *mn = l;
    *mx = h;
}

__attribute__((target("avx2,fma"))) void diff4_avx2(const double* u,
                                                    std::size_t n, double dx,
                                                    double* du) {
    if (n < 16) {
        diff4_scalar(u, n, dx, du);
        return;
    }
    const __m256d c1 = _mm256_set1_pd(8.0);
    const __m256d i12 = _mm256_set1_pd(1.0 / (12.0 * dx));
    std::size_t i = 2;
    for (; i + 6 <= n; i += 4) {
        const __m256d um2 = _mm256_loadu_pd(u + i - 2);
        const __m256d um1 = _mm256_loadu_pd(u + i - 1);
        const __m256d up1 = _mm256_loadu_pd(u + i + 1);
        const __m256d up2 = _mm256_loadu_pd(u + i + 2);
        __m256d v = _mm256_sub_pd(um2, up2);
        v = _mm256_fmadd_pd(c1, _mm256_sub_pd(up1, um1), v);
        _mm256_storeu_pd(du + i, _mm256_mul_pd(v, i12));
    }
    for (; i + 2 < n; ++i)
        du[i] =
            (u[i - 2] - 8.0 * u[i - 1] + 8.0 * u[i + 1] - u[i + 2]) /
            (12.0 * dx);
    // edges from the scalar reference
    double edge[10];
    diff4_scalar(u, std::min<std::size_t>(n, 10), dx, edge);
    du[0] = edge[0];
    du[1] = edge[1];
    double tail[10];
    const std::size_t off = n - std::min<std::size_t>(n, 10);
    diff4_scalar(u + off, n - off, dx, tail);
    du[n - 2] = tail[n - off - 2];
    du[n - 1] = tail[n - off - 1];
}

#endif  // RDF_X86

#if RDF_NEON

inline float64x2_t f_hr_neon(float64x2_t u, int npow, float64x2_t chin) {
    const float64x2_t one = vdupq_n_f64(1.0);
    float64x2_t s = one, p = u;
    for (int k = 1; k <= npow - 2; ++k) {
        s = vaddq_f64(s, p);
        p = vmulq_f64(p, u);
    }
    const float64x2_t gap = vmulq_f64(vmulq_f64(u, vsubq_f64(one, u)), s);
    const float64x2_t g = vfmaq_f64(one, chin, p);
    return vmulq_f64(gap, g);
}

void reaction_rk4_neon(double* u, std::size_t n, double h, int npow,
                       double chi) {
    const float64x2_t chin = vdupq_n_f64(chi * npow);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t v = vld1q_f64(u + i);
        const float64x2_t k1 = f_hr_neon(v, npow, chin);
        const float64x2_t k2 =
            f_hr_neon(vfmaq_n_f64(v, k1, 0.5 * h), npow, chin);
        const float64x2_t k3 =
            f_hr_neon(vfmaq_n_f64(v, k2, 0.5 * h), npow, chin);
        const float64x2_t k4 = f_hr_neon(vfmaq_n_f64(v, k3, h), npow, chin);
        float64x2_t acc = vfmaq_n_f64(k1, k2, 2.0);
        acc = vfmaq_n_f64(acc, k3, 2.0);
        acc = vaddq_f64(acc, k4);
        vst1q_f64(u + i, vfmaq_n_f64(v, acc, h / 6.0));
    }
    if (i < n) reaction_rk4_scalar(u + i, n - i, h, npow, chi);
}

#endif  // RDF_NEON

}  // namespace

bool avx2_supported() {
#if RDF_X86
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

bool neon_supported() {
#if RDF_NEON
    return true;
#else
    return false;
#endif
}

const KernelSet& select_kernels(const std::string& variant) {
    static const KernelSet scalar{KernelVariant::scalar, reaction_rk4_scalar,
                                  tridiag_matvec_scalar, minmax_scalar,
                                  diff4_scalar};
#if RDF_X86
    static const KernelSet avx2{KernelVariant::avx2, reaction_rk4_avx2,
                                tridiag_matvec_avx2, minmax_avx2, diff4_avx2};
#endif
#if RDF_NEON
    static const KernelSet neon{KernelVariant::neon, reaction_rk4_neon,
                                tridiag_matvec_scalar, minmax_scalar,
                                diff4_scalar};
#endif
    if (variant == "scalar") return scalar;
#if RDF_X86
    if (variant == "avx2") {
        if (!avx2_supported())
            throw std::runtime_error("kernels: avx2 not supported here");
        return avx2;
    }
    if (variant == "auto" && avx2_supported()) return avx2;
#else
    if (variant == "avx2")
        throw std::runtime_error("kernels: avx2 not available on this arch");
#endif
#if RDF_NEON
    if (variant == "neon" || variant == "auto") return neon;
#else
    if (variant == "neon")
        throw std::runtime_error("kernels: neon not available on this arch");
#endif
    if (variant == "auto") return scalar;
    if (variant != "scalar")
        throw std::runtime_error("kernels: unknown variant " + variant);
    return scalar;
}

void thomas_const(double ao, double ad, double* rhs, double* scratch,
                  std::size_t n) {
    // scratch holds the forward-eliminated upper coefficients.
    double beta = ad;
    rhs[0] /= beta;
    for (std::size_t i = 1; i < n; ++i) {
        scratch[i] = ao / beta;
        beta = ad - ao * scratch[i];
        rhs[i] = (rhs[i] - ao * rhs[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i + 1] * rhs[i + 1];
}

void reaction_rk4_generic(double* u, std::size_t n, double h,
                          const std::function<double(double)>& f) {
    for (std::size_t i = 0; i < n; ++i) {
        const double v = u[i];
        const double k1 = f(v);
        const double k2 = f(v + 0.5 * h * k1);
        const double k3 = f(v + 0.5 * h * k2);
        const double k4 = f(v + h * k3);
        u[i] = v + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    }
}

}  // namespace rdfront
