// kernels_simd.cpp — std::experimental::simd variants of the inner-loop kernels
//
// Compiled with wider vector flags than the rest of the project (see CMake);
// entry points take plain double* so the ABI stays scalar.

#include "adilab/kernels.hpp"

#include <cmath>

#if defined(ADILAB_HAVE_STD_SIMD)
#include <experimental/simd>
namespace stdx = std::experimental;
#endif

namespace adilab::kernels {

namespace {

#if defined(ADILAB_HAVE_STD_SIMD)

using V = stdx::native_simd<double>;
constexpr std::size_t W = V::size();

inline void pow_cis_core(V u, double p, V& zr, V& zi) {
    const V mag = stdx::exp(V(-0.5 * p) * stdx::log(V(1.0) + u * u));
    const V phase = V(-p) * stdx::atan(u);
    zr = mag * stdx::cos(phase);
    zi = mag * stdx::sin(phase);
}

void pow_cis_simd(const double* x, std::size_t n, double c, double p,
                  double* out_re, double* out_im) {
    std::size_t i = 0;
    for (; i + W <= n; i += W) {
        V xv(&x[i], stdx::element_aligned);
        V zr, zi;
        pow_cis_core(V(c) * xv, p, zr, zi);
        zr.copy_to(&out_re[i], stdx::element_aligned);
        zi.copy_to(&out_im[i], stdx::element_aligned);
    }
    for (; i < n; ++i) {
        const double u = c * x[i];
        const double mag = std::exp(-0.5 * p * std::log1p(u * u));
        const double phase = -p * std::atan(u);
        out_re[i] = mag * std::cos(phase);
        out_im[i] = mag * std::sin(phase);
    }
}

double sum_exp_cos_simd(const double* d, const double* ph, const double* w, std::size_t n) {
    V acc(0.0);
    std::size_t i = 0;
    for (; i + W <= n; i += W) {
        V dv(&d[i], stdx::element_aligned);
        V pv(&ph[i], stdx::element_aligned);
        V wv(&w[i], stdx::element_aligned);
        acc += wv * stdx::exp(dv) * stdx::cos(pv);
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += w[i] * std::exp(d[i]) * std::cos(ph[i]);
    return stdx::reduce(acc) + tail;
}

void series_pow_simd(const double* om, const double* wre, const double* wim,
                     std::size_t n, double x, double p,
                     double* out_re, double* out_im) {
    V ar(0.0), ai(0.0);
    std::size_t k = 0;
    for (; k + W <= n; k += W) {
        V ov(&om[k], stdx::element_aligned);
        V rv(&wre[k], stdx::element_aligned);
        V iv(&wim[k], stdx::element_aligned);
        V zr, zi;
        pow_cis_core(ov * V(x), p, zr, zi);
        ar += rv * zr - iv * zi;
        ai += rv * zi + iv * zr;
    }
    double sr = stdx::reduce(ar), si = stdx::reduce(ai);
    for (; k < n; ++k) {
        const double u = om[k] * x;
        const double mag = std::exp(-0.5 * p * std::log1p(u * u));
        const double phase = -p * std::atan(u);
        const double zr = mag * std::cos(phase), zi = mag * std::sin(phase);
        sr += wre[k] * zr - wim[k] * zi;
        si += wre[k] * zi + wim[k] * zr;
    }
    *out_re = sr;
    *out_im = si;
}

const Backend simd_impl{"simd", &pow_cis_simd, &sum_exp_cos_simd, &series_pow_simd};

bool cpu_ok() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2");
#else
    return true;
#endif
}

#endif // ADILAB_HAVE_STD_SIMD

} // namespace

bool simd_available() {
#if defined(ADILAB_HAVE_STD_SIMD)
    static const bool ok = cpu_ok();
    return ok;
#else
    return false;
#endif
}

const Backend& simd_backend() {
#if defined(ADILAB_HAVE_STD_SIMD)
    if (simd_available()) return simd_impl;
#endif
    return scalar_backend();
}

} // namespace adilab::kernels
