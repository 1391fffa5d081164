// kernels.hpp — data-parallel inner-loop kernels, scalar reference + SIMD variant
//
// The SIMD variant is selected at runtime (CPU check + optional override) and is
// equivalence-tested against the scalar reference. All higher-level code calls
// through kernels::active() so both paths stay interchangeable.

#pragma once

#include <cstddef>
#include <string>

namespace adilab::kernels {

struct Backend {
    const char* name;

    // out[i] = (1 + i*c*x[i])^(-p), split into real/imag parts.
    void (*pow_cis)(const double* x, std::size_t n, double c, double p,
                    double* out_re, double* out_im);

    // sum_i w[i] * exp(d[i]) * cos(ph[i]); d is a damping exponent (<= 0 in use).
    double (*sum_exp_cos)(const double* d, const double* ph, const double* w, std::size_t n);

    // sum_k (wre[k] + i*wim[k]) * (1 + i*om[k]*x)^(-p), accumulated over k.
    void (*series_pow)(const double* om, const double* wre, const double* wim,
                       std::size_t n, double x, double p,
                       double* out_re, double* out_im);
};

const Backend& scalar_backend();
const Backend& simd_backend();     // forwards to scalar when SIMD is unavailable
bool simd_available();

// Runtime selection: "scalar", "simd", or "auto" (default; picks SIMD when available).
void select(const std::string& name);
const Backend& active();

} // namespace adilab::kernels
