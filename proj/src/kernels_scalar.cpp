// kernels_scalar.cpp — scalar reference kernels and runtime backend dispatch

#include "adilab/kernels.hpp"
#include "adilab/common.hpp"

#include <atomic>
#include <cmath>

namespace adilab::kernels {

namespace {

void pow_cis_scalar(const double* x, std::size_t n, double c, double p,
                    double* out_re, double* out_im) {
    for (std::size_t i = 0; i < n; ++i) {
        const double u = c * x[i];
        const double mag = std::exp(-0.5 * p * std::log1p(u * u));
        const double phase = -p * std::atan(u);
        out_re[i] = mag * std::cos(phase);
        out_im[i] = mag * std::sin(phase);
    }
}

double sum_exp_cos_scalar(const double* d, const double* ph, const double* w, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * std::exp(d[i]) * std::cos(ph[i]);
    return acc;
}

void series_pow_scalar(const double* om, const double* wre, const double* wim,
                       std::size_t n, double x, double p,
                       double* out_re, double* out_im) {
    double ar = 0.0, ai = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double u = om[k] * x;
        const double mag = std::exp(-0.5 * p * std::log1p(u * u));
        const double phase = -p * std::atan(u);
        const double zr = mag * std::cos(phase), zi = mag * std::sin(phase);
        ar += wre[k] * zr - wim[k] * zi;
        ai += wre[k] * zi + wim[k] * zr;
    }
    *out_re = ar;
    *out_im = ai;
}

const Backend scalar_impl{"scalar", &pow_cis_scalar, &sum_exp_cos_scalar, &series_pow_scalar};

std::atomic<const Backend*> current{nullptr};

} // namespace

const Backend& scalar_backend() { return scalar_impl; }

void select(const std::string& name) {
    if (name == "scalar") {
        current.store(&scalar_backend());
    } else if (name == "simd") {
        if (!simd_available()) throw config_error("SIMD kernels requested but unavailable on this CPU/build");
        current.store(&simd_backend());
    } else if (name == "auto" || name.empty()) {
        current.store(simd_available() ? &simd_backend() : &scalar_backend());
    } else {
        throw config_error("unknown kernel backend '" + name + "' (expected scalar|simd|auto)");
    }
}

const Backend& active() {
    const Backend* b = current.load();
    if (!b) {
        b = simd_available() ? &simd_backend() : &scalar_backend();
        current.store(b);
    }
    return *b;
}

} // namespace adilab::kernels
