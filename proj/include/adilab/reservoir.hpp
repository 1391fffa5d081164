// reservoir.hpp — bath form-factor family: autocorrelation gamma, spectral
// density gamma_hat, thermal counterparts, decay checks and the r(z) bound

#pragma once

#include "adilab/common.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace adilab {

enum class Dispersion { Photonic, Massive };

// Power-law x exponential form factor g(k) = g0 |k|^(exponent/2 - 1) exp(-|k|/(2 omega_D)).
// `exponent` is the zero-temperature low-frequency power m; at finite beta it
// plays the role of mu and must exceed 1 (super-Ohmic requirement).
struct ReservoirModel {
    double g0{0.05};
    double exponent{2.0};
    double omega_D{1.0};
    double beta{std::numeric_limits<double>::infinity()};
    Dispersion dispersion{Dispersion::Photonic};
    double boson_mass{1.0};   // massive dispersion only

    bool zero_temperature() const { return std::isinf(beta); }
    void validate() const;
};

// Zero-temperature closed forms (photonic dispersion).
cplx gamma_closed_form(const ReservoirModel& model, double x);
double gamma_hat(const ReservoirModel& model, double omega);

// Thermal spectral function via the detailed-balance (coth) rule; continuous
// extension at omega = 0.
double gamma_hat_thermal(const ReservoirModel& model, double omega);

// Thermal autocorrelation by quadrature of the inverse Fourier transform of
// gamma_hat_thermal, split at omega = 0, truncated using the exponential
// cutoff. Signals numerical_error when the truncated integral has not
// converged.
cplx gamma_thermal(const ReservoirModel& model, double x);

// Cross-check route: direct quadrature of the single-sided thermal
// representation ((1+n) e^{-iux} + n e^{iux} against the form factor).
cplx gamma_thermal_planck(const ReservoirModel& model, double x);

// Generic numerical Fourier transform of gamma_hat (any dispersion);
// experimental path for the massive case where no closed form is kept.
cplx gamma_ft_quadrature(const ReservoirModel& model, double x);

// gamma and its first two antiderivative moments, the computational object the
// phase kernels consume. Zero temperature: exact closed forms. Finite beta:
// exact resummation of the detailed-balance rule into a series of closed-form
// terms with effective cutoffs 1/(1/omega_D + k beta).
class CorrelationKernel {
public:
    explicit CorrelationKernel(const ReservoirModel& model);

    cplx gamma(double x) const;
    // M0(x) = int_0^x gamma, M1(x) = int_0^x u gamma(u) du; valid for all real x.
    void moments(double x, cplx& m0, cplx& m1) const;
    void moments_batch(const double* x, std::size_t n, cplx* m0, cplx* m1) const;

    double gamma0() const { return gamma0_; }    // lim gamma_hat/omega^exponent at 0+
    double beta0() const { return beta0_; }      // int_0^inf gamma_I
    double abs_gamma(double x) const { return std::abs(gamma(x)); }
    double int_abs_gamma() const;                // int_0^inf |gamma|
    std::size_t thermal_terms() const { return om_.size(); }
    const ReservoirModel& model() const { return model_; }

private:
    ReservoirModel model_;
    double amp_{0.0};      // 4 pi g0^2 omega_D^(p) Gamma(p), p = exponent + 1
    double p_{0.0};        // exponent + 1
    double gamma0_{0.0};
    double beta0_{0.0};
    mutable double int_abs_cache_{-1.0};
    // thermal series terms k >= 1 (base term uses omega_D itself)
    std::vector<double> om_, amp_k_;
    std::vector<double> w_gamma_, w_m0_, w_m1a_, w_m1b_, zeros_;
    double m1_const_{0.0};
};

struct A4Report {
    bool pass{false};
    bool ratio_converged{false};
    bool decay_bounded{false};
    double m_target{0.0};
    double gamma0{0.0};          // extrapolated low-frequency ratio
    double decay_sup{0.0};       // sup (1+x^2)^((m+1)/2) |gamma(x)|
    double decay_sup_x{0.0};
    std::string summary() const;
};

// Numerically certifies the decay/low-frequency conditions for the configured
// reservoir against a target exponent m_target.
A4Report check_A4(const ReservoirModel& model, double m_target);

// r(z) = int_0^z dy int_y^inf |gamma| + int_0^z x |gamma(x)| dx.
double r_bound(const ReservoirModel& model, double z);

} // namespace adilab
