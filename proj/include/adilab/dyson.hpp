// dyson.hpp — transition probability routes: exact first Dyson term, leading
// order, residual diagnostics, third-order magnitude estimate, regimes

#pragma once

#include "adilab/kato.hpp"
#include "adilab/phases.hpp"

#include <cstddef>
#include <limits>
#include <string>

namespace adilab {

struct Dyson1Options {
    double max_phase_per_panel{pi / 4.0};   // Bohr phase increment per panel
    std::size_t max_panels{4096};
    int refine{0};                          // extra panel-width halvings
};

struct Dyson1Result {
    double value{0.0};
    std::size_t panels{0};
    std::size_t nodes{0};
};

// || omega^(1)(t) ||^2 = 2 Re int_0^t ds int_0^s dtau
//   e^{-i phi12 + i zeta12 - eta12}(s,tau) e21(tau)^2 q12(s,tau),
// by oscillation-resolving tensor Gauss–Legendre over the triangle.
Dyson1Result dyson1_exact(const PhaseKernels& pk, const KatoTransport& kt, double t,
                          const Dyson1Options& opt = {});

struct LeadingOrder {
    double p_free{0.0};
    double p_correction{0.0};
};

// Theorem leading order: p_free = eps^2 q(t,t) and the reservoir correction
// (lambda^2/2eps) int_0^t eps^2 q(s,s) b12(s)^2 gamma_hat^(beta)(e12(s)) ds.
LeadingOrder leading_order(const KatoTransport& kt, const ReservoirModel& model,
                           double eps, double lambda, double t);

inline double theorem_residual(double dyson1, double p_free, double p_correction) {
    return dyson1 - p_free - p_correction;
}

struct RegimeThresholds {
    double c_lo{0.3};
    double c_hi{3.0};
};

// negligible-coupling | balanced | reservoir-assisted | outside-theorem
std::string classify_regime(double eps, double lambda, double m,
                            const RegimeThresholds& thr = {});

struct ErrorExponents {
    double m1{0.0};      // min{m, 1}
    double alpha0{0.0};  // 1/(2 + 2m - m1)
};
ErrorExponents error_exponents(double m);

struct Dyson3Options {
    std::size_t node_budget{20000000};      // cap on 4D inner evaluations
    double max_phase_per_panel{pi / 8.0};   // target; the budget usually binds first
    std::size_t min_panels{3};
};

struct Dyson3Result {
    double value{0.0};
    std::size_t nodes{0};        // 1D nodes used
    std::size_t evals{0};        // inner 4D evaluations
};

// Upper estimate of ||omega^(3)(t)|| from the Dyson recursion: the outer
// integral is bounded in modulus, inner Weyl expectations are evaluated
// exactly. Diagnostic only, used to confirm the order hierarchy.
Dyson3Result dyson3_magnitude(const PhaseKernels& pk, const KatoTransport& kt, double t,
                              const Dyson3Options& opt = {});

struct TransitionReport {
    double t{1.0};
    double eps{0.0};
    double lam{0.0};
    double beta{std::numeric_limits<double>::infinity()};
    double m{0.0};
    double p_free{0.0};
    double p_correction{0.0};
    double p_dyson1{std::numeric_limits<double>::quiet_NaN()};
    double omega3_norm{std::numeric_limits<double>::quiet_NaN()};
    double residual{std::numeric_limits<double>::quiet_NaN()};
    std::string regime;
    ErrorExponents exponents{};
};

} // namespace adilab
