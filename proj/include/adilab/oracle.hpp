// oracle.hpp — brute-force reference: discretized bath, truncated Fock space,
// direct integration of the time-rescaled Schrödinger equation

#pragma once

#include "adilab/reservoir.hpp"
#include "adilab/system.hpp"

#include <cstddef>
#include <vector>

namespace adilab {

struct OracleConfig {
    std::size_t n_modes{48};
    double omega_max{40.0};
    std::size_t n_excitations{2};   // total-occupation cutoff
    double dt_phys{0.0};            // 0 = auto: (1/20) min(2pi/omega_max, 2pi eps/max|e21|)
    double norm_tol{1e-8};
    double leakage_tol{0.05};
};

struct BathMode {
    double omega{0.0};
    double g{0.0};      // real weight, |g|^2 = gamma_hat(omega) dw / (2 pi)
};

// Midpoint discretization of the zero-temperature spectral density.
std::vector<BathMode> discretize(const ReservoirModel& model, const OracleConfig& cfg);

// gamma_N(x) = sum_k g_k^2 e^{-i omega_k x}
cplx gamma_discrete(const std::vector<BathMode>& modes, double x);

struct OracleResult {
    double p12{0.0};
    double norm_drift{0.0};
    double leakage{0.0};     // final population on the occupation-cutoff shell
    std::size_t dim{0};      // Fock-space dimension (system factor excluded)
    std::size_t steps{0};
};

OracleResult evolve(const TwoLevelSystem& sys, const std::vector<BathMode>& modes,
                    const OracleConfig& cfg, double eps, double lambda, double t);

} // namespace adilab
