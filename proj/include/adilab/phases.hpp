// phases.hpp — two-time phase/damping kernels of the exact first Dyson term:
// dynamical Bohr phase phi12, Lamb-type phase zeta12, complex damping eta12,
// theta12^± and ||F12||^2

#pragma once

#include "adilab/reservoir.hpp"
#include "adilab/system.hpp"

#include <functional>
#include <vector>

namespace adilab {

// Immutable evaluation context for the kernels at fixed (eps, lambda).
// Inner v-integrals of gamma((u-v)/eps) use the exact antiderivative moments
// of the correlation kernel with piecewise-linear coupling weights, which
// collapses every kernel to one-dimensional outer quadrature.
class PhaseKernels {
public:
    PhaseKernels(TwoLevelSystem sys, ReservoirModel model, double eps, double lambda);

    double eps() const { return eps_; }
    double lambda() const { return lam_; }
    const TwoLevelSystem& system() const { return sys_; }
    const CorrelationKernel& kernel() const { return kern_; }

    // (1/eps) int_tau^s (e1 - e2)
    double phi12(double s, double tau) const;
    // exact expression with the three u/v domains; s < tau via conjugation
    cplx eta12(double s, double tau) const;
    double zeta12(double s, double tau) const;
    double f12_norm2(double s, double tau) const;
    double theta12_plus(double s, double tau) const { return eta12(s, tau).imag(); }
    double theta12_minus(double s, double tau) const;

    // int_{v0}^{v1} w(v) gamma((u-v)/eps) dv on the fixed coarse v-grid
    cplx weighted_gamma_integral(double u, double v0, double v1,
                                 const std::function<double(double)>& w) const;

    // Antiderivative moments M0, M1 of gamma. Zero temperature: exact closed
    // forms. Finite temperature: a dense Hermite table (step eps/8) built once
    // from the exact thermal series, so the sweeps stay O(1) per evaluation.
    void moments_batch(const double* x, std::size_t n, cplx* m0, cplx* m1) const;

    double coarse_panel() const { return vpanel_; }

private:
    TwoLevelSystem sys_;
    ReservoirModel model_;
    CorrelationKernel kern_;
    double eps_{0.0}, lam_{0.0};
    double vpanel_{1.0 / 64.0};
    double upanel_{0.0};       // outer u-panel width: min(eps/4, 1/256)

    bool use_table_{false};
    double tab_h_{0.0};
    std::vector<cplx> tab_m0_, tab_m1_, tab_g_;   // values and slopes at k*tab_h_

    void build_moment_table();

    friend class KernelSweep;
};

// Batched kernel tables over a sorted node set X:
//   zeta(i)  = zeta12(X_i)                    (Lamb-type phase, 1D cumulative)
//   f12sq(i) = ||F12(X_i)||^2
//   f1f2(i)  = <F1(X_i), F2(X_i)>
// plus streamed pair-correlation rows A(X_r, X_j) = <F12(X_r), F12(X_j)>,
// j <= r, visited in ascending row order. Everything is built by cumulative
// sweeps whose inner integrals are exact in gamma.
class KernelSweep {
public:
    KernelSweep(const PhaseKernels& pk, std::vector<double> nodes);

    const std::vector<double>& nodes() const { return x_; }
    const std::vector<double>& zeta() const { return Z_; }
    const std::vector<double>& f12sq() const { return D_; }
    const std::vector<cplx>& f1f2() const { return B_; }

    // consume(row_index, A_row): A_row[j] valid for j <= row_index
    void stream_rows(const std::vector<std::size_t>& rows,
                     const std::function<void(std::size_t, const std::vector<cplx>&)>& consume) const;

    // Full square table A(i,j) for small node sets (higher-order diagnostics).
    std::vector<cplx> full_pair_table() const;

private:
    const PhaseKernels& pk_;
    std::vector<double> x_;
    std::vector<double> Z_, D_;
    std::vector<cplx> B_;
};

} // namespace adilab
