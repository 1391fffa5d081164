// kato.hpp — Kato generator, transported intertwiner W_K(t) and the free
// adiabatic transition kernel

#pragma once

#include "adilab/system.hpp"

#include <Eigen/Dense>
#include <vector>

namespace adilab {

// K(t) = sum_j (dP_j) P_j from the analytic drive derivative.
Eigen::Matrix2d kato_generator(const TwoLevelSystem& sys, double t);
// Finite-difference fallback/oracle built from the projectors alone.
Eigen::Matrix2d kato_generator_fd(const TwoLevelSystem& sys, double t, double h = 1e-4);

struct KatoGridSpec {
    double step{1.0 / 1024.0};
    double unitarity_tol{1e-10};
    double intertwine_tol{1e-8};
    bool reunitarize{true};
};

// Integrates dW/dt = K(t) W on a uniform grid with a classical 4th-order
// one-step scheme plus projective re-unitarization, then certifies unitarity
// and the intertwining property. Immutable afterwards.
class KatoTransport {
public:
    static KatoTransport transport(const TwoLevelSystem& sys, const KatoGridSpec& spec = {});

    const TwoLevelSystem& system() const { return sys_; }
    double step() const { return h_; }
    std::size_t grid_size() const { return t_.size(); }
    double unitarity_residual() const { return unit_res_; }
    double intertwine_residual() const { return inter_res_; }

    // transition amplitude c(t) = <psi2(0)| W^T K(t) W |psi1(0)>
    double c_amp(double t) const;
    // two-time free transition kernel; real for this commuting family
    double q12(double s, double tau) const;
    double p_free(double eps, double t) const { return eps * eps * q12(t, t); }
    // int_0^t (e1 - e2) du, exact per-step quadrature of the gap expression
    double phi_raw(double t) const;

    Eigen::Matrix2d w_at(double t) const;       // interpolated intertwiner
    Eigen::Matrix2d w_node(std::size_t i) const { return W_[i]; }
    double t_node(std::size_t i) const { return t_[i]; }

private:
    TwoLevelSystem sys_;
    double h_{0.0};
    std::vector<double> t_, c_, E_;             // E = cumulative of e1 - e2
    std::vector<Eigen::Matrix2d> W_;
    double unit_res_{0.0}, inter_res_{0.0};

    double interp_c(double t) const;
};

} // namespace adilab
