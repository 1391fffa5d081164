// system.hpp — admissible driven two-level Hamiltonian/coupling families and
// verification of the gap, smoothness and flat-start assumptions

#pragma once

#include "adilab/expr.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace adilab {

// Dimensionless drive schedule s(t) on [0,1] with s(0)=0, s(1)=1.
// Smoothstep: odd-symmetric polynomial of odd degree `order`; its first
// (order-1)/2 derivatives vanish at both ends. An optional leading flat
// segment [0, t_flat] keeps the start exactly static.
// Monomial: s(t) = t^k with k=(order+1)/2 — flat start only, so the drive is
// still moving at t=1 (used when a nonzero end velocity is wanted).
// Linear: s(t) = t; violates the flat-start assumption, kept for tests.
struct DriveProfile {
    enum class Kind { Smoothstep, Monomial, Linear };
    Kind kind{Kind::Smoothstep};
    int order{9};
    double t_flat{0.0};

    double s(double t) const;
    double ds(double t) const;   // ds/dt
    int flat_start_order() const;

    static DriveProfile smoothstep(int order, double t_flat = 0.0);
    static DriveProfile monomial(int order);
    static DriveProfile linear();
};

// Commuting pair H_S(t) = ebar*1 + (e21/2)(cos(theta) sz + sin(theta) sx),
// B(t) = b1*P1 + b2*P2, with theta(t) = theta_max * s(t).
// e21 may be negative: level 1 is then the upper level (downward transition).
struct TwoLevelSystem {
    Expr e21 = Expr::constant(1.0);
    Expr mean_energy = Expr::constant(0.0);
    Expr b1 = Expr::constant(1.0);
    Expr b2 = Expr::constant(-1.0);
    DriveProfile profile{};
    double theta_max{0.0};
    double delta{0.0};   // claimed gap floor, certified by check_assumptions

    double theta(double t) const { return theta_max * profile.s(t); }
    double dtheta(double t) const { return theta_max * profile.ds(t); }
    double gap(double t) const { return e21(t); }               // e2 - e1
    double e1(double t) const { return mean_energy(t) - 0.5 * e21(t); }
    double e2(double t) const { return mean_energy(t) + 0.5 * e21(t); }
    double b12(double t) const { return b1(t) - b2(t); }

    Eigen::Vector2d psi1(double t) const;
    Eigen::Vector2d psi2(double t) const;
    Eigen::Matrix2d p1(double t) const;
    Eigen::Matrix2d p2(double t) const;
    Eigen::Matrix2d hs(double t) const;
    Eigen::Matrix2d bop(double t) const;
    // Kato generator K(t) = sum_j (dP_j)P_j = (theta'/2) * [[0,-1],[1,0]]
    Eigen::Matrix2d kato_k(double t) const;

    double max_abs_gap() const;      // sup |e21| on a sampling grid
    double max_abs_dtheta() const;
};

struct SpectralData {
    double e1, e2, b1, b2;
    Eigen::Matrix2d P1, P2;
    Eigen::Vector2d psi1, psi2;
};
SpectralData spectral_data(const TwoLevelSystem& sys, double t);

struct AssumptionCheck {
    std::string name;
    bool pass{false};
    double worst_value{0.0};
    double worst_t{0.0};
    std::string detail;
};

struct AssumptionReport {
    bool all_pass{false};
    double certified_gap{0.0};
    std::vector<AssumptionCheck> checks;
    std::string summary() const;
};

// Samples |e21| on a fine grid to certify the gap floor, probes C^4 smoothness,
// and finite-differences the projectors near t=0 to certify the flat start.
// Reports structured pass/fail, never throws on a violated assumption.
AssumptionReport check_assumptions(const TwoLevelSystem& sys, double tol = 1e-6);

} // namespace adilab
