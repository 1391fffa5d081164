// kato.cpp — transport of the intertwiner and the free transition kernel

#include "adilab/kato.hpp"
#include "adilab/common.hpp"
#include "adilab/gauss.hpp"

#include <algorithm>
#include <cmath>

namespace adilab {

Eigen::Matrix2d kato_generator(const TwoLevelSystem& sys, double t) {
    return sys.kato_k(t);
}

Eigen::Matrix2d kato_generator_fd(const TwoLevelSystem& sys, double t, double h) {
    auto dP = [&](auto P) {
        return (-P(t + 2 * h) + 8.0 * P(t + h) - 8.0 * P(t - h) + P(t - 2 * h)) / (12.0 * h);
    };
    const Eigen::Matrix2d d1 = dP([&](double u) { return sys.p1(u); });
    const Eigen::Matrix2d d2 = dP([&](double u) { return sys.p2(u); });
    return d1 * sys.p1(t) + d2 * sys.p2(t);
}

namespace {

// One Newton–Schulz sweep toward the orthogonal polar factor.
inline Eigen::Matrix2d reorthogonalize(const Eigen::Matrix2d& w) {
    Eigen::Matrix2d x = w;
    for (int it = 0; it < 2; ++it)
        x = 0.5 * x * (3.0 * Eigen::Matrix2d::Identity() - x.transpose() * x);
    return x;
}

} // namespace

KatoTransport KatoTransport::transport(const TwoLevelSystem& sys, const KatoGridSpec& spec) {
    KatoTransport kt;
    kt.sys_ = sys;

    const double dtheta_max = sys.max_abs_dtheta();
    double h = spec.step;
    if (dtheta_max > 0.0) h = std::min(h, 0.1 / dtheta_max);
    const std::size_t n = std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(1.0 / h)));
    kt.h_ = 1.0 / static_cast<double>(n);

    kt.t_.resize(n + 1);
    kt.W_.resize(n + 1);
    kt.c_.resize(n + 1);
    kt.E_.resize(n + 1);

    const Eigen::Vector2d v1 = sys.psi1(0.0), v2 = sys.psi2(0.0);
    Eigen::Matrix2d w = Eigen::Matrix2d::Identity();
    const double hh = kt.h_;

    for (std::size_t i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) * hh;
        kt.t_[i] = t;
        if (i > 0) {
            const double t0 = t - hh;
            const Eigen::Matrix2d k1 = sys.kato_k(t0) * w;
            const Eigen::Matrix2d k2 = sys.kato_k(t0 + 0.5 * hh) * (w + 0.5 * hh * k1);
            const Eigen::Matrix2d k3 = sys.kato_k(t0 + 0.5 * hh) * (w + 0.5 * hh * k2);
            const Eigen::Matrix2d k4 = sys.kato_k(t0 + hh) * (w + hh * k3);
            w = w + (hh / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (spec.reunitarize) w = reorthogonalize(w);
            kt.E_[i] = kt.E_[i - 1] +
                       gl_integrate<GL8>([&](double u) { return sys.e1(u) - sys.e2(u); }, t0, t);
        } else {
            kt.E_[0] = 0.0;
        }
        kt.W_[i] = w;
        kt.c_[i] = v2.dot(w.transpose() * sys.kato_k(t) * w * v1);

        const double u_res = (w.transpose() * w - Eigen::Matrix2d::Identity()).norm();
        const double i_res = (w * sys.p1(0.0) - sys.p1(t) * w).norm();
        kt.unit_res_ = std::max(kt.unit_res_, u_res);
        kt.inter_res_ = std::max(kt.inter_res_, i_res);
    }

    if (spec.reunitarize) {
        if (kt.unit_res_ > spec.unitarity_tol)
            throw numerical_error("kato transport: unitarity drift " + std::to_string(kt.unit_res_) +
                                  " exceeds tolerance");
        if (kt.inter_res_ > spec.intertwine_tol)
            throw numerical_error("kato transport: intertwining residual " + std::to_string(kt.inter_res_) +
                                  " exceeds tolerance");
    }
    return kt;
}

namespace {

// 4-point Lagrange cubic on a uniform grid; the stencil shifts at the ends so
// the O(h^4) accuracy is uniform.
struct CubicStencil {
    std::size_t i0;
    double w[4];
};

inline CubicStencil cubic_stencil(double x, std::size_t n) {
    std::size_t i = std::min(static_cast<std::size_t>(x), n - 1);
    std::size_t s0 = (i == 0) ? 0 : std::min(i - 1, n - 3);
    const double xi = x - static_cast<double>(s0);
    CubicStencil st;
    st.i0 = s0;
    st.w[0] = -(xi - 1) * (xi - 2) * (xi - 3) / 6.0;
    st.w[1] = xi * (xi - 2) * (xi - 3) / 2.0;
    st.w[2] = -xi * (xi - 1) * (xi - 3) / 2.0;
    st.w[3] = xi * (xi - 1) * (xi - 2) / 6.0;
    return st;
}

} // namespace

double KatoTransport::interp_c(double t) const {
    const std::size_t n = t_.size() - 1;
    const double x = std::clamp(t, 0.0, 1.0) / h_;
    const CubicStencil st = cubic_stencil(x, n);
    return st.w[0] * c_[st.i0] + st.w[1] * c_[st.i0 + 1] + st.w[2] * c_[st.i0 + 2] +
           st.w[3] * c_[st.i0 + 3];
}

double KatoTransport::c_amp(double t) const { return interp_c(t); }

double KatoTransport::q12(double s, double tau) const {
    const double g = sys_.e21(tau);
    return interp_c(tau) * interp_c(s) / (g * g);
}

double KatoTransport::phi_raw(double t) const {
    const double tc = std::clamp(t, 0.0, 1.0);
    const std::size_t i = std::min(static_cast<std::size_t>(tc / h_), t_.size() - 1);
    const double base = E_[i], a = t_[i];
    if (tc <= a) return base;
    return base + gl_integrate<GL8>([&](double u) { return sys_.e1(u) - sys_.e2(u); }, a, tc);
}

Eigen::Matrix2d KatoTransport::w_at(double t) const {
    const std::size_t n = t_.size() - 1;
    const double x = std::clamp(t, 0.0, 1.0) / h_;
    const CubicStencil st = cubic_stencil(x, n);
    return st.w[0] * W_[st.i0] + st.w[1] * W_[st.i0 + 1] + st.w[2] * W_[st.i0 + 2] +
           st.w[3] * W_[st.i0 + 3];
}

} // namespace adilab
