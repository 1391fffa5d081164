// phases.cpp — exact kernel evaluators and batched kernel sweeps

#include "adilab/phases.hpp"
#include "adilab/gauss.hpp"
#include "adilab/common.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace adilab {

namespace {

// Panel edges of [v0, v1] on the absolute coarse grid k*h (plus both ends).
void coarse_edges(double v0, double v1, double h, std::vector<double>& out) {
    out.clear();
    out.push_back(v0);
    double k = std::floor(v0 / h) + 1.0;
    for (double e = k * h; e < v1 - 1e-15; e += h) {
        if (e > v0 + 1e-15) out.push_back(e);
    }
    out.push_back(v1);
}

} // namespace

PhaseKernels::PhaseKernels(TwoLevelSystem sys, ReservoirModel model, double eps, double lambda)
    : sys_(std::move(sys)), model_(model), kern_(model), eps_(eps), lam_(lambda) {
    if (!(eps > 0.0)) throw config_error("PhaseKernels: eps must be positive");
    if (lambda < 0.0) throw config_error("PhaseKernels: lambda must be nonnegative");
    upanel_ = std::min(eps_ / 4.0, 1.0 / 256.0);
    if (!model_.zero_temperature() && lam_ > 0.0) build_moment_table();
}

void PhaseKernels::build_moment_table() {
    // kernel argument x = (u - v)/eps spans [-1/eps, 1/eps]; negative x by
    // conjugation. Step eps/8 resolves the kernel's own scales comfortably.
    tab_h_ = eps_ / 8.0;
    const std::size_t n = static_cast<std::size_t>(std::ceil(1.0 / (eps_ * tab_h_))) + 4;
    std::vector<double> xs(n + 1);
    for (std::size_t k = 0; k <= n; ++k) xs[k] = static_cast<double>(k) * tab_h_;
    tab_m0_.resize(n + 1);
    tab_m1_.resize(n + 1);
    tab_g_.resize(n + 1);
    kern_.moments_batch(xs.data(), n + 1, tab_m0_.data(), tab_m1_.data());
    for (std::size_t k = 0; k <= n; ++k) tab_g_[k] = kern_.gamma(xs[k]);
    use_table_ = true;
}

void PhaseKernels::moments_batch(const double* x, std::size_t n, cplx* m0, cplx* m1) const {
    if (!use_table_) {
        kern_.moments_batch(x, n, m0, m1);
        return;
    }
    const std::size_t last = tab_m0_.size() - 1;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::fabs(x[i]);
        const double pos = a / tab_h_;
        const std::size_t k = std::min(static_cast<std::size_t>(pos), last - 1);
        const double t = pos - static_cast<double>(k);
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
        const double xk = static_cast<double>(k) * tab_h_, xk1 = xk + tab_h_;
        const cplx d0a = tab_g_[k], d0b = tab_g_[k + 1];             // M0' = gamma
        const cplx d1a = xk * tab_g_[k], d1b = xk1 * tab_g_[k + 1];  // M1' = x gamma
        cplx v0 = h00 * tab_m0_[k] + h01 * tab_m0_[k + 1] + tab_h_ * (h10 * d0a + h11 * d0b);
        cplx v1 = h00 * tab_m1_[k] + h01 * tab_m1_[k + 1] + tab_h_ * (h10 * d1a + h11 * d1b);
        if (x[i] < 0.0) {
            v0 = -std::conj(v0);
            v1 = std::conj(v1);
        }
        m0[i] = v0;
        m1[i] = v1;
    }
}

double PhaseKernels::phi12(double s, double tau) const {
    return gl_composite<GL8>([&](double u) { return sys_.e1(u) - sys_.e2(u); }, tau, s, 32) / eps_;
}

cplx PhaseKernels::weighted_gamma_integral(double u, double v0, double v1,
                                           const std::function<double(double)>& w) const {
    if (v1 <= v0) return 0.0;
    std::vector<double> edges;
    coarse_edges(v0, v1, vpanel_, edges);
    const std::size_t ne = edges.size();
    std::vector<double> xs(ne), wv(ne);
    for (std::size_t k = 0; k < ne; ++k) {
        xs[k] = (u - edges[k]) / eps_;
        wv[k] = w(edges[k]);
    }
    std::vector<cplx> m0(ne), m1(ne);
    moments_batch(xs.data(), ne, m0.data(), m1.data());
    cplx acc = 0.0;
    for (std::size_t k = 0; k + 1 < ne; ++k) {
        const double dv = edges[k + 1] - edges[k];
        const double b1c = (wv[k + 1] - wv[k]) / dv;            // slope
        const double b0c = wv[k] - b1c * edges[k];              // intercept
        const cplx dM0 = m0[k] - m0[k + 1];                     // x decreases with v
        const cplx dM1 = m1[k] - m1[k + 1];
        acc += eps_ * ((b0c + b1c * u) * dM0 - b1c * eps_ * dM1);
    }
    return acc;
}

cplx PhaseKernels::eta12(double s, double tau) const {
    if (s == tau) return 0.0;
    if (s < tau) return std::conj(eta12(tau, s));
    auto b1f = [&](double v) { return sys_.b1(v); };
    auto b12f = [&](double v) { return sys_.b12(v); };
    const std::size_t np = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil((s - tau) / upanel_)));
    double rr = 0.0, i1 = 0.0, i2 = 0.0;
    const double h = (s - tau) / static_cast<double>(np);
    for (std::size_t p = 0; p < np; ++p) {
        const double a = tau + h * static_cast<double>(p);
        const double c = a + 0.5 * h, hw = 0.5 * h;
        for (int g = 0; g < GL8::n; ++g) {
            const double u = c + hw * GL8::x[g];
            const double wgt = GL8::w[g] * hw;
            rr += wgt * sys_.b12(u) * weighted_gamma_integral(u, tau, s, b12f).real();
            i1 += wgt * sys_.b12(u) * weighted_gamma_integral(u, 0.0, s, b1f).imag();
            i2 += wgt * sys_.b2(u) * weighted_gamma_integral(u, 0.0, tau, b12f).imag();
        }
    }
    const double pref = sqr(lam_) / (2.0 * sqr(eps_));
    return pref * cplx{0.5 * rr, i1 - i2};
}

double PhaseKernels::zeta12(double s, double tau) const {
    if (s == tau) return 0.0;
    if (s < tau) return -zeta12(tau, s);
    auto b1f = [&](double v) { return sys_.b1(v); };
    auto b2f = [&](double v) { return sys_.b2(v); };
    const std::size_t np = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil((s - tau) / upanel_)));
    double acc = 0.0;
    const double h = (s - tau) / static_cast<double>(np);
    for (std::size_t p = 0; p < np; ++p) {
        const double a = tau + h * static_cast<double>(p);
        const double c = a + 0.5 * h, hw = 0.5 * h;
        for (int g = 0; g < GL8::n; ++g) {
            const double u = c + hw * GL8::x[g];
            const double wgt = GL8::w[g] * hw;
            acc += wgt * (sys_.b1(u) * weighted_gamma_integral(u, 0.0, u, b1f).imag() -
                          sys_.b2(u) * weighted_gamma_integral(u, 0.0, u, b2f).imag());
        }
    }
    return -sqr(lam_) / (2.0 * sqr(eps_)) * acc;
}

double PhaseKernels::f12_norm2(double s, double tau) const {
    if (s == tau) return 0.0;
    if (s < tau) std::swap(s, tau);
    auto b12f = [&](double v) { return sys_.b12(v); };
    const std::size_t np = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil((s - tau) / upanel_)));
    double acc = 0.0;
    const double h = (s - tau) / static_cast<double>(np);
    for (std::size_t p = 0; p < np; ++p) {
        const double a = tau + h * static_cast<double>(p);
        const double c = a + 0.5 * h, hw = 0.5 * h;
        for (int g = 0; g < GL8::n; ++g) {
            const double u = c + hw * GL8::x[g];
            // symmetrization: keep the real part, the exact value is real
            acc += GL8::w[g] * hw * sys_.b12(u) * weighted_gamma_integral(u, tau, s, b12f).real();
        }
    }
    return sqr(lam_ / eps_) * acc;
}

double PhaseKernels::theta12_minus(double s, double tau) const {
    auto b2f = [&](double v) { return sys_.b2(v); };
    auto b12f = [&](double v) { return sys_.b12(v); };
    const double q = sqr(lam_ / eps_);
    auto pairB = [&](double x) {   // <F1(x), F2(x)>
        if (x <= 0.0) return cplx{0.0, 0.0};
        const std::size_t np = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(x / upanel_)));
        cplx acc = 0.0;
        const double h = x / static_cast<double>(np);
        for (std::size_t p = 0; p < np; ++p) {
            const double a = h * static_cast<double>(p), c = a + 0.5 * h, hw = 0.5 * h;
            for (int g = 0; g < GL8::n; ++g) {
                const double u = c + hw * GL8::x[g];
                acc += GL8::w[g] * hw * sys_.b1(u) * weighted_gamma_integral(u, 0.0, x, b2f);
            }
        }
        return q * acc;
    };
    auto pairA = [&](double x, double y) {   // <F12(x), F12(y)>
        if (x <= 0.0 || y <= 0.0) return cplx{0.0, 0.0};
        const std::size_t np = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(x / upanel_)));
        cplx acc = 0.0;
        const double h = x / static_cast<double>(np);
        for (std::size_t p = 0; p < np; ++p) {
            const double a = h * static_cast<double>(p), c = a + 0.5 * h, hw = 0.5 * h;
            for (int g = 0; g < GL8::n; ++g) {
                const double u = c + hw * GL8::x[g];
                acc += GL8::w[g] * hw * sys_.b12(u) * weighted_gamma_integral(u, 0.0, y, b12f);
            }
        }
        return q * acc;
    };
    return 0.5 * (pairB(s).imag() - pairB(tau).imag() - pairA(s, tau).imag());
}

KernelSweep::KernelSweep(const PhaseKernels& pk, std::vector<double> nodes)
    : pk_(pk), x_(std::move(nodes)) {
    assert(std::is_sorted(x_.begin(), x_.end()));
    const std::size_t n = x_.size();
    Z_.assign(n, 0.0);
    D_.assign(n, 0.0);
    B_.assign(n, cplx{0.0, 0.0});
    if (pk_.lam_ == 0.0 || n == 0) return;

    const TwoLevelSystem& sys = pk_.sys_;
    const double eps = pk_.eps_, hv = pk_.vpanel_;
    const double q = sqr(pk_.lam_ / eps);
    const double zpref = -0.5 * q;

    std::vector<double> edges, xs, w1v, w2v;
    std::vector<cplx> m0, m1;

    double zacc = 0.0, dacc = 0.0;
    cplx bacc = 0.0;
    double prev = 0.0;

    for (std::size_t i = 0; i < n; ++i) {
        const double target = x_[i];
        double segs = std::ceil((target - prev) / (0.05 * eps));
        const std::size_t ns = static_cast<std::size_t>(std::clamp(segs, 1.0, 4096.0));
        for (std::size_t sgi = 0; sgi < ns; ++sgi) {
            const double a = prev + (target - prev) * static_cast<double>(sgi) / static_cast<double>(ns);
            const double b = prev + (target - prev) * static_cast<double>(sgi + 1) / static_cast<double>(ns);
            const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
            if (hw <= 0.0) continue;
            for (int g = 0; g < GL4::n; ++g) {
                const double u = c + hw * GL4::x[g];
                const double wgt = GL4::w[g] * hw;
                coarse_edges(0.0, u, hv, edges);
                const std::size_t ne = edges.size();
                xs.resize(ne);
                w1v.resize(ne);
                w2v.resize(ne);
                m0.resize(ne);
                m1.resize(ne);
                for (std::size_t k = 0; k < ne; ++k) {
                    xs[k] = (u - edges[k]) / eps;
                    w1v[k] = sys.b1(edges[k]);
                    w2v[k] = sys.b2(edges[k]);
                }
                pk_.moments_batch(xs.data(), ne, m0.data(), m1.data());
                cplx W1 = 0.0, W2 = 0.0;
                for (std::size_t k = 0; k + 1 < ne; ++k) {
                    const double dv = edges[k + 1] - edges[k];
                    const cplx dM0 = m0[k] - m0[k + 1];
                    const cplx dM1 = m1[k] - m1[k + 1];
                    const double s1 = (w1v[k + 1] - w1v[k]) / dv, c1 = w1v[k] - s1 * edges[k];
                    const double s2 = (w2v[k + 1] - w2v[k]) / dv, c2 = w2v[k] - s2 * edges[k];
                    W1 += eps * ((c1 + s1 * u) * dM0 - s1 * eps * dM1);
                    W2 += eps * ((c2 + s2 * u) * dM0 - s2 * eps * dM1);
                }
                const cplx W12 = W1 - W2;
                const double b1u = sys.b1(u), b2u = sys.b2(u), b12u = b1u - b2u;
                zacc += wgt * zpref * (b1u * W1.imag() - b2u * W2.imag());
                dacc += wgt * 2.0 * q * b12u * W12.real();
                bacc += wgt * q * (b1u * W2 + b2u * std::conj(W1));
            }
        }
        Z_[i] = zacc;
        D_[i] = dacc;
        B_[i] = bacc;
        prev = target;
    }
}

void KernelSweep::stream_rows(const std::vector<std::size_t>& rows,
                              const std::function<void(std::size_t, const std::vector<cplx>&)>& consume) const {
    const std::size_t n = x_.size();
    std::vector<cplx> A(n, cplx{0.0, 0.0});
    if (pk_.lam_ == 0.0) {
        for (std::size_t r : rows) consume(r, A);
        return;
    }
    const TwoLevelSystem& sys = pk_.sys_;
    const double eps = pk_.eps_;
    const double q = sqr(pk_.lam_ / eps);

    std::vector<double> xs(n + 1), b12v(n + 1);
    std::vector<cplx> m0(n + 1), m1(n + 1), S(n);
    // column edge list: 0, x_0, x_1, ... (panels between consecutive columns)
    std::vector<double> cedges(n + 1);
    cedges[0] = 0.0;
    for (std::size_t j = 0; j < n; ++j) cedges[j + 1] = x_[j];
    std::vector<double> bv(n + 1);
    for (std::size_t j = 0; j <= n; ++j) bv[j] = sys.b12(cedges[j]);

    double prev = 0.0;
    for (std::size_t r : rows) {
        const double target = x_[r];
        double segs = std::ceil((target - prev) / (0.05 * eps));
        const std::size_t ns = static_cast<std::size_t>(std::clamp(segs, 1.0, 4096.0));
        for (std::size_t sgi = 0; sgi < ns; ++sgi) {
            const double a = prev + (target - prev) * static_cast<double>(sgi) / static_cast<double>(ns);
            const double b = prev + (target - prev) * static_cast<double>(sgi + 1) / static_cast<double>(ns);
            const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
            if (hw <= 0.0) continue;
            for (int g = 0; g < GL4::n; ++g) {
                const double u = c + hw * GL4::x[g];
                const double wgt = GL4::w[g] * hw * q * sys.b12(u);
                for (std::size_t k = 0; k <= n; ++k) xs[k] = (u - cedges[k]) / eps;
                pk_.moments_batch(xs.data(), n + 1, m0.data(), m1.data());
                cplx run = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    const double dv = cedges[j + 1] - cedges[j];
                    if (dv > 0.0) {
                        const cplx dM0 = m0[j] - m0[j + 1];
                        const cplx dM1 = m1[j] - m1[j + 1];
                        const double sl = (bv[j + 1] - bv[j]) / dv, ic = bv[j] - sl * cedges[j];
                        run += eps * ((ic + sl * u) * dM0 - sl * eps * dM1);
                    }
                    S[j] = run;
                }
                for (std::size_t j = 0; j < n; ++j) A[j] += wgt * S[j];
            }
        }
        prev = target;
        consume(r, A);
    }
}

std::vector<cplx> KernelSweep::full_pair_table() const {
    const std::size_t n = x_.size();
    std::vector<cplx> table(n * n, cplx{0.0, 0.0});
    std::vector<std::size_t> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = i;
    stream_rows(rows, [&](std::size_t r, const std::vector<cplx>& A) {
        for (std::size_t j = 0; j <= r; ++j) {
            table[r * n + j] = A[j];
            table[j * n + r] = std::conj(A[j]);
        }
    });
    return table;
}

} // namespace adilab
