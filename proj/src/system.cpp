// system.cpp — drive profiles, spectral data, assumption certification

#include "adilab/system.hpp"
#include "adilab/common.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace adilab {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

// Degree-(2N+1) smoothstep coefficients of x^(N+1+k), k = 0..N.
std::vector<double> smoothstep_coeffs(int N) {
    std::vector<double> c(static_cast<std::size_t>(N) + 1);
    for (int k = 0; k <= N; ++k)
        c[static_cast<std::size_t>(k)] =
            (k % 2 ? -1.0 : 1.0) * binom(N + k, k) * binom(2 * N + 1, N - k);
    return c;
}

} // namespace

DriveProfile DriveProfile::smoothstep(int order, double t_flat) {
    if (order < 5 || order % 2 == 0)
        throw config_error("smoothstep profile order must be odd and >= 5 "
                           "(order < 5 cannot satisfy four vanishing derivatives)");
    if (t_flat < 0.0 || t_flat >= 1.0) throw config_error("t_flat must lie in [0, 1)");
    DriveProfile p;
    p.kind = Kind::Smoothstep;
    p.order = order;
    p.t_flat = t_flat;
    return p;
}

DriveProfile DriveProfile::monomial(int order) {
    if (order < 5 || order % 2 == 0)
        throw config_error("monomial profile order must be odd and >= 5");
    DriveProfile p;
    p.kind = Kind::Monomial;
    p.order = order;
    return p;
}

DriveProfile DriveProfile::linear() {
    DriveProfile p;
    p.kind = Kind::Linear;
    p.order = 1;
    return p;
}

int DriveProfile::flat_start_order() const {
    switch (kind) {
        case Kind::Smoothstep: return (order - 1) / 2;
        case Kind::Monomial: return (order + 1) / 2 - 1;
        case Kind::Linear: return 0;
    }
    return 0;
}

double DriveProfile::s(double t) const {
    switch (kind) {
        case Kind::Linear:
            return std::clamp(t, 0.0, 1.0);
        case Kind::Monomial: {
            if (t <= 0.0) return 0.0;
            if (t >= 1.0) return 1.0;
            return std::pow(t, (order + 1) / 2);
        }
        case Kind::Smoothstep: {
            double x = (t - t_flat) / (1.0 - t_flat);
            if (x <= 0.0) return 0.0;
            if (x >= 1.0) return 1.0;
            const int N = (order - 1) / 2;
            const auto c = smoothstep_coeffs(N);
            double acc = 0.0;
            for (int k = N; k >= 0; --k) acc = acc * x + c[static_cast<std::size_t>(k)];
            return acc * std::pow(x, N + 1);
        }
    }
    return 0.0;
}

double DriveProfile::ds(double t) const {
    switch (kind) {
        case Kind::Linear:
            return (t >= 0.0 && t <= 1.0) ? 1.0 : 0.0;
        case Kind::Monomial: {
            if (t <= 0.0 || t > 1.0) return (t == 1.0) ? static_cast<double>((order + 1) / 2) : 0.0;
            const int k = (order + 1) / 2;
            return k * std::pow(t, k - 1);
        }
        case Kind::Smoothstep: {
            double x = (t - t_flat) / (1.0 - t_flat);
            if (x <= 0.0 || x >= 1.0) return 0.0;
            const int N = (order - 1) / 2;
            const auto c = smoothstep_coeffs(N);
            double acc = 0.0;
            for (int k = N; k >= 0; --k)
                acc = acc * x + c[static_cast<std::size_t>(k)] * (N + 1 + k);
            return acc * std::pow(x, N) / (1.0 - t_flat);
        }
    }
    return 0.0;
}

Eigen::Vector2d TwoLevelSystem::psi1(double t) const {
    const double h = 0.5 * theta(t);
    return {-std::sin(h), std::cos(h)};
}

Eigen::Vector2d TwoLevelSystem::psi2(double t) const {
    const double h = 0.5 * theta(t);
    return {std::cos(h), std::sin(h)};
}

Eigen::Matrix2d TwoLevelSystem::p1(double t) const {
    const Eigen::Vector2d v = psi1(t);
    return v * v.transpose();
}

Eigen::Matrix2d TwoLevelSystem::p2(double t) const {
    const Eigen::Vector2d v = psi2(t);
    return v * v.transpose();
}

Eigen::Matrix2d TwoLevelSystem::hs(double t) const {
    const double th = theta(t), g = e21(t), eb = mean_energy(t);
    Eigen::Matrix2d m;
    m << eb + 0.5 * g * std::cos(th), 0.5 * g * std::sin(th),
         0.5 * g * std::sin(th), eb - 0.5 * g * std::cos(th);
    return m;
}

Eigen::Matrix2d TwoLevelSystem::bop(double t) const {
    return b1(t) * p1(t) + b2(t) * p2(t);
}

Eigen::Matrix2d TwoLevelSystem::kato_k(double t) const {
    Eigen::Matrix2d j;
    j << 0.0, -1.0, 1.0, 0.0;
    return 0.5 * dtheta(t) * j;
}

double TwoLevelSystem::max_abs_gap() const {
    double m = 0.0;
    for (int i = 0; i <= 512; ++i) m = std::max(m, std::fabs(e21(i / 512.0)));
    return m;
}

double TwoLevelSystem::max_abs_dtheta() const {
    double m = 0.0;
    for (int i = 0; i <= 2048; ++i) m = std::max(m, std::fabs(dtheta(i / 2048.0)));
    return m;
}

SpectralData spectral_data(const TwoLevelSystem& sys, double t) {
    SpectralData d;
    d.e1 = sys.e1(t);
    d.e2 = sys.e2(t);
    d.b1 = sys.b1(t);
    d.b2 = sys.b2(t);
    d.psi1 = sys.psi1(t);
    d.psi2 = sys.psi2(t);
    d.P1 = sys.p1(t);
    d.P2 = sys.p2(t);
    return d;
}

std::string AssumptionReport::summary() const {
    std::ostringstream os;
    for (const auto& c : checks) {
        os << (c.pass ? "PASS " : "FAIL ") << c.name
           << "  worst " << c.worst_value << " at t=" << c.worst_t;
        if (!c.detail.empty()) os << "  (" << c.detail << ")";
        os << '\n';
    }
    os << (all_pass ? "all assumptions hold" : "assumption violation detected") << '\n';
    return os.str();
}

namespace {

// n-th derivative by 5-point central differences, n = 1..4.
double fd5(const std::function<double(double)>& f, double t, double h, int n) {
    const double f2 = f(t + 2 * h), f1 = f(t + h), f0 = f(t), fm1 = f(t - h), fm2 = f(t - 2 * h);
    switch (n) {
        case 1: return (-f2 + 8 * f1 - 8 * fm1 + fm2) / (12 * h);
        case 2: return (-f2 + 16 * f1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h);
        case 3: return (f2 - 2 * f1 + 2 * fm1 - fm2) / (2 * h * h * h);
        case 4: return (f2 - 4 * f1 + 6 * f0 - 4 * fm1 + fm2) / (h * h * h * h);
    }
    return 0.0;
}

} // namespace

AssumptionReport check_assumptions(const TwoLevelSystem& sys, double tol) {
    if (tol <= 0.0) throw config_error("check_assumptions: tol must be positive");
    AssumptionReport rep;

    // A.1 gap floor: 2048 uniform samples, inflated by a derivative bound.
    {
        AssumptionCheck c;
        c.name = "A.1 gap";
        const int n = 2048;
        double gmin = std::numeric_limits<double>::infinity(), tmin = 0.0, dmax = 0.0;
        double prev = std::fabs(sys.e21(0.0));
        for (int i = 0; i <= n; ++i) {
            const double t = static_cast<double>(i) / n;
            const double g = std::fabs(sys.e21(t));
            if (g < gmin) { gmin = g; tmin = t; }
            if (i > 0) dmax = std::max(dmax, std::fabs(g - prev) * n);
            prev = g;
        }
        const double certified = gmin - 1.5 * dmax * (0.5 / n);
        rep.certified_gap = certified;
        c.worst_value = gmin;
        c.worst_t = tmin;
        const double floor = sys.delta > 0.0 ? sys.delta : tol;
        c.pass = certified >= floor;
        std::ostringstream os;
        os << "certified inf|e21| = " << certified << ", required >= " << floor;
        c.detail = os.str();
        rep.checks.push_back(c);
    }

    // A.2 smoothness: derivative samples of e21, b1, b2, theta stay finite.
    {
        AssumptionCheck c;
        c.name = "A.2 smoothness";
        c.pass = true;
        const double h = 1e-3;
        auto probe = [&](const std::function<double(double)>& f, const char* what) {
            for (int i = 1; i < 32; ++i) {
                const double t = static_cast<double>(i) / 32.0;
                for (int n = 1; n <= 4; ++n) {
                    const double hh = (n <= 2) ? h : 8 * h;
                    const double d = fd5(f, std::clamp(t, 2 * hh, 1 - 2 * hh), hh, n);
                    if (!std::isfinite(d) || std::fabs(d) > 1e8) {
                        c.pass = false;
                        c.worst_value = d;
                        c.worst_t = t;
                        c.detail = std::string("non-smooth ") + what;
                        return;
                    }
                }
            }
        };
        probe([&](double t) { return sys.e21(t); }, "e21");
        if (c.pass) probe([&](double t) { return sys.b1(t); }, "b1");
        if (c.pass) probe([&](double t) { return sys.b2(t); }, "b2");
        if (c.pass) probe([&](double t) { return sys.theta(t); }, "theta");
        rep.checks.push_back(c);
    }

    // A.3 flat start: the one-sided limit of d^n P_j / dt^n at 0+ must vanish
    // for n = 1..4. At any fixed t > 0 these derivatives are nonzero for every
    // admissible profile, so the certificate is a decay test: the magnitude at
    // t = 2h must fall to at most half its value at t = 6h (at-least-linear
    // vanishing), or below the absolute tolerance outright. Step sizes grow
    // with the order so the stencil roundoff (~eps_mach/h^n) stays below tol.
    {
        static const double hn[5] = {0.0, 1e-3, 1e-3, 5e-3, 5e-3};
        for (int n = 1; n <= 4; ++n) {
            AssumptionCheck c;
            c.name = "A.3 flat start, order " + std::to_string(n);
            const double h = hn[n];
            auto dmax = [&](double t) {
                double m = 0.0;
                for (int r = 0; r < 2; ++r)
                    for (int cc = 0; cc < 2; ++cc) {
                        auto f = [&](double u) { return sys.p1(u)(r, cc); };
                        m = std::max(m, std::fabs(fd5(f, t, h, n)));
                    }
                return m;
            };
            const double near = dmax(2 * h), far = dmax(6 * h);
            c.worst_value = near;
            c.worst_t = 2 * h;
            c.pass = near <= tol || near <= 0.5 * far;
            std::ostringstream os;
            os << "|dP/dt^" << n << "| " << near << " at t=" << 2 * h << " vs " << far
               << " at t=" << 6 * h;
            c.detail = os.str();
            rep.checks.push_back(c);
        }
    }

    rep.all_pass = true;
    for (const auto& c : rep.checks) rep.all_pass = rep.all_pass && c.pass;
    return rep;
}

} // namespace adilab
