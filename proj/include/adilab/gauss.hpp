// gauss.hpp — fixed-order Gauss–Legendre rules and composite panel integration

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace adilab {

// Nodes/weights on [-1, 1].
struct GL4 {
    static constexpr int n = 4;
    static constexpr std::array<double, 4> x = {
        -0.8611363115940525752239465, -0.3399810435848562648026658,
        0.3399810435848562648026658, 0.8611363115940525752239465};
    static constexpr std::array<double, 4> w = {
        0.3478548451374538573730639, 0.6521451548625461426269361,
        0.6521451548625461426269361, 0.3478548451374538573730639};
};

struct GL8 {
    static constexpr int n = 8;
    static constexpr std::array<double, 8> x = {
        -0.9602898564975362316835609, -0.7966664774136267395915539,
        -0.5255324099163289858177390, -0.1834346424956498049394761,
        0.1834346424956498049394761, 0.5255324099163289858177390,
        0.7966664774136267395915539, 0.9602898564975362316835609};
    static constexpr std::array<double, 8> w = {
        0.1012285362903762591525314, 0.2223810344533744705443560,
        0.3137066458778872873379622, 0.3626837833783619829651504,
        0.3626837833783619829651504, 0.3137066458778872873379622,
        0.2223810344533744705443560, 0.1012285362903762591525314};
};

template <class Rule, class F>
double gl_integrate(F&& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < Rule::n; ++i) acc += Rule::w[i] * f(c + h * Rule::x[i]);
    return acc * h;
}

// Composite rule over n_panels equal panels of [a, b].
template <class Rule, class F>
double gl_composite(F&& f, double a, double b, std::size_t n_panels) {
    double acc = 0.0;
    const double w = (b - a) / static_cast<double>(n_panels);
    for (std::size_t p = 0; p < n_panels; ++p)
        acc += gl_integrate<Rule>(f, a + w * static_cast<double>(p), a + w * static_cast<double>(p + 1));
    return acc;
}

// Panel edges 0..n for [a, b].
inline std::vector<double> panel_edges(double a, double b, std::size_t n_panels) {
    std::vector<double> e(n_panels + 1);
    const double w = (b - a) / static_cast<double>(n_panels);
    for (std::size_t k = 0; k <= n_panels; ++k) e[k] = a + w * static_cast<double>(k);
    e.back() = b;
    return e;
}

// Deterministic pairwise (fixed-tree) summation of partial results.
inline double pairwise_sum(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::size_t n = v.size();
    while (n > 1) {
        std::size_t half = (n + 1) / 2;
        for (std::size_t i = 0; i + half < n; ++i) v[i] += v[i + half];
        n = half;
    }
    return v[0];
}

} // namespace adilab
