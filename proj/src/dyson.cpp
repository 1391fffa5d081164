// dyson.cpp — oscillatory quadrature of the first Dyson term and companions

#include "adilab/dyson.hpp"
#include "adilab/gauss.hpp"
#include "adilab/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace adilab {

namespace {

struct NodeGrid {
    std::size_t n_panels{0};
    std::vector<double> edges;           // n_panels + 1
    std::vector<double> x;               // sorted node set: global + partial
    std::vector<std::size_t> global;     // positions of global nodes in x (row order)
    std::vector<double> gweight;         // quadrature weight of each global node
    // for each global node: the 8 partial tau-nodes spanning [panel_left, s]
    std::vector<std::array<std::size_t, 8>> partial_idx;
    std::vector<std::array<double, 8>> partial_w;
    std::vector<std::size_t> panel_of_global;
};

// Tensor node layout for the triangle 0 <= tau <= s <= t: global GL8 panels
// for both variables; each s-row closes with a partial panel [edge, s].
NodeGrid build_grid(double t, double eps, double emax, const Dyson1Options& opt) {
    double w = std::min(opt.max_phase_per_panel * eps / std::max(emax, 1e-12), t / 4.0);
    for (int r = 0; r < opt.refine; ++r) w *= 0.5;
    const std::size_t n_panels = static_cast<std::size_t>(std::ceil(t / w));
    if (n_panels > opt.max_panels)
        throw numerical_error("dyson1: unresolved oscillation, " + std::to_string(n_panels) +
                              " panels needed but cap is " + std::to_string(opt.max_panels));

    NodeGrid g;
    g.n_panels = n_panels;
    g.edges = panel_edges(0.0, t, n_panels);

    struct Tag {
        double x;
        bool is_global;
        std::size_t gidx;   // global node serial
        std::size_t slot;   // partial slot 0..7
        double weight;
        std::size_t panel;
    };
    std::vector<Tag> tags;
    const std::size_t n_global = n_panels * 8;
    tags.reserve(n_global * 9);

    std::size_t serial = 0;
    for (std::size_t p = 0; p < n_panels; ++p) {
        const double a = g.edges[p], b = g.edges[p + 1];
        const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
        for (int i = 0; i < GL8::n; ++i, ++serial) {
            const double s = c + hw * GL8::x[i];
            tags.push_back({s, true, serial, 0, GL8::w[i] * hw, p});
            // partial tau panel [a, s]
            const double pc = 0.5 * (a + s), phw = 0.5 * (s - a);
            for (int j = 0; j < GL8::n; ++j)
                tags.push_back({pc + phw * GL8::x[j], false, serial, static_cast<std::size_t>(j),
                                GL8::w[j] * phw, p});
        }
    }
    std::stable_sort(tags.begin(), tags.end(), [](const Tag& l, const Tag& r) { return l.x < r.x; });

    g.x.resize(tags.size());
    g.global.resize(n_global);
    g.gweight.resize(n_global);
    g.panel_of_global.resize(n_global);
    g.partial_idx.resize(n_global);
    g.partial_w.resize(n_global);
    for (std::size_t k = 0; k < tags.size(); ++k) {
        const Tag& tg = tags[k];
        g.x[k] = tg.x;
        if (tg.is_global) {
            g.global[tg.gidx] = k;
            g.gweight[tg.gidx] = tg.weight;
            g.panel_of_global[tg.gidx] = tg.panel;
        } else {
            g.partial_idx[tg.gidx][tg.slot] = k;
            g.partial_w[tg.gidx][tg.slot] = tg.weight;
        }
    }
    return g;
}

} // namespace

Dyson1Result dyson1_exact(const PhaseKernels& pk, const KatoTransport& kt, double t,
                          const Dyson1Options& opt) {
    if (t <= 0.0) return {0.0, 0, 0};
    const TwoLevelSystem& sys = pk.system();
    const double eps = pk.eps();
    const NodeGrid grid = build_grid(t, eps, sys.max_abs_gap(), opt);
    const std::size_t nn = grid.x.size();
    const std::size_t n_global = grid.global.size();

    KernelSweep sweep(pk, grid.x);
    const auto& Z = sweep.zeta();
    const auto& D = sweep.f12sq();
    const auto& B = sweep.f1f2();

    std::vector<double> phi(nn), c(nn);
    for (std::size_t i = 0; i < nn; ++i) {
        phi[i] = kt.phi_raw(grid.x[i]) / eps;
        c[i] = kt.c_amp(grid.x[i]);
    }

    // node id -> panel (for panel-wise partial sums of the full region)
    std::vector<std::vector<std::size_t>> panel_nodes(grid.n_panels);
    for (std::size_t gidx = 0; gidx < n_global; ++gidx)
        panel_nodes[grid.panel_of_global[gidx]].push_back(gidx);

    double total = 0.0;
    std::vector<double> darr, pharr, warr, partials;
    const auto& K = kernels::active();

    std::size_t serial = 0;
    sweep.stream_rows(grid.global, [&](std::size_t si, const std::vector<cplx>& A) {
        const std::size_t gidx = serial++;
        const double s = grid.x[si];
        const double cs = c[si];
        const double Ds = D[si], Zs = Z[si], phis = phi[si], ImBs = B[si].imag();
        const std::size_t my_panel = grid.panel_of_global[gidx];

        partials.clear();
        auto accumulate = [&](const std::size_t* idx, const double* wq, std::size_t cnt) {
            darr.resize(cnt);
            pharr.resize(cnt);
            warr.resize(cnt);
            for (std::size_t k = 0; k < cnt; ++k) {
                const std::size_t j = idx[k];
                const double re = -0.25 * (Ds - 2.0 * A[j].real() + D[j]);
                const double th_plus = 0.5 * (ImBs - B[j].imag() + A[j].imag());
                darr[k] = re;
                pharr[k] = -(phis - phi[j]) + (Zs - Z[j]) - th_plus;
                warr[k] = wq[k] * c[j];
            }
            partials.push_back(K.sum_exp_cos(darr.data(), pharr.data(), warr.data(), cnt));
        };

        std::vector<std::size_t> idxbuf;
        std::vector<double> wbuf;
        for (std::size_t p = 0; p < my_panel; ++p) {
            idxbuf.clear();
            wbuf.clear();
            for (std::size_t gj : panel_nodes[p]) {
                idxbuf.push_back(grid.global[gj]);
                wbuf.push_back(grid.gweight[gj]);
            }
            accumulate(idxbuf.data(), wbuf.data(), idxbuf.size());
        }
        accumulate(grid.partial_idx[gidx].data(), grid.partial_w[gidx].data(), 8);

        total += grid.gweight[gidx] * 2.0 * cs * pairwise_sum(partials);
    });

    return {total, grid.n_panels, nn};
}

LeadingOrder leading_order(const KatoTransport& kt, const ReservoirModel& model,
                           double eps, double lambda, double t) {
    const TwoLevelSystem& sys = kt.system();
    LeadingOrder lo;
    lo.p_free = kt.p_free(eps, t);
    auto integrand = [&](double s) {
        const double q = kt.q12(s, s);
        const double b12 = sys.b12(s);
        const double e12 = sys.e1(s) - sys.e2(s);
        const double hat = model.zero_temperature() ? gamma_hat(model, e12)
                                                    : gamma_hat_thermal(model, e12);
        return eps * eps * q * b12 * b12 * hat;
    };
    lo.p_correction = sqr(lambda) / (2.0 * eps) * gl_composite<GL8>(integrand, 0.0, t, 64);
    return lo;
}

ErrorExponents error_exponents(double m) {
    ErrorExponents e;
    e.m1 = std::min(m, 1.0);
    e.alpha0 = 1.0 / (2.0 + 2.0 * m - e.m1);
    return e;
}

std::string classify_regime(double eps, double lambda, double m, const RegimeThresholds& thr) {
    if (!(eps > 0.0 && eps < 1.0)) throw config_error("classify_regime: eps must lie in (0,1)");
    if (lambda < 0.0) throw config_error("classify_regime: lambda must be nonnegative");
    if (!(m > 0.0)) throw config_error("classify_regime: m must be positive");
    const double root = std::sqrt(eps);
    if (lambda < thr.c_lo * root) return "negligible-coupling";
    if (lambda <= thr.c_hi * root) return "balanced";
    const double m1 = std::min(m, 1.0);
    const double upper = std::pow(eps, std::max(0.25, 0.5 * (1.0 - m1)));
    if (lambda < upper) return "reservoir-assisted";
    return "outside-theorem";
}

Dyson3Result dyson3_magnitude(const PhaseKernels& pk, const KatoTransport& kt, double t,
                              const Dyson3Options& opt) {
    if (t <= 0.0) return {0.0, 0, 0};
    const TwoLevelSystem& sys = pk.system();
    const double eps = pk.eps();
    const double emax = sys.max_abs_gap();

    auto cost_model = [](std::size_t n_nodes) {
        // sum over s of (pairs(s))^2, pairs(s) ~ s^2/2
        double c = 0.0;
        for (std::size_t i = 1; i <= n_nodes; ++i) {
            const double pairs = 0.5 * static_cast<double>(i) * static_cast<double>(i + 1);
            c += pairs * pairs;
        }
        return c;
    };

    const std::size_t min_phase_panels = static_cast<std::size_t>(
        std::ceil(t * emax / (pi * eps)));
    std::size_t panels = std::max<std::size_t>(
        opt.min_panels, static_cast<std::size_t>(std::ceil(t * emax / (opt.max_phase_per_panel * eps))));
    while (panels > std::max(opt.min_panels, min_phase_panels) &&
           cost_model(4 * panels) > static_cast<double>(opt.node_budget))
        --panels;
    if (cost_model(4 * panels) > static_cast<double>(opt.node_budget))
        throw numerical_error("dyson3_magnitude: node budget exhausted before reaching the "
                              "minimum oscillation resolution");

    // GL4 node set
    const std::size_t nn = panels * 4;
    std::vector<double> x(nn), wq(nn);
    {
        const auto edges = panel_edges(0.0, t, panels);
        std::size_t k = 0;
        for (std::size_t p = 0; p < panels; ++p) {
            const double c = 0.5 * (edges[p] + edges[p + 1]), hw = 0.5 * (edges[p + 1] - edges[p]);
            for (int i = 0; i < GL4::n; ++i, ++k) {
                x[k] = c + hw * GL4::x[i];
                wq[k] = GL4::w[i] * hw;
            }
        }
    }

    KernelSweep sweep(pk, x);
    const auto& Z = sweep.zeta();
    const auto& D = sweep.f12sq();
    const auto& B = sweep.f1f2();
    const std::vector<cplx> A = sweep.full_pair_table();
    auto at = [&](std::size_t i, std::size_t j) { return A[i * nn + j]; };

    std::vector<double> phi(nn), c(nn);
    for (std::size_t i = 0; i < nn; ++i) {
        phi[i] = kt.phi_raw(x[i]) / eps;
        c[i] = kt.c_amp(x[i]);
    }
    // E1(v) c(v) w(v): inner one-time phase factor
    std::vector<cplx> V(nn);
    for (std::size_t v = 0; v < nn; ++v) {
        const double th = phi[v] - Z[v] + 0.5 * B[v].imag();
        V[v] = cplx{std::cos(th), -std::sin(th)} * (c[v] * wq[v]);
    }

    std::size_t evals = 0;
    double est = 0.0;
    std::vector<cplx> G;
    std::vector<std::pair<std::size_t, std::size_t>> P;
    for (std::size_t si = 0; si < nn; ++si) {
        P.clear();
        G.clear();
        for (std::size_t ti = 0; ti <= si; ++ti) {
            const double th_minus = 0.5 * (B[si].imag() - B[ti].imag() - at(si, ti).imag());
            const double theta = (phi[si] - phi[ti]) - (Z[si] - Z[ti]) + th_minus;
            const cplx U = cplx{std::cos(theta), -std::sin(theta)} * (c[ti] * wq[ti]);
            for (std::size_t vi = 0; vi <= ti; ++vi) {
                P.emplace_back(ti, vi);
                G.push_back(U * V[vi]);
            }
        }
        const std::size_t np = P.size();
        double inner = 0.0;
        for (std::size_t p = 0; p < np; ++p) {
            inner += std::norm(G[p]);   // X(p,p) = 1
            const auto [ti, vi] = P[p];
            for (std::size_t pp = p + 1; pp < np; ++pp) {
                const auto [tj, vj] = P[pp];
                // X = exp{ i(Im<a,b>/2 - Im<a',b'>/2 + Im<f,g>/2) - ||g-f||^2/4 }
                const double im_ab = (at(si, vi) - at(ti, vi)).imag();
                const double im_ab2 = (at(si, vj) - at(tj, vj)).imag();
                const cplx fg = at(si, si) - at(si, tj) + at(si, vj)
                              - at(ti, si) + at(ti, tj) - at(ti, vj)
                              + at(vi, si) - at(vi, tj) + at(vi, vj);
                const double gmf = D[ti] + D[vi] + D[tj] + D[vj] +
                                   2.0 * (-at(ti, vi) - at(ti, tj) + at(ti, vj)
                                          + at(vi, tj) - at(vi, vj) - at(tj, vj)).real();
                const double ph = 0.5 * (im_ab - im_ab2 + fg.imag());
                const double damp = -0.25 * gmf;
                const cplx Xv = std::exp(damp) * cplx{std::cos(ph), std::sin(ph)};
                inner += 2.0 * (std::conj(G[p]) * G[pp] * Xv).real();
            }
        }
        evals += np * np;
        est += wq[si] * std::fabs(c[si]) * std::sqrt(std::max(0.0, inner));
    }
    return {est, nn, evals};
}

} // namespace adilab
