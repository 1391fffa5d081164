// oracle.cpp — truncated-Fock Schrödinger integration for moderate (eps, lambda)

#include "adilab/oracle.hpp"
#include "adilab/common.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace adilab {

std::vector<BathMode> discretize(const ReservoirModel& model, const OracleConfig& cfg) {
    model.validate();
    if (!model.zero_temperature())
        throw config_error("oracle: zero temperature only (no finite-dimensional thermal truncation)");
    if (cfg.n_modes < 1) throw config_error("oracle: n_modes must be >= 1");
    std::vector<BathMode> modes(cfg.n_modes);
    const double dw = cfg.omega_max / static_cast<double>(cfg.n_modes);
    for (std::size_t k = 0; k < cfg.n_modes; ++k) {
        const double w = (static_cast<double>(k) + 0.5) * dw;
        modes[k].omega = w;
        modes[k].g = std::sqrt(gamma_hat(model, w) * dw / (2.0 * pi));
    }
    return modes;
}

cplx gamma_discrete(const std::vector<BathMode>& modes, double x) {
    cplx acc = 0.0;
    for (const auto& m : modes)
        acc += m.g * m.g * cplx{std::cos(m.omega * x), -std::sin(m.omega * x)};
    return acc;
}

namespace {

// Fock states with total occupation <= cutoff, stored as sorted mode lists.
struct FockBasis {
    std::size_t n_modes{0};
    std::size_t cutoff{0};
    std::vector<std::vector<std::uint16_t>> states;   // occupied-mode multisets
    std::unordered_map<std::uint64_t, std::size_t> index;

    static std::uint64_t key(const std::vector<std::uint16_t>& occ) {
        // occupation lists are short (<= cutoff); pack 16-bit entries
        std::uint64_t k = 1;
        for (auto m : occ) k = k * 65551u + (m + 1);
        return k;
    }

    void build(std::size_t nm, std::size_t cut) {
        n_modes = nm;
        cutoff = cut;
        states.clear();
        index.clear();
        std::vector<std::uint16_t> cur;
        enumerate(cur, 0);
    }

    void enumerate(std::vector<std::uint16_t>& cur, std::size_t from) {
        index.emplace(key(cur), states.size());
        states.push_back(cur);
        if (cur.size() == cutoff) return;
        for (std::size_t m = from; m < n_modes; ++m) {
            cur.push_back(static_cast<std::uint16_t>(m));
            enumerate(cur, m);
            cur.pop_back();
        }
    }

    std::size_t find(const std::vector<std::uint16_t>& occ) const {
        auto it = index.find(key(occ));
        return it == index.end() ? states.size() : it->second;
    }
};

struct Edge {
    std::uint32_t lo, hi;   // raising: lo -> hi
    double amp;             // g_k sqrt(n_k + 1) / sqrt(2)
};

} // namespace

OracleResult evolve(const TwoLevelSystem& sys, const std::vector<BathMode>& modes,
                    const OracleConfig& cfg, double eps, double lambda, double t) {
    if (!(eps > 0.0)) throw config_error("oracle: eps must be positive");
    if (t < 0.0 || t > 1.0) throw config_error("oracle: t must lie in [0,1]");

    FockBasis basis;
    basis.build(modes.size(), cfg.n_excitations);
    const std::size_t D = basis.states.size();

    // bath energies and raising edges
    std::vector<double> ebath(D, 0.0);
    std::vector<Edge> edges;
    {
        std::vector<std::uint16_t> tmp;
        for (std::size_t i = 0; i < D; ++i) {
            const auto& occ = basis.states[i];
            for (auto m : occ) ebath[i] += modes[m].omega;
            if (occ.size() < cfg.n_excitations) {
                for (std::size_t k = 0; k < modes.size(); ++k) {
                    tmp = occ;
                    tmp.insert(std::upper_bound(tmp.begin(), tmp.end(), static_cast<std::uint16_t>(k)),
                               static_cast<std::uint16_t>(k));
                    const std::size_t j = basis.find(tmp);
                    const double nk = static_cast<double>(std::count(occ.begin(), occ.end(),
                                                                     static_cast<std::uint16_t>(k)));
                    edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                                     modes[k].g * std::sqrt(nk + 1.0) / std::sqrt(2.0)});
                }
            }
        }
    }

    using Vec = Eigen::VectorXcd;
    const std::size_t N = 2 * D;
    Vec psi = Vec::Zero(N);
    {
        const Eigen::Vector2d v1 = sys.psi1(0.0);
        psi[0] = v1[0];
        psi[1] = v1[1];   // vacuum is state 0 by construction
    }

    Vec field(N);
    auto rhs = [&](double tp, const Vec& v, Vec& out) {
        // physical-time Schrödinger equation: d psi/dt_p = -i H(eps t_p) psi
        const Eigen::Matrix2d hsm = sys.hs(eps * tp);
        const Eigen::Matrix2d bm = sys.bop(eps * tp);
        field.setZero();
        for (const auto& e : edges) {
            field[2 * e.hi] += e.amp * v[2 * e.lo];
            field[2 * e.hi + 1] += e.amp * v[2 * e.lo + 1];
            field[2 * e.lo] += e.amp * v[2 * e.hi];
            field[2 * e.lo + 1] += e.amp * v[2 * e.hi + 1];
        }
        const cplx mi{0.0, -1.0};
        for (std::size_t i = 0; i < D; ++i) {
            const cplx a = v[2 * i], b = v[2 * i + 1];
            const cplx fa = field[2 * i], fb = field[2 * i + 1];
            out[2 * i] = mi * (hsm(0, 0) * a + hsm(0, 1) * b + lambda * (bm(0, 0) * fa + bm(0, 1) * fb) +
                               ebath[i] * a);
            out[2 * i + 1] = mi * (hsm(1, 0) * a + hsm(1, 1) * b + lambda * (bm(1, 0) * fa + bm(1, 1) * fb) +
                                   ebath[i] * b);
        }
    };

    double dt = cfg.dt_phys;
    if (dt <= 0.0) {
        const double emax = sys.max_abs_gap();
        dt = 0.05 * std::min(2.0 * pi / cfg.omega_max, 2.0 * pi * eps / std::max(emax, 1e-12));
    }
    const double horizon = t / eps;   // physical-time span
    const std::size_t steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(horizon / dt)));
    const double h = horizon / static_cast<double>(steps);

    Vec k1(N), k2(N), k3(N), k4(N), tmpv(N);
    double drift = 0.0;
    double tr = 0.0;
    for (std::size_t s = 0; s < steps; ++s) {
        rhs(tr, psi, k1);
        tmpv = psi + 0.5 * h * k1;
        rhs(tr + 0.5 * h, tmpv, k2);
        tmpv = psi + 0.5 * h * k2;
        rhs(tr + 0.5 * h, tmpv, k3);
        tmpv = psi + h * k3;
        rhs(tr + h, tmpv, k4);
        psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        tr += h;
        if ((s & 63u) == 0u || s + 1 == steps)
            drift = std::max(drift, std::fabs(psi.norm() - 1.0));
    }

    OracleResult res;
    res.dim = D;
    res.steps = steps;
    res.norm_drift = drift;

    const Eigen::Vector2d v2 = sys.psi2(t);
    double p12 = 0.0;
    for (std::size_t i = 0; i < D; ++i) {
        const cplx amp = v2[0] * psi[2 * i] + v2[1] * psi[2 * i + 1];
        p12 += std::norm(amp);
    }
    res.p12 = p12;

    double leak = 0.0;
    for (std::size_t i = 0; i < D; ++i)
        if (basis.states[i].size() == cfg.n_excitations)
            leak += std::norm(psi[2 * i]) + std::norm(psi[2 * i + 1]);
    res.leakage = leak;

    if (res.norm_drift > cfg.norm_tol)
        throw numerical_error("oracle: norm drift " + std::to_string(res.norm_drift) +
                              " exceeds tolerance; reduce dt");
    if (res.leakage > cfg.leakage_tol)
        throw numerical_error("oracle: occupation-cutoff leakage " + std::to_string(res.leakage) +
                              " exceeds 5%; raise n_excitations");
    return res;
}

} // namespace adilab
