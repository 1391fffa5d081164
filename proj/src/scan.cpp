// scan.cpp — scan execution and CSV emission

#include "adilab/scan.hpp"
#include "adilab/kernels.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <thread>

namespace adilab {

ScanSpec ScanSpec::from_config(const Config& cfg) {
    ScanSpec spec;
    spec.eps_list = cfg.get_list("scan.eps_list", "0.1");
    spec.m_list = cfg.get_list("scan.m_list", "2");
    spec.beta_list = cfg.get_list("scan.beta_list", "inf");
    spec.t_final = cfg.get_double("scan.t_final", 1.0);
    const auto routes = cfg.get_words("scan.routes", "free, leading, dyson1");
    spec.routes.insert(routes.begin(), routes.end());
    spec.output_path = cfg.get("scan.out", "");

    const std::string rule = cfg.get("scan.lam_rule", "");
    if (!rule.empty()) {
        // "power c a" meaning lambda = c * eps^a; "sqrt" = power 1 0.5
        std::vector<std::string> w;
        {
            std::string r = rule;
            for (auto& ch : r)
                if (ch == ',' || ch == ':') ch = ' ';
            std::istringstream ss(r);
            std::string tok;
            while (ss >> tok) w.push_back(tok);
        }
        if (w.size() == 1 && w[0] == "sqrt") {
            spec.use_rule = true;
            spec.lam_coeff = 1.0;
            spec.lam_power = 0.5;
        } else if (w.size() == 3 && w[0] == "power") {
            spec.use_rule = true;
            spec.lam_coeff = std::stod(w[1]);
            spec.lam_power = std::stod(w[2]);
        } else {
            throw config_error("scan.lam_rule must be 'sqrt' or 'power <c> <a>'");
        }
    } else {
        spec.lam_list = cfg.get_list("scan.lam_list", "0");
    }
    spec.validate();
    return spec;
}

void ScanSpec::validate() const {
    if (eps_list.empty()) throw config_error("scan: eps_list must be nonempty");
    for (double e : eps_list)
        if (!(e > 0.0 && e < 1.0)) throw config_error("scan: all eps must lie in (0,1)");
    if (!use_rule)
        for (double l : lam_list)
            if (l < 0.0) throw config_error("scan: all lambda must be >= 0");
    if (use_rule && lam_coeff < 0.0) throw config_error("scan: lambda rule coefficient must be >= 0");
    if (routes.empty()) throw config_error("scan: routes must be nonempty");
    static const std::set<std::string> known{"free", "leading", "dyson1", "dyson3", "oracle"};
    for (const auto& r : routes)
        if (!known.count(r)) throw config_error("scan: unknown route '" + r + "'");
    if (!(t_final > 0.0 && t_final <= 1.0)) throw config_error("scan: t_final must lie in (0,1]");
    if (m_list.empty() || beta_list.empty()) throw config_error("scan: m_list/beta_list must be nonempty");
}

namespace {

struct RowTask {
    double eps, lam, m, beta;
};

ScanRow compute_row(const RowTask& task, const ScanSpec& spec, const Config& cfg,
                    const TwoLevelSystem& sys, const KatoTransport& kt) {
    ScanRow row;
    row.eps = task.eps;
    row.lam = task.lam;
    row.m = task.m;
    row.beta = task.beta;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        ReservoirModel model = reservoir_from_config(cfg);
        model.exponent = task.m;
        model.beta = task.beta;
        model.validate();

        // certified decay power: the spectral exponent drops by one at finite beta
        const double m_eff = model.zero_temperature() ? task.m : task.m - 1.0;

        TransitionReport& rep = row.report;
        rep.t = spec.t_final;
        rep.eps = task.eps;
        rep.lam = task.lam;
        rep.beta = task.beta;
        rep.m = m_eff;
        rep.exponents = error_exponents(m_eff);
        rep.regime = task.lam > 0.0 ? classify_regime(task.eps, task.lam, m_eff,
                                                      RegimeThresholds{cfg.get_double("regime.c_lo", 0.3),
                                                                       cfg.get_double("regime.c_hi", 3.0)})
                                    : "negligible-coupling";

        if (spec.routes.count("free") || spec.routes.count("leading")) {
            const LeadingOrder lo = leading_order(kt, model, task.eps, task.lam, spec.t_final);
            rep.p_free = lo.p_free;
            rep.p_correction = lo.p_correction;
        }
        if (spec.routes.count("dyson1")) {
            PhaseKernels pk(sys, model, task.eps, task.lam);
            Dyson1Options opt;
            opt.max_panels = cfg.get_size("dyson.max_panels", 4096);
            rep.p_dyson1 = dyson1_exact(pk, kt, spec.t_final, opt).value;
            rep.residual = theorem_residual(rep.p_dyson1, rep.p_free, rep.p_correction);
        }
        if (spec.routes.count("dyson3")) {
            PhaseKernels pk(sys, model, task.eps, task.lam);
            Dyson3Options opt;
            opt.node_budget = cfg.get_size("dyson3.node_budget", 20000000);
            rep.omega3_norm = dyson3_magnitude(pk, kt, spec.t_final, opt).value;
        }
        if (spec.routes.count("oracle")) {
            OracleConfig ocfg;
            ocfg.n_modes = cfg.get_size("oracle.n_modes", 48);
            ocfg.omega_max = cfg.get_double("oracle.omega_max", 40.0 * model.omega_D);
            ocfg.n_excitations = cfg.get_size("oracle.n_excitations", 2);
            ocfg.dt_phys = cfg.get_double("oracle.dt", 0.0);
            const auto modes = discretize(model, ocfg);
            row.p_oracle = evolve(sys, modes, ocfg, task.eps, task.lam, spec.t_final).p12;
        }
    } catch (const std::exception& e) {
        std::string msg = e.what();
        for (auto& c : msg)
            if (c == ',' || c == '\n') c = ';';
        row.status = msg;
    }
    row.runtime_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

std::string fmt(double v) {
    if (std::isnan(v)) return "";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::vector<ScanRow> run_scan(const ScanSpec& spec, const Config& cfg, unsigned threads) {
    kernels::select(cfg.get("kernels.backend", "auto"));
    const TwoLevelSystem sys = system_from_config(cfg);

    // assumptions certified once per system
    const AssumptionReport rep = check_assumptions(sys);
    if (!rep.all_pass)
        throw config_error("scan: system assumptions not certified:\n" + rep.summary());

    KatoGridSpec kspec;
    kspec.step = cfg.get_double("kato.step", 1.0 / 1024.0);
    const KatoTransport kt = KatoTransport::transport(sys, kspec);

    std::vector<RowTask> tasks;
    for (double eps : spec.eps_list) {
        std::vector<double> lams;
        if (spec.use_rule) {
            lams.push_back(spec.lam_coeff * std::pow(eps, spec.lam_power));
        } else {
            lams = spec.lam_list;
        }
        for (double lam : lams)
            for (double m : spec.m_list)
                for (double beta : spec.beta_list) tasks.push_back({eps, lam, m, beta});
    }

    std::vector<ScanRow> rows(tasks.size());
    const unsigned nt = std::max(1u, threads);
    if (nt == 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) rows[i] = compute_row(tasks[i], spec, cfg, sys, kt);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (unsigned w = 0; w < nt; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= tasks.size()) return;
                    rows[i] = compute_row(tasks[i], spec, cfg, sys, kt);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    return rows;
}

void write_csv(std::ostream& os, const std::vector<ScanRow>& rows, const std::set<std::string>& routes) {
    os << "eps,lam,m,beta,t,p_free,p_correction,p_dyson1,omega3,residual,regime,p_oracle,status,runtime_ms\n";
    for (const auto& r : rows) {
        const auto& rep = r.report;
        os << fmt(r.eps) << ',' << fmt(r.lam) << ',' << fmt(r.m) << ',' << fmt(r.beta) << ','
           << fmt(rep.t) << ',';
        const bool lead = routes.count("free") || routes.count("leading");
        os << (lead ? fmt(rep.p_free) : "") << ',';
        os << (lead ? fmt(rep.p_correction) : "") << ',';
        os << (routes.count("dyson1") ? fmt(rep.p_dyson1) : "") << ',';
        os << (routes.count("dyson3") ? fmt(rep.omega3_norm) : "") << ',';
        os << (routes.count("dyson1") ? fmt(rep.residual) : "") << ',';
        os << rep.regime << ',';
        os << (routes.count("oracle") ? fmt(r.p_oracle) : "") << ',';
        os << r.status << ',' << r.runtime_ms << '\n';
    }
}

bool run_check(const Config& cfg, std::ostream& os) {
    const TwoLevelSystem sys = system_from_config(cfg);
    const AssumptionReport rep = check_assumptions(sys, cfg.get_double("check.tol", 1e-6));
    os << rep.summary();

    const ReservoirModel model = reservoir_from_config(cfg);
    const double m_target = cfg.get_double("check.m_target",
                                           model.zero_temperature() ? model.exponent : model.exponent - 1.0);
    const A4Report a4 = check_A4(model, m_target);
    os << a4.summary();
    return rep.all_pass && a4.pass;
}

} // namespace adilab
