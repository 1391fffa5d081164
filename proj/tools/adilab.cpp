// adilab.cpp — command-line interface: check | scan | dyson1 | oracle | regimes

#include "adilab/config.hpp"
#include "adilab/dyson.hpp"
#include "adilab/kernels.hpp"
#include "adilab/oracle.hpp"
#include "adilab/scan.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_assumption = 3;
constexpr int exit_numerical = 4;

adilab::Config load(const std::string& path) {
    if (path.empty()) throw adilab::config_error("--config PATH is required");
    return adilab::Config::from_file(path);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"adilab — adiabatic transition probabilities of a driven two-level system "
                 "with dephasing bosonic coupling"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_path;
    unsigned threads = 1;
    unsigned seed = 0;   // reserved, unused: all computation is deterministic
    app.add_option("--config", config_path, "configuration file");
    app.add_option("--out", out_path, "output path (scan CSV)");
    app.add_option("--threads", threads, "worker threads for scans");
    app.add_option("--seed", seed, "reserved, unused (all computation is deterministic)");

    auto* c_check = app.add_subcommand("check", "verify gap/smoothness/flat-start and reservoir decay assumptions");
    auto* c_scan = app.add_subcommand("scan", "run the configured parameter scan, emit CSV");
    auto* c_dyson1 = app.add_subcommand("dyson1", "exact first Dyson term at one parameter point");
    auto* c_oracle = app.add_subcommand("oracle", "truncated-Fock reference evolution at one parameter point");
    auto* c_regimes = app.add_subcommand("regimes", "classify the (eps, lambda, m) coupling regime");

    double eps = 0.1, lam = 0.0, t_final = 1.0, m_in = 2.0;
    for (auto* sc : {c_dyson1, c_oracle}) {
        sc->add_option("--eps", eps, "adiabatic parameter");
        sc->add_option("--lam", lam, "coupling constant");
        sc->add_option("--t", t_final, "final rescaled time");
    }
    c_regimes->add_option("--eps", eps, "adiabatic parameter");
    c_regimes->add_option("--lam", lam, "coupling constant");
    c_regimes->add_option("--m", m_in, "spectral-density exponent");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_regimes->parsed()) {
            adilab::RegimeThresholds thr;
            if (!config_path.empty()) {
                const auto cfg = load(config_path);
                thr.c_lo = cfg.get_double("regime.c_lo", 0.3);
                thr.c_hi = cfg.get_double("regime.c_hi", 3.0);
            }
            std::cout << adilab::classify_regime(eps, lam, m_in, thr) << "\n";
            return exit_ok;
        }

        const adilab::Config cfg = load(config_path);
        adilab::kernels::select(cfg.get("kernels.backend", "auto"));

        if (c_check->parsed()) {
            const bool ok = adilab::run_check(cfg, std::cout);
            return ok ? exit_ok : exit_assumption;
        }

        if (c_scan->parsed()) {
            adilab::ScanSpec spec = adilab::ScanSpec::from_config(cfg);
            if (!out_path.empty()) spec.output_path = out_path;
            const auto rows = adilab::run_scan(spec, cfg, threads);
            if (spec.output_path.empty()) {
                adilab::write_csv(std::cout, rows, spec.routes);
            } else {
                std::ofstream os(spec.output_path, std::ios::binary);
                if (!os) throw adilab::config_error("cannot open output '" + spec.output_path + "'");
                adilab::write_csv(os, rows, spec.routes);
            }
            return exit_ok;
        }

        const adilab::TwoLevelSystem sys = adilab::system_from_config(cfg);
        const adilab::AssumptionReport arep = adilab::check_assumptions(sys);
        if (!arep.all_pass) {
            std::cerr << arep.summary();
            return exit_assumption;
        }
        adilab::ReservoirModel model = adilab::reservoir_from_config(cfg);
        adilab::KatoGridSpec kspec;
        kspec.step = cfg.get_double("kato.step", 1.0 / 1024.0);
        const auto kt = adilab::KatoTransport::transport(sys, kspec);

        if (c_dyson1->parsed()) {
            adilab::PhaseKernels pk(sys, model, eps, lam);
            const auto lo = adilab::leading_order(kt, model, eps, lam, t_final);
            adilab::Dyson1Options opt;
            opt.max_panels = cfg.get_size("dyson.max_panels", 4096);
            const auto d1 = adilab::dyson1_exact(pk, kt, t_final, opt);
            std::cout << "p_free        = " << lo.p_free << "\n"
                      << "p_correction  = " << lo.p_correction << "\n"
                      << "p_dyson1      = " << d1.value << "\n"
                      << "residual      = " << adilab::theorem_residual(d1.value, lo.p_free, lo.p_correction)
                      << "\n"
                      << "panels        = " << d1.panels << ", nodes = " << d1.nodes << "\n";
            return exit_ok;
        }

        if (c_oracle->parsed()) {
            adilab::OracleConfig ocfg;
            ocfg.n_modes = cfg.get_size("oracle.n_modes", 48);
            ocfg.omega_max = cfg.get_double("oracle.omega_max", 40.0 * model.omega_D);
            ocfg.n_excitations = cfg.get_size("oracle.n_excitations", 2);
            ocfg.dt_phys = cfg.get_double("oracle.dt", 0.0);
            const auto modes = adilab::discretize(model, ocfg);
            const auto res = adilab::evolve(sys, modes, ocfg, eps, lam, t_final);
            std::cout << "p12        = " << res.p12 << "\n"
                      << "norm_drift = " << res.norm_drift << "\n"
                      << "leakage    = " << res.leakage << "\n"
                      << "dim        = " << res.dim << ", steps = " << res.steps << "\n";
            return exit_ok;
        }
    } catch (const adilab::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const adilab::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    }
    return exit_ok;
}
