// scan.hpp — parameter scans, CSV reports, assumption/check drivers

#pragma once

#include "adilab/config.hpp"
#include "adilab/dyson.hpp"
#include "adilab/oracle.hpp"

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace adilab {

struct ScanSpec {
    std::vector<double> eps_list;
    std::vector<double> lam_list;     // explicit list (crossed with eps), or
    double lam_coeff{0.0};            // rule lambda = c * eps^a when use_rule
    double lam_power{0.5};
    bool use_rule{false};
    std::vector<double> m_list;
    std::vector<double> beta_list;
    double t_final{1.0};
    std::set<std::string> routes;     // free, leading, dyson1, dyson3, oracle
    std::string output_path;

    static ScanSpec from_config(const Config& cfg);
    void validate() const;
};

struct ScanRow {
    double eps, lam, m, beta;
    TransitionReport report;
    double p_oracle{std::numeric_limits<double>::quiet_NaN()};
    std::string status{"ok"};
    long long runtime_ms{0};
};

// Runs the scan; rows are computed independently (optionally in parallel) and
// always emitted in spec order. Row-level failures land in the status column.
std::vector<ScanRow> run_scan(const ScanSpec& spec, const Config& cfg, unsigned threads = 1);

// CSV with a fixed header; '.' decimal, 17 significant digits. runtime_ms is
// the last column so determinism checks can strip it.
void write_csv(std::ostream& os, const std::vector<ScanRow>& rows, const std::set<std::string>& routes);

// `check` subcommand body: prints per-assumption results; returns true when
// everything (A.1–A.3 and A.4) holds.
bool run_check(const Config& cfg, std::ostream& os);

} // namespace adilab
