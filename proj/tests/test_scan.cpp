#include "adilab/scan.hpp"

#include <doctest.h>
#include <sstream>

using namespace adilab;

namespace {

const char* kRefConfig = R"(
# reference system, downward transition
system.e21 = -1
system.theta_max = 1.0471975511965976
system.profile = smoothstep
system.profile_order = 9
system.b1 = 1
system.b2 = -1
system.delta = 0.9
reservoir.g0 = 0.05
reservoir.exponent = 2
reservoir.omega_D = 1
reservoir.beta = inf
scan.eps_list = 0.2, 0.1
scan.lam_list = 0
scan.routes = free, leading
scan.t_final = 1
)";

std::string csv_without_runtime(const std::vector<ScanRow>& rows, const std::set<std::string>& routes) {
    std::ostringstream os;
    write_csv(os, rows, routes);
    std::string s = os.str(), out;
    std::istringstream lines(s);
    std::string line;
    while (std::getline(lines, line)) {
        const auto pos = line.rfind(',');
        out += line.substr(0, pos);
        out += '\n';
    }
    return out;
}

} // namespace

TEST_CASE("config parsing") {
    const auto cfg = Config::from_string("a.x = 1.5\n# comment\nb.y = inf\nc.z = 1 - t\n");
    CHECK(cfg.get_double("a.x", 0.0) == 1.5);
    CHECK(std::isinf(cfg.get_double("b.y", 0.0)));
    CHECK(cfg.get_expr("c.z", "0")(0.25) == doctest::Approx(0.75));
    CHECK(cfg.get_double("missing", 7.0) == 7.0);
    CHECK_THROWS_AS(Config::from_string("novalue\n"), config_error);
    CHECK_THROWS_AS(Config::from_string("a.x = abc\n").get_double("a.x", 0.0), config_error);
}

TEST_CASE("system and reservoir builders") {
    const auto cfg = Config::from_string(kRefConfig);
    const auto sys = system_from_config(cfg);
    CHECK(sys.e21(0.5) == -1.0);
    CHECK(sys.theta_max == doctest::Approx(pi / 3.0));
    const auto model = reservoir_from_config(cfg);
    CHECK(model.exponent == 2.0);
    CHECK(model.zero_temperature());
    CHECK_THROWS_AS(system_from_config(Config::from_string("system.profile = bogus\n")), config_error);
}

TEST_CASE("scan spec validation") {
    auto cfg = Config::from_string(kRefConfig);
    auto spec = ScanSpec::from_config(cfg);
    CHECK(spec.eps_list.size() == 2);
    CHECK(spec.routes.count("free") == 1);

    CHECK_THROWS_AS(ScanSpec::from_config(Config::from_string("scan.eps_list = 1.5\n")), config_error);
    CHECK_THROWS_AS(ScanSpec::from_config(Config::from_string("scan.eps_list = 0.1\nscan.routes = bogus\n")),
                    config_error);
    CHECK_THROWS_AS(ScanSpec::from_config(Config::from_string("scan.eps_list = 0.1\nscan.lam_rule = huh\n")),
                    config_error);
    const auto rule = ScanSpec::from_config(
        Config::from_string("scan.eps_list = 0.04\nscan.lam_rule = sqrt\n"));
    CHECK(rule.use_rule);
    CHECK(rule.lam_power == 0.5);
}

TEST_CASE("scan rows and determinism") {
    const auto cfg = Config::from_string(kRefConfig);
    const auto spec = ScanSpec::from_config(cfg);

    const auto rows1 = run_scan(spec, cfg, 1);
    REQUIRE(rows1.size() == 2);
    for (const auto& r : rows1) {
        CHECK(r.status == "ok");
        CHECK(r.report.p_correction == 0.0);   // lambda = 0
        CHECK(r.report.regime == "negligible-coupling");
    }
    CHECK(rows1[0].eps == 0.2);
    CHECK(rows1[1].eps == 0.1);

    // byte-identical CSV at different thread counts, runtime_ms excluded
    const auto rows2 = run_scan(spec, cfg, 2);
    CHECK(csv_without_runtime(rows1, spec.routes) == csv_without_runtime(rows2, spec.routes));
}

TEST_CASE("scan requires certified assumptions") {
    auto text = std::string(kRefConfig) + "system.profile = linear\n";
    const auto cfg = Config::from_string(text);
    const auto spec = ScanSpec::from_config(cfg);
    CHECK_THROWS_AS(run_scan(spec, cfg, 1), config_error);
}

TEST_CASE("row-level failures land in the status column") {
    // a reservoir that breaks validation at finite beta (mu <= 1) per row
    auto text = std::string(kRefConfig);
    text += "scan.m_list = 0.5\nscan.beta_list = 2\n";
    const auto cfg = Config::from_string(text);
    const auto spec = ScanSpec::from_config(cfg);
    const auto rows = run_scan(spec, cfg, 1);
    for (const auto& r : rows) CHECK(r.status != "ok");
}

TEST_CASE("check driver") {
    std::ostringstream os;
    CHECK(run_check(Config::from_string(kRefConfig), os));
    CHECK(os.str().find("A.4 holds") != std::string::npos);
    std::ostringstream os2;
    const auto bad = Config::from_string(std::string(kRefConfig) + "system.e21 = 1 - t\n");
    CHECK_FALSE(run_check(bad, os2));
}
