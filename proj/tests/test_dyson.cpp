#include "adilab/dyson.hpp"
#include "adilab/gauss.hpp"

#include <doctest.h>
#include <cmath>

using namespace adilab;

namespace {

TwoLevelSystem ramp_sys(double e21 = 1.0) {
    TwoLevelSystem sys;
    sys.theta_max = pi / 3.0;
    sys.profile = DriveProfile::monomial(9);
    sys.e21 = Expr::constant(e21);
    sys.delta = 0.9;
    return sys;
}

TwoLevelSystem flat_sys(double e21 = 1.0) {
    TwoLevelSystem sys = ramp_sys(e21);
    sys.profile = DriveProfile::smoothstep(9, 0.0);
    return sys;
}

// independent 1D oracle at lambda = 0: p = |int_0^t c(s) e^{-i phi12(s)} ds|^2
double free_oracle(const TwoLevelSystem& sys, const KatoTransport& kt, double eps, double t) {
    cplx acc = 0.0;
    const std::size_t np = static_cast<std::size_t>(std::ceil(200.0 * t / eps));
    const double h = t / static_cast<double>(np);
    for (std::size_t p = 0; p < np; ++p) {
        const double c0 = (static_cast<double>(p) + 0.5) * h, hw = 0.5 * h;
        for (int g = 0; g < GL8::n; ++g) {
            const double u = c0 + hw * GL8::x[g];
            const double ph = kt.phi_raw(u) / eps;
            acc += GL8::w[g] * hw * kt.c_amp(u) * cplx{std::cos(ph), -std::sin(ph)};
        }
    }
    return std::norm(acc);
}

} // namespace

TEST_CASE("dyson1 free limit") {
    const auto sys = ramp_sys();
    const auto kt = KatoTransport::transport(sys);
    ReservoirModel model;

    SUBCASE("static drive gives zero") {
        auto stat = flat_sys();
        stat.theta_max = 0.0;
        const auto kts = KatoTransport::transport(stat);
        PhaseKernels pk(stat, model, 0.1, 0.0);
        CHECK(dyson1_exact(pk, kts, 1.0).value == doctest::Approx(0.0));
    }

    SUBCASE("matches the one-dimensional amplitude oracle") {
        for (double eps : {0.1, 0.05}) {
            PhaseKernels pk(sys, model, eps, 0.0);
            const double d1 = dyson1_exact(pk, kt, 1.0).value;
            CHECK(d1 == doctest::Approx(free_oracle(sys, kt, eps, 1.0)).epsilon(1e-9));
        }
    }

    SUBCASE("free residual obeys the cubic bound") {
        // |dyson1 - eps^2 q(1,1)| = O(eps^3): the scaled sequence must decrease
        const double q11 = kt.q12(1.0, 1.0);
        double prev = std::numeric_limits<double>::infinity();
        for (double eps : {0.1, 0.05, 0.025}) {
            PhaseKernels pk(sys, model, eps, 0.0);
            const double r = std::fabs(dyson1_exact(pk, kt, 1.0).value - eps * eps * q11);
            const double scaled = r / (eps * eps * eps);
            CHECK(scaled < prev);
            prev = scaled;
        }
    }
}

TEST_CASE("dyson1 quadrature properties") {
    const auto sys = flat_sys(-1.0);   // downward transition
    const auto kt = KatoTransport::transport(sys);
    ReservoirModel model;
    const double eps = 0.1, lam = std::sqrt(eps);
    PhaseKernels pk(sys, model, eps, lam);

    const double base = dyson1_exact(pk, kt, 1.0).value;
    CHECK(base >= 0.0);
    CHECK(base <= 1.0 + 1e-6);

    // invariance under refinement beyond the oscillation threshold
    Dyson1Options r1;
    r1.refine = 1;
    const double fine = dyson1_exact(pk, kt, 1.0, r1).value;
    CHECK(std::fabs(fine - base) <= 1e-6 * std::fabs(base));

    // self-convergence at a different operating point
    PhaseKernels pk2(sys, model, 0.05, std::sqrt(0.05));
    const double a = dyson1_exact(pk2, kt, 1.0).value;
    Dyson1Options r2;
    r2.refine = 1;
    const double b = dyson1_exact(pk2, kt, 1.0, r2).value;
    CHECK(std::fabs(a - b) <= 1e-6 * std::fabs(a));

    // the oscillation guard trips when the panel cap is too small
    Dyson1Options tiny;
    tiny.max_panels = 2;
    CHECK_THROWS_AS(dyson1_exact(pk, kt, 1.0, tiny), numerical_error);
}

TEST_CASE("thermal dyson1 self-converges and both directions gain a correction") {
    ReservoirModel th;
    th.exponent = 3.0;
    th.beta = 2.0;
    th.g0 = 0.05;
    const auto down = flat_sys(-1.0);
    const auto kt = KatoTransport::transport(down);
    PhaseKernels pk(down, th, 0.1, 0.3);
    const double a = dyson1_exact(pk, kt, 1.0).value;
    Dyson1Options r;
    r.refine = 1;
    CHECK(std::fabs(dyson1_exact(pk, kt, 1.0, r).value - a) <= 1e-6 * a);
    CHECK(a > 0.0);
    // finite temperature enhances the upward transition too
    const auto up = flat_sys(1.0);
    const auto ktu = KatoTransport::transport(up);
    const auto lo_up = leading_order(ktu, th, 0.1, 0.3, 1.0);
    const auto lo_dn = leading_order(kt, th, 0.1, 0.3, 1.0);
    CHECK(lo_up.p_correction > 1e-12);
    CHECK(lo_dn.p_correction > lo_up.p_correction);
}

TEST_CASE("leading order and the zero-temperature asymmetry") {
    ReservoirModel model;   // zero-T, m = 2
    const double eps = 0.1, lam = 0.2;

    SUBCASE("ground-to-excited correction vanishes at zero temperature") {
        const auto up = flat_sys(+1.0);    // e12 = e1 - e2 = -1 < 0 everywhere
        const auto kt = KatoTransport::transport(up);
        const auto lo = leading_order(kt, model, eps, lam, 1.0);
        CHECK(lo.p_correction == 0.0);
    }

    SUBCASE("excited-to-ground correction is positive") {
        const auto down = flat_sys(-1.0);
        const auto kt = KatoTransport::transport(down);
        const auto lo = leading_order(kt, model, eps, lam, 1.0);
        CHECK(lo.p_correction > 1e-12);
    }

    SUBCASE("identical couplings give no correction") {
        auto sys = flat_sys(-1.0);
        sys.b1 = Expr::constant(0.4);
        sys.b2 = Expr::constant(0.4);
        const auto kt = KatoTransport::transport(sys);
        CHECK(leading_order(kt, model, eps, lam, 1.0).p_correction == doctest::Approx(0.0));
    }

    SUBCASE("positive temperature enhances both directions") {
        ReservoirModel th = model;
        th.exponent = 3.0;
        th.beta = 2.0;
        const auto up = flat_sys(+1.0);
        const auto kt = KatoTransport::transport(up);
        const auto lo = leading_order(kt, th, eps, lam, 1.0);
        CHECK(lo.p_correction > 1e-12);
        // thermal asymmetry: the downward correction exceeds the upward one
        const auto down = flat_sys(-1.0);
        const auto ktd = KatoTransport::transport(down);
        CHECK(leading_order(ktd, th, eps, lam, 1.0).p_correction > lo.p_correction);
    }

    SUBCASE("correction grows monotonically in t") {
        const auto down = flat_sys(-1.0);
        const auto kt = KatoTransport::transport(down);
        double prev = 0.0;
        for (double t : {0.25, 0.5, 0.75, 1.0}) {
            const double c = leading_order(kt, model, eps, lam, t).p_correction;
            CHECK(c >= prev);
            prev = c;
        }
    }
}

TEST_CASE("theorem residual behaviour") {
    ReservoirModel model;
    const auto sys = flat_sys(-1.0);
    const auto kt = KatoTransport::transport(sys);

    SUBCASE("lambda -> 0 continuity") {
        const double eps = 0.1;
        PhaseKernels pk0(sys, model, eps, 0.0);
        const auto lo0 = leading_order(kt, model, eps, 0.0, 1.0);
        const double r0 = theorem_residual(dyson1_exact(pk0, kt, 1.0).value, lo0.p_free, lo0.p_correction);
        double prev = std::numeric_limits<double>::infinity();
        for (double lam : {0.08, 0.04, 0.02}) {
            PhaseKernels pk(sys, model, eps, lam);
            const auto lo = leading_order(kt, model, eps, lam, 1.0);
            const double r = theorem_residual(dyson1_exact(pk, kt, 1.0).value, lo.p_free, lo.p_correction);
            CHECK(std::fabs(r - r0) < prev);
            prev = std::fabs(r - r0);
        }
    }

    SUBCASE("residual on the sqrt(eps) path decays faster than eps^2") {
        double prev = std::numeric_limits<double>::infinity();
        for (double eps : {0.2, 0.1}) {
            const double lam = std::sqrt(eps);
            PhaseKernels pk(sys, model, eps, lam);
            const auto lo = leading_order(kt, model, eps, lam, 1.0);
            const double r = std::fabs(theorem_residual(dyson1_exact(pk, kt, 1.0).value,
                                                        lo.p_free, lo.p_correction));
            CHECK(r / (eps * eps) < prev);
            prev = r / (eps * eps);
        }
    }
}

TEST_CASE("regime classification") {
    CHECK(classify_regime(0.01, std::sqrt(0.01), 2.0) == "balanced");
    CHECK(classify_regime(0.01, 0.01, 2.0) == "negligible-coupling");           // lambda = eps
    CHECK(classify_regime(1e-4, std::pow(1e-4, 0.3), 2.0) == "reservoir-assisted");
    CHECK(classify_regime(0.01, 0.9, 2.0) == "outside-theorem");
    CHECK_THROWS_AS(classify_regime(1.5, 0.1, 2.0), config_error);
    CHECK_THROWS_AS(classify_regime(0.1, -0.1, 2.0), config_error);
    // thresholds are configurable
    RegimeThresholds wide{0.1, 10.0};
    CHECK(classify_regime(0.01, 0.9, 2.0, wide) == "balanced");
}

TEST_CASE("error exponents") {
    const auto a = error_exponents(2.0);
    CHECK(a.m1 == 1.0);
    CHECK(a.alpha0 == doctest::Approx(1.0 / 5.0));
    const auto b = error_exponents(0.5);
    CHECK(b.m1 == 0.5);
    CHECK(b.alpha0 == doctest::Approx(1.0 / 2.5));
}

TEST_CASE("dyson3 magnitude") {
    ReservoirModel model;
    SUBCASE("static drive gives zero") {
        auto stat = flat_sys();
        stat.theta_max = 0.0;
        const auto kt = KatoTransport::transport(stat);
        PhaseKernels pk(stat, model, 0.1, 0.0);
        CHECK(dyson3_magnitude(pk, kt, 1.0).value == doctest::Approx(0.0));
    }
    SUBCASE("order hierarchy and budget stability at the reference point") {
        const auto sys = ramp_sys();
        const auto kt = KatoTransport::transport(sys);
        PhaseKernels pk(sys, model, 0.1, 0.2);
        const auto d1 = dyson1_exact(pk, kt, 1.0);
        const auto d3 = dyson3_magnitude(pk, kt, 1.0);
        CHECK(d3.value <= 0.2 * std::sqrt(d1.value));   // harness threshold
        Dyson3Options half;
        half.node_budget = 10000000;
        const auto d3h = dyson3_magnitude(pk, kt, 1.0, half);
        CHECK(std::fabs(d3h.value - d3.value) <= 0.1 * d3.value);
        // budget exhaustion is signalled
        Dyson3Options broke;
        broke.node_budget = 10;
        CHECK_THROWS_AS(dyson3_magnitude(pk, kt, 1.0, broke), numerical_error);
    }
}
