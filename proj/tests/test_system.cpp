#include "adilab/system.hpp"
#include "adilab/common.hpp"

#include <doctest.h>
#include <cmath>

using namespace adilab;

namespace {

TwoLevelSystem reference_flat() {
    TwoLevelSystem sys;
    sys.theta_max = pi / 3.0;
    sys.profile = DriveProfile::smoothstep(9, 0.0);
    sys.delta = 0.9;
    return sys;
}

// 5-point stencil derivative of the schedule for the boundary examples
double fd(const DriveProfile& p, double t, double h, int n) {
    const double f2 = p.s(t + 2 * h), f1 = p.s(t + h), f0 = p.s(t), fm1 = p.s(t - h), fm2 = p.s(t - 2 * h);
    switch (n) {
        case 1: return (-f2 + 8 * f1 - 8 * fm1 + fm2) / (12 * h);
        case 2: return (-f2 + 16 * f1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h);
        case 3: return (f2 - 2 * f1 + 2 * fm1 - fm2) / (2 * h * h * h);
        default: return (f2 - 4 * f1 + 6 * f0 - 4 * fm1 + fm2) / (h * h * h * h);
    }
}

} // namespace

TEST_CASE("smoothstep profile boundary conditions") {
    const auto p = DriveProfile::smoothstep(9, 0.0);
    CHECK(p.s(0.0) == 0.0);
    CHECK(p.s(1.0) == 1.0);
    CHECK(p.ds(0.0) == 0.0);
    // s', .., s'''' vanish at both ends (order 9 -> four per end): the n-th
    // derivative scales like t^(5-n), so halving t shrinks it by 2^(5-n)
    for (int n = 1; n <= 4; ++n) {
        const double far_lo = std::fabs(fd(p, 0.016, 0.002, n));
        const double near_lo = std::fabs(fd(p, 0.008, 0.002, n));
        CHECK(near_lo < 0.6 * far_lo / (n == 4 ? 1.0 : 2.0));
        const double far_hi = std::fabs(fd(p, 1.0 - 0.016, 0.002, n));
        const double near_hi = std::fabs(fd(p, 1.0 - 0.008, 0.002, n));
        CHECK(near_hi < 0.6 * far_hi / (n == 4 ? 1.0 : 2.0));
    }
    CHECK(std::fabs(fd(p, 0.008, 0.002, 1)) < 1e-5);
    CHECK(std::fabs(fd(p, 0.008, 0.002, 2)) < 5e-3);
    // the standard odd-symmetric smoothstep: s(1/2) = 1/2 and s(t)+s(1-t) = 1
    CHECK(p.s(0.5) == doctest::Approx(0.5).epsilon(1e-14));
    for (double t = 0.05; t < 1.0; t += 0.1)
        CHECK(p.s(t) + p.s(1.0 - t) == doctest::Approx(1.0).epsilon(1e-13));
    // derivative consistency
    for (double t = 0.1; t < 1.0; t += 0.17)
        CHECK(p.ds(t) == doctest::Approx(fd(p, t, 1e-4, 1)).epsilon(1e-8));
}

TEST_CASE("profile validation") {
    CHECK_THROWS_AS(DriveProfile::smoothstep(3, 0.0), config_error);
    CHECK_THROWS_AS(DriveProfile::smoothstep(8, 0.0), config_error);
    CHECK_THROWS_AS(DriveProfile::smoothstep(9, 1.0), config_error);
    const auto p = DriveProfile::smoothstep(9, 0.25);
    CHECK(p.s(0.2) == 0.0);                      // flat lead-in
    CHECK(p.s(1.0) == doctest::Approx(1.0));
    const auto m = DriveProfile::monomial(9);    // t^5 ramp
    CHECK(m.s(0.5) == doctest::Approx(std::pow(0.5, 5)));
    CHECK(m.ds(1.0) == doctest::Approx(5.0));
}

TEST_CASE("spectral data and projector algebra") {
    TwoLevelSystem sys = reference_flat();

    SUBCASE("theta == 0 gives diagonal projectors") {
        sys.theta_max = 0.0;
        const auto d = spectral_data(sys, 0.37);
        Eigen::Matrix2d p1ref = Eigen::Matrix2d::Zero(), p2ref = Eigen::Matrix2d::Zero();
        p1ref(1, 1) = 1.0;
        p2ref(0, 0) = 1.0;
        CHECK((d.P1 - p1ref).norm() < 1e-15);
        CHECK((d.P2 - p2ref).norm() < 1e-15);
    }

    SUBCASE("projector identities on a grid") {
        for (int i = 0; i <= 64; ++i) {
            const double t = i / 64.0;
            const auto d = spectral_data(sys, t);
            CHECK(d.P1.trace() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK((d.P1 * d.P2).norm() < 1e-12);
            CHECK((d.P1 + d.P2 - Eigen::Matrix2d::Identity()).norm() < 1e-12);
            CHECK((d.P1 * d.P1 - d.P1).norm() < 1e-12);
            const Eigen::Matrix2d h = sys.hs(t), b = sys.bop(t);
            CHECK((h * b - b * h).norm() < 1e-12);
            CHECK((h * d.psi1 - d.e1 * d.psi1).norm() < 1e-12);
            CHECK((h * d.psi2 - d.e2 * d.psi2).norm() < 1e-12);
            CHECK(d.e2 - d.e1 == doctest::Approx(sys.e21(t)).epsilon(1e-12));
        }
    }

    SUBCASE("drive rotates the projectors") {
        sys.theta_max = pi / 4.0;
        const double a = 0.5 * sys.theta_max;
        Eigen::Matrix2d R;
        R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
        const auto d0 = spectral_data(sys, 0.0);
        const auto d1 = spectral_data(sys, 1.0);
        CHECK((d1.P1 - R * d0.P1 * R.transpose()).norm() < 1e-14);
        // cross-check against a direct eigendecomposition at t = 1
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(sys.hs(1.0));
        const Eigen::Vector2d lo = es.eigenvectors().col(0);
        CHECK((d1.P1 - lo * lo.transpose()).norm() < 1e-12);
    }
}

TEST_CASE("assumption certification") {
    SUBCASE("reference system passes") {
        const auto rep = check_assumptions(reference_flat());
        CHECK(rep.all_pass);
        CHECK(rep.certified_gap > 0.9);
        const auto rep2 = check_assumptions(reference_flat());   // deterministic
        CHECK(rep.certified_gap == rep2.certified_gap);
        for (std::size_t i = 0; i < rep.checks.size(); ++i)
            CHECK(rep.checks[i].worst_value == rep2.checks[i].worst_value);
    }
    SUBCASE("ramp system passes") {
        TwoLevelSystem sys = reference_flat();
        sys.profile = DriveProfile::monomial(9);
        CHECK(check_assumptions(sys).all_pass);
    }
    SUBCASE("closing gap fails with endpoint witness") {
        TwoLevelSystem sys = reference_flat();
        sys.e21 = Expr::parse("1 - t");
        const auto rep = check_assumptions(sys);
        CHECK_FALSE(rep.all_pass);
        CHECK_FALSE(rep.checks[0].pass);
        CHECK(rep.checks[0].worst_t > 0.99);
    }
    SUBCASE("linear drive fails the flat start at first order") {
        TwoLevelSystem sys = reference_flat();
        sys.profile = DriveProfile::linear();
        const auto rep = check_assumptions(sys);
        CHECK_FALSE(rep.all_pass);
        bool order1_failed = false;
        for (const auto& c : rep.checks)
            if (c.name.find("order 1") != std::string::npos) order1_failed = !c.pass;
        CHECK(order1_failed);
    }
    SUBCASE("tolerance must be positive") {
        CHECK_THROWS_AS(check_assumptions(reference_flat(), 0.0), config_error);
    }
}

TEST_CASE("kato generator identities") {
    TwoLevelSystem sys = reference_flat();
    for (double t : {0.2, 0.5, 0.8}) {
        const Eigen::Matrix2d k = sys.kato_k(t);
        CHECK((k + k.transpose()).norm() < 1e-14);                     // anti-self-adjoint
        CHECK((sys.p1(t) * k * sys.p1(t)).norm() < 1e-14);             // diagonal blocks vanish
        CHECK((sys.p2(t) * k * sys.p2(t)).norm() < 1e-14);
    }
    sys.theta_max = 0.0;
    CHECK(sys.kato_k(0.5).norm() == 0.0);   // static projectors
}
