#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "twave/error.hpp"
#include "twave/reduced_ode.hpp"

#include <cmath>

using namespace twave;

namespace {

CoefficientSet fisher() { return CoefficientSet::from_expressions(2.0, "0", "1", "1", "u*(1-u)"); }

} // namespace

TEST_CASE("eta0 roots of the quadratic cases") {
    Eta0Roots a = eta0_roots(3.0, 2.0, 2.0);
    REQUIRE(a.exist);
    CHECK(a.minus == doctest::Approx(1.0));
    CHECK(a.plus == doctest::Approx(2.0));

    Eta0Roots b = eta0_roots(2.0, 0.0, 2.0);
    REQUIRE(b.exist);
    CHECK(b.minus == doctest::Approx(0.0));
    CHECK(b.plus == doctest::Approx(2.0));

    CHECK_FALSE(eta0_roots(1.0, 1.0, 2.0).exist);
    CHECK_THROWS_AS(eta0_roots(1.0, kInf, 2.0), Error);
}

TEST_CASE("eta0 roots are zeros of eta0 for p != 2") {
    for (double p : {1.5, 3.0, 4.0}) {
        Eta0Roots r = eta0_roots(2.0, 0.3, p);
        REQUIRE(r.exist);
        CHECK(eta0(r.minus, 2.0, 0.3, p) == doctest::Approx(0.0).epsilon(1e-9).scale(1.0));
        CHECK(eta0(r.plus, 2.0, 0.3, p) == doctest::Approx(0.0).epsilon(1e-9).scale(1.0));
        CHECK(r.minus < r.plus);
    }
}

TEST_CASE("eta1 root gives the slope magnitude at 1") {
    CHECK(eta1_root(1.0, 2.0, 2.0).magnitude == doctest::Approx(1.0));
    CHECK(eta1_root(-0.5, 0.0, 2.0).magnitude == doctest::Approx(0.5));
    CHECK(eta1_root(0.5, 0.0, 2.0).magnitude == doctest::Approx(0.0));
    CHECK_FALSE(eta1_root(1.0, kInf, 2.0).differentiable);
}

TEST_CASE("linear seed at 1 from the eta1 root") {
    // c g(1) - f(1) = 1 and h1 = 2: root of t^2 + t - 2.
    auto cs = CoefficientSet::from_expressions(2.0, "0", "1", "1", "2*u*(1-u)");
    StartPoint s = startup_at_one(1.0, cs, endpoint_limits(cs), 1e-4);
    CHECK(s.kind == SeedKind::linear);
    CHECK(s.u == doctest::Approx(1.0 - 1e-4));
    CHECK(s.z == doctest::Approx(1e-4).epsilon(1e-6));
}

TEST_CASE("zero-slope seed is replaced by an implicit step") {
    auto cs = CoefficientSet::from_expressions(2.0, "0", "1", "(1-u)^2", "u*(1-u)");
    StartPoint s = startup_at_one(1.0, cs, endpoint_limits(cs), 1e-4);
    CHECK(s.kind == SeedKind::implicit_step);
    CHECK(s.z > 0.0);
}

TEST_CASE("power seed when h1 is infinite") {
    // h ~ (1-u)^(1/2): sigma = 3/4 and K = (4/3)^(1/2) from sigma K = 1/K.
    auto cs = CoefficientSet::from_expressions(2.0, "0", "1", "1", "u*sqrt(1-u)");
    cs.meta1.d = PowerLawMeta{1.0, 0.0, Endpoint::one};
    cs.meta1.rho = PowerLawMeta{1.0, 0.5, Endpoint::one};
    StartPoint s = startup_at_one(1.0, cs, endpoint_limits(cs), 1e-6);
    CHECK(s.kind == SeedKind::power);
    CHECK(s.sigma == doctest::Approx(0.75));
    CHECK(s.coefficient == doctest::Approx(std::sqrt(4.0 / 3.0)));
}

TEST_CASE("seed errors") {
    auto cs = fisher();
    CHECK_THROWS_AS(startup_at_one(2.0, cs, endpoint_limits(cs), 0.1), Error);
    auto inf = CoefficientSet::from_expressions(2.0, "0", "1", "1", "u*sqrt(1-u)");
    CHECK_THROWS_AS(startup_at_one(1.0, inf, endpoint_limits(inf)), Error);
}

TEST_CASE("Fisher above the threshold reaches the floor with the smaller root") {
    auto cs = fisher();
    ReducedSolution sol = solve_from_one(3.0, cs, endpoint_limits(cs));
    CHECK(sol.termination == Termination::reached_floor);
    CHECK(sol.samples.back().z > 0.0);
    REQUIRE(sol.z_slope_0.has_value());
    CHECK(sol.z_slope_0->value == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-3));
    for (std::size_t i = 1; i < sol.samples.size(); ++i) CHECK(sol.samples[i].u < sol.samples[i - 1].u);
}

TEST_CASE("Fisher below the threshold fails at some u in (0,1)") {
    // In log variables the failure shows as z leaving the a-priori bound
    // z <= M u rather than as a literal zero; either one rules out a wave.
    auto cs = fisher();
    ReducedSolution sol = solve_from_one(1.0, cs, endpoint_limits(cs));
    CHECK((sol.termination == Termination::touchdown || sol.termination == Termination::bound_exceeded));
    double u_fail = sol.touchdown.value_or(sol.samples.back().u);
    CHECK(u_fail > 0.0);
    CHECK(u_fail < 1.0);
    CHECK(u_fail > sol.u_floor);
}

TEST_CASE("solutions respect 0 < z <= M u") {
    auto cs = fisher();
    for (double c : {2.0, 2.5, 4.0}) {
        ReducedSolution sol = solve_from_one(c, cs, endpoint_limits(cs));
        const double M = linear_bound(c, cs);
        for (const auto& s : sol.samples) {
            CHECK(s.z > 0.0);
            CHECK(s.z <= M * s.u * (1.0 + 1e-6));
        }
    }
}

TEST_CASE("z_at interpolates the samples") {
    auto cs = fisher();
    ReducedSolution sol = solve_from_one(2.5, cs, endpoint_limits(cs));
    for (std::size_t i = 0; i < sol.samples.size(); i += 7)
        CHECK(sol.z_at(sol.samples[i].u) == doctest::Approx(sol.samples[i].z).epsilon(1e-9));
    // Between samples the interpolant solves the equation to high accuracy.
    for (double u : {0.05, 0.2, 0.5, 0.8, 0.97}) {
        const double h = 1e-5;
        double dz = (sol.z_at(u + h) - sol.z_at(u - h)) / (2 * h);
        double rhs = cs.lambda(2.5, u) - cs.h(u) / sol.z_at(u);
        CHECK(dz == doctest::Approx(rhs).epsilon(1e-4));
    }
}

TEST_CASE("the lower solution of the sign test dominates z") {
    // Fisher at c = k = 2: Phi = (1/p) int 2 = u.
    auto cs = fisher();
    ReducedSolution sol = solve_from_one(2.0, cs, endpoint_limits(cs));
    ComparisonResult r = check_comparison([](double u) { return u; }, sol, cs, 0.01, 0.99, ComparisonKind::lower);
    CHECK(r.premise);
    CHECK(r.conclusion);
    CHECK(r.holds());
}

TEST_CASE("comparison functions near 1 bracket z") {
    // Fisher at c = 3: z ~ m (1-u) with m = (-3 + sqrt(13))/2 ~ 0.30. y = 2 (1-u)
    // satisfies y' <= 3 - u(1-u)/y and starts above z; y = 0.1 (1-u) satisfies the
    // reverse inequality for u > 0.62 and starts below.
    auto cs = fisher();
    ReducedSolution sol = solve_from_one(3.0, cs, endpoint_limits(cs));
    ComparisonResult above =
        check_comparison([](double u) { return 2.0 * (1.0 - u); }, sol, cs, 0.9, 0.999, ComparisonKind::lower);
    CHECK(above.premise);
    CHECK(above.conclusion);
    ComparisonResult below =
        check_comparison([](double u) { return 0.1 * (1.0 - u); }, sol, cs, 0.9, 0.999, ComparisonKind::upper);
    CHECK(below.premise);
    CHECK(below.conclusion);
    // A candidate violating the premise proves nothing either way.
    ComparisonResult bad =
        check_comparison([](double u) { return 0.01 * (1.0 - u); }, sol, cs, 0.9, 0.999, ComparisonKind::lower);
    CHECK_FALSE(bad.premise);
    CHECK(bad.holds());
}

TEST_CASE("five-point weights differentiate quartics exactly") {
    std::vector<double> x{-0.3, -0.1, 0.0, 0.2, 0.5};
    auto w = fd_weights(0.05, x, 1);
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d += w[i] * std::pow(x[i], 4);
    CHECK(d == doctest::Approx(4.0 * std::pow(0.05, 3)).epsilon(1e-10).scale(1.0));
}
