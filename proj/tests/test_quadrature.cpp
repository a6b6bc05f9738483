#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "varent/distributions.hpp"
#include "varent/quadrature.hpp"

using namespace varent;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("analytic integrals", "[quadrature]") {
    CHECK_THAT(integrate([](double x) { return x; }, 0.0, 1.0).value, WithinAbs(0.5, 1e-14));
    // log^2 is singular at 0; the endpoint is never evaluated.
    CHECK_THAT(integrate([](double x) { return std::log(x) * std::log(x); }, 0.0, 1.0).value,
               WithinRel(2.0, 1e-10));
    CHECK_THAT(integrate([](double y) { return 0.7 * std::exp(-0.7 * y); }, 0.0, INFINITY).value,
               WithinRel(1.0, 1e-10));
}

TEST_CASE("expectations under a law", "[quadrature]") {
    const auto e1 = Distribution::exponential(1.0);
    CHECK_THAT(integrate_expectation(e1, [](double y) { return y; }, 0.0, INFINITY).value,
               WithinRel(1.0, 1e-10));
    const auto u = Distribution::uniform(0.0, 1.0);
    CHECK_THAT(integrate_expectation(u, [](double y) { return y * y; }, 0.0, 1.0).value,
               WithinRel(1.0 / 3.0, 1e-12));
    // int beta y^(beta-1) log^2 y dy = 2 / beta^2
    const auto p = Distribution::power(0.2);
    CHECK_THAT(integrate_expectation(p, [](double y) { return std::log(y) * std::log(y); }, 0.0, 1.0)
                   .value,
               WithinRel(50.0, 1e-8));
}

TEST_CASE("endpoint NaN is replaced by the zero limit", "[quadrature]") {
    // x log x evaluates to NaN at 0 (0 * -inf).
    const auto r = integrate([](double x) { return x * std::log(x); }, 0.0, 1.0);
    CHECK_THAT(r.value, WithinRel(-0.25, 1e-12));
}

TEST_CASE("splitting the range is additive", "[quadrature][property]") {
    struct Case {
        double (*f)(double);
        double a, b;
    };
    const std::vector<Case> cases = {
        {[](double x) { return std::sin(3.0 * x) * std::exp(-x); }, 0.0, 5.0},
        {[](double x) { return std::log(x) * std::log(x); }, 0.0, 2.0},
        {[](double x) { return 1.0 / (1.0 + 25.0 * x * x); }, -1.0, 1.0},
        {[](double x) { return std::sqrt(x); }, 0.0, 4.0},
    };
    for (const auto& c : cases) {
        const auto whole = integrate(c.f, c.a, c.b);
        for (double frac : {0.1, 0.37, 0.5, 0.9}) {
            const double m = c.a + frac * (c.b - c.a);
            const auto l = integrate(c.f, c.a, m);
            const auto r = integrate(c.f, m, c.b);
            const double tol = 2.0 * (l.abs_error + r.abs_error + whole.abs_error) + 1e-14;
            CHECK(std::abs(l.value + r.value - whole.value) <= tol);
        }
    }
}

TEST_CASE("every catalogue density integrates to one", "[quadrature][property]") {
    const std::vector<Distribution> laws = {
        Distribution::uniform(0.0, 2.0),     Distribution::exponential(0.7),
        Distribution::pareto1(2.5),          Distribution::sqrt_weibull(1.3),
        Distribution::power(0.2),            Distribution::power(3.0, 2.0),
        Distribution::lomax(1.0, 3.0),       Distribution::shifted_exponential(1.5),
        Distribution::gumbel2(3.3869, 0.7544), Distribution::weibull(2.5, 1.3),
    };
    for (const auto& d : laws) {
        INFO(d.describe());
        const double m =
            integrate_expectation(d, [](double) { return 1.0; }, d.support_lo(), d.support_hi()).value;
        CHECK_THAT(m, WithinAbs(1.0, 1e-8));
    }
}

TEST_CASE("tightening the tolerance never worsens the answer", "[quadrature][property]") {
    struct Case {
        double (*f)(double);
        double a, b, exact;
    };
    const std::vector<Case> cases = {
        {[](double x) { return x; }, 0.0, 1.0, 0.5},
        {[](double x) { return std::log(x) * std::log(x); }, 0.0, 1.0, 2.0},
        {[](double y) { return 0.7 * std::exp(-0.7 * y); }, 0.0, INFINITY, 1.0},
    };
    for (const auto& c : cases) {
        double prev = INFINITY;
        for (double tol : {1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10}) {
            const double err = std::abs(integrate(c.f, c.a, c.b, tol).value - c.exact);
            CHECK(err <= prev + 4e-16);
            prev = err;
        }
    }
}

TEST_CASE("failures are reported, not hidden", "[quadrature]") {
    CHECK_THROWS_AS(integrate([](double x) { return x; }, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(integrate([](double x) { return x; }, NAN, 1.0), DomainError);
    QuadratureOptions opt;
    opt.max_intervals = 4;
    try {
        integrate([](double x) { return std::sin(200.0 * x); }, 0.0, 10.0, opt);
        FAIL("expected the subdivision budget to run out");
    } catch (const QuadratureError& e) {
        CHECK(std::isfinite(e.best()));
        CHECK(e.abs_error() > 0.0);
    }
}
