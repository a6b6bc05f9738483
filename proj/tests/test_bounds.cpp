#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracle.hpp"
#include "varent/bounds.hpp"

using namespace varent;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("entropy-type upper bound", "[bounds]") {
    // Lomax(1, 3) has g(0) = 3 > 1: the stated condition fails, yet the bound holds.
    const auto lomax = Distribution::lomax(1.0, 3.0);
    const std::vector<std::pair<double, double>> lomax_cases = {
        {0.5, 0.016215}, {1.0, 0.30997}, {2.0, 2.09248}, {5.0, 12.2844}};
    for (auto [t, frozen] : lomax_cases) {
        const auto r = wpve_upper_entropy_bound(lomax, 2.0, 1.0, t);
        CHECK(r.precondition == Precondition::Violated);
        CHECK(r.satisfied);
        CHECK_THAT(r.bound, WithinRel(frozen, 1e-4));
    }

    const auto e = wpve_upper_entropy_bound(Distribution::exponential(0.5), 0.5, std::log(2.0), 1.0);
    CHECK(e.precondition == Precondition::Holds);
    CHECK(e.satisfied);
    const auto u = wpve_upper_entropy_bound(Distribution::uniform(0.0, 1.0), 1.0, 0.0, 0.7);
    CHECK(u.precondition == Precondition::Holds);
    CHECK(u.satisfied);

    // Condition holds, but the variant with -2 crhr E[w2] falls below the exact value.
    const auto c = wpve_upper_entropy_bound(Distribution::exponential(1.0), 1.0, 1.0, 0.5);
    CHECK(c.precondition == Precondition::Holds);
    CHECK(c.satisfied);
    const double variant = std::stod(c.note.substr(c.note.find('=') + 1));
    CHECK(variant < c.exact);
}

TEST_CASE("Stein-type lower bound", "[bounds]") {
    const auto u = Distribution::uniform(0.0, 1.0);
    const auto r1 = wpve_lower_stein(u, 1.0);
    CHECK(r1.satisfied);
    CHECK_THAT(r1.bound, WithinAbs(0.0, 1e-9));
    const auto r06 = wpve_lower_stein(u, 0.6);
    CHECK(r06.satisfied);
    CHECK_THAT(r06.bound, WithinRel(0.0078282845, 1e-6));
    CHECK_THAT(r06.exact, WithinRel(0.0078282845, 1e-8));

    const auto e = wpve_lower_stein(Distribution::exponential(0.7), 1.0);
    CHECK(e.precondition == Precondition::Holds);
    CHECK(e.satisfied);
    CHECK_THAT(e.bound, WithinRel(0.0092712, 1e-4));
    CHECK_THAT(e.exact, WithinAbs(0.011937, 5e-6));

    const auto tiny = wpve_lower_stein(Distribution::exponential(0.7), 1e-3);
    // On a short window the past law is nearly uniform, where the bound is tight.
    CHECK(tiny.satisfied);
    CHECK_THAT(tiny.bound, WithinRel(tiny.exact, 1e-2));
}

TEST_CASE("Stein kernels solve their defining equations", "[bounds][property]") {
    CHECK_THAT(past_stein_kernel(Distribution::uniform(0.0, 1.0), 1.0, 0.3),
               WithinRel(1.26, 1e-8));
    CHECK_THAT(residual_stein_kernel(Distribution::exponential(1.0), 1.0, 2.5),
               WithinRel(1.5, 1e-8));

    // v zeta(y) f(y) = int_0^y (m - u) f(u) du for Exp(0.7) past at t = 1.
    const double lam = 0.7, t = 1.0, mass = -std::expm1(-lam * t);
    auto f = [&](double y) { return lam * std::exp(-lam * y) / mass; };
    const double m = oracle::midpoint([&](double y) { return y * f(y); }, 0.0, t);
    const double v = oracle::midpoint([&](double y) { return (y - m) * (y - m) * f(y); }, 0.0, t);
    const auto d = Distribution::exponential(lam);
    for (int i = 1; i <= 32; ++i) {
        const double y = t * i / 33.0;
        const double rhs = oracle::midpoint([&](double s) { return (m - s) * f(s); }, 0.0, y, 200000);
        const double lhs = v * past_stein_kernel(d, t, y) * f(y);
        CHECK(std::abs(lhs - rhs) <= 1e-6 * std::max(std::abs(rhs), 1e-6));
    }
}

TEST_CASE("paired bounds", "[bounds]") {
    const auto e5 = Distribution::exponential(5.0);
    const auto mx = wpdve_lower_max(e5, Weight::identity(), 0.1);
    CHECK(mx.satisfied);
    CHECK_THAT(mx.bound, WithinRel(0.49421397, 1e-7));
    CHECK(mx.exact <= 0.49772 + 5e-5);
    CHECK(wpdve_lower_max(Distribution::lomax(1.0, 3.0), Weight::identity(), 1.0).satisfied);
    const auto flat = wpdve_lower_max(Distribution::uniform(0.0, 1.0), Weight::unit(), 0.5);
    CHECK_THAT(flat.bound, WithinAbs(0.0, 1e-12));
    CHECK(flat.satisfied);

    const auto p05 = wpdve_upper_psi1(e5, 0.05);
    CHECK(p05.satisfied);
    CHECK_THAT(p05.bound, WithinRel(0.45608, 1e-4));
    CHECK(p05.bound >= 0.44062);
    CHECK(wpdve_upper_psi1(Distribution::exponential(0.7), 1.0).satisfied);
    const auto pu = wpdve_upper_psi1(Distribution::uniform(0.0, 1.0), 0.5);
    CHECK(pu.satisfied);
    CHECK_THAT(pu.bound, WithinRel(0.6406, 1e-3));

    const auto v1 = wpdve_lower_variance(Distribution::exponential(1.0), 1.0);
    CHECK(v1.satisfied);
    CHECK_THAT(v1.bound, WithinRel(25.0, 1e-5));
    CHECK_THAT(v1.exact, WithinRel(29.023, 1e-4));
    const auto vu = wpdve_lower_variance(Distribution::uniform(0.0, 1.0), 0.5);
    CHECK(vu.satisfied);
    CHECK_THAT(vu.bound, WithinRel(0.0100094, 1e-4));
    const auto v5 = wpdve_lower_variance(e5, 0.05);
    CHECK(v5.satisfied);
    CHECK_THAT(v5.bound, WithinRel(0.2789, 1e-3));
}

TEST_CASE("every bound whose condition holds is satisfied", "[bounds][property]") {
    const std::vector<Distribution> laws = {
        Distribution::exponential(0.7), Distribution::exponential(5.0), Distribution::uniform(0.0, 1.0),
        Distribution::lomax(1.0, 3.0), Distribution::weibull(2.5, 1.3), Distribution::power(2.0)};
    int held = 0;
    for (const auto& d : laws)
        for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const double t = d.quantile(p);
            for (const auto& r : all_bounds(d, t, 1.0, 1.0)) {
                INFO(d.describe() << " t=" << t << " " << r.name << " bound=" << r.bound
                                  << " exact=" << r.exact);
                if (r.precondition != Precondition::Violated) {
                    ++held;
                    CHECK(r.satisfied);
                }
            }
        }
    CHECK(held > 100);
}

TEST_CASE("system bounds on power components", "[bounds]") {
    const auto c = Distribution::power(0.2);
    struct Expect {
        DistortionFunction q;
        double eta;
        double component_bound;
    };
    const std::vector<Expect> cases = {{DistortionFunction::series(), 15765.9, 156.8},
                                       {DistortionFunction::two_of_three(), 999.8, 9.94},
                                       {DistortionFunction::parallel(), 25861.5, 257.2}};
    for (const auto& e : cases) {
        const CoherentSystem s{c, e.q};
        INFO(e.q.name());
        CHECK_THAT(system_ratio_sup(s, 0.5).value, WithinRel(e.eta, 1e-4));
        const auto comp = system_bound_component(s, 0.5);
        CHECK(comp.precondition == Precondition::Holds);
        CHECK(comp.satisfied);
        CHECK_THAT(comp.bound, WithinRel(e.component_bound, 1e-3));
        const auto floor = system_bound_density_floor(s, 0.2, 0.5);
        CHECK(floor.precondition == Precondition::Holds);
        CHECK(floor.satisfied);
        // The power density exceeds 1 near 0, so the entropy-type condition fails.
        CHECK(system_bound_entropy(s, 1.8, 0.0, 0.5).precondition == Precondition::Violated);
        CHECK(system_ordering_check(s, 0.5).precondition == Precondition::Violated);
    }

    const CoherentSystem single{c, DistortionFunction::identity()};
    CHECK_THAT(system_ratio_sup(single, 0.5).value, WithinRel(1.0, 1e-12));
    const auto one = system_bound_component(single, 0.5);
    CHECK(one.satisfied);
    CHECK_THAT(one.bound, WithinRel(0.0099468, 1e-4));
    const auto ord = system_ordering_check(single, 0.5);
    CHECK(ord.precondition == Precondition::Holds);
    CHECK(ord.satisfied);

    const CoherentSystem useries{Distribution::uniform(0.0, 1.0), DistortionFunction::series()};
    const auto uf = system_bound_density_floor(useries, 1.0, 0.8);
    CHECK(uf.precondition == Precondition::Holds);
    CHECK(uf.satisfied);
    CHECK_THAT(uf.bound, WithinRel(0.057467, 1e-4));
}

TEST_CASE("grid supremum grows under refinement", "[bounds][property]") {
    for (const auto& q : {DistortionFunction::series(), DistortionFunction::two_of_three(),
                          DistortionFunction::parallel()}) {
        const CoherentSystem s{Distribution::power(0.2), q};
        double prev = 0.0;
        for (int n : {129, 257, 513, 1025}) {
            const double sup = system_ratio_sup(s, 0.5, n).value;
            CHECK(sup >= prev - 1e-9);
            prev = sup;
        }
    }
}
