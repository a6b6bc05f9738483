#include <catch_amalgamated.hpp>

#include <cmath>
#include <tuple>
#include <vector>

#include "varent/closed_forms.hpp"
#include "varent/coherent.hpp"
#include "varent/measures.hpp"
#include "varent/transforms.hpp"

using namespace varent;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const Weight y_weight = Weight::identity();
}

TEST_CASE("uniform", "[closed-forms]") {
    for (auto [a, b, t] : std::vector<std::tuple<double, double, double>>{
             {0.0, 1.0, 0.3}, {0.0, 1.0, 1.0}, {2.0, 5.0, 4.5}, {0.0, 10.0, 7.0}}) {
        CHECK_THAT(wpve_uniform_closed(a, b, t),
                   WithinAbs(wpve(Distribution::uniform(a, b), y_weight, t).value, 1e-10));
    }
    CHECK(wpve_uniform_closed(2.0, 5.0, 3.0) == 0.0);
    CHECK_THROWS_AS(wpve_uniform_closed(0.0, 1.0, 0.0), DomainError);
}

TEST_CASE("Pareto-I, including the shapes 1 and 2", "[closed-forms]") {
    const std::vector<std::tuple<double, double, double>> cases = {
        {3.0, 2.0, 1.0319257950}, {0.5, 3.0, 1.5741010121}, {4.0, 1.5, 0.3329508039},
        {1.0, 2.0, 0.3253736944}, {2.0, 2.0, 0.6660020190}};
    for (auto [alpha, t, frozen] : cases) {
        INFO("alpha=" << alpha << " t=" << t);
        const double closed = wpve_pareto_closed(alpha, t);
        CHECK_THAT(closed, WithinRel(frozen, 1e-9));
        CHECK_THAT(closed, WithinRel(wpve(Distribution::pareto1(alpha), y_weight, t).value, 1e-8));
    }
}

TEST_CASE("exponential", "[closed-forms]") {
    const std::vector<double> ts = {0.1, 0.2, 0.3, 0.4, 1.0};
    const std::vector<double> table = {0.004285, 0.007901, 0.009078, 0.008114, 0.011937};
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double c = wpve_exponential_closed(0.7, ts[i]);
        CHECK_THAT(c, WithinAbs(table[i], 5e-6));
        CHECK_THAT(c, WithinRel(wpve(Distribution::exponential(0.7), y_weight, ts[i]).value, 1e-9));
    }
    for (double lam : {0.3, 2.0, 5.0})
        for (double t : {0.05, 1.0, 3.0})
            CHECK_THAT(wpve_exponential_closed(lam, t),
                       WithinRel(wpve(Distribution::exponential(lam), y_weight, t).value, 1e-8));
}

TEST_CASE("square of an exponential", "[closed-forms]") {
    const std::vector<std::pair<double, double>> cases = {
        {0.5, 0.0032564597}, {1.0, 0.0931814822}, {4.0, 7.5456533357}};
    for (auto [t, frozen] : cases) {
        CHECK_THAT(wpve_weibull_closed(1.0, t), WithinRel(frozen, 5e-8));
        CHECK_THAT(wpve_weibull_closed(1.0, t),
                   WithinRel(wpve(Distribution::sqrt_weibull(1.0), y_weight, t).value, 1e-8));
    }
    CHECK_THAT(wpve_weibull_closed(2.0, 4.0),
               WithinRel(wpve_via_transform(Distribution::exponential(2.0), MonotoneMap::square(), 4.0),
                         1e-8));
    // vanishes like t^2 log^2 t
    CHECK(wpve_weibull_closed(1.0, 1e-6) < 1e-10);
    CHECK(wpve_weibull_closed(1.0, 1e-8) < wpve_weibull_closed(1.0, 1e-6) * 1e-3);
}

TEST_CASE("shifted exponential", "[closed-forms]") {
    const std::vector<std::pair<double, double>> cases = {
        {1.5, 0.0065805490}, {2.0, 0.1777927523}, {4.0, 5.9311876162}};
    for (auto [t, frozen] : cases) {
        CHECK_THAT(wpve_shifted_exp_closed(1.0, t), WithinRel(frozen, 1e-8));
        CHECK_THAT(wpve_shifted_exp_closed(1.0, t),
                   WithinRel(wpve(Distribution::shifted_exponential(1.0), y_weight, t).value, 1e-8));
    }
}

TEST_CASE("paired entropy", "[closed-forms]") {
    for (double t : {0.1, 0.5, 0.9})
        CHECK_THAT(wpde_uniform_closed(1.0, t),
                   WithinRel(wpde(Distribution::uniform(0.0, 1.0), y_weight, t).value, 1e-10));
    CHECK_THAT(wpde_uniform_closed(1.0, 0.5), WithinRel(std::log(0.5), 1e-15));
    CHECK_THAT(wpde_exponential_closed(0.7, 1.0), WithinRel(4.7713671121, 1e-10));
    for (double lam : {0.7, 5.0})
        for (double t : {0.05, 0.5, 2.0})
            CHECK_THAT(wpde_exponential_closed(lam, t),
                       WithinRel(wpde(Distribution::exponential(lam), y_weight, t).value, 1e-9));
}

TEST_CASE("power-law PRHR and parallel systems", "[closed-forms]") {
    CHECK_THAT(wpve_prhr_power_closed(1.0, 1.0, 1.0, 0.5), WithinRel(0.0100094378, 1e-8));
    for (auto [alpha, beta, a, t] : std::vector<std::tuple<double, double, double, double>>{
             {1.5, 1.0, 2.0, 0.7}, {0.5, 2.0, 3.0, 1.2}, {2.0, 1.0, 0.5, 0.3}}) {
        const PrhrModel m{Distribution::power(alpha, beta), a};
        CHECK_THAT(wpve_prhr_power_closed(alpha, beta, a, t), WithinRel(wpve_prhr(m, t), 1e-8));
    }
    CHECK_THAT(wpve_parallel_power_closed(0.2, 0.5), WithinRel(0.0013144619, 1e-8));
    CHECK_THAT(wpve_parallel_power_closed(0.2, 0.5),
               WithinRel(wpve_system({Distribution::power(0.2), DistortionFunction::parallel()}, 0.5),
                         1e-8));
    // beta = 1, t = 1: parallel of three uniforms is Power(3).
    CHECK_THAT(wpve_parallel_power_closed(1.0, 1.0),
               WithinRel(wpve(Distribution::power(3.0), y_weight, 1.0).value, 1e-9));
}
