#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "varent/experiments.hpp"
#include "varent/fitting.hpp"

using namespace varent;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("exponential MLE", "[fitting]") {
    CHECK_THAT(mle_exponential({1.0, 1.0, 1.0}).params()[0], WithinRel(1.0, 1e-15));
    CHECK_THAT(mle_exponential({2.0}).params()[0], WithinRel(0.5, 1e-15));
    CHECK_THAT(mle_exponential(wind_speed_dataset()).params()[0], WithinAbs(0.8633, 1e-4));
    CHECK_THROWS_AS(mle_exponential({}), DataError);
    CHECK_THROWS_AS(mle_exponential({1.0, -2.0}), DataError);
}

TEST_CASE("exponential MLE maximises the likelihood", "[fitting][property]") {
    const auto y = Distribution::gumbel2(2.0, 1.0).sample(50, 11);
    const double lam = mle_exponential(y).params()[0];
    const double best = negative_log_likelihood(Distribution::exponential(lam), y);
    CHECK(negative_log_likelihood(Distribution::exponential(lam * 1.01), y) > best);
    CHECK(negative_log_likelihood(Distribution::exponential(lam * 0.99), y) > best);
}

TEST_CASE("wind-speed fits", "[fitting]") {
    const auto data = wind_speed_dataset();

    const auto g = mle_fit(Family::GumbelII, data);
    CHECK_THAT(g.fitted.params()[0], WithinAbs(3.3869, 1e-2));
    CHECK_THAT(g.fitted.params()[1], WithinAbs(0.7544, 1e-2));
    CHECK_THAT(g.neg_log_lik, WithinAbs(12.5333, 1e-1));
    CHECK_THAT(g.aic, WithinAbs(29.0665, 1e-1));
    CHECK(g.converged);
    // Frozen optimum (cross-checked with an independent optimiser).
    CHECK_THAT(g.fitted.params()[0], WithinRel(3.38647379, 1e-6));
    CHECK_THAT(g.fitted.params()[1], WithinRel(0.75452729, 1e-6));
    CHECK_THAT(g.neg_log_lik, WithinRel(12.53324964, 1e-8));

    const auto w = mle_fit(Family::Weibull, data);
    CHECK_THAT(w.fitted.params()[0], WithinAbs(2.5393, 1e-2));
    CHECK_THAT(w.fitted.params()[1], WithinAbs(1.3048, 1e-2));
    CHECK_THAT(w.neg_log_lik, WithinRel(18.56587304, 1e-7));

    const auto e = mle_fit(Family::Exponential, data);
    CHECK_THAT(e.neg_log_lik, WithinAbs(34.4095, 1e-2));
    CHECK_THAT(e.aic, WithinAbs(70.8191, 1e-2));
    CHECK_THAT(e.bic, WithinAbs(72.2203, 1e-2));
}

TEST_CASE("information criteria are the textbook formulas", "[fitting][property]") {
    const auto data = wind_speed_dataset();
    for (Family f : {Family::GumbelII, Family::Weibull, Family::Exponential}) {
        const auto r = mle_fit(f, data);
        const double k = static_cast<double>(r.k), n = static_cast<double>(r.n);
        CHECK(r.aic == 2.0 * k + 2.0 * r.neg_log_lik);
        CHECK_THAT(r.aicc, WithinRel(r.aic + 2.0 * k * (k + 1.0) / (n - k - 1.0), 1e-15));
        CHECK_THAT(r.bic, WithinRel(k * std::log(n) + 2.0 * r.neg_log_lik, 1e-15));
    }
}

TEST_CASE("Kolmogorov-Smirnov", "[fitting]") {
    const auto d = Distribution::weibull(1.7, 2.0);
    std::vector<double> exact;
    const int n = 40;
    for (int i = 1; i <= n; ++i) exact.push_back(d.quantile((i - 0.5) / n));
    CHECK_THAT(ks_test(exact, d).statistic, WithinAbs(0.5 / n, 1e-12));

    const auto data = wind_speed_dataset();
    // Asymptotic Kolmogorov p-values, frozen from an independent implementation.
    const auto g = ks_test(data, Distribution::gumbel2(3.38647379, 0.75452729));
    CHECK_THAT(g.statistic, WithinAbs(0.12304556, 1e-7));
    CHECK_THAT(g.p_value, WithinAbs(0.75405010, 1e-6));
    const auto e = ks_test(data, Distribution::exponential(0.86330687));
    CHECK_THAT(e.statistic, WithinAbs(0.40428059, 1e-7));
    CHECK(e.p_value < 0.01);
    CHECK_THAT(e.p_value, WithinRel(1.1017722e-4, 1e-5));
    const auto w = ks_test(data, Distribution::weibull(2.53934379, 1.30483714));
    CHECK_THAT(w.p_value, WithinAbs(0.20315323, 1e-6));

    CHECK(kolmogorov_sf(0.0) == 1.0);
    CHECK_THAT(kolmogorov_sf(1.0), WithinAbs(0.26999967, 1e-8));
    CHECK(kolmogorov_sf(10.0) < 1e-80);
}

TEST_CASE("unsupported fits are refused", "[fitting]") {
    CHECK_THROWS_AS(mle_fit(Family::ParetoI, {1.0, 2.0}), DomainError);
}
