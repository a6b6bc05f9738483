#pragma once

// Maximum-likelihood fitting and Kolmogorov-Smirnov goodness of fit.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "varent/distributions.hpp"
#include "varent/error.hpp"

namespace varent {

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// P(K > x) for the limiting Kolmogorov distribution. The alternating series
/// converges fast for x >= 1; below that the Jacobi-transformed form is used,
/// since the alternating one needs hundreds of terms there.
inline double kolmogorov_sf(double x) {
    if (!(x > 0.0)) return 1.0;
    constexpr double pi = std::numbers::pi;
    if (x < 1.0) {
        double cdf = 0.0;
        for (int j = 1; j < 100; ++j) {
            const double k = 2.0 * j - 1.0;
            const double term = std::exp(-k * k * pi * pi / (8.0 * x * x));
            cdf += term;
            if (term < 1e-12) break;
        }
        cdf *= std::sqrt(2.0 * pi) / x;
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double sum = 0.0;
    for (int j = 1; j < 100; ++j) {
        const double term = std::exp(-2.0 * j * j * x * x);
        sum += (j % 2 == 1 ? term : -term);
        if (term < 1e-12) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

inline void require_sample(const std::vector<double>& sample) {
    if (sample.empty()) throw DataError("sample is empty");
    for (double y : sample)
        if (!std::isfinite(y)) throw DataError("sample contains a non-finite value");
}

inline KsResult ks_test(std::vector<double> sample, const Distribution& d) {
    require_sample(sample);
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double stat = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = d.cdf(sample[i]);
        const double above = (static_cast<double>(i) + 1.0) / n - f;
        const double below = f - static_cast<double>(i) / n;
        stat = std::max({stat, std::abs(above), std::abs(below)});
    }
    return KsResult{stat, kolmogorov_sf(std::sqrt(n) * stat)};
}

inline double negative_log_likelihood(const Distribution& d, const std::vector<double>& sample) {
    double nll = 0.0;
    for (double y : sample) nll -= d.log_pdf(y);
    return nll;
}

inline Distribution mle_exponential(const std::vector<double>& sample) {
    require_sample(sample);
    double sum = 0.0;
    for (double y : sample) {
        if (!(y > 0.0)) throw DataError("exponential fit needs strictly positive data");
        sum += y;
    }
    return Distribution::exponential(static_cast<double>(sample.size()) / sum);
}

struct FitResult {
    Distribution fitted = Distribution::exponential(1.0);
    std::size_t n = 0;
    std::size_t k = 0;
    double neg_log_lik = 0.0;
    double aic = 0.0;
    double aicc = 0.0;
    double bic = 0.0;
    double ks_statistic = 0.0;
    double ks_p_value = 1.0;
    bool converged = false;
    double gradient_norm = 0.0;  // in log-parameter coordinates
    std::string status;
};

namespace detail {

using Objective = std::function<double(const std::array<double, 2>&)>;

struct SimplexResult {
    std::array<double, 2> x;
    double f;
};

inline SimplexResult nelder_mead(const Objective& f, std::array<double, 2> start, double step,
                                 int max_iter = 5000) {
    std::array<std::array<double, 2>, 3> pts{start, start, start};
    pts[1][0] += step;
    pts[2][1] += step;
    std::array<double, 3> fv{f(pts[0]), f(pts[1]), f(pts[2])};

    auto lerp = [](const std::array<double, 2>& c, const std::array<double, 2>& p, double s) {
        return std::array<double, 2>{c[0] + s * (p[0] - c[0]), c[1] + s * (p[1] - c[1])};
    };

    for (int it = 0; it < max_iter; ++it) {
        std::array<int, 3> ord{0, 1, 2};
        std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        const auto best = pts[ord[0]];
        const double fb = fv[ord[0]];
        const int w = ord[2];
        const int s = ord[1];

        double diam = 0.0;
        for (int i = 1; i < 3; ++i)
            diam = std::max({diam, std::abs(pts[ord[i]][0] - best[0]),
                             std::abs(pts[ord[i]][1] - best[1])});
        if (diam < 1e-12 && std::abs(fv[w] - fb) <= 1e-14 * (1.0 + std::abs(fb))) break;

        const std::array<double, 2> centroid{0.5 * (best[0] + pts[s][0]),
                                             0.5 * (best[1] + pts[s][1])};
        const auto refl = lerp(centroid, pts[w], -1.0);
        const double fr = f(refl);
        if (fr < fb) {
            const auto expd = lerp(centroid, pts[w], -2.0);
            const double fe = f(expd);
            if (fe < fr) {
                pts[w] = expd;
                fv[w] = fe;
            } else {
                pts[w] = refl;
                fv[w] = fr;
            }
            continue;
        }
        if (fr < fv[s]) {
            pts[w] = refl;
            fv[w] = fr;
            continue;
        }
        const bool outside = fr < fv[w];
        const auto contr = lerp(centroid, outside ? refl : pts[w], 0.5);
        const double fc = f(contr);
        if (fc < (outside ? fr : fv[w])) {
            pts[w] = contr;
            fv[w] = fc;
            continue;
        }
        for (int i = 1; i < 3; ++i) {
            pts[ord[i]] = lerp(best, pts[ord[i]], 0.5);
            fv[ord[i]] = f(pts[ord[i]]);
        }
    }
    const int b = static_cast<int>(std::min_element(fv.begin(), fv.end()) - fv.begin());
    return SimplexResult{pts[b], fv[b]};
}

struct NewtonResult {
    std::array<double, 2> x;
    bool converged;
    double gradient_norm;
};

// Newton iterations with five-point finite-difference derivatives.
inline NewtonResult newton_polish(const Objective& f, std::array<double, 2> x) {
    constexpr double h = 1e-3;
    auto shifted = [&](double d0, double d1) {
        return f(std::array<double, 2>{x[0] + d0, x[1] + d1});
    };
    auto derivatives = [&](std::array<double, 2>& g, std::array<std::array<double, 2>, 2>& hess) {
        const double f0 = f(x);
        for (int i = 0; i < 2; ++i) {
            auto at = [&](double s) { return i == 0 ? shifted(s, 0.0) : shifted(0.0, s); };
            const double p1 = at(h), m1 = at(-h), p2 = at(2 * h), m2 = at(-2 * h);
            g[i] = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
            hess[i][i] = (-p2 + 16.0 * p1 - 30.0 * f0 + 16.0 * m1 - m2) / (12.0 * h * h);
        }
        const double c = (shifted(h, h) - shifted(h, -h) - shifted(-h, h) + shifted(-h, -h)) /
                         (4.0 * h * h);
        hess[0][1] = hess[1][0] = c;
    };

    std::array<double, 2> g{};
    std::array<std::array<double, 2>, 2> hess{};
    for (int it = 0; it < 50; ++it) {
        derivatives(g, hess);
        const double det = hess[0][0] * hess[1][1] - hess[0][1] * hess[1][0];
        if (!(hess[0][0] > 0.0) || !(det > 0.0)) break;  // not a local minimum
        const std::array<double, 2> step{(hess[1][1] * g[0] - hess[0][1] * g[1]) / det,
                                         (hess[0][0] * g[1] - hess[1][0] * g[0]) / det};
        // Never accept a step that makes things worse.
        const std::array<double, 2> trial{x[0] - step[0], x[1] - step[1]};
        if (f(trial) > f(x) + 1e-12 * std::abs(f(x))) break;
        x = trial;
        if (std::hypot(step[0], step[1]) < 1e-10) {
            derivatives(g, hess);
            const double gn = std::hypot(g[0], g[1]);
            return NewtonResult{x, gn < 1e-8, gn};
        }
    }
    derivatives(g, hess);
    return NewtonResult{x, false, std::hypot(g[0], g[1])};
}

// Moment-based starting point for a Weibull(shape, scale) fit from the mean
// and sd of log-data (log Y is Gumbel-min distributed).
inline std::array<double, 2> weibull_log_moment_guess(const std::vector<double>& logs) {
    const double n = static_cast<double>(logs.size());
    const double m = std::accumulate(logs.begin(), logs.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : logs) ss += (v - m) * (v - m);
    const double s = n > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    const double shape = s > 0.0 ? std::numbers::pi / (s * std::sqrt(6.0)) : 1.0;
    const double scale = std::exp(m + std::numbers::egamma / shape);
    return {shape, scale};
}

inline void fill_criteria(FitResult& r, const std::vector<double>& sample) {
    const double n = static_cast<double>(r.n);
    const double k = static_cast<double>(r.k);
    r.aic = 2.0 * k + 2.0 * r.neg_log_lik;
    r.aicc = n - k - 1.0 > 0.0 ? r.aic + 2.0 * k * (k + 1.0) / (n - k - 1.0)
                               : std::numeric_limits<double>::infinity();
    r.bic = k * std::log(n) + 2.0 * r.neg_log_lik;
    const KsResult ks = ks_test(sample, r.fitted);
    r.ks_statistic = ks.statistic;
    r.ks_p_value = ks.p_value;
}

}  // namespace detail

/// Fits `family` to the sample by maximum likelihood. Exponential uses the
/// closed form; GumbelII and Weibull use a multi-start simplex search over
/// log-parameters followed by a Newton polish.
inline FitResult mle_fit(Family family, const std::vector<double>& sample) {
    require_sample(sample);
    for (double y : sample)
        if (!(y > 0.0)) throw DataError("lifetime fits need strictly positive data");

    FitResult r;
    r.n = sample.size();
    if (family == Family::Exponential) {
        r.fitted = mle_exponential(sample);
        r.k = 1;
        r.neg_log_lik = negative_log_likelihood(r.fitted, sample);
        r.converged = true;
        r.status = "closed form";
        detail::fill_criteria(r, sample);
        return r;
    }

    Distribution (*make)(double, double) = nullptr;
    std::array<double, 2> guess{};
    std::vector<double> logs;
    logs.reserve(sample.size());
    if (family == Family::GumbelII) {
        make = &Distribution::gumbel2;
        for (double y : sample) logs.push_back(-std::log(y));  // 1/Y is Weibull
        const auto w = detail::weibull_log_moment_guess(logs);
        guess = {w[0], std::pow(w[1], -w[0])};
    } else if (family == Family::Weibull) {
        make = &Distribution::weibull;
        for (double y : sample) logs.push_back(std::log(y));
        guess = detail::weibull_log_moment_guess(logs);
    } else {
        throw DomainError(std::string("no likelihood fit available for family ") +
                          family_name(family));
    }

    const detail::Objective nll = [&](const std::array<double, 2>& th) {
        const double a = std::exp(th[0]);
        const double b = std::exp(th[1]);
        if (!std::isfinite(a) || !std::isfinite(b) || a <= 0.0 || b <= 0.0)
            return std::numeric_limits<double>::max();
        const double v = negative_log_likelihood(make(a, b), sample);
        return std::isfinite(v) ? v : std::numeric_limits<double>::max();
    };

    const std::array<double, 2> base{std::log(guess[0]), std::log(guess[1])};
    const double l2 = std::log(2.0);
    const std::array<std::array<double, 2>, 5> starts{{{base[0], base[1]},
                                                       {base[0] - l2, base[1]},
                                                       {base[0] + l2, base[1]},
                                                       {base[0], base[1] - l2},
                                                       {base[0], base[1] + l2}}};
    detail::SimplexResult best{base, std::numeric_limits<double>::infinity()};
    for (const auto& s : starts) {
        const auto res = detail::nelder_mead(nll, s, 0.2);
        if (res.f < best.f) best = res;
    }
    const auto polished = detail::newton_polish(nll, best.x);

    r.fitted = make(std::exp(polished.x[0]), std::exp(polished.x[1]));
    r.k = 2;
    r.neg_log_lik = negative_log_likelihood(r.fitted, sample);
    r.converged = polished.converged;
    r.gradient_norm = polished.gradient_norm;
    r.status = polished.converged ? "converged" : "not converged";
    detail::fill_criteria(r, sample);
    return r;
}

}  // namespace varent
