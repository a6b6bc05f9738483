#pragma once

// Monte-Carlo harness for the WPVE/WPDVE estimators, bootstrap analysis of a
// real sample, model selection, and the embedded wind-speed data.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "varent/distributions.hpp"
#include "varent/error.hpp"
#include "varent/estimation.hpp"
#include "varent/fitting.hpp"
#include "varent/measures.hpp"
#include "varent/random.hpp"

namespace varent {

/// Average daily wind speeds (m/s) over thirty days, sorted.
inline std::vector<double> wind_speed_dataset() {
    return {0.5833, 0.6667, 0.6944, 0.7222, 0.7500, 0.7778, 0.8056, 0.8056, 0.8611, 0.8889,
            0.9167, 1.0000, 1.0278, 1.0278, 1.1111, 1.1111, 1.1111, 1.1667, 1.1667, 1.1944,
            1.2778, 1.2778, 1.3056, 1.3333, 1.3333, 1.3611, 1.4444, 2.1111, 2.1389, 2.7778};
}

struct ExperimentRow {
    double t = 0.0;
    std::size_t n = 0;
    double ab = 0.0;      // |mean(estimate) - truth|
    double ab_alt = 0.0;  // mean |estimate - truth|
    double mse = 0.0;
    double true_value = 0.0;
    std::size_t replicates = 0;  // successful replicates
    std::size_t failed = 0;
};

struct ExperimentReport {
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<ExperimentRow> rows;

    void set(std::string key, std::string value) { config.emplace_back(std::move(key), std::move(value)); }

    /// `#key=value` lines, a header, then one line per row; 6 significant digits.
    std::string to_csv() const {
        std::string out;
        for (const auto& [k, v] : config) out += "# " + k + "=" + v + "\n";
        out += "t,n,ab,ab_alt,mse,true_value,replicates,failed\n";
        for (const auto& r : rows) {
            out += format_number(r.t) + "," + std::to_string(r.n) + "," + format_number(r.ab) + "," +
                   format_number(r.ab_alt) + "," + format_number(r.mse) + "," +
                   format_number(r.true_value) + "," + std::to_string(r.replicates) + "," +
                   std::to_string(r.failed) + "\n";
        }
        return out;
    }

    const ExperimentRow& at(double t, std::size_t n) const {
        for (const auto& r : rows)
            if (r.n == n && std::abs(r.t - t) <= 1e-12 * std::max(1.0, std::abs(t))) return r;
        throw DomainError("no experiment row for the requested (t, n)");
    }

    static std::string format_number(double v) {
        if (std::isnan(v)) return "nan";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return buf;
    }
};

namespace detail {

/// Pairwise summation; the result depends only on the order of `v`.
inline double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

/// Aggregates one (t, n) cell; NaN estimates are failed replicates.
inline ExperimentRow summarise(double t, std::size_t n, double truth, const std::vector<double>& est) {
    ExperimentRow row;
    row.t = t;
    row.n = n;
    row.true_value = truth;
    std::vector<double> ok, abs_err, sq_err;
    for (double e : est) {
        if (std::isnan(e)) {
            ++row.failed;
            continue;
        }
        ok.push_back(e);
        abs_err.push_back(std::abs(e - truth));
        sq_err.push_back((e - truth) * (e - truth));
    }
    row.replicates = ok.size();
    if (ok.empty()) {
        row.ab = row.ab_alt = row.mse = std::numeric_limits<double>::quiet_NaN();
        return row;
    }
    const double m = static_cast<double>(ok.size());
    row.ab = std::abs(pairwise_sum(ok.data(), ok.size()) / m - truth);
    row.ab_alt = pairwise_sum(abs_err.data(), abs_err.size()) / m;
    row.mse = pairwise_sum(sq_err.data(), sq_err.size()) / m;
    return row;
}

/// Runs `body(rep)` for rep in [0, reps) on up to `threads` workers.
template <class Body>
void for_each_replicate(std::size_t reps, unsigned threads, Body&& body) {
    if (threads <= 1 || reps < 2) {
        for (std::size_t r = 0; r < reps; ++r) body(r);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, reps));
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t r = next++; r < reps; r = next++) body(r);
        });
    for (auto& th : pool) th.join();
}

}  // namespace detail

struct SimulationConfig {
    double lambda = 0.7;
    std::vector<double> ts;
    std::vector<std::size_t> ns;
    std::size_t reps = 100;
    std::uint64_t seed = 42;
    Method method = Method::Parametric;
    double bandwidth = 0.0;  // 0 selects Silverman's rule per sample
    unsigned threads = 1;
};

namespace detail {

inline void validate(const SimulationConfig& c) {
    if (!(c.lambda > 0.0) || !std::isfinite(c.lambda)) throw DomainError("rate must be positive");
    if (c.reps < 2) throw DomainError("at least two replications are required");
    if (c.ts.empty() || c.ns.empty()) throw DomainError("t-grid and n-grid must be non-empty");
    for (double t : c.ts)
        if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("t values must be positive");
    for (auto n : c.ns)
        if (n < 2) throw DomainError("sample sizes must be at least 2");
    if (c.bandwidth < 0.0 || !std::isfinite(c.bandwidth)) throw DomainError("bandwidth must be >= 0");
}

// Every (replicate, sample size) cell draws its own exponential sample from
// child seed r * |ns| + i, so cells are independent and order-free.
template <class Estimate>
ExperimentReport simulate(const SimulationConfig& c, const char* measure, double (*truth)(double, double),
                          Estimate&& estimate) {
    validate(c);
    const Distribution law = Distribution::exponential(c.lambda);
    const std::size_t nn = c.ns.size(), nt = c.ts.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    // est[(r * nn + i) * nt + j]
    std::vector<double> est(c.reps * nn * nt, nan);

    for_each_replicate(c.reps, c.threads, [&](std::size_t r) {
        for (std::size_t i = 0; i < nn; ++i) {
            const auto y = law.sample(c.ns[i], child_seed(c.seed, r * nn + i));
            estimate(y, c, &est[(r * nn + i) * nt]);
        }
    });

    ExperimentReport rep;
    rep.set("measure", measure);
    rep.set("distribution", "exp:lambda=" + ExperimentReport::format_number(c.lambda));
    rep.set("method", method_name(c.method));
    rep.set("replications", std::to_string(c.reps));
    rep.set("seed", std::to_string(c.seed));
    rep.set("bandwidth", c.method == Method::Parametric ? "none"
                         : c.bandwidth > 0.0          ? ExperimentReport::format_number(c.bandwidth)
                                                      : "silverman");
    for (std::size_t j = 0; j < nt; ++j) {
        const double tv = truth(c.lambda, c.ts[j]);
        for (std::size_t i = 0; i < nn; ++i) {
            std::vector<double> cell(c.reps);
            for (std::size_t r = 0; r < c.reps; ++r) cell[r] = est[(r * nn + i) * nt + j];
            rep.rows.push_back(summarise(c.ts[j], c.ns[i], tv, cell));
        }
    }
    return rep;
}

template <class Kernel, class Parametric>
auto estimator(Kernel&& kernel, Parametric&& parametric) {
    return [kernel, parametric](const std::vector<double>& y, const SimulationConfig& c, double* out) {
        try {
            if (c.method == Method::Parametric) {
                const Distribution fit = mle_exponential(y);
                for (std::size_t j = 0; j < c.ts.size(); ++j) {
                    try {
                        out[j] = parametric(fit, c.ts[j]);
                    } catch (const Error&) {
                    }
                }
                return;
            }
            const double b = c.bandwidth > 0.0 ? c.bandwidth : silverman_bandwidth(y);
            const KernelEstimator k(y, b);
            for (std::size_t j = 0; j < c.ts.size(); ++j) {
                try {
                    out[j] = kernel(k, c.ts[j]);
                } catch (const Error&) {
                }
            }
        } catch (const Error&) {
            // The whole replicate failed; its cells stay NaN.
        }
    };
}

}  // namespace detail

/// Exact WPVE (weight y) of Exponential(lambda) at t.
inline double exponential_wpve_truth(double lambda, double t) {
    return wpve(Distribution::exponential(lambda), Weight::identity(), t).value;
}

/// Exact WPDVE (weight y) of Exponential(lambda) at t.
inline double exponential_wpdve_truth(double lambda, double t) {
    return wpdve(Distribution::exponential(lambda), Weight::identity(), t).value;
}

/// AB/MSE of the WPVE estimator on exponential samples over the (t, n) grid.
inline ExperimentReport simulate_wpve(const SimulationConfig& c) {
    return detail::simulate(
        c, "wpve", &exponential_wpve_truth,
        detail::estimator([](const KernelEstimator& k, double t) { return wpve_nonparametric(k, t).value; },
                          [](const Distribution& fit, double t) {
                              return wpve(fit, Weight::identity(), t).value;
                          }));
}

/// AB/MSE of the WPDVE estimator on exponential samples over the (t, n) grid.
inline ExperimentReport simulate_wpdve(const SimulationConfig& c) {
    return detail::simulate(
        c, "wpdve", &exponential_wpdve_truth,
        detail::estimator([](const KernelEstimator& k, double t) { return wpdve_nonparametric(k, t).value; },
                          [](const Distribution& fit, double t) {
                              return wpdve(fit, Weight::identity(), t).value;
                          }));
}

/// Bootstrap AB/MSE of the kernel WPVE estimate on `data` (resamples of the
/// same size, fixed bandwidth b_n) against the WPVE of the fitted law.
inline ExperimentReport bootstrap_wpve(const std::vector<double>& data, const Distribution& fitted,
                                       std::size_t B, double bandwidth, const std::vector<double>& ts,
                                       std::uint64_t seed, unsigned threads = 1) {
    require_sample(data);
    if (B < 2) throw DomainError("at least two bootstrap resamples are required");
    if (!(bandwidth > 0.0)) throw DomainError("bandwidth must be positive");
    if (ts.empty()) throw DomainError("t-grid must be non-empty");
    for (double t : ts)
        if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("t values must be positive");
    for (double y : data)
        if (!(y > 0.0)) throw DataError("bootstrap expects positive lifetimes");

    const std::size_t n = data.size(), nt = ts.size();
    std::vector<double> est(B * nt, std::numeric_limits<double>::quiet_NaN());
    detail::for_each_replicate(B, threads, [&](std::size_t b) {
        UniformStream u(child_seed(seed, b));
        std::vector<double> y(n);
        for (auto& v : y) v = data[u.index(n)];
        const KernelEstimator k(std::move(y), bandwidth);
        for (std::size_t j = 0; j < nt; ++j) {
            try {
                est[b * nt + j] = wpve_nonparametric(k, ts[j]).value;
            } catch (const Error&) {
            }
        }
    });

    ExperimentReport rep;
    rep.set("measure", "wpve");
    rep.set("distribution", fitted.describe());
    rep.set("method", "bootstrap-nonparametric");
    rep.set("replications", std::to_string(B));
    rep.set("seed", std::to_string(seed));
    rep.set("bandwidth", ExperimentReport::format_number(bandwidth));
    for (std::size_t j = 0; j < nt; ++j) {
        std::vector<double> cell(B);
        for (std::size_t b = 0; b < B; ++b) cell[b] = est[b * nt + j];
        const double truth = wpve(fitted, Weight::identity(), ts[j]).value;
        rep.rows.push_back(detail::summarise(ts[j], n, truth, cell));
    }
    return rep;
}

/// GumbelII, Weibull and exponential fits ranked by AIC (best first).
inline std::vector<FitResult> model_selection(const std::vector<double>& data) {
    std::vector<FitResult> fits;
    for (Family f : {Family::GumbelII, Family::Weibull, Family::Exponential}) fits.push_back(mle_fit(f, data));
    std::stable_sort(fits.begin(), fits.end(),
                     [](const FitResult& a, const FitResult& b) { return a.aic < b.aic; });
    return fits;
}

}  // namespace varent
