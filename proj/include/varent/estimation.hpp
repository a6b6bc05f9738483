#pragma once

// Kernel (non-parametric) and maximum-likelihood (parametric) estimators of
// WPVE and WPDVE with weight y.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "varent/distributions.hpp"
#include "varent/error.hpp"
#include "varent/fitting.hpp"
#include "varent/measures.hpp"
#include "varent/quadrature.hpp"

namespace varent {

/// Gaussian kernel density estimate. With `reflect` set, mass leaking below
/// zero is reflected back onto (0, inf) (boundary-corrected variant).
class KernelEstimator {
public:
    KernelEstimator(std::vector<double> sample, double bandwidth, bool reflect = false)
        : sample_(std::move(sample)), b_(bandwidth), reflect_(reflect) {
        require_sample(sample_);
        for (double y : sample_)
            if (!(y > 0.0)) throw DataError("kernel estimator expects positive lifetimes");
        if (!(b_ > 0.0) || !std::isfinite(b_)) throw DomainError("bandwidth must be positive");
        std::sort(sample_.begin(), sample_.end());
    }

    double bandwidth() const { return b_; }
    bool reflected() const { return reflect_; }
    const std::vector<double>& sample() const { return sample_; }
    std::size_t size() const { return sample_.size(); }

    /// Upper end of the integration windows: max(sample) + 10 b.
    double upper_limit() const { return sample_.back() + 10.0 * b_; }

    double pdf(double y) const {
        if (reflect_ && y < 0.0) return 0.0;
        double sum = kernel_sum(y);
        if (reflect_) sum += kernel_sum(-y);
        return sum / (static_cast<double>(sample_.size()) * b_ * std::sqrt(2.0 * std::numbers::pi));
    }

    /// log of the estimate, via log-sum-exp so it stays finite in the tails.
    double log_pdf(double y) const {
        if (reflect_ && y < 0.0) return -std::numeric_limits<double>::infinity();
        double top = -std::numeric_limits<double>::infinity();
        auto visit = [&](double x, auto&& fn) {
            for (auto it = lower(x); it != sample_.end() && *it <= x + kReach * b_; ++it) fn(*it, x);
        };
        auto max_exp = [&](double yi, double x) {
            const double z = (x - yi) / b_;
            top = std::max(top, -0.5 * z * z);
        };
        visit(y, max_exp);
        if (reflect_) visit(-y, max_exp);
        if (!std::isfinite(top)) {
            // No point within reach: the nearest one dominates.
            const double near = nearest(y);
            const double z = (y - near) / b_;
            top = -0.5 * z * z;
        }
        double acc = 0.0;
        auto add = [&](double yi, double x) {
            const double z = (x - yi) / b_;
            acc += std::exp(-0.5 * z * z - top);
        };
        visit(y, add);
        if (reflect_) visit(-y, add);
        if (acc == 0.0) acc = 1.0;
        return top + std::log(acc) -
               std::log(static_cast<double>(sample_.size()) * b_ * std::sqrt(2.0 * std::numbers::pi));
    }

    /// Estimated mass on (lo, hi) by quadrature of the estimate.
    double mass(double lo, double hi) const {
        if (!(lo < hi)) return 0.0;
        return expect([](double) { return 1.0; }, lo, hi).value;
    }

    /// G-hat(t) = integral of the estimate over (0, t).
    double cdf(double t) const { return t <= 0.0 ? 0.0 : mass(0.0, t); }

    /// Integral of h(y) g-hat(y) over (lo, hi) with panel breaks every few
    /// bandwidths so narrow bumps are never straddled.
    template <class H>
    IntegralResult expect(H&& h, double lo, double hi) const {
        IntegralResult total;
        const double step = std::max(8.0 * b_, (hi - lo) / 64.0);
        for (double a = lo; a < hi; a += step) {
            const double b = std::min(hi, a + step);
            if (!(b > a)) break;
            const auto r = integrate(
                [&](double y) {
                    const double g = pdf(y);
                    return g == 0.0 ? 0.0 : h(y) * g;
                },
                a, b, opts());
            total.value += r.value;
            total.abs_error += r.abs_error;
            total.evaluations += r.evaluations;
        }
        return total;
    }

private:
    static constexpr double kReach = 12.0;

    static QuadratureOptions opts() {
        QuadratureOptions o;
        o.rel_tol = 1e-10;
        o.abs_tol = 1e-14;
        return o;
    }

    std::vector<double>::const_iterator lower(double x) const {
        return std::lower_bound(sample_.begin(), sample_.end(), x - kReach * b_);
    }

    double nearest(double x) const {
        auto it = std::lower_bound(sample_.begin(), sample_.end(), x);
        if (it == sample_.end()) return sample_.back();
        if (it == sample_.begin()) return *it;
        return (x - *(it - 1) < *it - x) ? *(it - 1) : *it;
    }

    double kernel_sum(double x) const {
        double sum = 0.0;
        for (auto it = lower(x); it != sample_.end() && *it <= x + kReach * b_; ++it) {
            const double z = (x - *it) / b_;
            sum += std::exp(-0.5 * z * z);
        }
        return sum;
    }

    std::vector<double> sample_;
    double b_;
    bool reflect_;
};

inline double kde_pdf(const KernelEstimator& k, double y) { return k.pdf(y); }
inline double kde_cdf(const KernelEstimator& k, double t) { return k.cdf(t); }

enum class Method { Nonparametric, Parametric };

inline const char* method_name(Method m) {
    return m == Method::Nonparametric ? "nonparametric" : "parametric";
}

struct EstimateResult {
    double value = 0.0;
    Method method = Method::Nonparametric;
    double t = 0.0;
    double aux = 0.0;  // G-hat(t) for kernel estimates, lambda-hat for MLE ones
};

/// Weighted past moments of a plug-in density: the estimator pipeline with
/// the density, log-density and normaliser passed in. Feeding it the true
/// law reproduces the exact measures.
template <class Expect, class LogPdf>
detail::InfoMoments plug_in_moments(Expect&& expect, LogPdf&& log_pdf, double mass) {
    return detail::information_moments(std::forward<Expect>(expect), std::forward<LogPdf>(log_pdf),
                                       [](double y) { return y; }, mass);
}

inline constexpr double kMinimumMass = 1e-12;

/// Kernel plug-in WPVE: g-hat / G-hat(t) inserted into the WPVE integrals on (0, t).
inline EstimateResult wpve_nonparametric(const KernelEstimator& k, double t) {
    if (!(t > 0.0)) throw DomainError("t must be positive");
    if (t < k.sample().front() - 5.0 * k.bandwidth())
        throw DomainError("empty past window: no observation within five bandwidths of (0, t]");
    const double hi = std::min(t, k.upper_limit());
    const double mass = k.cdf(hi);
    if (!(mass > kMinimumMass)) throw DomainError("estimated G(t) is zero: empty past window");
    const auto m = plug_in_moments([&](auto&& h) { return k.expect(h, 0.0, hi); },
                                   [&](double y) { return k.log_pdf(y); }, mass);
    return {m.variance, Method::Nonparametric, t, mass};
}

/// Kernel plug-in WPDVE: past part on (0, t), residual part on (t, max + 10 b).
inline EstimateResult wpdve_nonparametric(const KernelEstimator& k, double t) {
    if (!(t > 0.0)) throw DomainError("t must be positive");
    const double top = k.upper_limit();
    if (!(t < top)) throw DomainError("t is beyond the estimated support");
    const double past_mass = k.cdf(t);
    const double res_mass = k.mass(t, top);
    if (!(past_mass > kMinimumMass) || !(res_mass > kMinimumMass))
        throw DomainError("estimated past or residual mass is zero");
    auto log_pdf = [&](double y) { return k.log_pdf(y); };
    const auto p = plug_in_moments([&](auto&& h) { return k.expect(h, 0.0, t); }, log_pdf, past_mass);
    const auto r = plug_in_moments([&](auto&& h) { return k.expect(h, t, top); }, log_pdf, res_mass);
    return {p.variance + r.variance, Method::Nonparametric, t, past_mass};
}

/// MLE plug-in WPVE for exponential data: lambda-hat = n / sum(y).
inline EstimateResult wpve_parametric_exponential(const std::vector<double>& sample, double t) {
    const Distribution fit = mle_exponential(sample);
    return {wpve(fit, Weight::identity(), t).value, Method::Parametric, t, fit.params()[0]};
}

inline EstimateResult wpdve_parametric_exponential(const std::vector<double>& sample, double t) {
    const Distribution fit = mle_exponential(sample);
    return {wpdve(fit, Weight::identity(), t).value, Method::Parametric, t, fit.params()[0]};
}

/// Sample quantile, linear interpolation between order statistics (type 7).
inline double sample_quantile(std::vector<double> sorted, double p) {
    if (sorted.empty()) throw DataError("quantile of an empty sample");
    std::sort(sorted.begin(), sorted.end());
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto i = static_cast<std::size_t>(std::floor(h));
    if (i + 1 >= sorted.size()) return sorted.back();
    return sorted[i] + (h - static_cast<double>(i)) * (sorted[i + 1] - sorted[i]);
}

/// Silverman's rule 0.9 min(sd, IQR/1.34) n^(-1/5). Falls back to sd when the
/// IQR is zero; a constant sample has no usable bandwidth.
inline double silverman_bandwidth(const std::vector<double>& sample) {
    require_sample(sample);
    if (sample.size() < 2) throw DataError("bandwidth needs at least two observations");
    const double n = static_cast<double>(sample.size());
    const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / n;
    double ss = 0.0;
    for (double y : sample) ss += (y - mean) * (y - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    if (!(sd > 0.0)) throw DataError("constant sample: bandwidth would be zero");
    const double iqr = sample_quantile(sample, 0.75) - sample_quantile(sample, 0.25);
    double spread = std::min(sd, iqr / 1.34);
    if (!(spread > 0.0)) spread = sd;
    return 0.9 * spread * std::pow(n, -0.2);
}

}  // namespace varent
