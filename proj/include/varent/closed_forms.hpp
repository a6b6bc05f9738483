#pragma once

// Closed-form weighted past varentropy (weight y) and paired entropy for the
// worked families. These are a verification layer over the quadrature
// measures; each formula is written in terms of truncated moments of the
// conditional law, which keeps the algebra checkable.

#include <array>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "varent/distributions.hpp"
#include "varent/error.hpp"
#include "varent/quadrature.hpp"

namespace varent {

namespace detail {

/// E[Y^k | Y <= t] for Y ~ Exponential(lambda), k = 0..K.
template <std::size_t K>
std::array<double, K + 1> exponential_past_moments(double lambda, double t) {
    const double x = lambda * t;
    const double mass = -std::expm1(-x);
    std::array<double, K + 1> m{};
    for (std::size_t k = 0; k <= K; ++k)
        m[k] = boost::math::tgamma_lower(static_cast<double>(k) + 1.0, x) /
               (std::pow(lambda, static_cast<double>(k)) * mass);
    return m;
}

/// Integral of exp(s l) l^j over (0, L); a power series is used when s L is
/// small, where the closed form cancels.
inline double exp_power_integral(double s, double L, int j) {
    if (std::abs(s * L) < 0.5) {
        double sum = 0.0;
        double term = 1.0;  // s^m L^m / m!
        for (int m = 0; m < 60; ++m) {
            const double add = term * std::pow(L, j + 1) / (m + j + 1);
            sum += add;
            if (std::abs(add) < 1e-17 * std::abs(sum)) break;
            term *= s * L / (m + 1);
        }
        return sum;
    }
    const double e = std::exp(s * L);
    switch (j) {
        case 0: return (e - 1.0) / s;
        case 1: return e * (L / s - 1.0 / (s * s)) + 1.0 / (s * s);
        case 2: return e * (L * L / s - 2.0 * L / (s * s) + 2.0 / (s * s * s)) - 2.0 / (s * s * s);
        default: throw DomainError("exp_power_integral: unsupported power");
    }
}

/// Var[-y log f(y)] under the power law f(y) = c y^(c-1) / t^c on (0, t), from
/// E[U^k (log U)^j] = c (-1)^j j! / (c + k)^(j + 1) with U = Y / t.
inline double power_past_wpve(double c, double t) {
    auto mom = [c](int k, int j) {
        const double fact = j == 2 ? 2.0 : 1.0;
        return c * (j % 2 ? -1.0 : 1.0) * fact / std::pow(c + k, j + 1);
    };
    const double K = std::log(c) - std::log(t);
    const double mean = -t * (K * mom(1, 0) + (c - 1.0) * mom(1, 1));
    const double second = t * t *
                          (K * K * mom(2, 0) + 2.0 * K * (c - 1.0) * mom(2, 1) +
                           (c - 1.0) * (c - 1.0) * mom(2, 2));
    return second - mean * mean;
}

inline void require_positive_time(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("t must be positive and finite");
}

}  // namespace detail

/// WPVE of Uniform(a, b): log^2(t - a) (t - a)^2 / 12 for a < t <= b.
inline double wpve_uniform_closed(double a, double b, double t) {
    if (!(a < b)) throw InvalidDistribution("uniform: need a < b");
    if (!(t > a)) throw DomainError("past lifetime undefined for t <= a");
    const double s = std::min(t, b) - a;
    const double l = std::log(s);
    return l * l * s * s / 12.0;
}

/// WPVE of Pareto-I(alpha), valid for every alpha > 0 including 1 and 2.
inline double wpve_pareto_closed(double alpha, double t) {
    if (!(alpha > 0.0)) throw InvalidDistribution("pareto shape must be positive");
    if (!(t > 1.0) || !std::isfinite(t)) throw DomainError("past lifetime undefined for t <= 1");
    const double mass = -std::expm1(-alpha * std::log(t));
    const double K = std::log(alpha / mass);
    const double L = std::log(t);
    // E[Y^k (log Y)^j | Y <= t]
    auto mom = [&](int k, int j) {
        return alpha / mass * detail::exp_power_integral(k - alpha, L, j);
    };
    const double a1 = alpha + 1.0;
    const double mean = -K * mom(1, 0) + a1 * mom(1, 1);
    const double second = K * K * mom(2, 0) - 2.0 * K * a1 * mom(2, 1) + a1 * a1 * mom(2, 2);
    return second - mean * mean;
}

/// WPVE of Exponential(lambda) via truncated gamma moments.
inline double wpve_exponential_closed(double lambda, double t) {
    if (!(lambda > 0.0)) throw InvalidDistribution("exponential rate must be positive");
    detail::require_positive_time(t);
    const auto m = detail::exponential_past_moments<4>(lambda, t);
    const double L = std::log(lambda / -std::expm1(-lambda * t));
    return lambda * lambda * (m[4] - m[2] * m[2]) + L * L * (m[2] - m[1] * m[1]) -
           2.0 * lambda * L * (m[3] - m[1] * m[2]);
}

/// WPVE of X = Y^2, Y ~ Exponential(lambda) (G(x) = 1 - exp(-lambda sqrt x)).
/// Writing W = A + B with A = -y^2 log f_Y(y) and B = y^2 log(2y) on Y's past
/// law at sqrt(t), Var A is closed form and the B terms use quadrature.
inline double wpve_weibull_closed(double lambda, double t) {
    if (!(lambda > 0.0)) throw InvalidDistribution("rate must be positive");
    detail::require_positive_time(t);
    const double s = std::sqrt(t);
    const auto m = detail::exponential_past_moments<6>(lambda, s);
    const double L = std::log(lambda / -std::expm1(-lambda * s));
    const double mean_a = lambda * m[3] - L * m[2];
    const double var_a = lambda * lambda * (m[6] - m[3] * m[3]) + L * L * (m[4] - m[2] * m[2]) -
                         2.0 * lambda * L * (m[5] - m[2] * m[3]);

    const Distribution y = Distribution::exponential(lambda);
    const double mass = y.cdf(s);
    auto b = [](double v) { return v * v * std::log(2.0 * v); };
    auto cond = [&](auto&& h) { return integrate_expectation(y, h, 0.0, s).value / mass; };
    const double mean_b = cond(b);
    const double var_b = cond([&](double v) {
        const double d = b(v) - mean_b;
        return d * d;
    });
    const double cov = cond([&](double v) {
        return (lambda * v * v * v - L * v * v - mean_a) * (b(v) - mean_b);
    });
    return var_a + var_b + 2.0 * cov;
}

/// WPVE of X = Y + beta, Y standard exponential.
inline double wpve_shifted_exp_closed(double beta, double t) {
    if (!(beta >= 0.0)) throw InvalidDistribution("shift must be non-negative");
    if (!(t > beta) || !std::isfinite(t)) throw DomainError("past lifetime undefined for t <= beta");
    const double s = t - beta;
    const auto m = detail::exponential_past_moments<4>(1.0, s);
    const double c = beta + std::log(-std::expm1(-s));  // beta - L', L' = -log(1 - e^-s)
    return (m[4] - m[2] * m[2]) + c * c * (m[2] - m[1] * m[1]) + 2.0 * c * (m[3] - m[1] * m[2]);
}

/// WPDE (weight y) of Uniform(0, beta): (t/2) log t + ((beta + t)/2) log(beta - t).
inline double wpde_uniform_closed(double beta, double t) {
    if (!(beta > 0.0)) throw InvalidDistribution("uniform upper end must be positive");
    if (!(t > 0.0 && t < beta)) throw DomainError("paired entropy needs 0 < t < beta");
    return 0.5 * t * std::log(t) + 0.5 * (beta + t) * std::log(beta - t);
}

/// WPDE (weight y) of Exponential(lambda). The residual part is
/// -(t + 1/lambda) log lambda + t + 2/lambda by memorylessness.
inline double wpde_exponential_closed(double lambda, double t) {
    if (!(lambda > 0.0)) throw InvalidDistribution("exponential rate must be positive");
    detail::require_positive_time(t);
    const auto m = detail::exponential_past_moments<2>(lambda, t);
    const double L = std::log(lambda / -std::expm1(-lambda * t));
    const double past = lambda * m[2] - L * m[1];
    const double residual = -(t + 1.0 / lambda) * std::log(lambda) + t + 2.0 / lambda;
    return past + residual;
}

/// WPVE of the PRHR model with baseline Power(alpha, scale beta) and exponent
/// a, i.e. of Power(a alpha, scale beta).
inline double wpve_prhr_power_closed(double alpha, double beta, double a, double t) {
    if (!(alpha > 0.0 && beta > 0.0 && a > 0.0))
        throw InvalidDistribution("power PRHR parameters must be positive");
    detail::require_positive_time(t);
    return detail::power_past_wpve(a * alpha, std::min(t, beta));
}

/// WPVE of a parallel system of three i.i.d. Power(beta) components, which is
/// Power(3 beta) on [0, 1].
inline double wpve_parallel_power_closed(double beta, double t) {
    if (!(beta > 0.0)) throw InvalidDistribution("power exponent must be positive");
    detail::require_positive_time(t);
    return detail::power_past_wpve(3.0 * beta, std::min(t, 1.0));
}

}  // namespace varent
