#pragma once

// Adaptive one-dimensional quadrature.
//
// Global adaptive bisection driven by the 7/15-point Gauss-Kronrod pair with
// the QUADPACK error heuristics. Intervals whose error estimate sits at the
// round-off floor are retired instead of being bisected forever, so
// integrands with a y^p (log y)^k endpoint singularity (p > -1) converge in a
// few hundred subdivisions.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "varent/error.hpp"

namespace varent {

struct IntegralResult {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t evaluations = 0;
};

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    std::size_t max_intervals = 2000;
};

inline constexpr double kDefaultRelTol = 1e-10;

namespace detail {

// Abscissae and weights of the 15-point Kronrod rule on (-1, 1); the even
// entries of kXgk are the 7-point Gauss nodes.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    double roundoff;  // error floor that bisection cannot reduce
    bool operator<(const Panel& other) const { return error < other.error; }
};

// NaN at a node hugging an endpoint is read as the vanishing limit of
// x log x style products; anywhere else it is an error in the integrand.
template <class F>
double guarded_eval(F& f, double x, double lo, double hi) {
    const double v = f(x);
    if (std::isfinite(v)) return v;
    const double slack = 1e-10 * (hi - lo);
    if (x - lo <= slack || hi - x <= slack) return 0.0;
    throw DomainError("integrand is not finite at x = " + std::to_string(x));
}

template <class F>
Panel gauss_kronrod15(F& f, double a, double b, double lo, double hi) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = std::numeric_limits<double>::min();

    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = guarded_eval(f, centre, lo, hi);

    double gauss = fc * kWg[3];
    double kronrod = fc * kWgk[7];
    double abs_sum = std::abs(kronrod);
    std::array<double, 7> left{};
    std::array<double, 7> right{};
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        left[j] = guarded_eval(f, centre - dx, lo, hi);
        right[j] = guarded_eval(f, centre + dx, lo, hi);
        const double pair = left[j] + right[j];
        kronrod += kWgk[j] * pair;
        abs_sum += kWgk[j] * (std::abs(left[j]) + std::abs(right[j]));
        if (j % 2 == 1) gauss += kWg[j / 2] * pair;
    }
    const double mean = 0.5 * kronrod;
    double asc = kWgk[7] * std::abs(fc - mean);
    for (std::size_t j = 0; j < 7; ++j)
        asc += kWgk[j] * (std::abs(left[j] - mean) + std::abs(right[j] - mean));

    const double value = kronrod * half;
    const double res_abs = abs_sum * std::abs(half);
    const double res_asc = asc * std::abs(half);
    double err = std::abs((kronrod - gauss) * half);
    if (res_asc != 0.0 && err != 0.0)
        err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    const double floor = (res_abs > tiny / (50.0 * eps)) ? 50.0 * eps * res_abs : 0.0;
    err = std::max(err, floor);
    return Panel{a, b, value, err, floor};
}

template <class F>
IntegralResult integrate_finite(F& f, double a, double b, const QuadratureOptions& opt) {
    constexpr double eps = std::numeric_limits<double>::epsilon();

    std::priority_queue<Panel> active;
    std::vector<Panel> retired;
    Panel first = gauss_kronrod15(f, a, b, a, b);
    std::size_t evaluations = 15;
    double total = first.value;
    double total_err = first.error;
    double retired_err = 0.0;    // round-off floors; nothing left to gain
    double unresolved_err = 0.0; // panels too narrow to bisect further
    active.push(first);
    std::size_t intervals = 1;

    auto tolerance = [&] { return std::max(opt.rel_tol * std::abs(total), opt.abs_tol); };

    while (total_err - retired_err > tolerance() && !active.empty()) {
        if (intervals >= opt.max_intervals) {
            throw QuadratureError("quadrature subdivision budget exhausted on [" +
                                      std::to_string(a) + ", " + std::to_string(b) + "]",
                                  total, total_err);
        }
        Panel worst = active.top();
        active.pop();
        const double width = worst.b - worst.a;
        const double scale = std::max(std::abs(worst.a), std::abs(worst.b));
        const bool narrow = width <= 64.0 * eps * scale || width < 1e-300;
        if (narrow || worst.error <= 1.000001 * worst.roundoff) {
            if (narrow && worst.error > worst.roundoff) unresolved_err += worst.error;
            retired_err += worst.error;
            retired.push_back(worst);
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        Panel lhs = gauss_kronrod15(f, worst.a, mid, a, b);
        Panel rhs = gauss_kronrod15(f, mid, worst.b, a, b);
        evaluations += 30;
        ++intervals;
        total += lhs.value + rhs.value - worst.value;
        total_err += lhs.error + rhs.error - worst.error;
        active.push(lhs);
        active.push(rhs);
    }

    // Re-sum to shed the drift of the running totals.
    double value = 0.0;
    double err = 0.0;
    for (const auto& p : retired) {
        value += p.value;
        err += p.error;
    }
    while (!active.empty()) {
        value += active.top().value;
        err += active.top().error;
        active.pop();
    }
    if (unresolved_err > std::max(opt.rel_tol * std::abs(value), opt.abs_tol))
        throw QuadratureError("integrand could not be resolved near a point of the range", value,
                              err);
    return IntegralResult{value, err, evaluations};
}

}  // namespace detail

/// Integrates f over (a, b); b may be +infinity, in which case the
/// substitution y = a + s u / (1 - u), s = max(1, |a|), maps the range onto [0, 1).
template <class F>
IntegralResult integrate(F&& f, double a, double b, const QuadratureOptions& opt) {
    if (std::isnan(a) || std::isnan(b) || !std::isfinite(a))
        throw DomainError("integration limits must be numbers with a finite lower limit");
    if (!(a < b)) throw DomainError("integration requires a < b");
    if (!(opt.rel_tol > 0.0)) throw DomainError("rel_tol must be positive");

    if (std::isfinite(b)) return detail::integrate_finite(f, a, b, opt);

    const double scale = std::max(1.0, std::abs(a));
    auto mapped = [&f, a, scale](double u) {
        const double one_minus = 1.0 - u;
        const double y = a + scale * u / one_minus;
        if (!std::isfinite(y)) return 0.0;
        const double v = f(y);
        if (v == 0.0) return 0.0;
        return v * scale / (one_minus * one_minus);
    };
    return detail::integrate_finite(mapped, 0.0, 1.0, opt);
}

template <class F>
IntegralResult integrate(F&& f, double a, double b, double rel_tol = kDefaultRelTol) {
    QuadratureOptions opt;
    opt.rel_tol = rel_tol;
    return integrate(std::forward<F>(f), a, b, opt);
}

/// Anything with pdf/quantile/support accessors; Distribution satisfies it.
template <class D>
concept DensityLaw = requires(const D& d, double x) {
    { d.pdf(x) } -> std::convertible_to<double>;
    { d.quantile(x) } -> std::convertible_to<double>;
    { d.support_lo() } -> std::convertible_to<double>;
    { d.support_hi() } -> std::convertible_to<double>;
};

/// Upper probability level used to cap semi-infinite ranges before the
/// remaining tail is handed to the generic substitution.
inline constexpr double kTailLevel = 1e-13;

/// Computes E[h(Y) 1{a < Y < b}] = integral of h(y) g(y) over (a, b) clipped to the support.
template <DensityLaw D, class H>
IntegralResult integrate_expectation(const D& d, H&& h, double a, double b,
                                     const QuadratureOptions& opt) {
    const double lo = std::max(a, d.support_lo());
    const double hi = std::min(b, d.support_hi());
    if (!(lo < hi)) throw DomainError("expectation range does not meet the support");
    auto integrand = [&](double y) {
        const double g = d.pdf(y);
        return g == 0.0 ? 0.0 : h(y) * g;
    };
    if (std::isfinite(hi)) return integrate(integrand, lo, hi, opt);

    const double cap = d.quantile(1.0 - kTailLevel);
    if (!(cap > lo) || !std::isfinite(cap)) return integrate(integrand, lo, hi, opt);
    IntegralResult body = integrate(integrand, lo, cap, opt);
    QuadratureOptions tail_opt = opt;
    tail_opt.abs_tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(body.value));
    IntegralResult tail = integrate(integrand, cap, hi, tail_opt);
    return IntegralResult{body.value + tail.value, body.abs_error + tail.abs_error,
                          body.evaluations + tail.evaluations};
}

template <DensityLaw D, class H>
IntegralResult integrate_expectation(const D& d, H&& h, double a, double b,
                                     double rel_tol = kDefaultRelTol) {
    QuadratureOptions opt;
    opt.rel_tol = rel_tol;
    return integrate_expectation(d, std::forward<H>(h), a, b, opt);
}

}  // namespace varent
