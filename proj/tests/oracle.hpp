#pragma once

// Brute-force reference computations used to cross-check the adaptive
// machinery. Deliberately naive: fixed midpoint grids, no adaptivity.

#include <cmath>
#include <cstddef>

namespace oracle {

/// Composite midpoint rule with n panels on (a, b).
template <class F>
double midpoint(F&& f, double a, double b, std::size_t n = 1'000'000) {
    const double h = (b - a) / static_cast<double>(n);
    long double sum = 0.0L;
    for (std::size_t i = 0; i < n; ++i) sum += f(a + (static_cast<double>(i) + 0.5) * h);
    return static_cast<double>(sum * h);
}

/// Mean of -w(y) log(g(y)/mass) under g/mass on (lo, hi); points where g
/// underflows contribute nothing.
template <class Pdf, class W>
double weighted_info_mean(Pdf&& g, W&& w, double lo, double hi, double mass,
                          std::size_t n = 1'000'000) {
    return midpoint(
               [&](double y) {
                   const double gy = g(y);
                   return gy == 0.0 ? 0.0 : -w(y) * std::log(gy / mass) * gy;
               },
               lo, hi, n) /
           mass;
}

/// Variance of -w(y) log(g(y)/mass) under g/mass on (lo, hi), by two
/// midpoint passes.
template <class Pdf, class W>
double weighted_info_variance(Pdf&& g, W&& w, double lo, double hi, double mass,
                              std::size_t n = 1'000'000) {
    auto info = [&](double y) { return -w(y) * std::log(g(y) / mass); };
    const double mean = weighted_info_mean(g, w, lo, hi, mass, n);
    const double second = midpoint(
                              [&](double y) {
                                  const double gy = g(y);
                                  if (gy == 0.0) return 0.0;
                                  const double d = info(y) - mean;
                                  return d * d * gy;
                              },
                              lo, hi, n) /
                          mass;
    return second;
}

}  // namespace oracle
