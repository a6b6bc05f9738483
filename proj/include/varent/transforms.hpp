#pragma once

// WPVE under monotone transformations and the proportional reversed hazard
// rate (PRHR) model G2 = G1^a.

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "varent/distributions.hpp"
#include "varent/error.hpp"
#include "varent/measures.hpp"
#include "varent/quadrature.hpp"

namespace varent {

/// Strictly monotone, differentiable map with caller-supplied derivative and
/// inverse.
class MonotoneMap {
public:
    using Fn = std::function<double(double)>;

    MonotoneMap(std::string name, Fn psi, Fn derivative, Fn inverse, bool increasing)
        : name_(std::move(name)),
          psi_(std::move(psi)),
          dpsi_(std::move(derivative)),
          inv_(std::move(inverse)),
          increasing_(increasing) {
        if (!psi_ || !dpsi_ || !inv_) throw ConstructionError("monotone map needs psi, psi' and inverse");
    }

    static MonotoneMap identity() {
        return MonotoneMap("y", [](double y) { return y; }, [](double) { return 1.0; },
                           [](double x) { return x; }, true);
    }
    static MonotoneMap affine(double a, double b) {
        if (!(a != 0.0)) throw ConstructionError("affine map needs a nonzero slope");
        return MonotoneMap(
            "affine", [a, b](double y) { return a * y + b; }, [a](double) { return a; },
            [a, b](double x) { return (x - b) / a; }, a > 0.0);
    }
    static MonotoneMap square() {
        return MonotoneMap(
            "y^2", [](double y) { return y * y; }, [](double y) { return 2.0 * y; },
            [](double x) { return std::sqrt(x); }, true);
    }
    static MonotoneMap reciprocal() {
        return MonotoneMap(
            "1/y", [](double y) { return 1.0 / y; }, [](double y) { return -1.0 / (y * y); },
            [](double x) { return 1.0 / x; }, false);
    }

    double operator()(double y) const { return psi_(y); }
    double derivative(double y) const { return dpsi_(y); }
    double inverse(double x) const { return inv_(x); }
    bool increasing() const { return increasing_; }
    const std::string& name() const { return name_; }

    /// Checks the sign of psi' and the round trip inverse(psi(y)) = y on 64
    /// interior points of the finite range (lo, hi).
    void validate(double lo, double hi) const {
        for (int i = 0; i < 64; ++i) {
            const double y = lo + (i + 0.5) / 64.0 * (hi - lo);
            const double d = dpsi_(y);
            if (increasing_ ? !(d > 0.0) : !(d < 0.0))
                throw ConstructionError("map '" + name_ + "' is not strictly monotone at y = " +
                                        std::to_string(y));
            const double back = inv_(psi_(y));
            if (std::abs(back - y) > 1e-9 * std::max(1.0, std::abs(y)))
                throw ConstructionError("map '" + name_ + "' inverse does not round-trip at y = " +
                                        std::to_string(y));
        }
    }

private:
    std::string name_;
    Fn psi_, dpsi_, inv_;
    bool increasing_;
};

namespace detail {

class TransformedLaw final : public Law {
public:
    TransformedLaw(Distribution base, MonotoneMap map) : base_(std::move(base)), map_(std::move(map)) {}

    Family family() const override { return Family::Transformed; }
    std::vector<double> params() const override { return base_.params(); }
    double lo() const override {
        return map_.increasing() ? map_(base_.support_lo()) : map_(base_.support_hi());
    }
    double hi() const override {
        return map_.increasing() ? map_(base_.support_hi()) : map_(base_.support_lo());
    }
    double pdf_in(double x) const override {
        const double y = map_.inverse(x);
        return base_.pdf(y) / std::abs(map_.derivative(y));
    }
    double log_pdf_in(double x) const override {
        const double y = map_.inverse(x);
        return base_.log_pdf(y) - std::log(std::abs(map_.derivative(y)));
    }
    double cdf_in(double x) const override {
        const double y = map_.inverse(x);
        return map_.increasing() ? base_.cdf(y) : base_.sf(y);
    }
    double sf_in(double x) const override {
        const double y = map_.inverse(x);
        return map_.increasing() ? base_.sf(y) : base_.cdf(y);
    }
    double quantile_in(double p) const override {
        return map_(base_.quantile(map_.increasing() ? p : 1.0 - p));
    }

private:
    Distribution base_;
    MonotoneMap map_;
};

}  // namespace detail

/// Law of psi(Y).
inline Distribution transformed_distribution(const Distribution& base, const MonotoneMap& map) {
    return Distribution::from_law(std::make_shared<detail::TransformedLaw>(base, map));
}

/// WPVE (weight x) of X = psi(Y) at t from conditional moments under Y.
///
/// Increasing psi, s = psi^{-1}(t), f the past density of Y at s and
/// gamma(y) = psi(y) log psi'(y):
///   WPVE_X(t) = VE^psi(Y; s) - 2 H^psi(Y; s) E[gamma] + Var[gamma] - 2 E[psi gamma log f].
/// Decreasing psi maps the past of X onto the residual of Y at s, so the same
/// identity holds with the residual law, Gbar(s), and gamma = psi log(-psi').
inline double wpve_via_transform(const Distribution& dy, const MonotoneMap& psi, double t,
                                 double rel_tol = kDefaultRelTol) {
    const double s = psi.inverse(t);
    if (!std::isfinite(s)) throw DomainError("psi^{-1}(t) is not finite");
    const bool up = psi.increasing();
    const Window win = up ? past_window(dy, s) : residual_window(dy, s);
    psi.validate(win.lo, detail::finite_end(dy, win.hi));
    const Weight w(psi.name(), [&psi](double y) { return psi(y); });

    const double ve = up ? wpve(dy, w, s, rel_tol).value : wrve(dy, w, s, rel_tol).value;
    const double h = up ? weighted_past_entropy(dy, w, s, rel_tol).value
                        : weighted_residual_entropy(dy, w, s, rel_tol).value;

    auto gamma = [&psi](double y) { return psi(y) * std::log(std::abs(psi.derivative(y))); };
    const double log_mass = std::log(win.mass);
    auto cond = [&](auto&& fn) {
        return integrate_expectation(dy, fn, win.lo, win.hi, rel_tol).value / win.mass;
    };
    const double eg = cond(gamma);
    const double var_g = cond([&](double y) {
        const double d = gamma(y) - eg;
        return d * d;
    });
    const double cross = cond([&](double y) {
        return psi(y) * gamma(y) * (dy.log_pdf(y) - log_mass);
    });
    return clamp_variance(ve - 2.0 * h * eg + var_g - 2.0 * cross);
}

namespace detail {

// One side of the affine identity for X = aY + b, w1(y) = a y + b:
//   Var_X = VE^{w1}(Y; s) + (a log a)^2 Var[Y] + 2 log a Cov(-w1 log f, w1).
inline double affine_side(const Distribution& dy, double a, double b, double t, bool past,
                          double rel_tol) {
    const double s = (t - b) / a;
    const Window win = past ? past_window(dy, s) : residual_window(dy, s);
    const Weight w1 = Weight::affine(a, b);
    const double ve = past ? wpve(dy, w1, s, rel_tol).value : wrve(dy, w1, s, rel_tol).value;
    const double h = past ? weighted_past_entropy(dy, w1, s, rel_tol).value
                          : weighted_residual_entropy(dy, w1, s, rel_tol).value;
    const double log_mass = std::log(win.mass);
    auto cond = [&](auto&& fn) {
        return integrate_expectation(dy, fn, win.lo, win.hi, rel_tol).value / win.mass;
    };
    const double xi = cond([&](double y) { return a * y + b; });
    const double var_y = cond([&](double y) {
        const double d = a * y + b - xi;
        return d * d;
    });
    const double e_w2_info = cond([&](double y) {
        const double v = a * y + b;
        return -v * v * (dy.log_pdf(y) - log_mass);
    });
    const double la = std::log(a);
    return ve + la * la * var_y + 2.0 * la * (e_w2_info - h * xi);
}

}  // namespace detail

/// WPVE (weight x) of X = aY + b at t, a > 0, b >= 0.
inline double wpve_affine(const Distribution& dy, double a, double b, double t,
                          double rel_tol = kDefaultRelTol) {
    if (!(a > 0.0) || !(b >= 0.0)) throw DomainError("affine WPVE needs a > 0 and b >= 0");
    return clamp_variance(detail::affine_side(dy, a, b, t, true, rel_tol));
}

/// WPDVE (weight x) of X = aY + b at t: the past and residual affine sides.
inline double wpdve_affine(const Distribution& dy, double a, double b, double t,
                           double rel_tol = kDefaultRelTol) {
    if (!(a > 0.0) || !(b >= 0.0)) throw DomainError("affine WPDVE needs a > 0 and b >= 0");
    return clamp_variance(detail::affine_side(dy, a, b, t, true, rel_tol)) +
           clamp_variance(detail::affine_side(dy, a, b, t, false, rel_tol));
}

struct PrhrModel {
    Distribution baseline;
    double a;
};

namespace detail {

class PrhrLaw final : public Law {
public:
    PrhrLaw(Distribution base, double a) : base_(std::move(base)), a_(a) {
        if (!(a > 0.0) || !std::isfinite(a)) throw InvalidDistribution("PRHR exponent must be positive");
    }
    Family family() const override { return Family::Prhr; }
    std::vector<double> params() const override {
        std::vector<double> p{a_};
        const auto b = base_.params();
        p.insert(p.end(), b.begin(), b.end());
        return p;
    }
    double lo() const override { return base_.support_lo(); }
    double hi() const override { return base_.support_hi(); }
    double pdf_in(double y) const override {
        const double g = base_.pdf(y);
        if (g == 0.0) return 0.0;
        if (a_ == 1.0) return g;
        return a_ * std::pow(base_.cdf(y), a_ - 1.0) * g;
    }
    double log_pdf_in(double y) const override {
        return std::log(a_) + (a_ - 1.0) * std::log(base_.cdf(y)) + base_.log_pdf(y);
    }
    double cdf_in(double y) const override { return std::pow(base_.cdf(y), a_); }
    double sf_in(double y) const override {
        const double G = base_.cdf(y);
        return G < 0.5 ? -std::expm1(a_ * std::log(G)) : -std::expm1(a_ * std::log1p(-base_.sf(y)));
    }
    double quantile_in(double p) const override { return base_.quantile(std::pow(p, 1.0 / a_)); }

private:
    Distribution base_;
    double a_;
};

}  // namespace detail

inline Distribution prhr_distribution(const PrhrModel& m) {
    return Distribution::from_law(std::make_shared<detail::PrhrLaw>(m.baseline, m.a));
}

/// WPVE (weight y) of the PRHR model through the quantile domain: with
/// y = G1^{-1}(x^{1/a}),
///   J(x) = -y log(a x^{1-1/a} g1(y) / G1(t)^a),
///   WPVE = (1/G2) int J^2 dx - ((1/G2) int J dx)^2 over x in (0, G2(t)).
/// The second moment is taken about the mean for accuracy.
inline double wpve_prhr(const PrhrModel& m, double t, double rel_tol = kDefaultRelTol) {
    if (!(m.a > 0.0)) throw DomainError("PRHR exponent must be positive");
    const Distribution& b = m.baseline;
    const double g1t = b.cdf(t);
    if (!(g1t > 0.0)) throw DomainError("PRHR WPVE undefined: G1(t) = 0");
    const double g2t = std::pow(g1t, m.a);
    const double log_g2t = m.a * std::log(g1t);
    const double log_a = std::log(m.a);
    auto J = [&](double x) {
        const double y = b.quantile(std::pow(x, 1.0 / m.a));
        const double log_density = log_a + (1.0 - 1.0 / m.a) * std::log(x) + b.log_pdf(y);
        return -y * (log_density - log_g2t);
    };
    const double mean = integrate(J, 0.0, g2t, rel_tol).value / g2t;
    const double second = integrate(
                              [&](double x) {
                                  const double d = J(x) - mean;
                                  return d * d;
                              },
                              0.0, g2t, rel_tol)
                              .value /
                          g2t;
    return clamp_variance(second);
}

}  // namespace varent
