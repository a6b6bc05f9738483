#pragma once

// Weighted entropy and varentropy of past and residual lifetimes.
//
// Conventions: the past law at time t has density g(y)/G(t) on (lo, t), the
// residual law has density g(y)/Gbar(t) on (t, hi). Weighted information
// content is W(y) = -w(y) log(conditional density). Entropies are E[W],
// varentropies Var[W]; both are computed by quadrature on the original
// support.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "varent/distributions.hpp"
#include "varent/error.hpp"
#include "varent/quadrature.hpp"

namespace varent {

/// Positive weight function w(y) inside weighted information measures.
class Weight {
public:
    Weight(std::string name, std::function<double(double)> fn)
        : name_(std::move(name)), fn_(std::move(fn)) {
        if (!fn_) throw ConstructionError("weight function is empty");
    }

    static Weight identity() { return Weight("y", [](double y) { return y; }); }
    static Weight unit() { return Weight("1", [](double) { return 1.0; }); }
    static Weight square() { return Weight("y^2", [](double y) { return y * y; }); }
    static Weight affine(double a, double b) {
        return Weight("affine", [a, b](double y) { return a * y + b; });
    }
    static Weight cubic_affine(double alpha, double beta) {
        return Weight("cubic", [alpha, beta](double y) { return alpha * y * y * y + beta * y * y; });
    }

    double operator()(double y) const { return fn_(y); }
    const std::string& name() const { return name_; }

    /// Checks w > 0 on 64 interior points of (lo, hi); hi must be finite.
    void validate(double lo, double hi) const {
        for (int i = 0; i < 64; ++i) {
            const double y = lo + (i + 0.5) / 64.0 * (hi - lo);
            const double v = fn_(y);
            if (!(v > 0.0) || !std::isfinite(v))
                throw ConstructionError("weight '" + name_ + "' is not positive at y = " +
                                        std::to_string(y));
        }
    }

private:
    std::string name_;
    std::function<double(double)> fn_;
};

enum class Side { Past, Residual, Paired };

enum class MeasureKind {
    PastEntropy,
    ResidualEntropy,
    Wpve,
    Wrve,
    Wpde,
    Wpdve,
    PastVarentropy,
    WeightedVarentropy,
    Mpl,
    Vpl,
    Mrl,
    Vrl,
    PastRenyi,
};

inline const char* kind_name(MeasureKind k) {
    switch (k) {
        case MeasureKind::PastEntropy: return "past-entropy";
        case MeasureKind::ResidualEntropy: return "residual-entropy";
        case MeasureKind::Wpve: return "wpve";
        case MeasureKind::Wrve: return "wrve";
        case MeasureKind::Wpde: return "wpde";
        case MeasureKind::Wpdve: return "wpdve";
        case MeasureKind::PastVarentropy: return "pve";
        case MeasureKind::WeightedVarentropy: return "wve";
        case MeasureKind::Mpl: return "mpl";
        case MeasureKind::Vpl: return "vpl";
        case MeasureKind::Mrl: return "mrl";
        case MeasureKind::Vrl: return "vrl";
        case MeasureKind::PastRenyi: return "renyi";
    }
    return "unknown";
}

struct MeasureResult {
    double value = 0.0;
    double abs_error = 0.0;
    MeasureKind kind = MeasureKind::Wpve;
};

/// Conditioning event of a dynamic measure and its probability.
struct TruncationSpec {
    double t;
    Side side;
};

/// Integration window of a conditional law: density g/mass on (lo, hi).
struct Window {
    double lo;
    double hi;
    double mass;
};

inline Window past_window(const Distribution& d, double t) {
    if (!std::isfinite(t)) throw DomainError("truncation time must be finite");
    if (t <= d.support_lo())
        throw DomainError("past lifetime undefined: t is at or below the support infimum");
    const double mass = d.cdf(t);
    if (!(mass > 0.0)) throw DomainError("past lifetime undefined: G(t) = 0");
    return Window{d.support_lo(), std::min(t, d.support_hi()), mass};
}

inline Window residual_window(const Distribution& d, double t) {
    if (std::isnan(t)) throw DomainError("truncation time is NaN");
    if (t >= d.support_hi())
        throw DomainError("residual lifetime undefined: t is at or above the support supremum");
    const double mass = d.sf(t);
    if (!(mass > 0.0)) throw DomainError("residual lifetime undefined: survival is 0 at t");
    return Window{std::max(t, d.support_lo()), d.support_hi(), mass};
}

inline void validate(const TruncationSpec& spec, const Distribution& d) {
    if (spec.side != Side::Residual) past_window(d, spec.t);
    if (spec.side != Side::Past) residual_window(d, spec.t);
}

/// Variances below zero by more than this are inconsistencies, not round-off.
inline constexpr double kVarianceFloor = -1e-9;

inline double clamp_variance(double v) {
    if (std::isnan(v)) throw ConsistencyError("variance evaluated to NaN");
    if (v < kVarianceFloor)
        throw ConsistencyError("variance " + std::to_string(v) + " is below the round-off floor");
    return std::max(v, 0.0);
}

namespace detail {

struct InfoMoments {
    double mean;
    double variance;
    double mean_error;
    double variance_error;
};

/// Mean and centred variance of W(y) = -w(y)(log g(y) - log mass) under the
/// density g/mass. `expect(h)` must integrate h(y) g(y) over the window; the
/// same kernel serves parametric laws and kernel estimates.
template <class Expect, class LogPdf, class Wt>
InfoMoments information_moments(Expect&& expect, LogPdf&& log_pdf, Wt&& w, double mass) {
    const double log_mass = std::log(mass);
    auto info = [&](double y) { return -w(y) * (log_pdf(y) - log_mass); };
    const IntegralResult first = expect(info);
    const double mean = first.value / mass;
    const IntegralResult second = expect([&](double y) {
        const double dv = info(y) - mean;
        return dv * dv;
    });
    const double mean_err = first.abs_error / mass;
    return InfoMoments{mean, clamp_variance(second.value / mass), mean_err,
                       second.abs_error / mass};
}

/// Raw-moment route E[W^2] - E[W]^2, kept independent of the centred pass.
template <class Expect, class LogPdf, class Wt>
double information_variance_raw(Expect&& expect, LogPdf&& log_pdf, Wt&& w, double mass) {
    const double log_mass = std::log(mass);
    auto info = [&](double y) { return -w(y) * (log_pdf(y) - log_mass); };
    const double m1 = expect(info).value / mass;
    const double m2 = expect([&](double y) {
                          const double v = info(y);
                          return v * v;
                      }).value /
                      mass;
    return m2 - m1 * m1;
}

inline auto expectation_over(const Distribution& d, double lo, double hi, double rel_tol) {
    return [&d, lo, hi, rel_tol](auto&& h) { return integrate_expectation(d, h, lo, hi, rel_tol); };
}

inline double finite_end(const Distribution& d, double hi) {
    return std::isfinite(hi) ? hi : d.quantile(1.0 - kTailLevel);
}

inline InfoMoments past_info(const Distribution& d, const Weight& w, double t, double rel_tol) {
    const Window win = past_window(d, t);
    w.validate(win.lo, win.hi);
    return information_moments(expectation_over(d, win.lo, win.hi, rel_tol),
                               [&d](double y) { return d.log_pdf(y); }, w, win.mass);
}

inline InfoMoments residual_info(const Distribution& d, const Weight& w, double t,
                                 double rel_tol) {
    const Window win = residual_window(d, t);
    w.validate(win.lo, finite_end(d, win.hi));
    return information_moments(expectation_over(d, win.lo, win.hi, rel_tol),
                               [&d](double y) { return d.log_pdf(y); }, w, win.mass);
}

}  // namespace detail

/// Lambda*(t) = -log G(t), the cumulative reversed hazard rate.
inline double crhr(const Distribution& d, double t) {
    const double g = d.cdf(t);
    if (!(g > 0.0)) throw DomainError("cumulative reversed hazard undefined: G(t) = 0");
    return -std::log(g);
}

/// Lambda(t) = -log Gbar(t), the cumulative hazard.
inline double chr(const Distribution& d, double t) {
    const double s = d.sf(t);
    if (!(s > 0.0)) throw DomainError("cumulative hazard undefined: survival is 0 at t");
    return -std::log(s);
}

inline MeasureResult weighted_past_entropy(const Distribution& d, const Weight& w, double t,
                                           double rel_tol = kDefaultRelTol) {
    const Window win = past_window(d, t);
    w.validate(win.lo, win.hi);
    const double log_mass = std::log(win.mass);
    const IntegralResult r = integrate_expectation(
        d, [&](double y) { return -w(y) * (d.log_pdf(y) - log_mass); }, win.lo, win.hi, rel_tol);
    return {r.value / win.mass, r.abs_error / win.mass, MeasureKind::PastEntropy};
}

inline MeasureResult weighted_residual_entropy(const Distribution& d, const Weight& w, double t,
                                               double rel_tol = kDefaultRelTol) {
    const Window win = residual_window(d, t);
    w.validate(win.lo, detail::finite_end(d, win.hi));
    const double log_mass = std::log(win.mass);
    const IntegralResult r = integrate_expectation(
        d, [&](double y) { return -w(y) * (d.log_pdf(y) - log_mass); }, win.lo, win.hi, rel_tol);
    return {r.value / win.mass, r.abs_error / win.mass, MeasureKind::ResidualEntropy};
}

/// Weighted past varentropy: Var[-w(Y) log(g(Y)/G(t)) | Y <= t].
inline MeasureResult wpve(const Distribution& d, const Weight& w, double t,
                          double rel_tol = kDefaultRelTol) {
    const auto m = detail::past_info(d, w, t, rel_tol);
    return {m.variance, m.variance_error + 2.0 * std::abs(m.mean) * m.mean_error,
            MeasureKind::Wpve};
}

/// Weighted residual varentropy: Var[-w(Y) log(g(Y)/Gbar(t)) | Y > t].
inline MeasureResult wrve(const Distribution& d, const Weight& w, double t,
                          double rel_tol = kDefaultRelTol) {
    const auto m = detail::residual_info(d, w, t, rel_tol);
    return {m.variance, m.variance_error + 2.0 * std::abs(m.mean) * m.mean_error,
            MeasureKind::Wrve};
}

/// The same WPVE through raw moments E[W^2] - E[W]^2 (independent quadratures).
inline double wpve_raw_moments(const Distribution& d, const Weight& w, double t,
                               double rel_tol = kDefaultRelTol) {
    const Window win = past_window(d, t);
    return detail::information_variance_raw(detail::expectation_over(d, win.lo, win.hi, rel_tol),
                                            [&d](double y) { return d.log_pdf(y); }, w, win.mass);
}

/// Unweighted past varentropy E[(log g/G)^2 | Y <= t] - (past entropy)^2,
/// evaluated through raw moments.
inline MeasureResult past_varentropy(const Distribution& d, double t,
                                     double rel_tol = kDefaultRelTol) {
    const double v = clamp_variance(wpve_raw_moments(d, Weight::unit(), t, rel_tol));
    return {v, 0.0, MeasureKind::PastVarentropy};
}

/// Weighted varentropy over the whole support, Var[-w(Y) log g(Y)].
inline MeasureResult weighted_varentropy(const Distribution& d, const Weight& w,
                                         double rel_tol = kDefaultRelTol) {
    const double lo = d.support_lo();
    const double hi = d.support_hi();
    w.validate(lo, detail::finite_end(d, hi));
    const auto m = detail::information_moments(detail::expectation_over(d, lo, hi, rel_tol),
                                               [&d](double y) { return d.log_pdf(y); }, w, 1.0);
    return {m.variance, m.variance_error + 2.0 * std::abs(m.mean) * m.mean_error,
            MeasureKind::WeightedVarentropy};
}

struct PairedResult {
    MeasureResult past;
    MeasureResult residual;
    MeasureResult total;
};

inline void require_interior(const Distribution& d, double t) {
    const double g = d.cdf(t);
    if (!(g > 0.0 && g < 1.0))
        throw DomainError("paired measures need 0 < G(t) < 1");
}

/// Weighted paired dynamic entropy: past plus residual weighted entropy.
inline PairedResult wpde_parts(const Distribution& d, const Weight& w, double t,
                               double rel_tol = kDefaultRelTol) {
    require_interior(d, t);
    const auto p = weighted_past_entropy(d, w, t, rel_tol);
    const auto r = weighted_residual_entropy(d, w, t, rel_tol);
    return {p, r, {p.value + r.value, p.abs_error + r.abs_error, MeasureKind::Wpde}};
}

inline MeasureResult wpde(const Distribution& d, const Weight& w, double t,
                          double rel_tol = kDefaultRelTol) {
    return wpde_parts(d, w, t, rel_tol).total;
}

/// Weighted paired dynamic varentropy WPVE + WRVE; the parts are returned so
/// callers can reuse them without recomputation.
inline PairedResult wpdve_parts(const Distribution& d, const Weight& w, double t,
                                double rel_tol = kDefaultRelTol) {
    require_interior(d, t);
    const auto p = wpve(d, w, t, rel_tol);
    const auto r = wrve(d, w, t, rel_tol);
    return {p, r, {p.value + r.value, p.abs_error + r.abs_error, MeasureKind::Wpdve}};
}

inline MeasureResult wpdve(const Distribution& d, const Weight& w, double t,
                           double rel_tol = kDefaultRelTol) {
    return wpdve_parts(d, w, t, rel_tol).total;
}

/// E[Y | Y <= t].
inline double past_mean(const Distribution& d, double t, double rel_tol = kDefaultRelTol) {
    const Window win = past_window(d, t);
    return integrate_expectation(d, [](double y) { return y; }, win.lo, win.hi, rel_tol).value /
           win.mass;
}

/// E[Y | Y > t].
inline double residual_mean(const Distribution& d, double t, double rel_tol = kDefaultRelTol) {
    const Window win = residual_window(d, t);
    return integrate_expectation(d, [](double y) { return y; }, win.lo, win.hi, rel_tol).value /
           win.mass;
}

/// Mean past lifetime M(t) = E[t - Y | Y <= t] = integral of G(y)/G(t) over (0, t).
inline double mean_past_lifetime(const Distribution& d, double t,
                                 double rel_tol = kDefaultRelTol) {
    return t - past_mean(d, t, rel_tol);
}

/// Variance of the past lifetime, Var[Y | Y <= t].
inline double variance_past_lifetime(const Distribution& d, double t,
                                     double rel_tol = kDefaultRelTol) {
    const Window win = past_window(d, t);
    const double m = past_mean(d, t, rel_tol);
    const double v = integrate_expectation(
                         d, [m](double y) { return (y - m) * (y - m); }, win.lo, win.hi, rel_tol)
                         .value /
                     win.mass;
    return clamp_variance(v);
}

/// Mean residual lifetime mu(t) = E[Y - t | Y > t].
inline double mean_residual_lifetime(const Distribution& d, double t,
                                     double rel_tol = kDefaultRelTol) {
    return residual_mean(d, t, rel_tol) - t;
}

/// Variance of the residual lifetime, Var[Y | Y > t].
inline double variance_residual_lifetime(const Distribution& d, double t,
                                         double rel_tol = kDefaultRelTol) {
    const Window win = residual_window(d, t);
    const double m = residual_mean(d, t, rel_tol);
    const double v = integrate_expectation(
                         d, [m](double y) { return (y - m) * (y - m); }, win.lo, win.hi, rel_tol)
                         .value /
                     win.mass;
    return clamp_variance(v);
}

/// Weighted past Renyi entropy of order alpha:
/// (1/(1-alpha)) log of the integral of (w(y) g(y)/G(t))^alpha over (lo, t).
inline MeasureResult weighted_past_renyi(const Distribution& d, const Weight& w, double t,
                                         double alpha, double rel_tol = kDefaultRelTol) {
    if (!(alpha > 0.0)) throw DomainError("Renyi order must be positive");
    if (alpha == 1.0)
        throw DomainError("Renyi order 1 is the Shannon limit; use weighted_past_entropy");
    const Window win = past_window(d, t);
    w.validate(win.lo, win.hi);
    const IntegralResult r = integrate(
        [&](double y) {
            const double g = d.pdf(y);
            if (g == 0.0) return 0.0;
            return std::pow(w(y) * g / win.mass, alpha);
        },
        win.lo, win.hi, rel_tol);
    if (!(r.value > 0.0)) throw DomainError("Renyi integral is not positive");
    return {std::log(r.value) / (1.0 - alpha), r.abs_error / (std::abs(1.0 - alpha) * r.value),
            MeasureKind::PastRenyi};
}

/// Right side of the identity
/// WPVE^y = E[psi1^2 | Y<=t] - 2 Lambda* H^{y^2} - Lambda*^2 E[Y^2 | Y<=t] - (H^y)^2,
/// psi1(y) = y log g(y). Used to cross-check wpve with the identity weight.
inline double wpve_identity_decomposition(const Distribution& d, double t,
                                          double rel_tol = kDefaultRelTol) {
    const Window win = past_window(d, t);
    const double lam = crhr(d, t);
    auto cond = [&](auto&& h) {
        return integrate_expectation(d, h, win.lo, win.hi, rel_tol).value / win.mass;
    };
    const double psi_sq = cond([&](double y) {
        const double v = y * d.log_pdf(y);
        return v * v;
    });
    const double y2 = cond([](double y) { return y * y; });
    const double h_y2 = weighted_past_entropy(d, Weight::square(), t, rel_tol).value;
    const double h_y = weighted_past_entropy(d, Weight::identity(), t, rel_tol).value;
    return psi_sq - 2.0 * lam * h_y2 - lam * lam * y2 - h_y * h_y;
}

/// Single entry point used by the command line.
inline MeasureResult evaluate_measure(MeasureKind kind, const Distribution& d, const Weight& w,
                                      double t, double renyi_alpha = 2.0,
                                      double rel_tol = kDefaultRelTol) {
    switch (kind) {
        case MeasureKind::PastEntropy: return weighted_past_entropy(d, w, t, rel_tol);
        case MeasureKind::ResidualEntropy: return weighted_residual_entropy(d, w, t, rel_tol);
        case MeasureKind::Wpve: return wpve(d, w, t, rel_tol);
        case MeasureKind::Wrve: return wrve(d, w, t, rel_tol);
        case MeasureKind::Wpde: return wpde(d, w, t, rel_tol);
        case MeasureKind::Wpdve: return wpdve(d, w, t, rel_tol);
        case MeasureKind::PastVarentropy: return past_varentropy(d, t, rel_tol);
        case MeasureKind::WeightedVarentropy: return weighted_varentropy(d, w, rel_tol);
        case MeasureKind::Mpl: return {mean_past_lifetime(d, t, rel_tol), 0.0, kind};
        case MeasureKind::Vpl: return {variance_past_lifetime(d, t, rel_tol), 0.0, kind};
        case MeasureKind::Mrl: return {mean_residual_lifetime(d, t, rel_tol), 0.0, kind};
        case MeasureKind::Vrl: return {variance_residual_lifetime(d, t, rel_tol), 0.0, kind};
        case MeasureKind::PastRenyi: return weighted_past_renyi(d, w, t, renyi_alpha, rel_tol);
    }
    throw DomainError("unknown measure kind");
}

}  // namespace varent
