#pragma once

// Upper and lower bounds on weighted past / paired varentropy, each evaluated
// next to the exact measure so the inequality can be checked numerically.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "varent/coherent.hpp"
#include "varent/distributions.hpp"
#include "varent/measures.hpp"
#include "varent/quadrature.hpp"

namespace varent {

enum class Precondition { Holds, Violated, Unchecked };

inline const char* precondition_name(Precondition p) {
    switch (p) {
        case Precondition::Holds: return "holds";
        case Precondition::Violated: return "violated";
        case Precondition::Unchecked: return "unchecked";
    }
    return "unknown";
}

struct BoundReport {
    std::string name;
    double bound = 0.0;
    double exact = 0.0;
    bool upper = true;
    double slack = 0.0;  // bound - exact for upper bounds, exact - bound for lower
    bool satisfied = false;
    Precondition precondition = Precondition::Unchecked;
    std::string note;
};

inline constexpr double kBoundTolerance = 1e-7;

inline BoundReport make_report(std::string name, double bound, double exact, bool upper,
                               Precondition pre, std::string note = {}) {
    BoundReport r;
    r.name = std::move(name);
    r.bound = bound;
    r.exact = exact;
    r.upper = upper;
    r.slack = upper ? bound - exact : exact - bound;
    r.satisfied = r.slack >= -kBoundTolerance * std::max(1.0, std::abs(exact));
    r.precondition = pre;
    r.note = std::move(note);
    return r;
}

namespace detail {

/// 512 points on (lo, t]: y_i = lo + (t - lo) i / 512.
inline std::vector<double> past_grid(double lo, double t, int n = 512) {
    std::vector<double> ys(n);
    for (int i = 1; i <= n; ++i) ys[i - 1] = lo + (t - lo) * i / n;
    return ys;
}

}  // namespace detail

/// Upper bound under exp(-(alpha y + beta)) <= g(y) <= 1 on (0, t]. Bounding
/// (log g)^2 <= -(alpha y + beta) log g and dropping the non-positive cross
/// term 2 Lambda* E[Y^2 log g | Y<=t] gives
///   WPVE^y <= -E[w2 log g | Y<=t] + Lambda*^2 E[Y^2 | Y<=t],  w2 = alpha y^3 + beta y^2.
/// Replacing the cross term by -2 Lambda* E[w2 | Y<=t] instead bounds it from
/// the wrong side; that variant is only reported in the note.
inline BoundReport wpve_upper_entropy_bound(const Distribution& d, double alpha, double beta,
                                            double t, double rel_tol = kDefaultRelTol) {
    if (!(alpha > 0.0) || !(beta >= 0.0)) throw DomainError("need alpha > 0 and beta >= 0");
    const Window win = past_window(d, t);
    bool holds = true;
    for (double y : detail::past_grid(win.lo, win.hi)) {
        const double g = d.pdf(y);
        if (g > 1.0 + 1e-12 || g < std::exp(-(alpha * y + beta)) * (1.0 - 1e-12)) {
            holds = false;
            break;
        }
    }
    auto cond = [&](auto&& h) {
        return integrate_expectation(d, h, win.lo, win.hi, rel_tol).value / win.mass;
    };
    auto w2 = [&](double y) { return alpha * y * y * y + beta * y * y; };
    const double h_w2 = cond([&](double y) { return -w2(y) * d.log_pdf(y); });
    const double ey2 = cond([](double y) { return y * y; });
    const double ew2 = cond(w2);
    const double lam = crhr(d, t);
    const double bound = h_w2 + lam * lam * ey2;
    const double printed = h_w2 - 2.0 * lam * ew2 + lam * lam * ey2;
    const double exact = wpve(d, Weight::identity(), t, rel_tol).value;
    return make_report("wpve-upper-entropy", bound, exact, true,
                       holds ? Precondition::Holds : Precondition::Violated,
                       "variant with -2*crhr*E[w2] term = " + std::to_string(printed));
}

namespace detail {

/// Stein-type kernel zeta of the conditional law with density f = g/mass on
/// (lo, hi), mean m and variance v: v zeta(y) f(y) = int_lo^y (m - u) f(u) du.
class SteinKernel {
public:
    SteinKernel(const Distribution& d, Window win, double mean, double var)
        : d_(d), win_(win), mean_(mean), var_(var) {
        tight_.rel_tol = 1e-12;
        tight_.abs_tol = 1e-300;
    }

    /// int_lo^y (m - u) f(u) du, taken from the nearer end to limit cancellation.
    double numerator(double y) const {
        auto h = [this](double u) { return mean_ - u; };
        if (y <= win_.lo || y >= win_.hi) return 0.0;
        if (y <= mean_) return integrate_expectation(d_, h, win_.lo, y, tight_).value / win_.mass;
        return -integrate_expectation(d_, h, y, win_.hi, tight_).value / win_.mass;
    }

    double density(double y) const { return d_.pdf(y) / win_.mass; }

    double zeta(double y) const { return zeta_from(y, numerator(y)); }

    double zeta_from(double y, double num) const {
        const double f = density(y);
        if (!(f > 0.0)) {
            vanished_ = true;
            return 0.0;
        }
        return num / (var_ * f);
    }

    /// Numerator at y + dy from the numerator at y plus a short local integral.
    double shifted_numerator(double y, double num, double dy) const {
        auto h = [this](double u) { return (mean_ - u) * density(u); };
        if (dy > 0.0) return num + integrate(h, y, y + dy, tight_).value;
        return num - integrate(h, y + dy, y, tight_).value;
    }

    /// zeta'(y) by central differences with step h, one-sided near the ends.
    double derivative(double y, double num, double h) const {
        const double z0 = zeta_from(y, num);
        if (y - h > win_.lo && y + h < win_.hi) {
            const double zp = zeta_from(y + h, shifted_numerator(y, num, h));
            const double zm = zeta_from(y - h, shifted_numerator(y, num, -h));
            return (zp - zm) / (2.0 * h);
        }
        if (y + 2.0 * h < win_.hi) {
            const double z1 = zeta_from(y + h, shifted_numerator(y, num, h));
            const double z2 = zeta_from(y + 2.0 * h, shifted_numerator(y, num, 2.0 * h));
            return (-3.0 * z0 + 4.0 * z1 - z2) / (2.0 * h);
        }
        const double z1 = zeta_from(y - h, shifted_numerator(y, num, -h));
        const double z2 = zeta_from(y - 2.0 * h, shifted_numerator(y, num, -2.0 * h));
        return (3.0 * z0 - 4.0 * z1 + z2) / (2.0 * h);
    }

    bool vanished() const { return vanished_; }

private:
    const Distribution& d_;
    Window win_;
    double mean_;
    double var_;
    QuadratureOptions tight_;
    mutable bool vanished_ = false;
};

struct SteinBound {
    double value;
    double variance;
    bool density_vanished;
};

/// var * (1 + E[-zeta log f] + E[Y zeta'])^2 over the window.
inline SteinBound stein_lower_bound(const Distribution& d, const Window& win, double mean,
                                    double var, double step) {
    if (!(var > 0.0)) return SteinBound{0.0, var, false};
    const SteinKernel k(d, win, mean, var);
    const double log_mass = std::log(win.mass);
    QuadratureOptions opt;
    opt.rel_tol = 1e-8;
    opt.abs_tol = 1e-14;
    const double e = integrate_expectation(
                         d,
                         [&](double y) {
                             const double num = k.numerator(y);
                             const double z = k.zeta_from(y, num);
                             const double dz = k.derivative(y, num, step);
                             return -z * (d.log_pdf(y) - log_mass) + y * dz;
                         },
                         win.lo, win.hi, opt)
                         .value /
                     win.mass;
    const double c = 1.0 + e;
    return SteinBound{var * c * c, var, k.vanished()};
}

}  // namespace detail

/// Stein-type kernel of the past law at t, exposed for inspection and tests.
inline double past_stein_kernel(const Distribution& d, double t, double y) {
    const Window win = past_window(d, t);
    const double m = past_mean(d, t);
    const double v = variance_past_lifetime(d, t);
    return detail::SteinKernel(d, win, m, v).zeta(y);
}

/// Stein-type kernel of the residual law at t.
inline double residual_stein_kernel(const Distribution& d, double t, double y) {
    const Window win = residual_window(d, t);
    const double m = residual_mean(d, t);
    const double v = variance_residual_lifetime(d, t);
    return detail::SteinKernel(d, win, m, v).zeta(y);
}

/// Lower bound Var[h(Y)] >= sigma^2 (E[zeta h'])^2 applied to the weighted
/// information content of the past law: sigma^2 {1 + E[-zeta log f] + E[Y zeta']}^2.
inline BoundReport wpve_lower_stein(const Distribution& d, double t,
                                    double rel_tol = kDefaultRelTol) {
    const Window win = past_window(d, t);
    const double m = past_mean(d, t, rel_tol);
    const double v = variance_past_lifetime(d, t, rel_tol);
    const auto sb = detail::stein_lower_bound(d, win, m, v, 1e-5 * t);
    const double exact = wpve(d, Weight::identity(), t, rel_tol).value;
    const bool ok = v > 0.0 && !sb.density_vanished;
    return make_report("wpve-lower-stein", sb.value, exact, false,
                       ok ? Precondition::Holds : Precondition::Violated);
}

/// WPDVE >= max(WPVE, WRVE).
inline BoundReport wpdve_lower_max(const Distribution& d, const Weight& w, double t,
                                   double rel_tol = kDefaultRelTol) {
    const auto parts = wpdve_parts(d, w, t, rel_tol);
    return make_report("wpdve-lower-max", std::max(parts.past.value, parts.residual.value),
                       parts.total.value, false, Precondition::Unchecked,
                       "wpve = " + std::to_string(parts.past.value) +
                           ", wrve = " + std::to_string(parts.residual.value));
}

/// WPDVE^y <= E[psi1^2 | Y<=t] + E[psi1^2 | Y>t] - 2 Lambda* H^{y^2}_past - 2 Lambda H^{y^2}_res,
/// psi1(y) = y log g(y).
inline BoundReport wpdve_upper_psi1(const Distribution& d, double t,
                                    double rel_tol = kDefaultRelTol) {
    const auto parts = wpdve_parts(d, Weight::identity(), t, rel_tol);
    const Window pw = past_window(d, t);
    const Window rw = residual_window(d, t);
    auto psi_sq = [&](double y) {
        const double v = y * d.log_pdf(y);
        return v * v;
    };
    const double past_sq = integrate_expectation(d, psi_sq, pw.lo, pw.hi, rel_tol).value / pw.mass;
    const double res_sq = integrate_expectation(d, psi_sq, rw.lo, rw.hi, rel_tol).value / rw.mass;
    const double bound =
        past_sq + res_sq -
        2.0 * crhr(d, t) * weighted_past_entropy(d, Weight::square(), t, rel_tol).value -
        2.0 * chr(d, t) * weighted_residual_entropy(d, Weight::square(), t, rel_tol).value;
    return make_report("wpdve-upper-psi1", bound, parts.total.value, true, Precondition::Unchecked);
}

/// WPDVE >= max(pi, theta), the Stein-type lower bounds of the past and
/// residual sides.
inline BoundReport wpdve_lower_variance(const Distribution& d, double t,
                                        double rel_tol = kDefaultRelTol) {
    const auto parts = wpdve_parts(d, Weight::identity(), t, rel_tol);
    const Window pw = past_window(d, t);
    const Window rw = residual_window(d, t);
    const double pm = past_mean(d, t, rel_tol);
    const double pv = variance_past_lifetime(d, t, rel_tol);
    const double rm = residual_mean(d, t, rel_tol);
    const double rv = variance_residual_lifetime(d, t, rel_tol);
    const auto pi = detail::stein_lower_bound(d, pw, pm, pv, 1e-5 * t);
    const auto theta = detail::stein_lower_bound(d, rw, rm, rv, 1e-5 * std::max(t, std::sqrt(rv)));
    const bool ok = !pi.density_vanished && !theta.density_vanished;
    return make_report("wpdve-lower-variance", std::max(pi.value, theta.value), parts.total.value,
                       false, ok ? Precondition::Holds : Precondition::Violated,
                       "pi = " + std::to_string(pi.value) +
                           ", theta = " + std::to_string(theta.value));
}

namespace detail {

/// u-grid on (0, G(t)): u = G(t) sigma(s), s uniform on [-30, 30]. Refining
/// by 2 keeps every old point, so the grid sup can only grow.
inline std::vector<double> logit_grid(double gt, int n) {
    std::vector<double> us;
    us.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double s = -30.0 + 60.0 * i / (n - 1);
        us.push_back(gt / (1.0 + std::exp(-s)));
    }
    return us;
}

struct SystemIntegrands {
    // phi: conditional density times squared weighted log-density, for the
    // system (q) and for the single component (identity); psi analogously
    // without the square.
    double phi_system;
    double phi_component;
    double psi_system;
    double psi_component;
};

inline SystemIntegrands system_integrands(const CoherentSystem& s, double t, double u) {
    const Distribution& c = s.component;
    const double gt = c.cdf(t);
    const double gtt = s.q(gt);
    const double y = c.quantile(u);
    const double g = c.pdf(y);
    const double f_sys = s.q.derivative(u) * g / gtt;
    const double f_cmp = g / gt;
    const double l_sys = f_sys > 0.0 ? y * std::log(f_sys) : 0.0;
    const double l_cmp = f_cmp > 0.0 ? y * std::log(f_cmp) : 0.0;
    return {f_sys * l_sys * l_sys, f_cmp * l_cmp * l_cmp, f_sys * l_sys, f_cmp * l_cmp};
}

}  // namespace detail

struct RatioSup {
    double value;
    bool finite;
};

/// eta_{1,u}: grid supremum of phi_system(u) / phi_component(u) over u in
/// (0, G(t)); points where both vanish are skipped.
inline RatioSup system_ratio_sup(const CoherentSystem& s, double t, int n = 512) {
    const double gt = s.component.cdf(t);
    if (!(gt > 0.0)) throw DomainError("G(t) = 0");
    double sup = 0.0;
    bool finite = true;
    for (double u : detail::logit_grid(gt, n)) {
        if (!(u > 0.0)) continue;
        const auto v = detail::system_integrands(s, t, u);
        if (v.phi_component == 0.0) {
            if (v.phi_system == 0.0) continue;
            finite = false;
            continue;
        }
        const double r = v.phi_system / v.phi_component;
        if (std::isfinite(r)) sup = std::max(sup, r);
    }
    return {sup, finite};
}

/// Ordering of system and component WPVE from pointwise comparisons of the
/// u-domain integrands: phi_sys >= phi_cmp and psi_sys <= psi_cmp everywhere
/// predicts WPVE(T) >= WPVE(Y); the reverse inequalities predict <=.
inline BoundReport system_ordering_check(const CoherentSystem& s, double t,
                                         double rel_tol = kDefaultRelTol) {
    const double gt = s.component.cdf(t);
    bool ge = true, le = true;
    for (double u : detail::logit_grid(gt, 512)) {
        const auto v = detail::system_integrands(s, t, u);
        const double tol = 1e-12 * std::max({1.0, std::abs(v.phi_system), std::abs(v.phi_component)});
        if (v.phi_system < v.phi_component - tol || v.psi_system > v.psi_component + tol) ge = false;
        if (v.phi_system > v.phi_component + tol || v.psi_system < v.psi_component - tol) le = false;
    }
    const double sys = wpve_system(s, t, rel_tol);
    const double cmp = wpve(s.component, Weight::identity(), t, rel_tol).value;
    if (le) return make_report("system-ordering", cmp, sys, true, Precondition::Holds, "predicts <=");
    if (ge) return make_report("system-ordering", cmp, sys, false, Precondition::Holds, "predicts >=");
    return make_report("system-ordering", cmp, sys, true, Precondition::Violated,
                       "pointwise conditions fail in both directions");
}

/// WPVE(T) <= eta_{1,u} [ -(1/G(t)) int_0^t (alpha y^3 + beta y^2) g log g dy
///                        + Lambda*^2 E[Y^2 | Y<=t] ]   under exp(-(alpha y+beta)) <= g <= 1.
inline BoundReport system_bound_entropy(const CoherentSystem& s, double alpha, double beta,
                                        double t, double rel_tol = kDefaultRelTol) {
    const Distribution& d = s.component;
    const Window win = past_window(d, t);
    bool holds = true;
    for (double y : detail::past_grid(win.lo, win.hi)) {
        const double g = d.pdf(y);
        if (g > 1.0 + 1e-12 || g < std::exp(-(alpha * y + beta)) * (1.0 - 1e-12)) {
            holds = false;
            break;
        }
    }
    const auto eta = system_ratio_sup(s, t);
    auto cond = [&](auto&& h) {
        return integrate_expectation(d, h, win.lo, win.hi, rel_tol).value / win.mass;
    };
    const double h_w2 = cond([&](double y) { return -(alpha * y + beta) * y * y * d.log_pdf(y); });
    const double ey2 = cond([](double y) { return y * y; });
    const double lam = crhr(d, t);
    const double bound = eta.value * (h_w2 + lam * lam * ey2);
    return make_report("system-upper-entropy", bound, wpve_system(s, t, rel_tol), true,
                       holds && eta.finite ? Precondition::Holds : Precondition::Violated,
                       "eta = " + std::to_string(eta.value));
}

/// WPVE(T) <= eta_{1,u} { WPVE(Y) + H^y(Y)^2 }.
inline BoundReport system_bound_component(const CoherentSystem& s, double t,
                                          double rel_tol = kDefaultRelTol) {
    const auto eta = system_ratio_sup(s, t);
    const Distribution& d = s.component;
    const double v = wpve(d, Weight::identity(), t, rel_tol).value;
    const double h = weighted_past_entropy(d, Weight::identity(), t, rel_tol).value;
    return make_report("system-upper-component", eta.value * (v + h * h), wpve_system(s, t, rel_tol),
                       true, eta.finite ? Precondition::Holds : Precondition::Violated,
                       "eta = " + std::to_string(eta.value));
}

/// WPVE(T) <= (1/L) int_0^{G(t)} phi_system(u) du when g >= L > 0 on the support.
inline BoundReport system_bound_density_floor(const CoherentSystem& s, double floor, double t,
                                              double rel_tol = kDefaultRelTol) {
    if (!(floor > 0.0)) throw DomainError("density floor L must be positive");
    const Distribution& d = s.component;
    const Window win = past_window(d, t);
    bool holds = true;
    for (double y : detail::past_grid(win.lo, win.hi))
        if (d.pdf(y) < floor * (1.0 - 1e-12)) holds = false;
    const double gt = d.cdf(t);
    const double integral = integrate(
                                [&](double u) {
                                    return u > 0.0 ? detail::system_integrands(s, t, u).phi_system
                                                   : 0.0;
                                },
                                0.0, gt, rel_tol)
                                .value;
    return make_report("system-upper-density-floor", integral / floor, wpve_system(s, t, rel_tol),
                       true, holds ? Precondition::Holds : Precondition::Violated);
}

/// Runs every single-law bound at t and returns the reports; used by the CLI
/// and the acceptance suite.
inline std::vector<BoundReport> all_bounds(const Distribution& d, double t, double alpha,
                                           double beta) {
    std::vector<BoundReport> out;
    out.push_back(wpve_upper_entropy_bound(d, alpha, beta, t));
    out.push_back(wpve_lower_stein(d, t));
    if (d.cdf(t) < 1.0) {
        out.push_back(wpdve_lower_max(d, Weight::identity(), t));
        out.push_back(wpdve_upper_psi1(d, t));
        out.push_back(wpdve_lower_variance(d, t));
    }
    return out;
}

}  // namespace varent
