#pragma once

// Coherent systems of identically distributed components through a
// distortion function q: the system CDF is q(G(y)) and its density
// q'(G(y)) g(y).

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

class DistortionFunction {
public:
    using Fn = std::function<double(double)>;

    DistortionFunction(std::string name, Fn q, Fn dq)
        : name_(std::move(name)), q_(std::move(q)), dq_(std::move(dq)) {
        if (!q_ || !dq_) throw ConstructionError("distortion needs q and q'");
        validate();
    }

    static DistortionFunction identity() {
        return {"identity", [](double u) { return u; }, [](double) { return 1.0; }};
    }
    static DistortionFunction series() {
        return {"series", [](double u) { return -std::expm1(3.0 * std::log1p(-u)); },
                [](double u) { return 3.0 * (1.0 - u) * (1.0 - u); }};
    }
    static DistortionFunction two_of_three() {
        return {"2-of-3", [](double u) { return u * u * (3.0 - 2.0 * u); },
                [](double u) { return 6.0 * u * (1.0 - u); }};
    }
    static DistortionFunction parallel() {
        return {"parallel", [](double u) { return u * u * u; },
                [](double u) { return 3.0 * u * u; }};
    }
    /// q(u) = sum_k c[k] u^k.
    static DistortionFunction polynomial(std::vector<double> c) {
        if (c.empty()) throw ConstructionError("polynomial distortion needs coefficients");
        auto q = [c](double u) {
            double v = 0.0;
            for (std::size_t k = c.size(); k-- > 0;) v = v * u + c[k];
            return v;
        };
        auto dq = [c](double u) {
            double v = 0.0;
            for (std::size_t k = c.size(); k-- > 1;) v = v * u + static_cast<double>(k) * c[k];
            return v;
        };
        return {"polynomial", q, dq};
    }

    double operator()(double u) const { return q_(u); }
    double derivative(double u) const { return dq_(u); }
    const std::string& name() const { return name_; }

    /// q^{-1}(p) by bisection to 1e-13.
    double inverse(double p) const {
        double lo = 0.0, hi = 1.0;
        while (hi - lo > 1e-13) {
            const double mid = 0.5 * (lo + hi);
            (q_(mid) < p ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }

private:
    void validate() const {
        if (std::abs(q_(0.0)) > 1e-12 || std::abs(q_(1.0) - 1.0) > 1e-12)
            throw ConstructionError("distortion '" + name_ + "' must satisfy q(0)=0 and q(1)=1");
        double prev = q_(0.0);
        for (int i = 1; i <= 512; ++i) {
            const double u = i / 512.0;
            const double v = q_(u);
            if (v < prev - 1e-15 || dq_(u) < 0.0)
                throw ConstructionError("distortion '" + name_ + "' is not non-decreasing near u = " +
                                        std::to_string(u));
            prev = v;
        }
    }

    std::string name_;
    Fn q_, dq_;
};

struct CoherentSystem {
    Distribution component;
    DistortionFunction q;
};

namespace detail {

class SystemLaw final : public Law {
public:
    SystemLaw(Distribution c, DistortionFunction q) : c_(std::move(c)), q_(std::move(q)) {}
    Family family() const override { return Family::System; }
    std::vector<double> params() const override { return c_.params(); }
    double lo() const override { return c_.support_lo(); }
    double hi() const override { return c_.support_hi(); }
    double pdf_in(double y) const override {
        const double g = c_.pdf(y);
        return g == 0.0 ? 0.0 : q_.derivative(c_.cdf(y)) * g;
    }
    double log_pdf_in(double y) const override {
        return std::log(q_.derivative(c_.cdf(y))) + c_.log_pdf(y);
    }
    double cdf_in(double y) const override { return q_(c_.cdf(y)); }
    double quantile_in(double p) const override { return c_.quantile(q_.inverse(p)); }

private:
    Distribution c_;
    DistortionFunction q_;
};

// Conditional expectation over the system's past at t written in the
// component's probability scale u = G(y):
//   E[h(T) | T <= t] = (1/q(G(t))) int_0^{G(t)} h(G^{-1}(u), u) q'(u) du,
// where h also receives log of the system past density at y.
template <class H>
double system_past_expectation(const CoherentSystem& s, double t, H&& h, double rel_tol) {
    const Distribution& c = s.component;
    const double gt = c.cdf(t);
    const double mass = s.q(gt);
    if (!(mass > 0.0)) throw DomainError("system past lifetime undefined: G_T(t) = 0");
    const double log_mass = std::log(mass);
    auto integrand = [&](double u) {
        const double dq = s.q.derivative(u);
        if (dq == 0.0) return 0.0;
        const double y = c.quantile(u);
        const double log_density = std::log(dq) + c.log_pdf(y) - log_mass;
        return h(y, log_density) * dq;
    };
    return integrate(integrand, 0.0, gt, rel_tol).value / mass;
}

inline double system_information_variance(const CoherentSystem& s, double t, bool weighted,
                                          double rel_tol) {
    auto info = [weighted](double y, double log_density) {
        return -(weighted ? y : 1.0) * log_density;
    };
    const double mean = system_past_expectation(s, t, info, rel_tol);
    const double second = system_past_expectation(
        s, t,
        [&](double y, double ld) {
            const double d = info(y, ld) - mean;
            return d * d;
        },
        rel_tol);
    return clamp_variance(second);
}

}  // namespace detail

inline Distribution system_distribution(const CoherentSystem& s) {
    return Distribution::from_law(std::make_shared<detail::SystemLaw>(s.component, s.q));
}

/// WPVE (weight y) of the system lifetime T at t, integrated in u = G(y).
inline double wpve_system(const CoherentSystem& s, double t, double rel_tol = kDefaultRelTol) {
    return detail::system_information_variance(s, t, true, rel_tol);
}

/// Unweighted past varentropy of T at t.
inline double pve_system(const CoherentSystem& s, double t, double rel_tol = kDefaultRelTol) {
    return detail::system_information_variance(s, t, false, rel_tol);
}

/// Weighted past Shannon entropy (weight y) of T at t.
inline double wpse_system(const CoherentSystem& s, double t, double rel_tol = kDefaultRelTol) {
    return detail::system_past_expectation(
        s, t, [](double y, double ld) { return -y * ld; }, rel_tol);
}

/// Weighted past Renyi entropy (weight y) of order alpha of T at t:
/// (1/(1-alpha)) log int (y g_T(y)/G_T(t))^alpha dy, taken in u = G(y).
inline double wpre_system(const CoherentSystem& s, double t, double alpha,
                          double rel_tol = kDefaultRelTol) {
    if (!(alpha > 0.0) || alpha == 1.0) throw DomainError("Renyi order must be positive and != 1");
    const Distribution& c = s.component;
    const double gt = c.cdf(t);
    const double mass = s.q(gt);
    if (!(mass > 0.0)) throw DomainError("system past lifetime undefined: G_T(t) = 0");
    const IntegralResult r = integrate(
        [&](double u) {
            const double dq = s.q.derivative(u);
            if (dq == 0.0) return 0.0;
            const double y = c.quantile(u);
            const double g = c.pdf(y);
            if (g == 0.0 || y == 0.0) return 0.0;
            // (y q'(u) g / mass)^alpha / g, in logs to survive g -> infinity at u -> 0.
            return std::exp(alpha * (std::log(y) + std::log(dq) - std::log(mass)) +
                            (alpha - 1.0) * std::log(g));
        },
        0.0, gt, rel_tol);
    return std::log(r.value) / (1.0 - alpha);
}

struct SystemRow {
    std::string system;
    double wpve;
    double pve;
    double wpre;
    double wpse;
};

/// Series, 2-of-3 and parallel systems of three i.i.d. components.
inline std::vector<SystemRow> compare_systems(const Distribution& component, double t, double alpha,
                                              double rel_tol = kDefaultRelTol) {
    std::vector<SystemRow> rows;
    for (const auto& q : {DistortionFunction::series(), DistortionFunction::two_of_three(),
                          DistortionFunction::parallel()}) {
        const CoherentSystem s{component, q};
        rows.push_back({q.name(), wpve_system(s, t, rel_tol), pve_system(s, t, rel_tol),
                        wpre_system(s, t, alpha, rel_tol), wpse_system(s, t, rel_tol)});
    }
    return rows;
}

}  // namespace varent
