#pragma once

// Lifetime distributions used by the information measures.
//
// A Distribution is an immutable value that shares its underlying law. The
// catalog families below are closed-form; derived laws (PRHR models,
// coherent systems, monotone transforms) plug in through Distribution::from_law.

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "varent/error.hpp"
#include "varent/random.hpp"

namespace varent {

enum class Family {
    Uniform,
    Exponential,
    ParetoI,
    SqrtWeibull,  // G(y) = 1 - exp(-lambda sqrt(y)), the law of Y^2 for exponential Y
    Power,
    Lomax,
    ShiftedExponential,
    GumbelII,
    Weibull,
    Prhr,
    System,
    Transformed,
};

inline const char* family_name(Family f) {
    switch (f) {
        case Family::Uniform: return "uniform";
        case Family::Exponential: return "exp";
        case Family::ParetoI: return "pareto";
        case Family::SqrtWeibull: return "sqrt-weibull";
        case Family::Power: return "power";
        case Family::Lomax: return "lomax";
        case Family::ShiftedExponential: return "shifted-exp";
        case Family::GumbelII: return "gumbel2";
        case Family::Weibull: return "weibull";
        case Family::Prhr: return "prhr";
        case Family::System: return "system";
        case Family::Transformed: return "transformed";
    }
    return "unknown";
}

/// Interface every law implements. Implementations must be immutable.
class Law {
public:
    virtual ~Law() = default;

    virtual Family family() const = 0;
    virtual std::vector<double> params() const = 0;
    virtual double lo() const = 0;
    virtual double hi() const = 0;
    /// Density inside [lo, hi]; callers handle the outside.
    virtual double pdf_in(double y) const = 0;
    virtual double log_pdf_in(double y) const { return std::log(pdf_in(y)); }
    virtual double cdf_in(double y) const = 0;
    virtual double sf_in(double y) const { return 1.0 - cdf_in(y); }
    /// Quantile for p strictly inside (0, 1).
    virtual double quantile_in(double p) const = 0;
};

class Distribution {
public:
    explicit Distribution(std::shared_ptr<const Law> law) : law_(std::move(law)) {
        if (!law_) throw InvalidDistribution("null law");
    }

    static Distribution from_law(std::shared_ptr<const Law> law) {
        return Distribution(std::move(law));
    }

    static Distribution uniform(double a, double b);
    static Distribution exponential(double lambda);
    static Distribution pareto1(double alpha);
    static Distribution sqrt_weibull(double lambda);
    /// G(y) = (y / scale)^alpha on [0, scale].
    static Distribution power(double alpha, double scale = 1.0);
    static Distribution lomax(double delta, double gamma);
    /// X = Y + beta with Y standard exponential.
    static Distribution shifted_exponential(double beta);
    /// G(y) = exp(-lambda y^(-alpha)), y > 0.
    static Distribution gumbel2(double alpha, double lambda);
    /// G(y) = 1 - exp(-(y / lambda)^alpha).
    static Distribution weibull(double alpha, double lambda);

    Family family() const { return law_->family(); }
    std::vector<double> params() const { return law_->params(); }
    double support_lo() const { return law_->lo(); }
    double support_hi() const { return law_->hi(); }
    const Law& law() const { return *law_; }

    double pdf(double y) const {
        if (std::isnan(y)) throw DomainError("pdf evaluated at NaN");
        if (y < law_->lo() || y > law_->hi()) return 0.0;
        return law_->pdf_in(y);
    }

    double log_pdf(double y) const {
        if (std::isnan(y)) throw DomainError("log_pdf evaluated at NaN");
        if (y < law_->lo() || y > law_->hi()) return -std::numeric_limits<double>::infinity();
        return law_->log_pdf_in(y);
    }

    double cdf(double y) const {
        if (std::isnan(y)) throw DomainError("cdf evaluated at NaN");
        if (y <= law_->lo()) return 0.0;
        if (y >= law_->hi()) return 1.0;
        return law_->cdf_in(y);
    }

    /// Survival function 1 - G(y), evaluated without cancellation where possible.
    double sf(double y) const {
        if (std::isnan(y)) throw DomainError("sf evaluated at NaN");
        if (y <= law_->lo()) return 1.0;
        if (y >= law_->hi()) return 0.0;
        return law_->sf_in(y);
    }

    double quantile(double p) const {
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile level must lie in [0, 1]");
        if (p == 0.0) return law_->lo();
        if (p == 1.0) return law_->hi();
        return law_->quantile_in(p);
    }

    /// Inverse-transform sample of size n; the seed fixes the whole stream.
    std::vector<double> sample(std::size_t n, std::uint64_t seed) const {
        if (n == 0) throw DomainError("sample size must be at least 1");
        UniformStream stream(seed);
        std::vector<double> out(n);
        for (auto& y : out) y = law_->quantile_in(stream.next());
        return out;
    }

    std::string describe() const {
        std::ostringstream os;
        os << family_name(family()) << '(';
        const auto p = params();
        for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
        os << ')';
        return os.str();
    }

private:
    std::shared_ptr<const Law> law_;
};

// Free-function spellings used throughout the CLI and tests.
inline double pdf_at(const Distribution& d, double y) { return d.pdf(y); }
inline double cdf_at(const Distribution& d, double y) { return d.cdf(y); }
inline double quantile_at(const Distribution& d, double p) { return d.quantile(p); }
inline std::vector<double> sample_n(const Distribution& d, std::size_t n, std::uint64_t seed) {
    return d.sample(n, seed);
}

namespace detail {

inline void require_finite(std::initializer_list<double> values, const char* family) {
    for (double v : values)
        if (!std::isfinite(v))
            throw InvalidDistribution(std::string(family) + ": parameters must be finite");
}

inline void require_positive(double v, const char* what) {
    if (!(v > 0.0)) throw InvalidDistribution(std::string(what) + " must be positive");
}

constexpr double kInf = std::numeric_limits<double>::infinity();

class UniformLaw final : public Law {
public:
    UniformLaw(double a, double b) : a_(a), b_(b) {
        require_finite({a, b}, "uniform");
        if (!(a < b)) throw InvalidDistribution("uniform: need a < b");
    }
    Family family() const override { return Family::Uniform; }
    std::vector<double> params() const override { return {a_, b_}; }
    double lo() const override { return a_; }
    double hi() const override { return b_; }
    double pdf_in(double) const override { return 1.0 / (b_ - a_); }
    double log_pdf_in(double) const override { return -std::log(b_ - a_); }
    double cdf_in(double y) const override { return (y - a_) / (b_ - a_); }
    double sf_in(double y) const override { return (b_ - y) / (b_ - a_); }
    double quantile_in(double p) const override { return a_ + p * (b_ - a_); }

private:
    double a_, b_;
};

class ExponentialLaw final : public Law {
public:
    explicit ExponentialLaw(double lambda, double shift = 0.0, Family tag = Family::Exponential)
        : lambda_(lambda), shift_(shift), tag_(tag) {
        require_finite({lambda, shift}, "exponential");
        require_positive(lambda, "exponential rate");
    }
    Family family() const override { return tag_; }
    std::vector<double> params() const override {
        return tag_ == Family::ShiftedExponential ? std::vector<double>{shift_}
                                                  : std::vector<double>{lambda_};
    }
    double lo() const override { return shift_; }
    double hi() const override { return kInf; }
    double pdf_in(double y) const override { return lambda_ * std::exp(-lambda_ * (y - shift_)); }
    double log_pdf_in(double y) const override {
        return std::log(lambda_) - lambda_ * (y - shift_);
    }
    double cdf_in(double y) const override { return -std::expm1(-lambda_ * (y - shift_)); }
    double sf_in(double y) const override { return std::exp(-lambda_ * (y - shift_)); }
    double quantile_in(double p) const override { return shift_ - std::log1p(-p) / lambda_; }

private:
    double lambda_, shift_;
    Family tag_;
};

class ParetoLaw final : public Law {
public:
    explicit ParetoLaw(double alpha) : alpha_(alpha) {
        require_finite({alpha}, "pareto");
        require_positive(alpha, "pareto shape");
    }
    Family family() const override { return Family::ParetoI; }
    std::vector<double> params() const override { return {alpha_}; }
    double lo() const override { return 1.0; }
    double hi() const override { return kInf; }
    double pdf_in(double y) const override { return alpha_ * std::pow(y, -alpha_ - 1.0); }
    double log_pdf_in(double y) const override {
        return std::log(alpha_) - (alpha_ + 1.0) * std::log(y);
    }
    double cdf_in(double y) const override { return -std::expm1(-alpha_ * std::log(y)); }
    double sf_in(double y) const override { return std::pow(y, -alpha_); }
    double quantile_in(double p) const override { return std::exp(-std::log1p(-p) / alpha_); }

private:
    double alpha_;
};

class SqrtWeibullLaw final : public Law {
public:
    explicit SqrtWeibullLaw(double lambda) : lambda_(lambda) {
        require_finite({lambda}, "sqrt-weibull");
        require_positive(lambda, "sqrt-weibull rate");
    }
    Family family() const override { return Family::SqrtWeibull; }
    std::vector<double> params() const override { return {lambda_}; }
    double lo() const override { return 0.0; }
    double hi() const override { return kInf; }
    double pdf_in(double y) const override {
        const double r = std::sqrt(y);
        return lambda_ * std::exp(-lambda_ * r) / (2.0 * r);
    }
    double log_pdf_in(double y) const override {
        const double r = std::sqrt(y);
        return std::log(lambda_ / 2.0) - lambda_ * r - std::log(r);
    }
    double cdf_in(double y) const override { return -std::expm1(-lambda_ * std::sqrt(y)); }
    double sf_in(double y) const override { return std::exp(-lambda_ * std::sqrt(y)); }
    double quantile_in(double p) const override {
        const double r = -std::log1p(-p) / lambda_;
        return r * r;
    }

private:
    double lambda_;
};

class PowerLaw final : public Law {
public:
    PowerLaw(double alpha, double scale) : alpha_(alpha), scale_(scale) {
        require_finite({alpha, scale}, "power");
        require_positive(alpha, "power exponent");
        require_positive(scale, "power scale");
    }
    Family family() const override { return Family::Power; }
    std::vector<double> params() const override { return {alpha_, scale_}; }
    double lo() const override { return 0.0; }
    double hi() const override { return scale_; }
    double pdf_in(double y) const override {
        return alpha_ / scale_ * std::pow(y / scale_, alpha_ - 1.0);
    }
    double log_pdf_in(double y) const override {
        return std::log(alpha_ / scale_) + (alpha_ - 1.0) * std::log(y / scale_);
    }
    double cdf_in(double y) const override { return std::pow(y / scale_, alpha_); }
    double quantile_in(double p) const override { return scale_ * std::pow(p, 1.0 / alpha_); }

private:
    double alpha_, scale_;
};

class LomaxLaw final : public Law {
public:
    LomaxLaw(double delta, double gamma) : delta_(delta), gamma_(gamma) {
        require_finite({delta, gamma}, "lomax");
        require_positive(delta, "lomax scale");
        require_positive(gamma, "lomax shape");
    }
    Family family() const override { return Family::Lomax; }
    std::vector<double> params() const override { return {delta_, gamma_}; }
    double lo() const override { return 0.0; }
    double hi() const override { return kInf; }
    double pdf_in(double y) const override {
        return gamma_ / delta_ * std::pow(1.0 + y / delta_, -gamma_ - 1.0);
    }
    double log_pdf_in(double y) const override {
        return std::log(gamma_ / delta_) - (gamma_ + 1.0) * std::log1p(y / delta_);
    }
    double cdf_in(double y) const override { return -std::expm1(-gamma_ * std::log1p(y / delta_)); }
    double sf_in(double y) const override { return std::exp(-gamma_ * std::log1p(y / delta_)); }
    double quantile_in(double p) const override {
        return delta_ * std::expm1(-std::log1p(-p) / gamma_);
    }

private:
    double delta_, gamma_;
};

class GumbelIILaw final : public Law {
public:
    GumbelIILaw(double alpha, double lambda) : alpha_(alpha), lambda_(lambda) {
        require_finite({alpha, lambda}, "gumbel2");
        require_positive(alpha, "gumbel2 shape");
        require_positive(lambda, "gumbel2 scale");
    }
    Family family() const override { return Family::GumbelII; }
    std::vector<double> params() const override { return {alpha_, lambda_}; }
    double lo() const override { return 0.0; }
    double hi() const override { return kInf; }
    double pdf_in(double y) const override {
        if (y == 0.0) return 0.0;
        return std::exp(log_pdf_in(y));
    }
    double log_pdf_in(double y) const override {
        const double ly = std::log(y);
        return std::log(alpha_ * lambda_) - (alpha_ + 1.0) * ly - lambda_ * std::exp(-alpha_ * ly);
    }
    double cdf_in(double y) const override { return std::exp(-lambda_ * std::pow(y, -alpha_)); }
    double sf_in(double y) const override { return -std::expm1(-lambda_ * std::pow(y, -alpha_)); }
    double quantile_in(double p) const override {
        return std::pow(lambda_ / -std::log(p), 1.0 / alpha_);
    }

private:
    double alpha_, lambda_;
};

class WeibullLaw final : public Law {
public:
    WeibullLaw(double alpha, double lambda) : alpha_(alpha), lambda_(lambda) {
        require_finite({alpha, lambda}, "weibull");
        require_positive(alpha, "weibull shape");
        require_positive(lambda, "weibull scale");
    }
    Family family() const override { return Family::Weibull; }
    std::vector<double> params() const override { return {alpha_, lambda_}; }
    double lo() const override { return 0.0; }
    double hi() const override { return kInf; }
    double pdf_in(double y) const override {
        if (y == 0.0) return alpha_ == 1.0 ? 1.0 / lambda_ : (alpha_ < 1.0 ? kInf : 0.0);
        return std::exp(log_pdf_in(y));
    }
    double log_pdf_in(double y) const override {
        const double z = y / lambda_;
        return std::log(alpha_ / lambda_) + (alpha_ - 1.0) * std::log(z) - std::pow(z, alpha_);
    }
    double cdf_in(double y) const override { return -std::expm1(-std::pow(y / lambda_, alpha_)); }
    double sf_in(double y) const override { return std::exp(-std::pow(y / lambda_, alpha_)); }
    double quantile_in(double p) const override {
        return lambda_ * std::pow(-std::log1p(-p), 1.0 / alpha_);
    }

private:
    double alpha_, lambda_;
};

}  // namespace detail

inline Distribution Distribution::uniform(double a, double b) {
    return Distribution(std::make_shared<detail::UniformLaw>(a, b));
}
inline Distribution Distribution::exponential(double lambda) {
    return Distribution(std::make_shared<detail::ExponentialLaw>(lambda));
}
inline Distribution Distribution::pareto1(double alpha) {
    return Distribution(std::make_shared<detail::ParetoLaw>(alpha));
}
inline Distribution Distribution::sqrt_weibull(double lambda) {
    return Distribution(std::make_shared<detail::SqrtWeibullLaw>(lambda));
}
inline Distribution Distribution::power(double alpha, double scale) {
    return Distribution(std::make_shared<detail::PowerLaw>(alpha, scale));
}
inline Distribution Distribution::lomax(double delta, double gamma) {
    return Distribution(std::make_shared<detail::LomaxLaw>(delta, gamma));
}
inline Distribution Distribution::shifted_exponential(double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw InvalidDistribution("shifted exponential: shift must be finite and non-negative");
    return Distribution(
        std::make_shared<detail::ExponentialLaw>(1.0, beta, Family::ShiftedExponential));
}
inline Distribution Distribution::gumbel2(double alpha, double lambda) {
    return Distribution(std::make_shared<detail::GumbelIILaw>(alpha, lambda));
}
inline Distribution Distribution::weibull(double alpha, double lambda) {
    return Distribution(std::make_shared<detail::WeibullLaw>(alpha, lambda));
}

}  // namespace varent
