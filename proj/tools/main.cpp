// Command-line front end: every subcommand writes CSV (6 significant digits)
// to standard output or --out. Exit status: 0 success, 2 usage, 1 numerical failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "varent/varent.hpp"

using namespace varent;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) { return ExperimentReport::format_number(v); }

double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw UsageError("");
        return v;
    } catch (...) {
        throw UsageError("malformed number '" + s + "' for " + what);
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

/// "key=value,key=value" -> map; every key must be consumed by the caller.
std::map<std::string, double> parse_params(const std::string& body, const std::string& what) {
    std::map<std::string, double> out;
    if (body.empty()) return out;
    for (const auto& kv : split(body, ',')) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("malformed parameter '" + kv + "' in " + what);
        out[kv.substr(0, eq)] = to_double(kv.substr(eq + 1), what);
    }
    return out;
}

struct Params {
    std::map<std::string, double> values;
    std::string what;

    double take(const std::string& key, std::optional<double> fallback = std::nullopt) {
        const auto it = values.find(key);
        if (it == values.end()) {
            if (fallback) return *fallback;
            throw UsageError(what + " needs parameter '" + key + "'");
        }
        const double v = it->second;
        values.erase(it);
        return v;
    }
    void finish() const {
        if (!values.empty()) throw UsageError("unknown parameter '" + values.begin()->first + "' in " + what);
    }
};

/// family:key=value,... e.g. exp:lambda=0.7, gumbel2:alpha=3.4,lambda=0.75.
Distribution parse_distribution(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string family = spec.substr(0, colon);
    Params p{parse_params(colon == std::string::npos ? "" : spec.substr(colon + 1), "--dist " + spec),
             "--dist " + spec};
    auto build = [&]() -> Distribution {
        if (family == "uniform") {
            const double a = p.take("a", 0.0);
            return Distribution::uniform(a, p.take("b", 1.0));
        }
        if (family == "exp") return Distribution::exponential(p.take("lambda"));
        if (family == "pareto") return Distribution::pareto1(p.take("alpha"));
        if (family == "sqrt-weibull") return Distribution::sqrt_weibull(p.take("lambda"));
        if (family == "power") {
            const double a = p.take("alpha");
            return Distribution::power(a, p.take("scale", 1.0));
        }
        if (family == "lomax") {
            const double d = p.take("delta");
            return Distribution::lomax(d, p.take("gamma"));
        }
        if (family == "shifted-exp") return Distribution::shifted_exponential(p.take("beta"));
        if (family == "gumbel2") {
            const double a = p.take("alpha");
            return Distribution::gumbel2(a, p.take("lambda"));
        }
        if (family == "weibull") {
            const double a = p.take("alpha");
            return Distribution::weibull(a, p.take("lambda"));
        }
        throw UsageError("unknown distribution family '" + family + "'");
    };
    try {
        Distribution d = build();
        p.finish();
        return d;
    } catch (const InvalidDistribution& e) {
        throw UsageError(std::string("invalid distribution parameters: ") + e.what());
    }
}

/// y, 1, y^2, affine:a=..,b=..
Weight parse_weight(const std::string& spec) {
    if (spec == "y") return Weight::identity();
    if (spec == "1") return Weight::unit();
    if (spec == "y^2" || spec == "y2") return Weight::square();
    if (spec.rfind("affine:", 0) == 0) {
        Params p{parse_params(spec.substr(7), "--weight"), "--weight " + spec};
        const double a = p.take("a");
        const double b = p.take("b", 0.0);
        p.finish();
        return Weight::affine(a, b);
    }
    throw UsageError("unknown weight '" + spec + "' (expected y, 1, y^2 or affine:a=..,b=..)");
}

/// lo:hi:step or a comma list.
std::vector<double> parse_grid(const std::string& spec, const std::string& what) {
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        const auto parts = split(spec, ':');
        if (parts.size() != 3) throw UsageError(what + " range must be lo:hi:step");
        const double lo = to_double(parts[0], what), hi = to_double(parts[1], what),
                     step = to_double(parts[2], what);
        if (!(step > 0.0)) throw UsageError(what + " step must be positive");
        if (hi >= lo) {
            const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
            for (long i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
        }
    } else {
        for (const auto& s : split(spec, ','))
            if (!s.empty()) out.push_back(to_double(s, what));
    }
    if (out.empty()) throw UsageError(what + " grid is empty");
    return out;
}

std::vector<std::size_t> parse_sizes(const std::string& spec) {
    std::vector<std::size_t> out;
    for (double v : parse_grid(spec, "--n")) {
        if (!(v >= 1.0) || v != std::floor(v)) throw UsageError("--n values must be positive integers");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

/// identity, series, 2of3, parallel or poly:c0,c1,...
DistortionFunction parse_distortion(const std::string& spec) {
    if (spec == "identity") return DistortionFunction::identity();
    if (spec == "series") return DistortionFunction::series();
    if (spec == "2of3" || spec == "2-of-3") return DistortionFunction::two_of_three();
    if (spec == "parallel") return DistortionFunction::parallel();
    if (spec.rfind("poly:", 0) == 0) {
        std::vector<double> c;
        for (const auto& s : split(spec.substr(5), ',')) c.push_back(to_double(s, "--q"));
        try {
            return DistortionFunction::polynomial(c);
        } catch (const ConstructionError& e) {
            throw UsageError(std::string("invalid distortion: ") + e.what());
        }
    }
    throw UsageError("unknown distortion '" + spec + "' (expected identity, series, 2of3, parallel, poly:c0,c1,...)");
}

MeasureKind parse_kind(const std::string& name) {
    for (auto k : {MeasureKind::PastEntropy, MeasureKind::ResidualEntropy, MeasureKind::Wpve, MeasureKind::Wrve,
                   MeasureKind::Wpde, MeasureKind::Wpdve, MeasureKind::PastVarentropy,
                   MeasureKind::WeightedVarentropy, MeasureKind::Mpl, MeasureKind::Vpl, MeasureKind::Mrl,
                   MeasureKind::Vrl, MeasureKind::PastRenyi})
        if (name == kind_name(k)) return k;
    throw UsageError("unknown measure kind '" + name + "'");
}

Method parse_method(const std::string& s) {
    if (s == "parametric") return Method::Parametric;
    if (s == "nonparametric") return Method::Nonparametric;
    throw UsageError("--method must be parametric or nonparametric");
}

std::vector<double> read_sample(const std::string& path) {
    if (path.empty()) return wind_speed_dataset();
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read data file '" + path + "'");
    std::vector<double> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t");
        out.push_back(to_double(line.substr(first, last - first + 1), "data file"));
    }
    if (out.empty()) throw UsageError("data file '" + path + "' holds no values");
    return out;
}

void emit(const std::string& csv, const std::string& out) {
    if (out.empty()) {
        std::cout << csv << std::flush;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + out + "'");
    f << csv;
}

/// Appends key=value lines of a --config file as --key value flags unless the
/// key is already given on the command line.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
        if (args[i] == "--config") path = args[i + 1];
    if (path.empty()) return args;
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError("malformed config line '" + line + "'");
        const std::string flag = "--" + line.substr(0, eq);
        bool given = false;
        for (const auto& a : args) given = given || a == flag || a.rfind(flag + "=", 0) == 0;
        if (!given) {
            args.push_back(flag);
            args.push_back(line.substr(eq + 1));
        }
    }
    return args;
}

std::string bound_header() { return "name,t,bound,exact,slack,upper,precondition,satisfied\n"; }

std::string bound_line(const BoundReport& r, double t) {
    return r.name + "," + num(t) + "," + num(r.bound) + "," + num(r.exact) + "," + num(r.slack) + "," +
           (r.upper ? "1" : "0") + "," + precondition_name(r.precondition) + "," + (r.satisfied ? "1" : "0") +
           "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted past / paired varentropy measures, estimators, bounds and experiments"};
    app.name("varent");
    app.require_subcommand(1);
    std::string config, out;
    app.add_option("--config", config, "flat key=value file with default flags");
    app.add_option("--out", out, "write CSV here instead of standard output");

    std::string dist_spec, weight_spec = "y", kind = "wpve", t_spec, n_spec = "100,120,150,200",
                method = "parametric", data_path, q_spec, measure = "wpve", fit_family = "gumbel2";
    double alpha = 0.0, beta = 1.0, floor_l = 0.0;
    std::optional<double> bandwidth;
    std::size_t reps = 100, B = 500;
    std::uint64_t seed = 42;
    unsigned threads = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "flat key=value file with default flags");
        sub->add_option("--out", out, "write CSV here instead of standard output");
    };

    auto* m = app.add_subcommand("measure", "evaluate a measure over a t-grid: t,value,error_estimate");
    m->add_option("--dist", dist_spec, "family:key=value,...")->required();
    m->add_option("--kind", kind, "past-entropy|residual-entropy|wpve|wrve|wpde|wpdve|pve|wve|mpl|vpl|mrl|vrl|renyi");
    m->add_option("--weight", weight_spec, "y | 1 | y^2 | affine:a=..,b=..");
    m->add_option("--t", t_spec, "lo:hi:step or comma list")->required();
    m->add_option("--alpha", alpha, "Renyi order (default 2)");
    add_common(m);

    auto* s = app.add_subcommand("simulate", "Monte-Carlo AB/MSE of the WPVE or WPDVE estimators");
    s->add_option("--measure", measure, "wpve | wpdve");
    s->add_option("--dist", dist_spec, "exp:lambda=... (default 0.7 for wpve, 5 for wpdve)");
    s->add_option("--t", t_spec, "t-grid");
    s->add_option("--n", n_spec, "sample sizes");
    s->add_option("--reps", reps, "replications");
    s->add_option("--seed", seed, "master seed");
    s->add_option("--method", method, "parametric | nonparametric");
    s->add_option("--bandwidth", bandwidth, "kernel bandwidth (default: Silverman per sample)");
    s->add_option("--threads", threads, "worker threads (output does not depend on it)");
    add_common(s);

    auto* b = app.add_subcommand("bootstrap", "bootstrap AB/MSE of the kernel WPVE on a dataset");
    b->add_option("--data", data_path, "newline-delimited sample (default: embedded wind speeds)");
    b->add_option("--B", B, "bootstrap resamples");
    b->add_option("--bandwidth", bandwidth, "kernel bandwidth (default 0.35)");
    b->add_option("--t", t_spec, "t-grid (default 1,1.2,1.5,2,2.5,3)");
    b->add_option("--fit", fit_family, "law fitted for the true values: gumbel2 | weibull | exp");
    b->add_option("--seed", seed, "master seed");
    b->add_option("--threads", threads, "worker threads (output does not depend on it)");
    add_common(b);

    auto* f = app.add_subcommand("fit", "MLE fits ranked by AIC");
    f->add_option("--data", data_path, "newline-delimited sample (default: embedded wind speeds)");
    add_common(f);

    auto* sy = app.add_subcommand("system", "WPVE, PVE, WPRE, WPSE of coherent systems");
    sy->add_option("--dist", dist_spec, "component law (default power:alpha=0.2)");
    sy->add_option("--q", q_spec, "identity | series | 2of3 | parallel | poly:c0,c1,... (default: all three systems)");
    sy->add_option("--t", t_spec, "t-grid (default 0.5)");
    sy->add_option("--alpha", alpha, "Renyi order (default 1.8)");
    add_common(sy);

    auto* bc = app.add_subcommand("bound-check", "evaluate every bound next to the exact value");
    bc->add_option("--dist", dist_spec, "family:key=value,...")->required();
    bc->add_option("--t", t_spec, "t-grid")->required();
    bc->add_option("--alpha", alpha, "alpha of the entropy-type bound (default 1)");
    bc->add_option("--beta", beta, "beta of the entropy-type bound (default 1)");
    bc->add_option("--q", q_spec, "check the coherent-system bounds for this distortion instead");
    bc->add_option("--floor", floor_l, "density floor L for the system bound (skipped when 0)");
    add_common(bc);

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = expand_config(std::move(args));
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        std::string csv;
        if (*m) {
            const Distribution d = parse_distribution(dist_spec);
            const Weight w = parse_weight(weight_spec);
            const MeasureKind k = parse_kind(kind);
            const double ra = alpha > 0.0 ? alpha : 2.0;
            csv = "# measure=" + std::string(kind_name(k)) + "\n# distribution=" + d.describe() +
                  "\n# weight=" + w.name() + "\nt,value,error_estimate\n";
            for (double t : parse_grid(t_spec, "--t")) {
                const auto r = evaluate_measure(k, d, w, t, ra);
                csv += num(t) + "," + num(r.value) + "," + num(r.abs_error) + "\n";
            }
        } else if (*s) {
            const bool paired = measure == "wpdve";
            if (!paired && measure != "wpve") throw UsageError("--measure must be wpve or wpdve");
            SimulationConfig c;
            c.lambda = paired ? 5.0 : 0.7;
            if (!dist_spec.empty()) {
                const Distribution d = parse_distribution(dist_spec);
                if (d.family() != Family::Exponential) throw UsageError("simulate supports exp:lambda=... only");
                c.lambda = d.params()[0];
            }
            c.ts = t_spec.empty() ? (paired ? std::vector<double>{0.05, 0.1, 0.15, 0.2}
                                            : std::vector<double>{0.1, 0.2, 0.3, 0.4, 1.0})
                                  : parse_grid(t_spec, "--t");
            c.ns = parse_sizes(n_spec);
            if (reps < 2) throw UsageError("--reps must be at least 2");
            c.reps = reps;
            c.seed = seed;
            c.method = parse_method(method);
            if (bandwidth && !(*bandwidth > 0.0)) throw UsageError("--bandwidth must be positive");
            c.bandwidth = bandwidth.value_or(0.0);
            c.threads = threads;
            csv = (paired ? simulate_wpdve(c) : simulate_wpve(c)).to_csv();
        } else if (*b) {
            const auto data = read_sample(data_path);
            Family fam;
            if (fit_family == "gumbel2") fam = Family::GumbelII;
            else if (fit_family == "weibull") fam = Family::Weibull;
            else if (fit_family == "exp") fam = Family::Exponential;
            else throw UsageError("--fit must be gumbel2, weibull or exp");
            if (B < 2) throw UsageError("--B must be at least 2");
            if (bandwidth && !(*bandwidth > 0.0)) throw UsageError("--bandwidth must be positive");
            const auto ts = t_spec.empty() ? std::vector<double>{1.0, 1.2, 1.5, 2.0, 2.5, 3.0}
                                           : parse_grid(t_spec, "--t");
            const auto fit = mle_fit(fam, data).fitted;
            csv = bootstrap_wpve(data, fit, B, bandwidth.value_or(0.35), ts, seed, threads).to_csv();
        } else if (*f) {
            const auto data = read_sample(data_path);
            csv = "model,k,param1,param2,neg_log_lik,aic,aicc,bic,ks_statistic,ks_p_value\n";
            for (const auto& r : model_selection(data)) {
                const auto p = r.fitted.params();
                csv += std::string(family_name(r.fitted.family())) + "," + std::to_string(r.k) + "," +
                       num(p[0]) + "," + (p.size() > 1 ? num(p[1]) : "") + "," + num(r.neg_log_lik) + "," +
                       num(r.aic) + "," + num(r.aicc) + "," + num(r.bic) + "," + num(r.ks_statistic) + "," +
                       num(r.ks_p_value) + "\n";
            }
        } else if (*sy) {
            const Distribution comp = parse_distribution(dist_spec.empty() ? "power:alpha=0.2" : dist_spec);
            const double ra = alpha > 0.0 ? alpha : 1.8;
            const auto ts = t_spec.empty() ? std::vector<double>{0.5} : parse_grid(t_spec, "--t");
            csv = "system,t,wpve,pve,wpre,wpse\n";
            for (double t : ts) {
                std::vector<SystemRow> rows;
                if (q_spec.empty()) {
                    rows = compare_systems(comp, t, ra);
                } else {
                    const CoherentSystem sys{comp, parse_distortion(q_spec)};
                    rows.push_back({sys.q.name(), wpve_system(sys, t), pve_system(sys, t),
                                    wpre_system(sys, t, ra), wpse_system(sys, t)});
                }
                for (const auto& r : rows)
                    csv += r.system + "," + num(t) + "," + num(r.wpve) + "," + num(r.pve) + "," + num(r.wpre) +
                           "," + num(r.wpse) + "\n";
            }
        } else if (*bc) {
            const Distribution d = parse_distribution(dist_spec);
            const double a = alpha > 0.0 ? alpha : 1.0;
            csv = bound_header();
            for (double t : parse_grid(t_spec, "--t")) {
                if (q_spec.empty()) {
                    for (const auto& r : all_bounds(d, t, a, beta)) csv += bound_line(r, t);
                } else {
                    const CoherentSystem sys{d, parse_distortion(q_spec)};
                    csv += bound_line(system_ordering_check(sys, t), t);
                    csv += bound_line(system_bound_entropy(sys, a, beta, t), t);
                    csv += bound_line(system_bound_component(sys, t), t);
                    if (floor_l > 0.0) csv += bound_line(system_bound_density_floor(sys, floor_l, t), t);
                }
            }
        }
        emit(csv, out);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ConstructionError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
