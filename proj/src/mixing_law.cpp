#include "spreadmm/mixing_law.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spreadmm/errors.hpp"

namespace spreadmm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidArgument(std::string(what) + " must be a positive finite number");
    }
}

double log_sum_exp(const std::vector<double>& xs) {
    double m = *std::max_element(xs.begin(), xs.end());
    double s = 0.0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

double sample_gamma_unit(RandomStream& rng, double shape) {
    // Marsaglia and Tsang; shapes below one are boosted by U^{1/shape}.
    if (shape < 1.0) {
        double g = sample_gamma_unit(rng, shape + 1.0);
        return g * std::pow(rng.uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        double u = rng.uniform();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

} // namespace

const char* to_string(MgfKind kind) {
    return kind == MgfKind::Exact ? "exact" : "truncated";
}

const char* to_string(IgParameterization p) {
    return p == IgParameterization::MeanShape ? "MeanShape" : "DeltaGamma";
}

MixingLaw::MixingLaw() : law_(Exponential{1.0}) {}

MixingLaw MixingLaw::exponential(double rate) {
    require_positive(rate, "exponential rate");
    return MixingLaw(Exponential{rate});
}

MixingLaw MixingLaw::gamma(double shape, double scale) {
    require_positive(shape, "gamma shape");
    require_positive(scale, "gamma scale");
    return MixingLaw(Gamma{shape, scale});
}

MixingLaw MixingLaw::inverse_gaussian(double p1, double p2, IgParameterization param) {
    require_positive(p1, "inverse Gaussian first parameter");
    require_positive(p2, "inverse Gaussian second parameter");
    InverseGaussian ig{};
    ig.p1 = p1;
    ig.p2 = p2;
    ig.param = param;
    if (param == IgParameterization::MeanShape) {
        ig.mean = p1;
        ig.shape = p2;
    } else {
        // DeltaGamma(delta, gamma) has mean delta/gamma and shape delta^2.
        ig.mean = p1 / p2;
        ig.shape = p1 * p1;
    }
    return MixingLaw(ig);
}

MixingLaw MixingLaw::chi_squared(double dof) {
    require_positive(dof, "chi-squared degrees of freedom");
    return gamma(0.5 * dof, 2.0);
}

MixingLaw MixingLaw::degenerate(double value) {
    require_positive(value, "degenerate law value");
    return MixingLaw(Degenerate{value});
}

MixingLaw MixingLaw::custom(CustomLawSpec spec) {
    if (!spec.mgf || !spec.density || !spec.sampler) {
        throw InvalidArgument("custom law '" + spec.name + "' must provide mgf, density and sampler");
    }
    if (!(spec.domain_bound > 0.0)) {
        throw InvalidArgument("custom law '" + spec.name + "' needs a positive domain bound");
    }
    if (spec.raw_moments.size() < 5) {
        throw InvalidArgument("custom law '" + spec.name + "' needs raw moments up to order 4");
    }
    if (spec.raw_moments[0] != 1.0) {
        throw InvalidArgument("custom law '" + spec.name + "': raw moment of order 0 must be 1");
    }
    for (std::size_t k = 1; k < spec.raw_moments.size(); ++k) {
        if (!(spec.raw_moments[k] > 0.0) || !std::isfinite(spec.raw_moments[k])) {
            throw InvalidArgument("custom law '" + spec.name + "': raw moments must be positive and finite");
        }
    }
    return MixingLaw(Custom{std::move(spec)});
}

double MixingLaw::domain_bound() const {
    return std::visit(overloaded{
        [](const Exponential& e) { return e.rate; },
        [](const Gamma& g) { return 1.0 / g.scale; },
        [](const InverseGaussian& ig) { return ig.shape / (2.0 * ig.mean * ig.mean); },
        [](const Degenerate&) { return kInfinity; },
        [](const Custom& c) { return c.spec.domain_bound; },
    }, law_);
}

double MixingLaw::mgf(double s) const {
    if (s == 0.0) return 1.0;
    if (s >= domain_bound()) return kInfinity;
    return std::visit(overloaded{
        [s](const Exponential& e) { return e.rate / (e.rate - s); },
        [s](const Gamma& g) { return std::pow(1.0 - g.scale * s, -g.shape); },
        [s](const InverseGaussian& ig) {
            double root = std::sqrt(1.0 - 2.0 * ig.mean * ig.mean * s / ig.shape);
            return std::exp(ig.shape / ig.mean * (1.0 - root));
        },
        [s](const Degenerate& d) { return std::exp(s * d.value); },
        [s](const Custom& c) { return c.spec.mgf(s); },
    }, law_);
}

double MixingLaw::mgf_derivative(double s) const {
    const double bound = domain_bound();
    if (s >= bound) return kInfinity;
    return std::visit(overloaded{
        [s](const Exponential& e) { return e.rate / ((e.rate - s) * (e.rate - s)); },
        [s](const Gamma& g) { return g.shape * g.scale * std::pow(1.0 - g.scale * s, -g.shape - 1.0); },
        [s](const InverseGaussian& ig) {
            double root = std::sqrt(1.0 - 2.0 * ig.mean * ig.mean * s / ig.shape);
            return std::exp(ig.shape / ig.mean * (1.0 - root)) * ig.mean / root;
        },
        [s](const Degenerate& d) { return d.value * std::exp(s * d.value); },
        [s, bound](const Custom& c) {
            double h = 1e-6 * std::max(1.0, std::abs(s));
            if (s + h < bound) return (c.spec.mgf(s + h) - c.spec.mgf(s - h)) / (2.0 * h);
            return (c.spec.mgf(s) - c.spec.mgf(s - h)) / h;
        },
    }, law_);
}

double MixingLaw::truncated_mgf(double s) const {
    double sum = 1.0;
    double term = 1.0;
    for (int k = 1; k <= 4; ++k) {
        term *= s / k;
        sum += term * raw_moment(k);
    }
    return sum;
}

double MixingLaw::truncated_mgf_derivative(double s) const {
    double sum = 0.0;
    double term = 1.0; // s^{k-1}/(k-1)!
    for (int k = 1; k <= 4; ++k) {
        sum += term * raw_moment(k);
        term *= s / k;
    }
    return sum;
}

double MixingLaw::mgf(double s, MgfKind kind) const {
    return kind == MgfKind::Exact ? mgf(s) : truncated_mgf(s);
}

double MixingLaw::mgf_derivative(double s, MgfKind kind) const {
    return kind == MgfKind::Exact ? mgf_derivative(s) : truncated_mgf_derivative(s);
}

double MixingLaw::log_raw_moment(int k) const {
    if (k < 0) throw InvalidArgument("moment order must be nonnegative");
    if (k == 0) return 0.0;
    return std::visit(overloaded{
        [k](const Exponential& e) { return std::lgamma(k + 1.0) - k * std::log(e.rate); },
        [k](const Gamma& g) {
            return k * std::log(g.scale) + std::lgamma(g.shape + k) - std::lgamma(g.shape);
        },
        [k](const InverseGaussian& ig) {
            // E[Y^n] = mu^n sum_{i<n} (n-1+i)! / (i! (n-1-i)!) (mu / (2 lambda))^i
            std::vector<double> logs;
            const double lr = std::log(ig.mean / (2.0 * ig.shape));
            for (int i = 0; i < k; ++i) {
                logs.push_back(std::lgamma(k + i) - std::lgamma(i + 1.0) - std::lgamma(k - i) + i * lr);
            }
            return k * std::log(ig.mean) + log_sum_exp(logs);
        },
        [k](const Degenerate& d) { return k * std::log(d.value); },
        [k](const Custom& c) {
            if (k >= static_cast<int>(c.spec.raw_moments.size())) {
                throw MomentsUnavailable("moments unavailable: law '" + c.spec.name + "' has no moment of order " +
                                         std::to_string(k));
            }
            return std::log(c.spec.raw_moments[static_cast<std::size_t>(k)]);
        },
    }, law_);
}

double MixingLaw::raw_moment(int k) const {
    if (const auto* c = std::get_if<Custom>(&law_)) {
        if (k >= 0 && k < static_cast<int>(c->spec.raw_moments.size())) {
            return c->spec.raw_moments[static_cast<std::size_t>(k)];
        }
    }
    if (const auto* e = std::get_if<Exponential>(&law_)) {
        double v = 1.0;
        for (int i = 1; i <= k; ++i) v *= i / e->rate;
        return v;
    }
    return std::exp(log_raw_moment(k));
}

MomentTable MixingLaw::moment_table(int k_max) const {
    if (k_max < 4) throw InvalidArgument("moment table needs k_max >= 4");
    MomentTable t;
    for (int k = 0; k <= k_max; ++k) t.values.push_back(raw_moment(k));
    return t;
}

bool MixingLaw::has_density() const {
    return !std::holds_alternative<Degenerate>(law_);
}

double MixingLaw::log_density(double y) const {
    if (!(y > 0.0)) return -kInfinity;
    return std::visit(overloaded{
        [y](const Exponential& e) { return std::log(e.rate) - e.rate * y; },
        [y](const Gamma& g) {
            return (g.shape - 1.0) * std::log(y) - y / g.scale - std::lgamma(g.shape) - g.shape * std::log(g.scale);
        },
        [y](const InverseGaussian& ig) {
            double dev = y - ig.mean;
            return 0.5 * (std::log(ig.shape) - std::log(2.0 * M_PI) - 3.0 * std::log(y)) -
                   ig.shape * dev * dev / (2.0 * ig.mean * ig.mean * y);
        },
        [](const Degenerate&) -> double {
            throw InvalidArgument("degenerate law has no density");
        },
        [y](const Custom& c) { return std::log(c.spec.density(y)); },
    }, law_);
}

double MixingLaw::density(double y) const {
    if (!(y > 0.0)) return 0.0;
    if (const auto* c = std::get_if<Custom>(&law_)) return c->spec.density(y);
    return std::exp(log_density(y));
}

std::optional<double> MixingLaw::atom() const {
    if (const auto* d = std::get_if<Degenerate>(&law_)) return d->value;
    return std::nullopt;
}

double MixingLaw::draw(RandomStream& rng) const {
    return std::visit(overloaded{
        [&rng](const Exponential& e) { return -std::log(rng.uniform()) / e.rate; },
        [&rng](const Gamma& g) { return g.scale * sample_gamma_unit(rng, g.shape); },
        [&rng](const InverseGaussian& ig) {
            // Michael, Schucany and Haas transformation with multiple roots.
            const double mu = ig.mean, lambda = ig.shape;
            double n = rng.normal();
            double v = n * n;
            double x = mu + mu * mu * v / (2.0 * lambda) -
                       mu / (2.0 * lambda) * std::sqrt(4.0 * mu * lambda * v + mu * mu * v * v);
            if (rng.uniform() <= mu / (mu + x)) return x;
            return mu * mu / x;
        },
        [](const Degenerate& d) { return d.value; },
        [&rng](const Custom& c) { return c.spec.sampler(rng); },
    }, law_);
}

std::vector<double> MixingLaw::sample(RandomStream& rng, std::size_t n) const {
    std::vector<double> out(n);
    for (auto& y : out) y = draw(rng);
    return out;
}

std::string MixingLaw::family() const {
    return std::visit(overloaded{
        [](const Exponential&) { return std::string("exponential"); },
        [](const Gamma&) { return std::string("gamma"); },
        [](const InverseGaussian&) { return std::string("inverse_gaussian"); },
        [](const Degenerate&) { return std::string("degenerate"); },
        [](const Custom& c) { return c.spec.name; },
    }, law_);
}

std::string MixingLaw::describe() const {
    std::ostringstream os;
    os.precision(6);
    std::visit(overloaded{
        [&os](const Exponential& e) { os << "Exponential(rate=" << e.rate << ")"; },
        [&os](const Gamma& g) { os << "Gamma(shape=" << g.shape << ", scale=" << g.scale << ")"; },
        [&os](const InverseGaussian& ig) {
            os << "InverseGaussian(" << to_string(ig.param) << " " << ig.p1 << ", " << ig.p2
               << "; mean=" << ig.mean << ", shape=" << ig.shape << ")";
        },
        [&os](const Degenerate& d) { os << "Degenerate(" << d.value << ")"; },
        [&os](const Custom& c) { os << "Custom(" << c.spec.name << ")"; },
    }, law_);
    return os.str();
}

std::optional<IgParameterization> MixingLaw::ig_parameterization() const {
    if (const auto* ig = std::get_if<InverseGaussian>(&law_)) return ig->param;
    return std::nullopt;
}

} // namespace spreadmm
