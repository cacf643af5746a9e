#include "spreadmm/approx_pricer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "spreadmm/errors.hpp"
#include "spreadmm/radial_series.hpp"

namespace spreadmm {

namespace {

constexpr double kInnerTolerance = 1e-11;

double norm_cdf(double x) { return 0.5 * std::erfc(-x / M_SQRT2); }

double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

double log_norm_cdf(double x) {
    if (x > -30.0) return std::log(norm_cdf(x));
    // Asymptotic expansion of the Mills ratio.
    const double x2 = x * x;
    return -0.5 * x2 - std::log(-x) - 0.5 * std::log(2.0 * M_PI) + std::log1p(-1.0 / x2 + 3.0 / (x2 * x2));
}

ProxyPrice finish(double raw, Branch branch, double error) {
    ProxyPrice out;
    out.raw_price = raw;
    out.floored = raw < 0.0;
    out.price = out.floored ? 0.0 : raw;
    out.branch = branch;
    out.quadrature_error = error;
    return out;
}

double proxy_mgf(const MixingLaw& law, double s) {
    const double phi = law.mgf(s);
    if (!std::isfinite(phi)) throw MgfDomainError({{"E[exp(Z)]", s}}, law.domain_bound());
    return phi;
}

void require_positive_a(double a) {
    if (!(a > 0.0)) throw InvalidArgument("proxy parameter a must be positive");
}

// Upper-tail integrals of the circle marginal for R fixed at v:
// int_{z*}^inf e^{a z} h(z) dz and int_{z*}^inf h(z) dz.
struct TailPair {
    double weighted;
    double mass;
    double error;
};

TailPair degenerate_tail(double v, double a, double z_star, double tol) {
    const double rv = std::sqrt(v);
    const double theta = std::acos(std::clamp(z_star / rv, -1.0, 1.0));
    if (theta == 0.0) return {0.0, 0.0, 0.0};
    QuadratureResult q = integrate([a, rv](double t) { return std::exp(a * rv * std::cos(t)); }, 0.0, theta, tol);
    return {q.value / M_PI, theta / M_PI, q.error / M_PI};
}

TailPair density_tail(const MixingLaw& law, double a, double z_star, double tol) {
    auto h = [&law](double z) { return radial_density_h(law, z, kInnerTolerance); };
    QuadratureResult w = integrate([&h, a](double z) {
        const double v = h(z);
        return v == 0.0 ? 0.0 : std::exp(a * z) * v;
    }, z_star, kInfinity, tol);
    QuadratureResult m = integrate(h, z_star, kInfinity, tol);
    return {w.value, m.value, w.error + m.error};
}

} // namespace

const char* to_string(Branch b) {
    return b == Branch::ShiftAboveStrike ? "shift_above_strike" : "integral";
}

const char* to_string(MgfPolicy p) {
    switch (p) {
    case MgfPolicy::Exact: return "exact";
    case MgfPolicy::Truncated: return "truncated";
    case MgfPolicy::Auto: return "auto";
    }
    return "?";
}

ProxyPrice price_mv(const ProxyParamsMV& p, const MixingLaw& law, double strike, double rate, double tol) {
    require_positive_a(p.a);
    const double a2 = p.a * p.a;
    const double s = 0.5 * a2 + p.b;
    const double disc = std::exp(-rate);
    if (p.d >= strike) {
        return finish(disc * (std::exp(p.c) * proxy_mgf(law, s) + p.d - strike), Branch::ShiftAboveStrike, 0.0);
    }
    proxy_mgf(law, s);
    const double l = std::log(strike - p.d);
    auto log_g1 = [&](double y) {
        const double x = -(l - (a2 + p.b) * y - p.c) / (p.a * std::sqrt(y));
        return s * y + log_norm_cdf(x);
    };
    auto g2 = [&](double y) { return norm_cdf(-(l - p.b * y - p.c) / (p.a * std::sqrt(y))); };
    QuadratureResult i1 = mixture_expectation_log(log_g1, law, tol);
    QuadratureResult i2 = mixture_expectation(g2, law, tol);
    const double raw = std::exp(p.c - rate) * i1.value + (p.d - strike) * disc * i2.value;
    return finish(raw, Branch::Integral, std::exp(p.c - rate) * i1.error + std::abs(p.d - strike) * disc * i2.error);
}

ProxyPrice price_v(const ProxyParamsV& p, const MixingLaw& law, double strike, double rate, double tol) {
    require_positive_a(p.a);
    const double a2 = p.a * p.a;
    const double s = 0.5 * a2;
    const double disc = std::exp(-rate);
    if (p.c >= strike) {
        return finish(disc * (std::exp(p.b) * proxy_mgf(law, s) + p.c - strike), Branch::ShiftAboveStrike, 0.0);
    }
    proxy_mgf(law, s);
    const double l = std::log(strike - p.c);
    auto log_g1 = [&](double y) {
        const double x = -(l - a2 * y - p.b) / (p.a * std::sqrt(y));
        return s * y + log_norm_cdf(x);
    };
    auto g2 = [&](double y) { return norm_cdf(-(l - p.b) / (p.a * std::sqrt(y))); };
    QuadratureResult i1 = mixture_expectation_log(log_g1, law, tol);
    QuadratureResult i2 = mixture_expectation(g2, law, tol);
    const double raw = std::exp(p.b - rate) * i1.value + (p.c - strike) * disc * i2.value;
    return finish(raw, Branch::Integral, std::exp(p.b - rate) * i1.error + std::abs(p.c - strike) * disc * i2.error);
}

double radial_density_h(const MixingLaw& law, double z, double tol) {
    const double z2 = z * z;
    if (auto atom = law.atom()) {
        if (z2 >= *atom) return 0.0;
        return 1.0 / (M_PI * std::sqrt(*atom - z2));
    }
    auto f = [&law, z2](double u) { return law.density(z2 + u * u); };
    const double u0 = std::sqrt(law.mean());
    QuadratureResult head = integrate_endpoint_singular(f, 0.0, u0, tol);
    QuadratureResult tail = integrate(f, u0, kInfinity, tol);
    return 2.0 / M_PI * (head.value + tail.value);
}

ProxyPrice price_e(const ProxyParamsE& p, const MixingLaw& law, double strike, double rate, double tol) {
    require_positive_a(p.a);
    const double disc = std::exp(-rate);
    if (p.c >= strike) {
        const double series = radial_exp_series(law, p.a * p.a).value;
        return finish(disc * (std::exp(p.b) * series + p.c - strike), Branch::ShiftAboveStrike, 0.0);
    }
    const double z_star = (std::log(strike - p.c) - p.b) / p.a;
    TailPair t = law.atom() ? degenerate_tail(*law.atom(), p.a, z_star, tol) : density_tail(law, p.a, z_star, tol);
    const double raw = disc * (std::exp(p.b) * t.weighted + (p.c - strike) * t.mass);
    return finish(raw, Branch::Integral, disc * (std::exp(p.b) + std::abs(p.c - strike)) * t.error);
}

ProxyPrice price_symmetric_limit(const SymmetricLimitProxy& p, const MixingLaw& law, double strike, double rate,
                                 double tol) {
    if (!(p.scale > 0.0)) throw InvalidArgument("symmetric limit proxy needs a positive scale");
    const double disc = std::exp(-rate);
    const double m = p.location - strike;
    if (p.mode == MomentMode::Elliptical) {
        const double z0 = -m / p.scale;
        if (auto atom = law.atom()) {
            const double rv = std::sqrt(*atom);
            const double theta = std::acos(std::clamp(z0 / rv, -1.0, 1.0));
            return finish(disc * (m * theta + p.scale * rv * std::sin(theta)) / M_PI, Branch::Integral, 0.0);
        }
        QuadratureResult q = integrate([&](double z) {
            return (m + p.scale * z) * radial_density_h(law, z, kInnerTolerance);
        }, z0, kInfinity, tol);
        return finish(disc * q.value, Branch::Integral, disc * q.error);
    }
    // Conditionally on Y the proxy is normal with mean `location` and sd scale sqrt(Y).
    auto g = [&](double y) {
        const double sd = p.scale * std::sqrt(y);
        const double x = m / sd;
        return sd * norm_pdf(x) + m * norm_cdf(x);
    };
    QuadratureResult q = mixture_expectation(g, law, tol);
    return finish(disc * q.value, Branch::Integral, disc * q.error);
}

ProxyPrice price_proxy(const ProxyParams& p, const MixingLaw& law, double strike, double rate, double tol) {
    if (const auto* mv = std::get_if<ProxyParamsMV>(&p)) return price_mv(*mv, law, strike, rate, tol);
    if (const auto* v = std::get_if<ProxyParamsV>(&p)) return price_v(*v, law, strike, rate, tol);
    if (const auto* e = std::get_if<ProxyParamsE>(&p)) return price_e(*e, law, strike, rate, tol);
    return price_symmetric_limit(std::get<SymmetricLimitProxy>(p), law, strike, rate, tol);
}

MatchedSpread match_spread(const ModelSpec& spec, double maturity, const PricingOptions& opts) {
    MatchedSpread out;
    out.model = build_effective(spec, maturity);
    const MomentMode mode = out.model.mode();
    std::vector<MgfKind> kinds;
    if (mode == MomentMode::Elliptical || opts.mgf == MgfPolicy::Exact) {
        kinds = {MgfKind::Exact};
    } else if (opts.mgf == MgfPolicy::Truncated) {
        kinds = {MgfKind::Truncated};
    } else {
        kinds = {MgfKind::Exact, MgfKind::Truncated};
    }
    std::exception_ptr last;
    for (MgfKind kind : kinds) {
        try {
            MomentSet target = exact_moments(out.model, kind, opts.match.series_tol);
            MatchReport m = match(target, out.model.law, kind, opts.match);
            // The price is an expectation under the true law, so the proxy
            // mean must be finite whatever kind was used for matching.
            if (const auto* mv = std::get_if<ProxyParamsMV>(&m.params)) {
                proxy_mgf(out.model.law, 0.5 * mv->a * mv->a + mv->b);
            } else if (const auto* v = std::get_if<ProxyParamsV>(&m.params)) {
                proxy_mgf(out.model.law, 0.5 * v->a * v->a);
            }
            out.target = std::move(target);
            out.match = m;
            return out;
        } catch (const MgfDomainError& e) {
            out.notes.push_back(std::string(to_string(kind)) + " mgf: " + e.what());
            last = std::current_exception();
        } catch (const NoSolution& e) {
            out.notes.push_back(std::string(to_string(kind)) + " mgf: " + e.what());
            last = std::current_exception();
        }
    }
    std::rethrow_exception(last);
}

PriceReport price_matched(const MatchedSpread& matched, double strike, const PricingOptions& opts) {
    if (!(strike >= 0.0)) throw InvalidArgument("strike must be nonnegative");
    ProxyPrice pp = price_proxy(matched.match.params, matched.model.law, strike, matched.model.rate_time,
                                opts.quad_tol);
    PriceReport r;
    r.price = pp.price;
    r.raw_price = pp.raw_price;
    r.floored = pp.floored;
    r.branch = pp.branch;
    r.quadrature_error_estimate = pp.quadrature_error;
    r.match = matched.match;
    r.target = matched.target;
    r.law = matched.model.law.describe();
    r.notes = matched.notes;
    if (auto ig = matched.model.law.ig_parameterization()) {
        r.notes.push_back(std::string("inverse Gaussian convention: ") + to_string(*ig));
    }
    if (matched.match.symmetric_limit) {
        r.notes.push_back("zero-skew target: priced with the symmetric limit of the proxy");
    }
    if (pp.floored) r.notes.push_back("negative approximation floored at zero");
    return r;
}

PriceReport price_spread_approx(const ModelSpec& spec, const SpreadContract& contract, const PricingOptions& opts) {
    contract.validate();
    return price_matched(match_spread(spec, contract.maturity, opts), contract.strike, opts);
}

} // namespace spreadmm
