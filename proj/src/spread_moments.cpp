#include "spreadmm/spread_moments.hpp"

#include <cmath>
#include <sstream>

namespace spreadmm {

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::string exp_label(int j, int k) {
    std::ostringstream os;
    os << "E[exp(" << j << "X1+" << k << "X2)]";
    return os.str();
}

std::string proxy_label(int j) {
    std::ostringstream os;
    os << "E[exp(" << j << "Z)]";
    return os.str();
}

struct ExpTerm {
    int j, k;
    double log_prefactor;
    double argument;
};

// Terms E[exp(j X1 + k X2)] for all j + k = n, n = 1..order.
std::vector<ExpTerm> exp_terms(const EffectiveModel& m, int order, bool with_beta) {
    std::vector<ExpTerm> terms;
    const double b1 = with_beta ? m.beta1 : 0.0;
    const double b2 = with_beta ? m.beta2 : 0.0;
    for (int n = 1; n <= order; ++n) {
        for (int j = n; j >= 0; --j) {
            const int k = n - j;
            const double v1 = j * m.a.a11 + k * m.a.a21;
            const double v2 = j * m.a.a12 + k * m.a.a22;
            const double norm2 = v1 * v1 + v2 * v2;
            ExpTerm t{j, k, j * m.mu1 + k * m.mu2, 0.0};
            t.argument = m.elliptical ? norm2 : j * b1 + k * b2 + 0.5 * norm2;
            terms.push_back(t);
        }
    }
    return terms;
}

void check_domain(const std::vector<MgfArgument>& args, const MixingLaw& law) {
    const double bound = law.domain_bound();
    std::vector<MgfArgument> offending;
    for (const auto& a : args) {
        if (a.value >= bound) offending.push_back(a);
    }
    if (!offending.empty()) throw MgfDomainError(std::move(offending), bound);
}

MomentSet assemble(const std::vector<ExpTerm>& terms, const std::vector<double>& values, int order) {
    MomentSet out;
    std::size_t idx = 0;
    for (int n = 1; n <= order; ++n) {
        double sum = 0.0;
        for (int j = n; j >= 0; --j, ++idx) {
            const int k = n - j;
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            sum += sign * binomial(n, j) * std::exp(terms[idx].log_prefactor) * values[idx];
        }
        out.m.push_back(sum);
    }
    return out;
}

MomentSet gaussian_mixture_moments(const EffectiveModel& model, int order, MgfKind kind, bool with_beta,
                                   MomentMode mode) {
    auto terms = exp_terms(model, order, with_beta);
    std::vector<MgfArgument> args;
    for (const auto& t : terms) args.push_back({exp_label(t.j, t.k), t.argument});
    if (kind == MgfKind::Exact) check_domain(args, model.law);
    std::vector<double> values;
    for (const auto& t : terms) values.push_back(model.law.mgf(t.argument, kind));
    MomentSet out = assemble(terms, values, order);
    out.mode = mode;
    out.mgf_kind = kind;
    out.arguments = std::move(args);
    return out;
}

// sum_j C(n, j) shift^{n-j} scale^j G_j
MomentSet shifted_exponential_moments(double shift, double log_scale, const std::vector<double>& g, int order) {
    MomentSet out;
    for (int n = 1; n <= order; ++n) {
        double sum = 0.0;
        for (int j = 0; j <= n; ++j) {
            double gj = j == 0 ? 1.0 : g[static_cast<std::size_t>(j - 1)];
            sum += binomial(n, j) * std::pow(shift, n - j) * std::exp(j * log_scale) * gj;
        }
        out.m.push_back(sum);
    }
    return out;
}

} // namespace

MomentSet exact_moments_mv(const EffectiveModel& model, MgfKind kind) {
    if (model.elliptical) throw InvalidArgument("exact_moments_mv needs a mixture model, not an elliptical one");
    return gaussian_mixture_moments(model, 4, kind, true, MomentMode::MeanVariance);
}

MomentSet exact_moments_v(const EffectiveModel& model, MgfKind kind) {
    if (model.elliptical) throw InvalidArgument("exact_moments_v needs a mixture model, not an elliptical one");
    return gaussian_mixture_moments(model, 3, kind, false, MomentMode::Variance);
}

MomentSet exact_moments_elliptical(const EffectiveModel& model, double tol) {
    if (!model.elliptical) throw InvalidArgument("exact_moments_elliptical needs an elliptical model");
    auto terms = exp_terms(model, 3, false);
    std::vector<MgfArgument> args;
    std::vector<double> values;
    for (const auto& t : terms) {
        args.push_back({exp_label(t.j, t.k), t.argument});
        values.push_back(radial_exp_series(model.law, t.argument, tol).value);
    }
    MomentSet out = assemble(terms, values, 3);
    out.mode = MomentMode::Elliptical;
    out.mgf_kind = MgfKind::Exact;
    out.arguments = std::move(args);
    return out;
}

MomentSet exact_moments(const EffectiveModel& model, MgfKind kind, double tol) {
    switch (model.mode()) {
    case MomentMode::MeanVariance: return exact_moments_mv(model, kind);
    case MomentMode::Variance: return exact_moments_v(model, kind);
    case MomentMode::Elliptical: return exact_moments_elliptical(model, tol);
    }
    throw InvalidArgument("unknown moment mode");
}

MomentSet proxy_moments_mv(const ProxyParamsMV& p, const MixingLaw& law, MgfKind kind) {
    std::vector<MgfArgument> args;
    const double a2 = p.a * p.a;
    for (int j = 1; j <= 4; ++j) args.push_back({proxy_label(j), 0.5 * j * j * a2 + j * p.b});
    if (kind == MgfKind::Exact) check_domain(args, law);
    std::vector<double> g;
    for (const auto& a : args) g.push_back(law.mgf(a.value, kind));
    MomentSet out = shifted_exponential_moments(p.d, p.c, g, 4);
    out.mode = MomentMode::MeanVariance;
    out.mgf_kind = kind;
    out.arguments = std::move(args);
    return out;
}

MomentSet proxy_moments_v(const ProxyParamsV& p, const MixingLaw& law, MgfKind kind) {
    std::vector<MgfArgument> args;
    const double a2 = p.a * p.a;
    for (int j = 1; j <= 3; ++j) args.push_back({proxy_label(j), 0.5 * j * j * a2});
    if (kind == MgfKind::Exact) check_domain(args, law);
    std::vector<double> g;
    for (const auto& a : args) g.push_back(law.mgf(a.value, kind));
    MomentSet out = shifted_exponential_moments(p.c, p.b, g, 3);
    out.mode = MomentMode::Variance;
    out.mgf_kind = kind;
    out.arguments = std::move(args);
    return out;
}

MomentSet proxy_moments_e(const ProxyParamsE& p, const MixingLaw& law, double tol) {
    std::vector<MgfArgument> args;
    std::vector<double> g;
    const double a2 = p.a * p.a;
    for (int j = 1; j <= 3; ++j) {
        args.push_back({proxy_label(j), j * j * a2});
        g.push_back(radial_exp_series(law, j * j * a2, tol).value);
    }
    MomentSet out = shifted_exponential_moments(p.c, p.b, g, 3);
    out.mode = MomentMode::Elliptical;
    out.mgf_kind = MgfKind::Exact;
    out.arguments = std::move(args);
    return out;
}

MomentSet proxy_moments_limit(const SymmetricLimitProxy& p, const MixingLaw& law) {
    // Z is symmetric with E[Z^2] = E[Y], or E[R]/2 for the circle.
    const double z2 = p.mode == MomentMode::Elliptical ? 0.5 * law.raw_moment(1) : law.raw_moment(1);
    const double l = p.location, s2 = p.scale * p.scale;
    MomentSet out;
    out.m = {l, l * l + s2 * z2, l * l * l + 3.0 * l * s2 * z2};
    out.mode = p.mode;
    out.mgf_kind = MgfKind::Exact;
    return out;
}

MomentSet proxy_moments(const ProxyParams& p, const MixingLaw& law, MgfKind kind, double tol) {
    if (const auto* mv = std::get_if<ProxyParamsMV>(&p)) return proxy_moments_mv(*mv, law, kind);
    if (const auto* v = std::get_if<ProxyParamsV>(&p)) return proxy_moments_v(*v, law, kind);
    if (const auto* e = std::get_if<ProxyParamsE>(&p)) return proxy_moments_e(*e, law, tol);
    return proxy_moments_limit(std::get<SymmetricLimitProxy>(p), law);
}

double moment_residual(const ProxyParams& p, const MomentSet& target, const MixingLaw& law, double tol) {
    MomentSet a = proxy_moments(p, law, target.mgf_kind, tol);
    double s = 0.0;
    for (int n = 1; n <= target.order(); ++n) {
        double d = a.at(n) - target.at(n);
        s += d * d;
    }
    return std::sqrt(s);
}

std::string describe(const ProxyParams& p) {
    std::ostringstream os;
    os.precision(10);
    if (const auto* mv = std::get_if<ProxyParamsMV>(&p)) {
        os << "a=" << mv->a << " b=" << mv->b << " c=" << mv->c << " d=" << mv->d;
    } else if (const auto* v = std::get_if<ProxyParamsV>(&p)) {
        os << "a=" << v->a << " b=" << v->b << " c=" << v->c;
    } else if (const auto* e = std::get_if<ProxyParamsE>(&p)) {
        os << "a=" << e->a << " b=" << e->b << " c=" << e->c;
    } else {
        const auto& l = std::get<SymmetricLimitProxy>(p);
        os << "symmetric-limit location=" << l.location << " scale=" << l.scale;
    }
    return os.str();
}

double proxy_shift(const ProxyParams& p) {
    if (const auto* mv = std::get_if<ProxyParamsMV>(&p)) return mv->d;
    if (const auto* v = std::get_if<ProxyParamsV>(&p)) return v->c;
    if (const auto* e = std::get_if<ProxyParamsE>(&p)) return e->c;
    return std::get<SymmetricLimitProxy>(p).location;
}

} // namespace spreadmm
