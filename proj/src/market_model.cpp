#include "spreadmm/market_model.hpp"

#include <cmath>
#include <string>

#include "spreadmm/errors.hpp"
#include "spreadmm/radial_series.hpp"

namespace spreadmm {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw InvalidArgument(message);
}

} // namespace

const char* to_string(MomentMode mode) {
    switch (mode) {
    case MomentMode::MeanVariance: return "mean_variance";
    case MomentMode::Variance: return "variance";
    case MomentMode::Elliptical: return "elliptical";
    }
    return "?";
}

void ModelSpec::validate() const {
    require(s1_0 > 0.0 && std::isfinite(s1_0), "s1_0 must be positive");
    require(s2_0 > 0.0 && std::isfinite(s2_0), "s2_0 must be positive");
    require(std::isfinite(r), "r must be finite");
    require(a.sigma1_sq() > 0.0, "row 1 of A must be nonzero");
    require(a.sigma2_sq() > 0.0, "row 2 of A must be nonzero");
    if (elliptical) {
        require(beta1 == 0.0 && beta2 == 0.0, "elliptical model takes no beta loadings");
        require(delta1 == 0.0 && delta2 == 0.0, "elliptical model takes no delta locations");
    } else {
        require(!mu_override, "mu override is only available in elliptical mode");
    }
}

void SpreadContract::validate() const {
    require(strike >= 0.0 && std::isfinite(strike), "strike must be nonnegative");
    require(maturity > 0.0 && std::isfinite(maturity), "maturity must be positive");
}

MomentMode EffectiveModel::mode() const {
    if (elliptical) return MomentMode::Elliptical;
    if (beta1 == 0.0 && beta2 == 0.0) return MomentMode::Variance;
    return MomentMode::MeanVariance;
}

double martingale_drift(const MixingLaw& law, double delta, double beta, double sigma2) {
    const double s = beta + 0.5 * sigma2;
    if (s >= law.domain_bound()) {
        throw MgfDomainError({{"beta+sigma^2/2", s}}, law.domain_bound());
    }
    return -delta - std::log(law.mgf(s));
}

double elliptical_martingale_drift(const MixingLaw& law, double sigma2) {
    return -std::log(radial_exp_series(law, sigma2).value);
}

EffectiveModel build_effective(const ModelSpec& spec, double maturity) {
    spec.validate();
    require(maturity > 0.0, "maturity must be positive");
    EffectiveModel m;
    m.beta1 = spec.beta1;
    m.beta2 = spec.beta2;
    m.a = spec.a;
    m.law = spec.law;
    m.elliptical = spec.elliptical;
    m.rate_time = spec.r * maturity;
    if (spec.elliptical) {
        if (spec.mu_override) {
            m.mu1 = (*spec.mu_override)[0];
            m.mu2 = (*spec.mu_override)[1];
        } else {
            m.mu1 = m.rate_time + elliptical_martingale_drift(spec.law, spec.a.sigma1_sq()) + std::log(spec.s1_0);
            m.mu2 = m.rate_time + elliptical_martingale_drift(spec.law, spec.a.sigma2_sq()) + std::log(spec.s2_0);
        }
        return m;
    }
    // delta enters mu and omega with opposite signs, so it cancels here.
    m.mu1 = spec.delta1 + m.rate_time + martingale_drift(spec.law, spec.delta1, spec.beta1, spec.a.sigma1_sq()) +
            std::log(spec.s1_0);
    m.mu2 = spec.delta2 + m.rate_time + martingale_drift(spec.law, spec.delta2, spec.beta2, spec.a.sigma2_sq()) +
            std::log(spec.s2_0);
    return m;
}

} // namespace spreadmm
