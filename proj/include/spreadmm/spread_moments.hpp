#pragma once

#include <vector>

#include "spreadmm/errors.hpp"
#include "spreadmm/market_model.hpp"
#include "spreadmm/proxy.hpp"
#include "spreadmm/radial_series.hpp"

namespace spreadmm {

// Raw moments M1..Mn of a spread-like variable, plus the MGF (or series)
// arguments used to compute them.
struct MomentSet {
    std::vector<double> m; // m[0] is the first moment
    MomentMode mode = MomentMode::MeanVariance;
    MgfKind mgf_kind = MgfKind::Exact;
    std::vector<MgfArgument> arguments;

    int order() const { return static_cast<int>(m.size()); }
    // 1-based access: at(1) is the mean.
    double at(int n) const { return m.at(static_cast<std::size_t>(n - 1)); }
};

MomentSet exact_moments_mv(const EffectiveModel& model, MgfKind kind);
MomentSet exact_moments_v(const EffectiveModel& model, MgfKind kind);
MomentSet exact_moments_elliptical(const EffectiveModel& model, double tol = kSeriesTolerance);
// Dispatches on model.mode(); `kind` is ignored in elliptical mode.
MomentSet exact_moments(const EffectiveModel& model, MgfKind kind, double tol = kSeriesTolerance);

MomentSet proxy_moments_mv(const ProxyParamsMV& p, const MixingLaw& law, MgfKind kind);
MomentSet proxy_moments_v(const ProxyParamsV& p, const MixingLaw& law, MgfKind kind);
MomentSet proxy_moments_e(const ProxyParamsE& p, const MixingLaw& law, double tol = kSeriesTolerance);
MomentSet proxy_moments_limit(const SymmetricLimitProxy& p, const MixingLaw& law);
MomentSet proxy_moments(const ProxyParams& p, const MixingLaw& law, MgfKind kind, double tol = kSeriesTolerance);

// Euclidean norm of proxy moments minus target, over the target's order.
double moment_residual(const ProxyParams& p, const MomentSet& target, const MixingLaw& law,
                       double tol = kSeriesTolerance);

} // namespace spreadmm
