#pragma once

#include "spreadmm/mixing_law.hpp"
#include "spreadmm/proxy.hpp"
#include "spreadmm/spread_moments.hpp"

namespace spreadmm {

struct MatchOptions {
    int max_iterations = 200;
    // Residual a start must reach to count as a root.
    double tolerance = 1e-10;
    // Best residual above this raises NoSolution.
    double failure_threshold = 1e-6;
    // Exact mode: every mgf argument must stay below D (1 - domain_margin).
    double domain_margin = 1e-6;
    double series_tol = kSeriesTolerance;
    // Variance/elliptical targets with |skewness| at or below this are matched
    // by SymmetricLimitProxy, since the shifted exponential proxy needs positive skew.
    double symmetric_skew_tol = 1e-6;
    bool allow_symmetric_limit = true;
};

struct MatchReport {
    ProxyParams params;
    MomentMode mode = MomentMode::MeanVariance;
    MgfKind mgf_kind = MgfKind::Exact;
    // Euclidean norm of proxy moments minus target moments.
    double residual_norm = 0.0;
    int iterations = 0;
    int starts_tried = 0;
    bool symmetric_limit = false;
};

MatchReport match_mv(const MomentSet& target, const MixingLaw& law, MgfKind kind, const MatchOptions& opts = {});
MatchReport match_v(const MomentSet& target, const MixingLaw& law, MgfKind kind, const MatchOptions& opts = {});
MatchReport match_e(const MomentSet& target, const MixingLaw& law, const MatchOptions& opts = {});
// Dispatches on target.mode.
MatchReport match(const MomentSet& target, const MixingLaw& law, MgfKind kind, const MatchOptions& opts = {});

// Standardized third central moment of the target.
double target_skewness(const MomentSet& target);

} // namespace spreadmm
