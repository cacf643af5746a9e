#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "spreadmm/errors.hpp"
#include "spreadmm/moment_matcher.hpp"
#include "spreadmm/spread_moments.hpp"

using namespace spreadmm;

namespace {

EffectiveModel table_model(const MixingLaw& law, double s1, double s2, double beta) {
    ModelSpec spec;
    spec.s1_0 = s1;
    spec.s2_0 = s2;
    spec.beta1 = spec.beta2 = beta;
    spec.a = {0.15, 0.05, 0.05, 0.15};
    spec.law = law;
    return build_effective(spec);
}

} // namespace

TEST(MomentMatcher, RoundTripMeanVariance) {
    const auto law = MixingLaw::exponential(1.0);
    ProxyParamsMV p{0.2, 0.05, 1.0, -1.5};
    MomentSet target = proxy_moments_mv(p, law, MgfKind::Exact);
    MatchReport r = match_mv(target, law, MgfKind::Exact);
    EXPECT_LT(r.residual_norm, 1e-10);
    EXPECT_EQ(r.mode, MomentMode::MeanVariance);
    EXPECT_LT(moment_residual(r.params, target, law), 1e-10);
    EXPECT_GT(r.starts_tried, 0);
}

TEST(MomentMatcher, RoundTripVariance) {
    const auto law = MixingLaw::gamma(2.0, 1.0);
    ProxyParamsV p{0.25, 0.7, -0.4};
    MomentSet target = proxy_moments_v(p, law, MgfKind::Exact);
    MatchReport r = match_v(target, law, MgfKind::Exact);
    EXPECT_LT(r.residual_norm, 1e-10);
    // Three moments and three unknowns with positive skew: the root is unique.
    const auto& q = std::get<ProxyParamsV>(r.params);
    EXPECT_NEAR(q.a, p.a, 1e-7);
    EXPECT_NEAR(q.b, p.b, 1e-7);
    EXPECT_NEAR(q.c, p.c, 1e-7);
}

TEST(MomentMatcher, RoundTripElliptical) {
    const auto law = MixingLaw::exponential(1.0);
    ProxyParamsE p{0.3, 0.2, 0.5};
    MomentSet target = proxy_moments_e(p, law);
    MatchReport r = match_e(target, law);
    EXPECT_LT(r.residual_norm, 1e-10);
    const auto& q = std::get<ProxyParamsE>(r.params);
    EXPECT_NEAR(q.a, p.a, 1e-7);
    EXPECT_NEAR(q.c, p.c, 1e-7);
}

TEST(MomentMatcher, RandomRoundTripsVariance) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> ua(0.05, 0.4), ub(-1.0, 1.5), uc(-2.0, 2.0);
    const auto law = MixingLaw::inverse_gaussian(std::sqrt(0.5), 1.0);
    for (int i = 0; i < 10; ++i) {
        ProxyParamsV p{ua(gen), ub(gen), uc(gen)};
        MomentSet target = proxy_moments_v(p, law, MgfKind::Exact);
        MatchReport r = match_v(target, law, MgfKind::Exact);
        EXPECT_LT(r.residual_norm, 1e-10) << describe(p);
    }
}

TEST(MomentMatcher, TableTargetsHaveRoots) {
    for (double beta : {0.0, 0.1}) {
        EffectiveModel em = table_model(MixingLaw::exponential(1.0), 5.0, 1.0, beta);
        MomentSet target = exact_moments(em, MgfKind::Exact);
        MatchReport r = match(target, em.law, MgfKind::Exact);
        EXPECT_LT(r.residual_norm, 1e-8);
        EXPECT_FALSE(r.symmetric_limit);
    }
}

TEST(MomentMatcher, TruncatedTargetsOnSymmetricRow) {
    EffectiveModel em = table_model(MixingLaw::exponential(1.0), 1.0, 1.0, 0.1);
    MomentSet target = exact_moments(em, MgfKind::Truncated);
    MatchReport r = match(target, em.law, MgfKind::Truncated);
    EXPECT_LT(r.residual_norm, 1e-8);
    EXPECT_EQ(r.mgf_kind, MgfKind::Truncated);
}

TEST(MomentMatcher, ZeroSkewUsesSymmetricLimit) {
    EffectiveModel em = table_model(MixingLaw::gamma(2.0, 1.0), 1.0, 1.0, 0.0);
    MomentSet target = exact_moments(em, MgfKind::Exact);
    EXPECT_NEAR(target_skewness(target), 0.0, 1e-6);
    MatchReport r = match(target, em.law, MgfKind::Exact);
    EXPECT_TRUE(r.symmetric_limit);
    const auto& lim = std::get<SymmetricLimitProxy>(r.params);
    EXPECT_NEAR(lim.location, 0.0, 1e-12);
    // Var = s^2 E[Y]
    const double var = target.at(2) - target.at(1) * target.at(1);
    EXPECT_NEAR(lim.scale * lim.scale * em.law.mean(), var, 1e-14);
    MatchOptions no_limit;
    no_limit.allow_symmetric_limit = false;
    EXPECT_THROW(match(target, em.law, MgfKind::Exact, no_limit), NoSolution);
}

TEST(MomentMatcher, KindMismatchIsRejected) {
    EffectiveModel em = table_model(MixingLaw::exponential(1.0), 3.0, 1.0, 0.1);
    MomentSet target = exact_moments(em, MgfKind::Exact);
    EXPECT_THROW(match_mv(target, em.law, MgfKind::Truncated), InvalidArgument);
}

TEST(MomentMatcher, InfeasibleTargetHasNoSolution) {
    MomentSet target;
    target.mode = MomentMode::Variance;
    target.m = {1.0, 0.5, 2.0}; // variance < 0
    EXPECT_THROW(match(target, MixingLaw::exponential(1.0), MgfKind::Exact), NoSolution);
}

TEST(MomentMatcher, NegativeSkewHasNoSolutionInVarianceMode) {
    const auto law = MixingLaw::exponential(1.0);
    MomentSet target = proxy_moments_v(ProxyParamsV{0.3, 0.0, 0.0}, law, MgfKind::Exact);
    // Reflect W -> -W: odd moments change sign.
    target.m[0] = -target.m[0];
    target.m[2] = -target.m[2];
    EXPECT_LT(target_skewness(target), 0.0);
    try {
        match(target, law, MgfKind::Exact);
        FAIL() << "expected NoSolution";
    } catch (const NoSolution& e) {
        EXPECT_GT(e.best_residual(), 1e-6);
    }
}
