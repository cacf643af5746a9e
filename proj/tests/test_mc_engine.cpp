#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "spreadmm/approx_pricer.hpp"
#include "spreadmm/errors.hpp"
#include "spreadmm/mc_engine.hpp"
#include "spreadmm/random.hpp"

using namespace spreadmm;

namespace {

EffectiveModel gaussian_model(double s1, double s2) {
    // Y = 1 and beta = 0: (X1, X2) is bivariate normal.
    ModelSpec spec;
    spec.s1_0 = s1;
    spec.s2_0 = s2;
    spec.a = {0.2, 0.05, 0.1, 0.15};
    spec.law = MixingLaw::degenerate(1.0);
    return build_effective(spec);
}

EffectiveModel table1_model() {
    ModelSpec spec;
    spec.s1_0 = 5.0;
    spec.s2_0 = 1.0;
    spec.beta1 = spec.beta2 = 0.1;
    spec.a = {0.15, 0.05, 0.05, 0.15};
    return build_effective(spec);
}

} // namespace

TEST(Random, StreamsAreReproducibleAndDistinct) {
    RandomStream a(42, 0), b(42, 0), c(42, 1);
    for (int i = 0; i < 10; ++i) {
        const auto x = a.next();
        EXPECT_EQ(x, b.next());
        EXPECT_NE(x, c.next());
    }
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
}

TEST(Random, UniformIsOpenInterval) {
    RandomStream r(1, 0);
    for (int i = 0; i < 100000; ++i) {
        const double u = r.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(Random, NormalMoments) {
    RandomStream r(9, 0);
    const int n = 1'000'000;
    double s = 0, s2 = 0, s4 = 0;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        s += z;
        s2 += z * z;
        s4 += z * z * z * z;
    }
    EXPECT_NEAR(s / n, 0.0, 4e-3);
    EXPECT_NEAR(s2 / n, 1.0, 6e-3);
    EXPECT_NEAR(s4 / n, 3.0, 4e-2);
}

TEST(McEngine, MargrabeAtZeroStrike) {
    EffectiveModel m = gaussian_model(2.0, 1.5);
    McOptions opts;
    opts.n = 2'000'000;
    McEstimate e = mc_spread_price(m, SpreadContract{0.0, 1.0}, opts);
    // Var(X1 - X2) = (a11 - a21)^2 + (a12 - a22)^2
    const double v = 0.1 * 0.1 + 0.1 * 0.1;
    EXPECT_NEAR(e.mean, oracle::margrabe(2.0, 1.5, v), 4.0 * e.std_error);
    EXPECT_EQ(e.n, opts.n);
    EXPECT_EQ(e.seed, kDefaultSeed);
}

TEST(McEngine, DeterministicForFixedSeed) {
    McOptions opts;
    opts.n = 200'000;
    opts.seed = 123;
    const auto m = table1_model();
    const auto a = mc_spread_prices(m, {1.9, 2.0}, opts);
    const auto b = mc_spread_prices(m, {1.9, 2.0}, opts);
    EXPECT_EQ(a[0].mean, b[0].mean);
    EXPECT_EQ(a[1].std_error, b[1].std_error);
    opts.seed = 124;
    EXPECT_NE(mc_spread_prices(m, {1.9}, opts)[0].mean, a[0].mean);
}

TEST(McEngine, ThreadCountDoesNotChangeResult) {
    McOptions opts;
    opts.n = 300'000;
    const auto m = table1_model();
    opts.threads = 1;
    const auto one = mc_spread_prices(m, {2.0}, opts);
    opts.threads = 4;
    const auto four = mc_spread_prices(m, {2.0}, opts);
    EXPECT_EQ(one[0].mean, four[0].mean);
    EXPECT_EQ(one[0].std_error, four[0].std_error);
}

TEST(McEngine, SharedPathsMatchSingleStrike) {
    McOptions opts;
    opts.n = 100'000;
    const auto m = table1_model();
    const auto many = mc_spread_prices(m, {1.9, 2.1}, opts);
    EXPECT_EQ(many[1].mean, mc_spread_price(m, SpreadContract{2.1, 1.0}, opts).mean);
}

TEST(McEngine, StandardErrorScalesWithSqrtN) {
    McOptions opts;
    const auto m = table1_model();
    opts.n = 1'000'000;
    const double big = mc_spread_prices(m, {2.0}, opts)[0].std_error;
    opts.n = 10'000;
    const double small = mc_spread_prices(m, {2.0}, opts)[0].std_error;
    EXPECT_NEAR(small / big, 10.0, 1.5);
}

TEST(McEngine, AntitheticStaysUnbiased) {
    McOptions opts;
    opts.n = 500'000;
    opts.antithetic = true;
    EffectiveModel m = gaussian_model(2.0, 1.5);
    McEstimate e = mc_spread_price(m, SpreadContract{0.0, 1.0}, opts);
    EXPECT_NEAR(e.mean, oracle::margrabe(2.0, 1.5, 0.02), 4.0 * e.std_error);
}

TEST(McEngine, MomentsMatchExactFirstMoment) {
    McOptions opts;
    opts.n = 500'000;
    const auto est = mc_moments(table1_model(), 2, opts);
    ASSERT_EQ(est.size(), 2u);
    EXPECT_NEAR(est[0].mean, 4.0, 4.0 * est[0].std_error);
    EXPECT_THROW(mc_moments(table1_model(), 5, opts), InvalidArgument);
}

TEST(McEngine, ProxyPriceMatchesFormula) {
    const auto law = MixingLaw::gamma(2.0, 1.0);
    ProxyParamsMV p{0.2, 0.05, 0.6, -0.5};
    McOptions opts;
    opts.n = 1'000'000;
    McEstimate e = mc_proxy_price(p, law, 1.5, 0.0, opts);
    EXPECT_NEAR(e.mean, price_mv(p, law, 1.5, 0.0).price, 4.0 * e.std_error);
}

TEST(McEngine, EllipticalDrawsAreOnScaledCircle) {
    // Degenerate R = 1 with A = I: X - mu lies on the unit circle, so with
    // mu = 0 the spread e^{cos} - e^{sin} has a known mean of I0-type integrals.
    ModelSpec spec;
    spec.elliptical = true;
    spec.a = {1.0, 0.0, 0.0, 1.0};
    spec.law = MixingLaw::degenerate(1.0);
    spec.mu_override = std::array<double, 2>{0.0, 0.0};
    EffectiveModel m = build_effective(spec);
    McOptions opts;
    opts.n = 400'000;
    const auto est = mc_moments(m, 1, opts);
    EXPECT_NEAR(est[0].mean, 0.0, 4.0 * est[0].std_error); // E[e^{cos}] = E[e^{sin}]
}

TEST(McEngine, RejectsZeroPaths) {
    McOptions opts;
    opts.n = 0;
    EXPECT_THROW(mc_spread_prices(table1_model(), {1.0}, opts), InvalidArgument);
}
