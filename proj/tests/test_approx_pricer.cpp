#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "spreadmm/approx_pricer.hpp"
#include "spreadmm/errors.hpp"
#include "spreadmm/tables.hpp"

using namespace spreadmm;

namespace {

ModelSpec table_spec(const MixingLaw& law, double s1, double s2, double beta) {
    ModelSpec spec;
    spec.s1_0 = s1;
    spec.s2_0 = s2;
    spec.beta1 = spec.beta2 = beta;
    spec.a = {0.15, 0.05, 0.05, 0.15};
    spec.law = law;
    return spec;
}

double approx(const ModelSpec& spec, double strike) {
    return price_spread_approx(spec, SpreadContract{strike, 1.0}, PricingOptions{}).price;
}

const MixingLaw kIg = MixingLaw::inverse_gaussian(std::sqrt(0.5), 1.0);

// E[(e^{a sqrt(R) U1 + b} + c - K)^+] from the angle integral and the density of R.
double circle_oracle(const ProxyParamsE& p, const MixingLaw& law, double strike) {
    const double l = std::log(strike - p.c) - p.b;
    return oracle::mixture_mean([&](double r) {
        const double rho = p.a * std::sqrt(r);
        const double theta = std::acos(std::clamp(l / rho, -1.0, 1.0));
        const int n = 400;
        const double h = theta / n;
        double sum = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            sum += w * (std::exp(rho * std::cos(i * h) + p.b) + p.c - strike);
        }
        return sum * h / 3.0 / M_PI;
    }, law);
}

} // namespace

TEST(PriceV, DegenerateLawIsShiftedLognormal) {
    ProxyParamsV p{0.3, 0.2, -0.4};
    for (double k : {0.1, 0.8, 1.5}) {
        const double ref = std::exp(-0.03) * oracle::shifted_lognormal_call(p.b, p.a, p.c, k);
        EXPECT_NEAR(price_v(p, MixingLaw::degenerate(1.0), k, 0.03).price, ref, 1e-12) << k;
    }
}

TEST(PriceV, AgreesWithConditionalBlackIntegral) {
    ProxyParamsV p{0.25, 0.6, -0.8};
    for (const auto& law : {MixingLaw::exponential(1.0), MixingLaw::gamma(2.0, 1.0), kIg}) {
        for (double k : {0.5, 1.0, 2.0}) {
            const double ref = oracle::mixture_mean(
                [&](double y) { return oracle::shifted_lognormal_call(p.b, p.a * std::sqrt(y), p.c, k); }, law);
            EXPECT_NEAR(price_v(p, law, k, 0.0).price, ref, 1e-8) << law.describe() << " K=" << k;
        }
    }
}

TEST(PriceMV, AgreesWithConditionalBlackIntegral) {
    ProxyParamsMV p{0.2, 0.08, 0.9, -1.1};
    for (const auto& law : {MixingLaw::exponential(1.0), MixingLaw::gamma(2.0, 1.0), kIg}) {
        for (double k : {0.3, 1.2, 2.5}) {
            const double ref = oracle::mixture_mean(
                [&](double y) { return oracle::shifted_lognormal_call(p.b * y + p.c, p.a * std::sqrt(y), p.d, k); },
                law);
            EXPECT_NEAR(price_mv(p, law, k, 0.0).price, ref, 1e-8) << law.describe() << " K=" << k;
        }
    }
}

TEST(PriceMV, ShiftAboveStrikeIsLinear) {
    const auto law = MixingLaw::exponential(1.0);
    ProxyParamsMV p{0.2, 0.05, 0.5, 1.2};
    ProxyPrice pp = price_mv(p, law, 1.0, 0.02);
    EXPECT_EQ(pp.branch, Branch::ShiftAboveStrike);
    const double mean = std::exp(p.c) * law.mgf(0.5 * p.a * p.a + p.b) + p.d;
    EXPECT_NEAR(pp.price, std::exp(-0.02) * (mean - 1.0), 1e-14);
}

TEST(PriceMV, BranchContinuityAtShift) {
    const auto law = MixingLaw::gamma(2.0, 1.0);
    ProxyParamsMV p{0.2, 0.05, 0.5, 1.2};
    const double at = price_mv(p, law, p.d, 0.0).price;
    const double above = price_mv(p, law, p.d + 1e-9, 0.0).price;
    EXPECT_EQ(price_mv(p, law, p.d + 1e-9, 0.0).branch, Branch::Integral);
    EXPECT_NEAR(at, above, 1e-6);
}

TEST(PriceMV, DomainViolationThrows) {
    ProxyParamsMV p{0.5, 0.95, 0.0, 0.0}; // a^2/2 + b = 1.075 >= 1
    EXPECT_THROW(price_mv(p, MixingLaw::exponential(1.0), 1.0, 0.0), MgfDomainError);
    EXPECT_THROW(price_mv(ProxyParamsMV{-0.1, 0, 0, 0}, MixingLaw::exponential(1.0), 1.0, 0.0), InvalidArgument);
}

TEST(PriceE, ChiSquaredTwoIsShiftedLognormal) {
    ProxyParamsE p{0.3, 0.1, 0.2};
    for (double k : {0.5, 1.3, 2.0}) {
        EXPECT_NEAR(price_e(p, MixingLaw::chi_squared(2.0), k, 0.0).price,
                    oracle::shifted_lognormal_call(p.b, p.a, p.c, k), 1e-8)
            << k;
    }
}

TEST(PriceE, AgreesWithAngleIntegral) {
    ProxyParamsE p{0.35, 0.0, 0.4};
    for (const auto& law : {MixingLaw::exponential(1.0), MixingLaw::gamma(2.0, 1.0)}) {
        for (double k : {1.2, 1.6}) {
            EXPECT_NEAR(price_e(p, law, k, 0.0).price, circle_oracle(p, law, k), 1e-7) << law.describe();
        }
    }
}

TEST(PriceE, DegenerateRadius) {
    // R = 1: the angle integral with the arcsine law of U1.
    ProxyParamsE p{0.5, 0.0, 0.3};
    const auto law = MixingLaw::degenerate(1.0);
    const double k = 1.4;
    const double theta = std::acos((std::log(k - p.c) - p.b) / p.a);
    const int n = 2000;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        sum += w * (std::exp(p.a * std::cos(i * theta / n)) + p.c - k);
    }
    EXPECT_NEAR(price_e(p, law, k, 0.0).price, sum * theta / n / 3.0 / M_PI, 1e-10);
}

TEST(RadialDensity, ChiSquaredTwoIsStandardNormal) {
    for (double z : {0.0, 0.5, 1.0, 2.0}) {
        EXPECT_NEAR(radial_density_h(MixingLaw::chi_squared(2.0), z), oracle::norm_pdf(z), 1e-8) << z;
    }
}

TEST(RadialDensity, DegenerateIsArcsine) {
    for (double z : {0.0, 0.3, 0.9}) {
        EXPECT_NEAR(radial_density_h(MixingLaw::degenerate(1.0), z), 1.0 / (M_PI * std::sqrt(1.0 - z * z)), 1e-10);
    }
    EXPECT_EQ(radial_density_h(MixingLaw::degenerate(1.0), 1.5), 0.0);
}

TEST(RadialDensity, ExponentialIsGaussianWithHalfVariance) {
    // f_R(r) = e^{-r} gives h(z) = (2 / pi) e^{-z^2} int_0^inf e^{-u^2} du.
    for (double z : {0.0, 0.4, 1.1, 2.5}) {
        EXPECT_NEAR(radial_density_h(MixingLaw::exponential(1.0), z), std::exp(-z * z) / std::sqrt(M_PI), 1e-10);
    }
}

TEST(SymmetricLimit, VarianceModeIsMixedBachelier) {
    SymmetricLimitProxy p{0.2, 0.3, MomentMode::Variance};
    const auto law = MixingLaw::gamma(2.0, 1.0);
    for (double k : {0.0, 0.2, 0.9}) {
        const double ref = oracle::mixture_mean(
            [&](double y) { return oracle::bachelier_call(p.location, p.scale * std::sqrt(y), k); }, law);
        EXPECT_NEAR(price_symmetric_limit(p, law, k, 0.0).price, ref, 1e-9);
    }
}

TEST(SymmetricLimit, EllipticalGaussianIsBachelier) {
    SymmetricLimitProxy p{0.1, 0.4, MomentMode::Elliptical};
    EXPECT_NEAR(price_symmetric_limit(p, MixingLaw::chi_squared(2.0), 0.3, 0.0).price,
                oracle::bachelier_call(0.1, 0.4, 0.3), 1e-8);
}

TEST(PriceReport, FlooringIsRecorded) {
    // A far out-of-the-money strike on the integral branch can leave a tiny
    // negative residue from cancellation; the report must never be negative.
    const auto law = MixingLaw::exponential(1.0);
    ProxyPrice pp = price_v(ProxyParamsV{0.05, 0.0, -0.5}, law, 5.0, 0.0);
    EXPECT_GE(pp.price, 0.0);
    EXPECT_EQ(pp.floored, pp.raw_price < 0.0);
}

TEST(PriceSpread, Table4ReferenceValue) {
    // Table 4, (S1, S2) = (5, 1), K = 3: 1.0189
    EXPECT_NEAR(approx(table_spec(MixingLaw::exponential(1.0), 5.0, 1.0, 0.0), 3.0), 1.0189, 2e-3);
}

TEST(PriceSpread, Table6ReferenceValues) {
    // Table 6, K = 3 on (5, 1): 1.0093; K = 1 on (2, 1): 0.0804
    EXPECT_NEAR(approx(table_spec(kIg, 5.0, 1.0, 0.0), 3.0), 1.0093, 2e-3);
    EXPECT_NEAR(approx(table_spec(kIg, 2.0, 1.0, 0.0), 1.0), 0.0804, 2e-3);
}

TEST(PriceSpread, MeanVarianceTablesReferenceValues) {
    // Table 2 (3, 1), K = 1.0: 1.0011; Table 3 (3, 1), K = 1.0: 0.9990
    EXPECT_NEAR(approx(table_spec(MixingLaw::gamma(2.0, 1.0), 3.0, 1.0, 0.1), 1.0), 1.0011, 1e-2);
    EXPECT_NEAR(approx(table_spec(kIg, 3.0, 1.0, 0.1), 1.0), 0.9990, 1e-2);
}

TEST(PriceSpread, ExactShiftAboveStrikeEqualsDiscountedMeanMinusStrike) {
    PricingOptions opts;
    opts.mgf = MgfPolicy::Exact;
    ModelSpec spec = table_spec(MixingLaw::exponential(1.0), 5.0, 1.0, 0.1);
    spec.r = 0.03;
    MatchedSpread m = match_spread(spec, 1.0, opts);
    const double d = proxy_shift(m.match.params);
    if (d > 0.0) {
        PriceReport r = price_matched(m, d, opts);
        EXPECT_EQ(r.branch, Branch::ShiftAboveStrike);
        EXPECT_NEAR(r.price, std::exp(-0.03) * (m.target.at(1) - d), 1e-10);
    }
}

TEST(PriceSpread, ReportCarriesConventions) {
    PriceReport r = price_spread_approx(table_spec(kIg, 3.0, 1.0, 0.0), SpreadContract{1.0, 1.0}, PricingOptions{});
    bool has_ig = false;
    for (const auto& n : r.notes) has_ig = has_ig || n.find("inverse Gaussian") != std::string::npos;
    EXPECT_TRUE(has_ig);
    EXPECT_EQ(r.target.mode, MomentMode::Variance);
    EXPECT_GE(r.quadrature_error_estimate, 0.0);
}

TEST(PriceSpread, AutoFallsBackToTruncatedWhenExactHasNoRoot) {
    PriceReport r = price_spread_approx(table_spec(MixingLaw::exponential(1.0), 1.0, 1.0, 0.1),
                                        SpreadContract{0.3, 1.0}, PricingOptions{});
    EXPECT_EQ(r.match.mgf_kind, MgfKind::Truncated);
    EXPECT_FALSE(r.notes.empty());
    PricingOptions exact;
    exact.mgf = MgfPolicy::Exact;
    EXPECT_THROW(price_spread_approx(table_spec(MixingLaw::exponential(1.0), 1.0, 1.0, 0.1),
                                     SpreadContract{0.3, 1.0}, exact),
                 NoSolution);
}
