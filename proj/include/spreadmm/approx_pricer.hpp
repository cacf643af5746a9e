#pragma once

#include <string>
#include <vector>

#include "spreadmm/market_model.hpp"
#include "spreadmm/moment_matcher.hpp"
#include "spreadmm/proxy.hpp"
#include "spreadmm/quadrature.hpp"
#include "spreadmm/spread_moments.hpp"

namespace spreadmm {

// ShiftAboveStrike: the proxy shift (d or c) is at or above K and the payoff is linear.
enum class Branch { ShiftAboveStrike, Integral };
const char* to_string(Branch b);

// Which MGF the matching system uses. Auto tries Exact first and falls back to
// Truncated when the exact system has no admissible root.
enum class MgfPolicy { Exact, Truncated, Auto };
const char* to_string(MgfPolicy p);

// Discounted price of (W - K)^+ for a proxy W, always under the true law of Y.
struct ProxyPrice {
    double price = 0.0;
    double raw_price = 0.0; // before flooring at zero
    bool floored = false;
    Branch branch = Branch::Integral;
    double quadrature_error = 0.0;
};

ProxyPrice price_mv(const ProxyParamsMV& p, const MixingLaw& law, double strike, double rate,
                    double tol = kQuadratureTolerance);
ProxyPrice price_v(const ProxyParamsV& p, const MixingLaw& law, double strike, double rate,
                   double tol = kQuadratureTolerance);
ProxyPrice price_e(const ProxyParamsE& p, const MixingLaw& law, double strike, double rate,
                   double tol = kQuadratureTolerance);
ProxyPrice price_symmetric_limit(const SymmetricLimitProxy& p, const MixingLaw& law, double strike, double rate,
                                 double tol = kQuadratureTolerance);
ProxyPrice price_proxy(const ProxyParams& p, const MixingLaw& law, double strike, double rate,
                       double tol = kQuadratureTolerance);

// Density of sqrt(R) U1 with U uniform on the unit circle:
// h(z) = (2/pi) int_0^inf f_R(z^2 + u^2) du.
double radial_density_h(const MixingLaw& law, double z, double tol = kQuadratureTolerance);

struct PricingOptions {
    MgfPolicy mgf = MgfPolicy::Auto;
    double quad_tol = kQuadratureTolerance;
    MatchOptions match;
};

struct MatchedSpread {
    EffectiveModel model;
    MomentSet target;
    MatchReport match;
    // Why earlier mgf kinds were abandoned, in order.
    std::vector<std::string> notes;
};

struct PriceReport {
    double price = 0.0;
    double raw_price = 0.0;
    bool floored = false;
    Branch branch = Branch::Integral;
    double quadrature_error_estimate = 0.0;
    MatchReport match;
    MomentSet target;
    std::string law;
    std::vector<std::string> notes;
};

MatchedSpread match_spread(const ModelSpec& spec, double maturity, const PricingOptions& opts = {});
PriceReport price_matched(const MatchedSpread& matched, double strike, const PricingOptions& opts = {});
PriceReport price_spread_approx(const ModelSpec& spec, const SpreadContract& contract,
                                const PricingOptions& opts = {});

} // namespace spreadmm
