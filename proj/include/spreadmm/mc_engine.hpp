#pragma once

#include <cstdint>
#include <vector>

#include "spreadmm/market_model.hpp"
#include "spreadmm/proxy.hpp"

namespace spreadmm {

inline constexpr std::uint64_t kDefaultSeed = 20240607;

struct McOptions {
    std::size_t n = 1'000'000;
    std::uint64_t seed = kDefaultSeed;
    // Pairs each draw with its reflection (N -> -N, U -> -U); n counts pairs.
    bool antithetic = false;
    // 0 selects std::thread::hardware_concurrency(). Results do not depend on it.
    unsigned threads = 0;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

// Discounted (e^{X1} - e^{X2} - K)^+ for each strike, all from the same paths.
std::vector<McEstimate> mc_spread_prices(const EffectiveModel& model, const std::vector<double>& strikes,
                                         const McOptions& opts = {});
McEstimate mc_spread_price(const EffectiveModel& model, const SpreadContract& contract, const McOptions& opts = {});

// Sample raw moments of e^{X1} - e^{X2}, orders 1..order.
std::vector<McEstimate> mc_moments(const EffectiveModel& model, int order, const McOptions& opts = {});

// Discounted (W - K)^+ for the proxy variable W simulated directly.
McEstimate mc_proxy_price(const ProxyParams& p, const MixingLaw& law, double strike, double rate,
                          const McOptions& opts = {});

} // namespace spreadmm
