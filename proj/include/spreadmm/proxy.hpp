#pragma once

#include <string>
#include <variant>

#include "spreadmm/market_model.hpp"

namespace spreadmm {

// W = exp(a sqrt(Y) N + b Y + c) + d
struct ProxyParamsMV {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
};

// W = exp(a sqrt(Y) N + b) + c
struct ProxyParamsV {
    double a = 0.0, b = 0.0, c = 0.0;
};

// W = exp(a sqrt(R) U1 + b) + c, U uniform on the unit circle
struct ProxyParamsE {
    double a = 0.0, b = 0.0, c = 0.0;
};

// Zero-skew limit of the variance and elliptical proxies as a -> 0:
// W = location + scale * Z with Z = sqrt(Y) N (Variance) or sqrt(R) U1 (Elliptical).
struct SymmetricLimitProxy {
    double location = 0.0;
    double scale = 0.0;
    MomentMode mode = MomentMode::Variance;
};

using ProxyParams = std::variant<ProxyParamsMV, ProxyParamsV, ProxyParamsE, SymmetricLimitProxy>;

std::string describe(const ProxyParams& p);

// The shift (d or c) the option payoff is compared against; the location for the limit proxy.
double proxy_shift(const ProxyParams& p);

} // namespace spreadmm
