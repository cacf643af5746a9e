#pragma once

#include <array>
#include <optional>

#include "spreadmm/mixing_law.hpp"

namespace spreadmm {

// Square root A of the instantaneous covariance, row i belongs to asset i.
struct MixingMatrix {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

    double sigma1_sq() const { return a11 * a11 + a12 * a12; }
    double sigma2_sq() const { return a21 * a21 + a22 * a22; }
};

struct ModelSpec {
    double s1_0 = 1.0;
    double s2_0 = 1.0;
    double r = 0.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    MixingMatrix a;
    MixingLaw law;
    // X = mu + sqrt(R) A U with U uniform on the circle; law is the law of R.
    bool elliptical = false;
    // Elliptical mode only: use these log locations as given instead of the
    // martingale normalization.
    std::optional<std::array<double, 2>> mu_override;

    void validate() const;
};

struct SpreadContract {
    double strike = 0.0;
    // The law in ModelSpec must already be the law of Y_T when maturity != 1.
    double maturity = 1.0;

    void validate() const;
};

enum class MomentMode { MeanVariance, Variance, Elliptical };
const char* to_string(MomentMode mode);

struct EffectiveModel {
    double mu1 = 0.0;
    double mu2 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    MixingMatrix a;
    MixingLaw law;
    bool elliptical = false;
    // r * T; prices are discounted by exp(-rate_time).
    double rate_time = 0.0;

    MomentMode mode() const;
};

// omega = -delta - ln phi_Y(beta + sigma2 / 2), exact mgf.
double martingale_drift(const MixingLaw& law, double delta, double beta, double sigma2);

// omega = -ln E[exp(sigma sqrt(R) U1)].
double elliptical_martingale_drift(const MixingLaw& law, double sigma2);

EffectiveModel build_effective(const ModelSpec& spec, double maturity = 1.0);

} // namespace spreadmm
