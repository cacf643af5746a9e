#pragma once

// Reference values computed without the library's numerical routines:
// closed forms where they exist, otherwise composite Simpson on a mapped
// half-line.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "spreadmm/market_model.hpp"
#include "spreadmm/mixing_law.hpp"

namespace oracle {

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
inline double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

inline double binomial(int n, int k) {
    double out = 1.0;
    for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
    return out;
}

// E[(e^{m + s N} + shift - K)^+] for N ~ N(0,1), s > 0.
inline double shifted_lognormal_call(double m, double s, double shift, double strike) {
    if (shift >= strike) return std::exp(m + 0.5 * s * s) + shift - strike;
    const double l = std::log(strike - shift);
    const double d2 = (m - l) / s;
    return std::exp(m + 0.5 * s * s) * norm_cdf(d2 + s) + (shift - strike) * norm_cdf(d2);
}

// E[(m + s N - K)^+].
inline double bachelier_call(double m, double s, double strike) {
    const double x = (m - strike) / s;
    return s * norm_pdf(x) + (m - strike) * norm_cdf(x);
}

// Exchange option E[(S1 e^{...} - S2 e^{...})^+] for jointly lognormal
// martingales with total log-variance v of the ratio.
inline double margrabe(double s1, double s2, double v) {
    const double sd = std::sqrt(v);
    const double d1 = (std::log(s1 / s2) + 0.5 * v) / sd;
    return s1 * norm_cdf(d1) - s2 * norm_cdf(d1 - sd);
}

// Composite Simpson for int_0^inf f(y) dy under y = t / (1 - t), t in (0, 1).
inline double half_line_simpson(const std::function<double(double)>& f, int panels = 20000) {
    auto g = [&f](double t) {
        if (t >= 1.0) return 0.0;
        const double y = t / (1.0 - t);
        return f(y) / ((1.0 - t) * (1.0 - t));
    };
    const double h = 1.0 / panels;
    double sum = g(0.0) + g(1.0);
    for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * g(i * h);
    return sum * h / 3.0;
}

// E[g(Y)] from the density; the integrand is split at the mean so the
// mapping is not wasted on a far tail.
inline double mixture_mean(const std::function<double(double)>& g, const spreadmm::MixingLaw& law) {
    const double m = law.mean();
    return half_line_simpson([&](double u) {
        // The density at 0 is its right limit.
        const double y = std::max(m * u, 1e-300);
        const double f = law.density(y);
        return f == 0.0 ? 0.0 : g(y) * f * m;
    });
}

// E[(e^{X1} - e^{X2})^n] for the mean-variance mixture by integrating the
// conditional normal moments against the density of Y.
inline double spread_moment_density(const spreadmm::EffectiveModel& m, int n) {
    double total = 0.0;
    for (int j = 0; j <= n; ++j) {
        const int k = n - j;
        const double v1 = j * m.a.a11 + k * m.a.a21;
        const double v2 = j * m.a.a12 + k * m.a.a22;
        const double slope = j * m.beta1 + k * m.beta2 + 0.5 * (v1 * v1 + v2 * v2);
        const double cond = mixture_mean([slope](double y) { return std::exp(slope * y); }, m.law);
        total += binomial(n, j) * ((k % 2) ? -1.0 : 1.0) * std::exp(j * m.mu1 + k * m.mu2) * cond;
    }
    return total;
}

// E[(e^{X1} - e^{X2})^n] when (X1, X2) ~ N(mu, A A^T).
inline double lognormal_spread_moment(double mu1, double mu2, const spreadmm::MixingMatrix& a, int n) {
    const double s11 = a.a11 * a.a11 + a.a12 * a.a12;
    const double s22 = a.a21 * a.a21 + a.a22 * a.a22;
    const double s12 = a.a11 * a.a21 + a.a12 * a.a22;
    double total = 0.0;
    for (int j = 0; j <= n; ++j) {
        const int k = n - j;
        const double var = j * j * s11 + 2.0 * j * k * s12 + k * k * s22;
        total += binomial(n, j) * ((k % 2) ? -1.0 : 1.0) * std::exp(j * mu1 + k * mu2 + 0.5 * var);
    }
    return total;
}

} // namespace oracle
