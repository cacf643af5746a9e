#include "spreadmm/radial_series.hpp"

#include <cmath>
#include <string>

#include "spreadmm/errors.hpp"

namespace spreadmm {

double circle_even_moment(int k) {
    return std::exp(std::lgamma(2.0 * k + 1.0) - k * std::log(4.0) - 2.0 * std::lgamma(k + 1.0));
}

SeriesValue radial_exp_series(const MixingLaw& law, double s2, double tol, int max_terms) {
    if (s2 < 0.0) throw InvalidArgument("radial series needs a nonnegative argument");
    if (s2 == 0.0) {
        return {1.0, law.raw_moment(1) / 4.0, 1};
    }
    const double log_s2 = std::log(s2);
    const double log4 = std::log(4.0);
    double sum = 1.0;
    double dsum = 0.0;
    double previous = 1.0;
    int non_decreasing = 0;
    for (int k = 1; k < max_terms; ++k) {
        double log_moment;
        try {
            log_moment = law.log_raw_moment(k);
        } catch (const MomentsUnavailable& e) {
            throw SeriesDivergence(std::string("radial series ran out of moments: ") + e.what());
        }
        double term = std::exp(k * log_s2 + log_moment - k * log4 - 2.0 * std::lgamma(k + 1.0));
        if (!std::isfinite(term)) throw SeriesDivergence("radial series term overflowed");
        sum += term;
        dsum += k * term / s2;
        if (term < tol * sum) return {sum, dsum, k + 1};
        if (k > 20) {
            non_decreasing = term >= previous ? non_decreasing + 1 : 0;
            if (non_decreasing >= 3) {
                throw SeriesDivergence("radial series terms are not decreasing (argument " + std::to_string(s2) + ")");
            }
        }
        previous = term;
    }
    throw SeriesDivergence("radial series did not converge within " + std::to_string(max_terms) + " terms");
}

} // namespace spreadmm
