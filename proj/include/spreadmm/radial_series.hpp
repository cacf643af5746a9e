#pragma once

#include "spreadmm/mixing_law.hpp"

namespace spreadmm {

inline constexpr double kSeriesTolerance = 1e-12;
inline constexpr int kSeriesMaxTerms = 200;

struct SeriesValue {
    double value;
    double derivative; // d/ds2
    int terms;
};

// E[U1^{2k}] for U uniform on the unit circle: (2k)! / (4^k (k!)^2).
double circle_even_moment(int k);

// E[exp(sqrt(s2 R) U1)] = sum_k s2^k E[R^k] / (4^k (k!)^2) for s2 >= 0, with
// its derivative in s2. Stops once a term drops below tol times the running
// sum. Throws SeriesDivergence when the terms stop decreasing or the cap is hit.
SeriesValue radial_exp_series(const MixingLaw& law, double s2, double tol = kSeriesTolerance,
                              int max_terms = kSeriesMaxTerms);

} // namespace spreadmm
