#pragma once

#include <functional>

#include "spreadmm/mixing_law.hpp"

namespace spreadmm {

inline constexpr double kQuadratureTolerance = 1e-9;

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

// Adaptive Gauss-Kronrod on [a, b]; b may be +inf.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double tol = kQuadratureTolerance);

// Tanh-sinh on the finite interval [a, b]; suited to endpoint singularities.
QuadratureResult integrate_endpoint_singular(const std::function<double(double)>& f, double a, double b,
                                             double tol = kQuadratureTolerance);

// E[g(Y)] for the mixing law. For the degenerate law this is g at the atom.
QuadratureResult mixture_expectation(const std::function<double(double)>& g, const MixingLaw& law,
                                     double tol = kQuadratureTolerance);

// E[exp(log_g(Y))], combining log_g with the log density so that large
// exponential factors against small density values do not overflow.
QuadratureResult mixture_expectation_log(const std::function<double(double)>& log_g, const MixingLaw& law,
                                         double tol = kQuadratureTolerance);

} // namespace spreadmm
