#include "spreadmm/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "spreadmm/errors.hpp"

namespace spreadmm {

namespace {

constexpr unsigned kMaxDepth = 18;

void check(const QuadratureResult& r, double l1, double tol, const char* what) {
    if (!std::isfinite(r.value) || r.error > std::sqrt(tol) * l1 + 1e-12) {
        throw QuadratureError(std::string(what) + " did not converge", r.value, r.error);
    }
}

// Splits (0, inf) at the law's mean; the tail uses y = y0 e^u.
QuadratureResult integrate_half_line(const std::function<double(double)>& weighted, const MixingLaw& law,
                                     double tol) {
    const double y0 = law.mean();
    QuadratureResult head = integrate_endpoint_singular(weighted, 0.0, y0, tol);
    auto tail_integrand = [&weighted, y0](double u) {
        const double y = y0 * std::exp(u);
        if (!std::isfinite(y)) return 0.0;
        const double v = weighted(y) * y;
        return std::isfinite(v) ? v : 0.0;
    };
    QuadratureResult tail = integrate(tail_integrand, 0.0, kInfinity, tol);
    return {head.value + tail.value, head.error + tail.error};
}

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    double error = 0.0, l1 = 0.0;
    double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, kMaxDepth, tol, &error, &l1);
    QuadratureResult r{value, error};
    check(r, l1, tol, "Gauss-Kronrod quadrature");
    return r;
}

QuadratureResult integrate_endpoint_singular(const std::function<double(double)>& f, double a, double b,
                                             double tol) {
    static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    double error = 0.0, l1 = 0.0;
    auto g = [&f](double x) { return f(x); };
    double value = integrator.integrate(g, a, b, tol, &error, &l1);
    QuadratureResult r{value, error};
    check(r, l1, tol, "tanh-sinh quadrature");
    return r;
}

QuadratureResult mixture_expectation(const std::function<double(double)>& g, const MixingLaw& law, double tol) {
    if (auto atom = law.atom()) return {g(*atom), 0.0};
    auto weighted = [&g, &law](double y) {
        const double f = law.density(y);
        if (f == 0.0) return 0.0;
        return g(y) * f;
    };
    return integrate_half_line(weighted, law, tol);
}

QuadratureResult mixture_expectation_log(const std::function<double(double)>& log_g, const MixingLaw& law,
                                         double tol) {
    if (auto atom = law.atom()) return {std::exp(log_g(*atom)), 0.0};
    auto weighted = [&log_g, &law](double y) {
        const double t = log_g(y) + law.log_density(y);
        if (!(t > -745.0)) return 0.0;
        return std::exp(t);
    };
    return integrate_half_line(weighted, law, tol);
}

} // namespace spreadmm
