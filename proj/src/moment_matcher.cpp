#include "spreadmm/moment_matcher.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace spreadmm {

namespace {

constexpr double kMinAhat = 1e-14;

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// G_j(ahat, b) = E[exp(j (a Z + b Y))] for the proxy exponent and its partials
// in ahat and b. Returns false outside the admissible region.
using Kernel = std::function<bool(int j, double ahat, double b, double& g, double& ga, double& gb)>;

// Residuals of  chat^k G_k(ahat, b) = E[(X - shift)^k],  k = 1..N.
// N = 4: x = (ahat, b, chat, shift).  N = 3: x = (ahat, chat, shift) with b = 0.
template <int N>
class ShiftedExponentialSystem {
public:
    using Vec = Eigen::Matrix<double, N, 1>;
    using Mat = Eigen::Matrix<double, N, N>;
    static constexpr int kChat = N == 4 ? 2 : 1;
    static constexpr int kShift = N - 1;

    ShiftedExponentialSystem(const MomentSet& target, Kernel kernel) : kernel_(std::move(kernel)) {
        raw_[0] = 1.0;
        for (int k = 1; k <= N; ++k) raw_[k] = target.at(k);
        // Scale equation k by s^{-k} so all equations are of comparable size.
        const double s = std::sqrt(std::max(raw_[2], std::numeric_limits<double>::min()));
        for (int k = 1; k <= N; ++k) weight_[k] = std::pow(s, -k);
    }

    static void unpack(const Vec& x, double& ahat, double& b, double& chat, double& shift) {
        ahat = x[0];
        b = N == 4 ? x[1] : 0.0;
        chat = x[kChat];
        shift = x[kShift];
    }

    // E[(X - shift)^k] from the raw target moments.
    double centered(int k, double shift) const {
        double sum = 0.0;
        for (int i = 0; i <= k; ++i) sum += binomial(k, i) * raw_[i] * std::pow(-shift, k - i);
        return sum;
    }

    double g1(double ahat, double b) const {
        double g, ga, gb;
        return kernel_(1, ahat, b, g, ga, gb) ? g : std::numeric_limits<double>::quiet_NaN();
    }

    bool feasible(const Vec& x) const {
        double ahat, b, chat, shift;
        unpack(x, ahat, b, chat, shift);
        if (!(ahat > 0.0) || !(chat > 0.0)) return false;
        for (int k = 1; k <= N; ++k) {
            double g, ga, gb;
            if (!kernel_(k, ahat, b, g, ga, gb)) return false;
        }
        return true;
    }

    bool evaluate(const Vec& x, Vec& r, Mat* jac) const {
        double ahat, b, chat, shift;
        unpack(x, ahat, b, chat, shift);
        if (!(ahat > 0.0) || !(chat > 0.0)) return false;
        for (int k = 1; k <= N; ++k) {
            double g, ga, gb;
            if (!kernel_(k, ahat, b, g, ga, gb)) return false;
            const double ck = std::pow(chat, k);
            const double w = weight_[k];
            r[k - 1] = w * (ck * g - centered(k, shift));
            if (!std::isfinite(r[k - 1])) return false;
            if (jac) {
                (*jac)(k - 1, 0) = w * ck * ga;
                if constexpr (N == 4) (*jac)(k - 1, 1) = w * ck * gb;
                (*jac)(k - 1, kChat) = w * k * std::pow(chat, k - 1) * g;
                (*jac)(k - 1, kShift) = w * k * centered(k - 1, shift);
            }
        }
        return true;
    }

private:
    Kernel kernel_;
    std::array<double, N + 1> raw_{};
    std::array<double, N + 1> weight_{};
};

template <int N>
struct LmOutcome {
    Eigen::Matrix<double, N, 1> x;
    int iterations = 0;
};

// Levenberg-Marquardt with Marquardt diagonal scaling and Nielsen's damping
// update. Infeasible trial points count as rejected steps.
template <int N>
LmOutcome<N> levenberg_marquardt(const ShiftedExponentialSystem<N>& sys, Eigen::Matrix<double, N, 1> x,
                                 int max_iterations) {
    using Sys = ShiftedExponentialSystem<N>;
    using Vec = typename Sys::Vec;
    using Mat = typename Sys::Mat;

    Vec r, r_new;
    Mat jac;
    LmOutcome<N> out{x, 0};
    if (!sys.evaluate(x, r, &jac)) return out;
    double cost = 0.5 * r.squaredNorm();
    double lambda = -1.0;
    double nu = 2.0;
    int it = 0;
    for (; it < max_iterations; ++it) {
        if (cost < 1e-34) break;
        Mat a = jac.transpose() * jac;
        Vec g = jac.transpose() * r;
        Vec diag = a.diagonal().cwiseMax(1e-30 * a.diagonal().maxCoeff());
        if (lambda < 0.0) lambda = 1e-3 * diag.maxCoeff();
        Mat damped = a;
        damped.diagonal() += lambda * diag;
        Vec step = damped.ldlt().solve(-g);
        if (!step.allFinite()) break;

        Vec trial = x + step;
        // Keep ahat and chat strictly positive by shrinking towards zero.
        if (trial[0] <= 0.0) trial[0] = std::max(0.1 * x[0], kMinAhat);
        if (trial[Sys::kChat] <= 0.0) trial[Sys::kChat] = 0.1 * x[Sys::kChat];

        double new_cost = std::numeric_limits<double>::infinity();
        if (sys.evaluate(trial, r_new, nullptr)) new_cost = 0.5 * r_new.squaredNorm();
        Vec actual = trial - x;
        double predicted = 0.5 * actual.dot(lambda * diag.cwiseProduct(actual) - g);
        double rho = predicted > 0.0 ? (cost - new_cost) / predicted : -1.0;
        if (new_cost < cost && rho > 0.0) {
            x = trial;
            sys.evaluate(x, r, &jac);
            cost = new_cost;
            lambda *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
            nu = 2.0;
            if (actual.norm() <= 1e-15 * (x.norm() + 1e-15)) break;
        } else {
            lambda *= nu;
            nu *= 2.0;
            if (lambda > 1e30 || nu > 1e30) break;
        }
    }
    out.x = x;
    out.iterations = it;
    return out;
}

struct Moments3 {
    double mean, var, third;
};

Moments3 central(const MomentSet& t) {
    const double m1 = t.at(1), m2 = t.at(2), m3 = t.at(3);
    return {m1, m2 - m1 * m1, m3 - 3.0 * m1 * m2 + 2.0 * m1 * m1 * m1};
}

struct LognormalSeed {
    double sigma2; // log variance
    double scale;  // e^mu
    double shift;
};

// Shifted lognormal exp(sigma N + mu) + shift with the target's mean, variance
// and (positive) skewness. Nonpositive skew falls back to a mild sigma.
LognormalSeed shifted_lognormal(const MomentSet& target) {
    Moments3 c = central(target);
    const double gamma = c.third / std::pow(c.var, 1.5);
    double w;
    if (!(gamma > 1e-8)) {
        w = std::exp(0.01);
    } else {
        // (w + 2)^2 (w - 1) = gamma^2, increasing in w > 1.
        auto f = [gamma](double w) { return (w + 2.0) * (w + 2.0) * (w - 1.0) - gamma * gamma; };
        double lo = 1.0, hi = 2.0;
        while (f(hi) < 0.0) hi *= 2.0;
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (lo + hi);
            (f(mid) < 0.0 ? lo : hi) = mid;
        }
        w = 0.5 * (lo + hi);
    }
    LognormalSeed s;
    s.sigma2 = std::log(w);
    s.scale = std::sqrt(c.var / (w * (w - 1.0)));
    s.shift = c.mean - s.scale * std::sqrt(w);
    return s;
}

struct Candidate {
    ProxyParams params;
    double residual;
    double shift;
    int iterations;
};

template <int N>
MatchReport solve_multistart(const MomentSet& target, const MixingLaw& law, MgfKind kind, Kernel kernel,
                             double z2_mean, const MatchOptions& opts,
                             const std::function<ProxyParams(double, double, double, double)>& to_params) {
    using Sys = ShiftedExponentialSystem<N>;
    using Vec = typename Sys::Vec;
    Sys sys(target, kernel);

    Moments3 c = central(target);
    if (!(c.var > 0.0)) throw NoSolution("target moments have nonpositive variance", kInfinity);
    const double sd = std::sqrt(c.var);
    const LognormalSeed seed = shifted_lognormal(target);
    const double ahat0 = seed.sigma2 / z2_mean;

    // Natural scale for b: the size of bY that carries the same log variance.
    double b_scale = 0.0;
    if constexpr (N == 4) {
        const double var_y = law.raw_moment(2) - z2_mean * z2_mean;
        b_scale = var_y > 0.0 ? std::sqrt(seed.sigma2 / var_y) : 0.0;
    }

    std::vector<Vec> starts;
    auto add_start = [&](double ahat, double b, double shift, double chat_factor) {
        // Pull the start inside the admissible region before fitting chat.
        for (int i = 0; i < 60; ++i) {
            Vec probe;
            if constexpr (N == 4) probe << ahat, b, 1.0, shift;
            else probe << ahat, 1.0, shift;
            if (sys.feasible(probe)) break;
            ahat *= 0.5;
            if (b > 0.0) b *= 0.5;
        }
        double g = sys.g1(ahat, b);
        double chat = (target.at(1) - shift) / g;
        if (!(chat > 0.0) || !std::isfinite(chat)) chat = 0.5 * sd;
        chat *= chat_factor;
        Vec x;
        if constexpr (N == 4) x << ahat, b, chat, shift;
        else x << ahat, chat, shift;
        if (sys.feasible(x)) starts.push_back(x);
    };

    add_start(ahat0, 0.0, seed.shift, 1.0);
    const std::array<double, 3> a_grid{1.0 / 3.0, 1.0, 3.0};
    const std::array<double, 3> unit_grid{-1.0, 0.0, 1.0};
    for (double af : a_grid) {
        for (double u : unit_grid) {
            for (double v : unit_grid) {
                const double shift = seed.shift + 0.5 * v * sd;
                if constexpr (N == 4) {
                    add_start(ahat0 * af, u * b_scale, shift, 1.0);
                } else {
                    add_start(ahat0 * af, 0.0, shift, std::pow(1.25, u));
                }
            }
        }
    }
    std::vector<std::vector<Vec>> stages;
    stages.push_back(std::move(starts));

    // Second stage: a grid over the exponent's shape (ahat, b). Standardized
    // moments depend on the shape only, so chat and shift are set to match the
    // mean and variance exactly and the best points by residual become starts.
    {
        std::vector<std::pair<double, Vec>> scored;
        auto consider = [&](double ahat, double b) {
            double g1, g2, ga, gb;
            if (!kernel(1, ahat, b, g1, ga, gb) || !kernel(2, ahat, b, g2, ga, gb)) return;
            const double v = g2 - g1 * g1;
            if (!(v > 0.0)) return;
            const double chat = sd / std::sqrt(v);
            Vec x;
            if constexpr (N == 4) x << ahat, b, chat, c.mean - chat * g1;
            else x << ahat, chat, c.mean - chat * g1;
            Vec r;
            if (!sys.evaluate(x, r, nullptr)) return;
            scored.emplace_back(r.norm(), x);
        };
        constexpr int kShapeA = N == 4 ? 24 : 60;
        for (int i = 0; i < kShapeA; ++i) {
            const double ahat = 1e-4 * std::pow(3e4, i / double(kShapeA - 1)) / z2_mean;
            if constexpr (N == 4) {
                for (int j = 0; j < 25; ++j) consider(ahat, (-1.0 + 2.0 * j / 24.0) / z2_mean);
            } else {
                consider(ahat, 0.0);
            }
        }
        std::sort(scored.begin(), scored.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
        std::vector<Vec> shape_starts;
        for (std::size_t i = 0; i < std::min<std::size_t>(scored.size(), 6); ++i) shape_starts.push_back(scored[i].second);
        stages.push_back(std::move(shape_starts));
    }

    // Last stage: a grid in absolute units of the mixer, which covers roots
    // far from lognormal (nearly symmetric targets need a large a offset by a
    // negative b).
    starts.clear();
    const std::array<double, 3> wide_a{0.03, 0.1, 0.3};
    const std::array<double, 3> wide_b{-0.5, -0.2, 0.1};
    for (double av : wide_a) {
        for (int i = 0; i < 3; ++i) {
            for (double v : unit_grid) {
                const double shift = seed.shift + v * sd;
                if constexpr (N == 4) {
                    add_start(av / z2_mean, wide_b[static_cast<std::size_t>(i)] / z2_mean, shift, 1.0);
                } else {
                    add_start(av / z2_mean, 0.0, shift, std::pow(2.0, i - 1));
                }
            }
        }
    }
    stages.push_back(std::move(starts));

    std::vector<Candidate> candidates;
    std::vector<Vec> finals;
    int total_iterations = 0;
    int tried = 0;
    bool have_root = false;
    for (const auto& stage : stages) {
        if (have_root) break;
        for (const Vec& start : stage) {
            ++tried;
            LmOutcome<N> res = levenberg_marquardt<N>(sys, start, opts.max_iterations);
            total_iterations += res.iterations;
            double ahat, b, chat, shift;
            Sys::unpack(res.x, ahat, b, chat, shift);
            if (!(ahat > 0.0) || !(chat > 0.0)) continue;
            ProxyParams p = to_params(std::sqrt(ahat), b, std::log(chat), shift);
            double residual;
            try {
                residual = moment_residual(p, target, law, opts.series_tol);
            } catch (const Error&) {
                continue;
            }
            if (!std::isfinite(residual)) continue;
            have_root = have_root || residual < opts.tolerance;
            candidates.push_back({p, residual, shift, res.iterations});
            finals.push_back(res.x);
        }
    }

    // Near-roots on flat valleys converge slowly; give the closest few a long run.
    if (!have_root && !candidates.empty()) {
        std::vector<std::size_t> order(candidates.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t l, std::size_t r) { return candidates[l].residual < candidates[r].residual; });
        bool polished = false;
        for (std::size_t i : order) {
            if (polished) break;
            ++tried;
            LmOutcome<N> res = levenberg_marquardt<N>(sys, finals[i], 25 * opts.max_iterations);
            total_iterations += res.iterations;
            double ahat, b, chat, shift;
            Sys::unpack(res.x, ahat, b, chat, shift);
            if (!(ahat > 0.0) || !(chat > 0.0)) continue;
            ProxyParams p = to_params(std::sqrt(ahat), b, std::log(chat), shift);
            double residual;
            try {
                residual = moment_residual(p, target, law, opts.series_tol);
            } catch (const Error&) {
                continue;
            }
            if (!std::isfinite(residual)) continue;
            polished = residual < opts.tolerance;
            candidates.push_back({p, residual, shift, res.iterations});
        }
    }

    const Candidate* best = nullptr;
    for (const auto& cand : candidates) {
        if (cand.residual >= opts.tolerance) continue;
        if (!best || std::abs(cand.shift) < std::abs(best->shift)) best = &cand;
    }
    if (!best) {
        for (const auto& cand : candidates) {
            if (!best || cand.residual < best->residual) best = &cand;
        }
    }
    const double best_residual = best ? best->residual : kInfinity;
    if (!best || best->residual > opts.failure_threshold) {
        throw NoSolution("moment matching found no root (best residual " + std::to_string(best_residual) + ")",
                         best_residual);
    }
    MatchReport report;
    report.params = best->params;
    report.mode = target.mode;
    report.mgf_kind = kind;
    report.residual_norm = best->residual;
    report.iterations = total_iterations;
    report.starts_tried = tried;
    (void)law;
    return report;
}

Kernel mgf_kernel(const MixingLaw& law, MgfKind kind, double margin, bool linear_b) {
    const double limit = kind == MgfKind::Exact ? law.domain_bound() * (1.0 - margin) : kInfinity;
    return [&law, kind, limit, linear_b](int j, double ahat, double b, double& g, double& ga, double& gb) {
        const double s = 0.5 * j * j * ahat + (linear_b ? j * b : 0.0);
        if (s > limit) return false;
        g = law.mgf(s, kind);
        const double gp = law.mgf_derivative(s, kind);
        ga = 0.5 * j * j * gp;
        gb = linear_b ? j * gp : 0.0;
        return std::isfinite(g) && std::isfinite(gp);
    };
}

void check_target(const MomentSet& target, MomentMode mode, int order) {
    if (target.mode != mode) throw InvalidArgument(std::string("target moments are not in ") + to_string(mode) + " mode");
    if (target.order() < order) throw InvalidArgument("target has too few moments");
}

std::optional<MatchReport> symmetric_limit(const MomentSet& target, const MixingLaw& law, MgfKind kind,
                                           double z2_mean, const MatchOptions& opts) {
    Moments3 c = central(target);
    if (!(c.var > 0.0)) throw NoSolution("target moments have nonpositive variance", kInfinity);
    const double skew = c.third / std::pow(c.var, 1.5);
    if (skew < -opts.symmetric_skew_tol) {
        throw NoSolution("target has negative skewness, which this proxy family cannot reproduce", kInfinity);
    }
    if (!opts.allow_symmetric_limit || skew > opts.symmetric_skew_tol) return std::nullopt;
    SymmetricLimitProxy p{c.mean, std::sqrt(c.var / z2_mean), target.mode};
    MatchReport report;
    report.params = p;
    report.mode = target.mode;
    report.mgf_kind = kind;
    report.residual_norm = moment_residual(p, target, law, opts.series_tol);
    report.symmetric_limit = true;
    return report;
}

} // namespace

double target_skewness(const MomentSet& target) {
    Moments3 c = central(target);
    return c.third / std::pow(c.var, 1.5);
}

MatchReport match_mv(const MomentSet& target, const MixingLaw& law, MgfKind kind, const MatchOptions& opts) {
    check_target(target, MomentMode::MeanVariance, 4);
    if (target.mgf_kind != kind) throw InvalidArgument("target moments were computed with a different mgf kind");
    return solve_multistart<4>(target, law, kind, mgf_kernel(law, kind, opts.domain_margin, true), law.raw_moment(1),
                               opts, [](double a, double b, double c, double d) -> ProxyParams {
                                   return ProxyParamsMV{a, b, c, d};
                               });
}

MatchReport match_v(const MomentSet& target, const MixingLaw& law, MgfKind kind, const MatchOptions& opts) {
    check_target(target, MomentMode::Variance, 3);
    if (target.mgf_kind != kind) throw InvalidArgument("target moments were computed with a different mgf kind");
    const double z2 = law.raw_moment(1);
    if (auto limit = symmetric_limit(target, law, kind, z2, opts)) return *limit;
    return solve_multistart<3>(target, law, kind, mgf_kernel(law, kind, opts.domain_margin, false), z2, opts,
                               [](double a, double, double c, double shift) -> ProxyParams {
                                   return ProxyParamsV{a, c, shift};
                               });
}

MatchReport match_e(const MomentSet& target, const MixingLaw& law, const MatchOptions& opts) {
    check_target(target, MomentMode::Elliptical, 3);
    const double z2 = 0.5 * law.raw_moment(1);
    if (auto limit = symmetric_limit(target, law, MgfKind::Exact, z2, opts)) return *limit;
    const double tol = opts.series_tol;
    Kernel kernel = [&law, tol](int j, double ahat, double, double& g, double& ga, double& gb) {
        try {
            SeriesValue s = radial_exp_series(law, j * j * ahat, tol);
            g = s.value;
            ga = j * j * s.derivative;
            gb = 0.0;
            return std::isfinite(g) && std::isfinite(ga);
        } catch (const SeriesDivergence&) {
            return false;
        }
    };
    return solve_multistart<3>(target, law, MgfKind::Exact, kernel, z2, opts,
                               [](double a, double, double c, double shift) -> ProxyParams {
                                   return ProxyParamsE{a, c, shift};
                               });
}

MatchReport match(const MomentSet& target, const MixingLaw& law, MgfKind kind, const MatchOptions& opts) {
    switch (target.mode) {
    case MomentMode::MeanVariance: return match_mv(target, law, kind, opts);
    case MomentMode::Variance: return match_v(target, law, kind, opts);
    case MomentMode::Elliptical: return match_e(target, law, opts);
    }
    throw InvalidArgument("unknown moment mode");
}

} // namespace spreadmm
