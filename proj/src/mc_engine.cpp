#include "spreadmm/mc_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "spreadmm/errors.hpp"
#include "spreadmm/random.hpp"

namespace spreadmm {

namespace {

constexpr std::size_t kChunkSize = std::size_t{1} << 16;

struct Welford {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        count += 1.0;
        const double delta = x - mean;
        mean += delta / count;
        m2 += delta * (x - mean);
    }

    static Welford merge(const Welford& a, const Welford& b) {
        if (a.count == 0.0) return b;
        if (b.count == 0.0) return a;
        Welford out;
        out.count = a.count + b.count;
        const double delta = b.mean - a.mean;
        out.mean = a.mean + delta * b.count / out.count;
        out.m2 = a.m2 + b.m2 + delta * delta * a.count * b.count / out.count;
        return out;
    }
};

using ChunkStats = std::vector<Welford>;

ChunkStats merge_range(const std::vector<ChunkStats>& chunks, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return chunks[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    ChunkStats left = merge_range(chunks, lo, mid);
    ChunkStats right = merge_range(chunks, mid, hi);
    for (std::size_t i = 0; i < left.size(); ++i) left[i] = Welford::merge(left[i], right[i]);
    return left;
}

// Runs `sample(rng, out)` n times; each call writes `outputs` values.
// Chunk c always uses stream c of the seed and chunks are merged in a fixed
// pairwise tree, so the result does not depend on the thread count.
template <class SampleFn>
std::vector<McEstimate> run(std::size_t n, std::size_t outputs, const McOptions& opts, SampleFn sample) {
    if (n == 0) throw InvalidArgument("Monte Carlo needs at least one path");
    const std::size_t num_chunks = (n + kChunkSize - 1) / kChunkSize;
    std::vector<ChunkStats> chunks(num_chunks, ChunkStats(outputs));
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        std::vector<double> values(outputs);
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= num_chunks) return;
            RandomStream rng(opts.seed, c);
            const std::size_t begin = c * kChunkSize;
            const std::size_t end = std::min(n, begin + kChunkSize);
            ChunkStats& stats = chunks[c];
            for (std::size_t i = begin; i < end; ++i) {
                sample(rng, values.data());
                for (std::size_t k = 0; k < outputs; ++k) stats[k].add(values[k]);
            }
        }
    };

    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, num_chunks));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    ChunkStats total = merge_range(chunks, 0, num_chunks);
    std::vector<McEstimate> out;
    for (const auto& w : total) {
        const double var = w.count > 1.0 ? w.m2 / (w.count - 1.0) : 0.0;
        out.push_back({w.mean, std::sqrt(var / w.count), n, opts.seed});
    }
    return out;
}

// Draws (X1, X2) and, if requested, the reflected pair sharing the same mixer.
struct PathDraw {
    double x1, x2, x1_reflected, x2_reflected;
};

PathDraw draw_path(const EffectiveModel& m, RandomStream& rng) {
    double z1, z2, scale, drift1, drift2;
    const double y = m.law.draw(rng);
    scale = std::sqrt(y);
    if (m.elliptical) {
        const double theta = 2.0 * M_PI * rng.uniform();
        z1 = std::cos(theta);
        z2 = std::sin(theta);
        drift1 = m.mu1;
        drift2 = m.mu2;
    } else {
        z1 = rng.normal();
        z2 = rng.normal();
        drift1 = m.mu1 + m.beta1 * y;
        drift2 = m.mu2 + m.beta2 * y;
    }
    const double e1 = scale * (m.a.a11 * z1 + m.a.a12 * z2);
    const double e2 = scale * (m.a.a21 * z1 + m.a.a22 * z2);
    return {drift1 + e1, drift2 + e2, drift1 - e1, drift2 - e2};
}

} // namespace

std::vector<McEstimate> mc_spread_prices(const EffectiveModel& model, const std::vector<double>& strikes,
                                         const McOptions& opts) {
    const double disc = std::exp(-model.rate_time);
    const std::size_t k = strikes.size();
    return run(opts.n, k, opts, [&](RandomStream& rng, double* out) {
        PathDraw p = draw_path(model, rng);
        const double s = std::exp(p.x1) - std::exp(p.x2);
        if (opts.antithetic) {
            const double sr = std::exp(p.x1_reflected) - std::exp(p.x2_reflected);
            for (std::size_t i = 0; i < k; ++i) {
                out[i] = 0.5 * disc * (std::max(s - strikes[i], 0.0) + std::max(sr - strikes[i], 0.0));
            }
        } else {
            for (std::size_t i = 0; i < k; ++i) out[i] = disc * std::max(s - strikes[i], 0.0);
        }
    });
}

McEstimate mc_spread_price(const EffectiveModel& model, const SpreadContract& contract, const McOptions& opts) {
    contract.validate();
    return mc_spread_prices(model, {contract.strike}, opts).front();
}

std::vector<McEstimate> mc_moments(const EffectiveModel& model, int order, const McOptions& opts) {
    if (order < 1 || order > 4) throw InvalidArgument("moment order must be between 1 and 4");
    const std::size_t k = static_cast<std::size_t>(order);
    return run(opts.n, k, opts, [&](RandomStream& rng, double* out) {
        PathDraw p = draw_path(model, rng);
        const double s = std::exp(p.x1) - std::exp(p.x2);
        const double sr = std::exp(p.x1_reflected) - std::exp(p.x2_reflected);
        double pw = 1.0, pr = 1.0;
        for (std::size_t i = 0; i < k; ++i) {
            pw *= s;
            pr *= sr;
            out[i] = opts.antithetic ? 0.5 * (pw + pr) : pw;
        }
    });
}

McEstimate mc_proxy_price(const ProxyParams& params, const MixingLaw& law, double strike, double rate,
                          const McOptions& opts) {
    const double disc = std::exp(-rate);
    const bool circle = std::holds_alternative<ProxyParamsE>(params) ||
                        (std::holds_alternative<SymmetricLimitProxy>(params) &&
                         std::get<SymmetricLimitProxy>(params).mode == MomentMode::Elliptical);
    // W as a function of the mixer y and the symmetric driver z (N or U1).
    auto proxy = [&params](double y, double z) {
        const double sy = std::sqrt(y);
        if (const auto* mv = std::get_if<ProxyParamsMV>(&params)) {
            return std::exp(mv->a * sy * z + mv->b * y + mv->c) + mv->d;
        }
        if (const auto* v = std::get_if<ProxyParamsV>(&params)) return std::exp(v->a * sy * z + v->b) + v->c;
        if (const auto* e = std::get_if<ProxyParamsE>(&params)) return std::exp(e->a * sy * z + e->b) + e->c;
        const auto& l = std::get<SymmetricLimitProxy>(params);
        return l.location + l.scale * sy * z;
    };
    return run(opts.n, 1, opts, [&](RandomStream& rng, double* out) {
        const double y = law.draw(rng);
        const double z = circle ? std::cos(2.0 * M_PI * rng.uniform()) : rng.normal();
        double v = std::max(proxy(y, z) - strike, 0.0);
        if (opts.antithetic) v = 0.5 * (v + std::max(proxy(y, -z) - strike, 0.0));
        out[0] = disc * v;
    }).front();
}

} // namespace spreadmm
