#pragma once

#include <cstdint>
#include <random>

namespace spreadmm {

std::uint64_t splitmix64(std::uint64_t& state);

// Derives an independent seed for sub-stream `index` of `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Deterministic uniform/normal generator. The transforms are written out here
// rather than taken from <random> distributions so that streams are identical
// across standard library implementations.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next() { return engine_(); }
    // Uniform on the open interval (0, 1).
    double uniform();
    double normal();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace spreadmm
