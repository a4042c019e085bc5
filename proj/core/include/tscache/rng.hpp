#pragma once

#include <cstdint>
#include <random>

namespace tscache {

// Mixes (master_seed, index) into a well-spread 64-bit seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

// Explicit random stream. Trial i of an experiment owns
// RngStream(derive_seed(master, i)), so results never depend on execution order.
class RngStream {
public:
    using engine_type = std::mt19937_64;

    explicit RngStream(std::uint64_t seed) : engine_(seed) {}
    RngStream(std::uint64_t master_seed, std::uint64_t index)
        : engine_(derive_seed(master_seed, index)) {}

    engine_type& engine() noexcept { return engine_; }

    // Uniform in [0, 1).
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    RngStream fork(std::uint64_t index) { return RngStream(derive_seed(engine_(), index)); }

private:
    engine_type engine_;
};

} // namespace tscache
