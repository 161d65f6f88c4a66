#pragma once

#include <cstdint>
#include <random>

namespace uavswarm {

/// Per-worker random stream. Each Monte Carlo trial gets its own stream,
/// derived from (master seed, trial index), so results never depend on how
/// trials are scheduled across threads.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng for_trial(std::uint64_t master_seed, std::uint64_t trial_index);

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double normal() { return normal_(engine_); }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// SplitMix64 finalizer; used to decorrelate neighbouring seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline Rng Rng::for_trial(std::uint64_t master_seed, std::uint64_t trial_index) {
    return Rng(splitmix64(splitmix64(master_seed) ^ splitmix64(trial_index + 0x5851f42d4c957f2dULL)));
}

}  // namespace uavswarm
