#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <utility>

namespace groundkit::rng {

// All simulated randomness flows through splitmix64 streams keyed by
// (seed, task id, domain, step). The generator and the key derivation are
// fixed here so runs are bit-reproducible across platforms and languages;
// std::<random> distributions are deliberately not used.

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += kGolden;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D49BBB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

class Stream {
public:
    explicit Stream(std::uint64_t state) : state_(state) {}

    // Key derivation: fold each component into the state with one mixing
    // round so nearby keys produce unrelated streams.
    static Stream keyed(std::uint64_t seed, std::string_view task_id,
                        std::uint64_t domain, std::uint64_t step) {
        std::uint64_t s = seed;
        splitmix64(s);
        s ^= fnv1a64(task_id);
        splitmix64(s);
        s ^= domain * kGolden;
        splitmix64(s);
        s ^= step;
        return Stream(s);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). Modulo bias is negligible for the small n
    // used here.
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

    // Box-Muller pair, standard normal.
    std::pair<double, double> gaussian_pair() {
        double u1 = uniform();
        if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(t), r * std::sin(t)};
    }

private:
    std::uint64_t state_;
};

}  // namespace groundkit::rng
