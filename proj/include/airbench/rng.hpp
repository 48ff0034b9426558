#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace airbench {

// Counter-based RNG: every draw is a pure hash of (seed, round, purpose,
// counter), so environment noise and agent randomness stay independently
// reproducible no matter how many draws each side consumes.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t round, std::string_view purpose)
        : key_(mix(mix(seed) ^ mix(round + 0x9e3779b97f4a7c15ULL) ^ hash_str(purpose))) {}

    std::uint64_t next_u64() { return mix(key_ ^ mix(++counter_)); }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return next_double() < p; }

    double gaussian() {
        // Box-Muller; the second deviate is discarded to keep draws stateless.
        double u1 = next_double();
        double u2 = next_double();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    // Samples an index from unnormalized nonnegative weights.
    template <typename Vec>
    int categorical(const Vec& weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        double u = next_double() * total;
        double acc = 0.0;
        int k = static_cast<int>(weights.size());
        for (int i = 0; i < k; ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return k - 1;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t hash_str(std::string_view s) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (char c : s) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
        return h;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace airbench
