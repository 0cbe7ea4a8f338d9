/* Deterministic random number generation.
 *
 * Reproducibility across runs (and byte-identical output artifacts) requires
 * that every random draw be pinned down by this codebase, so we use our own
 * xoshiro256++ engine with explicit bit->double conversions instead of
 * std:: distributions (whose algorithms are implementation-defined).
 *
 * Stream derivation: a single 64-bit experiment seed expands into independent
 * streams through a SplitMix64-based path hash,
 *     h_0 = seed,   h_{k+1} = splitmix(h_k XOR (pathElement_k + GOLDEN)),
 * and the final h seeds the engine state via four SplitMix64 steps. Replicas,
 * chains and sub-tasks each get a distinct integer path, e.g. {STREAM_GIBBS,
 * replicaIndex}. Documented in the README; changing it invalidates recorded
 * artifacts.
 */
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace pointdyn {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += kGolden;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Rng {
  public:
    Rng() : Rng(0) {}

    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64(sm);
    }

    // Independent stream addressed by (seed, path). See file comment.
    static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
        std::uint64_t h = seed;
        for (std::uint64_t p : path) {
            h ^= p + kGolden;
            std::uint64_t sm = h;
            h = splitmix64(sm);
        }
        return Rng(h);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniformReal(double a, double b) { return a + (b - a) * uniform01(); }

    // Uniform in {0, ..., n-1}, unbiased (rejection on the top range).
    std::uint64_t uniformBelow(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % n;
    }

    // Standard normal via Box-Muller; the second variate of each pair is cached.
    double normal() {
        if (haveSpare_) {
            haveSpare_ = false;
            return spare_;
        }
        // u1 in (0,1] so that log(u1) is finite.
        const double u1 = 1.0 - uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        haveSpare_ = true;
        return r * std::cos(a);
    }

    double exponential(double rate) { return -std::log(1.0 - uniform01()) / rate; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
    double spare_ = 0.0;
    bool haveSpare_ = false;
};

// Stream tags (first path element). Keep stable: artifacts depend on them.
enum StreamTag : std::uint64_t {
    STREAM_GIBBS = 1,
    STREAM_KAWASAKI = 2,
    STREAM_GLAUBER = 3,
    STREAM_DIFFUSION = 4,
    STREAM_VERIFY = 5,
    STREAM_SWAPCHAIN = 6,
};

} // namespace pointdyn
