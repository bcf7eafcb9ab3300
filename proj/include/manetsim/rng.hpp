#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace manet {

/// Seeded pseudo-random stream. Sub-streams are derived from the master
/// seed and a fixed label, so adding a consumer never perturbs the draws
/// another module sees. The uniform mappings are implemented from raw
/// 64-bit output to keep results identical across standard libraries.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), gen_(mix(seed)) {}

    /// Derive an independent stream from the original seed and a label.
    RngStream substream(std::string_view label) const {
        return RngStream(mix(seed_ ^ fnv1a(label)));
    }

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform_int(std::uint64_t n) {
        std::uint64_t v = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
        return v >= n ? n - 1 : v;
    }

    std::uint64_t seed() const { return seed_; }

  private:
    static std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 1469598103934665603ULL;
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        return h;
    }
    // splitmix64 finalizer; spreads low-entropy seeds before feeding mt19937_64
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

} // namespace manet
