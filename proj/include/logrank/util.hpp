#pragma once

#include <cstdint>

namespace logrank {

/// splitmix64: tiny deterministic PRNG used for all seeded generation.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, bound).
    std::uint64_t next_below(std::uint64_t bound) {
        // bounds here are tiny; modulo bias is negligible and determinism is
        // what matters
        return next() % bound;
    }

  private:
    std::uint64_t state_;
};

/// Derive an independent stream for (seed, index) pairs.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ (0x632be59bd9b4e019ull + index * 0x9e3779b97f4a7c15ull));
    return g.next();
}

/// Desk-scale cap, overridable through the environment (documented in the
/// README). Returns `fallback` when the variable is unset or unparsable.
int cap_from_env(const char* name, int fallback);

}  // namespace logrank
