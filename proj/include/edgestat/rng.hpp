#pragma once

#include <array>
#include <cstdint>

namespace edgestat {

// Philox4x64-10 counter-based generator (Salmon et al., "Parallel random
// numbers: as easy as 1, 2, 3", SC'11) — the same variant NumPy ships.
//
// Streams: an instance is addressed by (seed, stream); key = {seed, stream}
// and the 256-bit counter is a plain block index. Any two (seed, stream)
// pairs give statistically independent sequences, which is how trial ranges
// and graph generators get their own deterministic streams.
class PhiloxRng {
  public:
    explicit PhiloxRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();

    // Unbiased uniform draw from {0, ..., bound-1}; bound >= 1.
    std::uint64_t uniform_below(std::uint64_t bound);

    int uniform_vertex(int n) { return static_cast<int>(uniform_below(static_cast<std::uint64_t>(n))); }

    // Uniform in [0, 1) with 53-bit resolution.
    double next_double();

    std::uint64_t seed() const { return key_[0]; }
    std::uint64_t stream() const { return key_[1]; }

    // One keyed block permutation; exposed for known-answer tests.
    static std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> counter,
                                              std::array<std::uint64_t, 2> key);

  private:
    void refill();

    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> counter_{};
    std::array<std::uint64_t, 4> buf_{};
    int pos_ = 4; // forces refill on first draw
};

} // namespace edgestat
