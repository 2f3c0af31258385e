#include "edgestat/rng.hpp"

namespace edgestat {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline std::uint64_t mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    return static_cast<std::uint64_t>(p);
}

inline void round_once(std::array<std::uint64_t, 4>& c, const std::array<std::uint64_t, 2>& k) {
    std::uint64_t hi0, hi1;
    std::uint64_t lo0 = mulhilo(kMul0, c[0], hi0);
    std::uint64_t lo1 = mulhilo(kMul1, c[2], hi1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

} // namespace

std::array<std::uint64_t, 4> PhiloxRng::block(std::array<std::uint64_t, 4> counter,
                                              std::array<std::uint64_t, 2> key) {
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        round_once(counter, key);
    }
    return counter;
}

PhiloxRng::PhiloxRng(std::uint64_t seed, std::uint64_t stream) : key_{seed, stream} {}

void PhiloxRng::refill() {
    buf_ = block(counter_, key_);
    pos_ = 0;
    // 256-bit counter increment
    if (++counter_[0] == 0 && ++counter_[1] == 0 && ++counter_[2] == 0) ++counter_[3];
}

std::uint64_t PhiloxRng::next_u64() {
    if (pos_ >= 4) refill();
    return buf_[pos_++];
}

std::uint64_t PhiloxRng::uniform_below(std::uint64_t bound) {
    // rejection below the largest multiple of `bound`
    std::uint64_t threshold = -bound % bound;
    for (;;) {
        std::uint64_t r = next_u64();
        if (r >= threshold) return r % bound;
    }
}

double PhiloxRng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

} // namespace edgestat
