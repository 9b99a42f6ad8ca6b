#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace polyconc {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11 reference
// constants).  Pure function of (counter, key): any draw is addressable by
// index, which is what makes every sampler in this project replayable and
// partition-invariant under threading.
struct Philox4x32 {
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }
};

namespace detail {

inline std::array<std::uint64_t, 2> philox_u64_pair(std::uint64_t seed, std::uint64_t stream,
                                                    std::uint64_t block_index) {
    std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(block_index), static_cast<std::uint32_t>(block_index >> 32),
        static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                        static_cast<std::uint32_t>(seed >> 32)};
    auto out = Philox4x32::block(ctr, key);
    return {(static_cast<std::uint64_t>(out[1]) << 32) | out[0],
            (static_cast<std::uint64_t>(out[3]) << 32) | out[2]};
}

// 53-bit mantissa uniform in (0, 1]; never 0, so it is safe under log.
inline double u64_to_unit(std::uint64_t x) {
    return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;
}

} // namespace detail

// Draw #i of stream `stream` under `seed`, uniform on (0, 1].
inline double uniform_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    auto pair = detail::philox_u64_pair(seed, stream, index / 2);
    return detail::u64_to_unit(pair[index % 2]);
}

// Standard normal draw #i of a stream, Box-Muller on consecutive uniforms.
inline double gauss_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    auto pair = detail::philox_u64_pair(seed, stream, index / 2);
    double u1 = detail::u64_to_unit(pair[0]);
    double u2 = detail::u64_to_unit(pair[1]);
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 6.283185307179586476925286766559 * u2;
    return (index % 2 == 0) ? radius * std::cos(angle) : radius * std::sin(angle);
}

// Sequential view over one (seed, stream) lane.  Uniform and gaussian draws
// consume from independent sub-lanes so interleaving them stays addressable.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t start = 0)
        : seed_(seed), stream_(stream), uniform_idx_(start), gauss_idx_(start) {}

    double uniform01() { return uniform_at(seed_, stream_ << 1, uniform_idx_++); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    double gaussian() { return gauss_at(seed_, (stream_ << 1) | 1, gauss_idx_++); }
    std::uint64_t uniform_index() const { return uniform_idx_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t uniform_idx_;
    std::uint64_t gauss_idx_;
};

} // namespace polyconc
