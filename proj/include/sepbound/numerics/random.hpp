#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace sepbound {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
///
/// The 128-bit counter is (index, stream) and the 64-bit key is the seed, so
/// any (seed, stream) pair addresses an independent sequence and any draw can
/// be reached without generating its predecessors. Satisfies
/// UniformRandomBitGenerator with 64-bit output.
class Philox4x32 {
  public:
    using result_type = std::uint64_t;
    using Block = std::array<std::uint32_t, 4>;

    explicit Philox4x32(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t index = 0)
        : seed_(seed), stream_(stream), index_(index) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (buffered_ == 0) {
            const Block out = generate(counter(index_++), key());
            buffer_[0] = (std::uint64_t{out[1]} << 32) | out[0];
            buffer_[1] = (std::uint64_t{out[3]} << 32) | out[2];
            buffered_ = 2;
        }
        return buffer_[2 - buffered_--];
    }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform_open() {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Exp(1) via the inverse cdf; strictly positive.
    double exponential() { return -std::log(uniform_open()); }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    /// The raw 10-round bijection.
    static Block generate(Block ctr, std::array<std::uint32_t, 2> key) {
        constexpr std::uint32_t m0 = 0xD2511F53;
        constexpr std::uint32_t m1 = 0xCD9E8D57;
        constexpr std::uint32_t w0 = 0x9E3779B9;
        constexpr std::uint32_t w1 = 0xBB67AE85;
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += w0;
                key[1] += w1;
            }
            const std::uint64_t p0 = std::uint64_t{m0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{m1} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

  private:
    Block counter(std::uint64_t index) const {
        return {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    }
    std::array<std::uint32_t, 2> key() const {
        return {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t index_;
    std::array<std::uint64_t, 2> buffer_{};
    int buffered_ = 0;
};

/// n i.i.d. Exp(1) draws from the (seed, stream) sequence.
inline std::vector<double> rng_exponential(std::uint64_t seed, std::uint64_t stream, std::size_t n) {
    Philox4x32 rng(seed, stream);
    std::vector<double> out(n);
    for (auto& x : out) x = rng.exponential();
    return out;
}

}  // namespace sepbound
