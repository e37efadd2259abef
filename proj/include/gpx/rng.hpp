#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace gpx {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). The 64-bit key
/// is derived from the experiment seed and the upper half of the counter holds
/// the stream index, so every (seed, stream) pair is an independent sequence
/// that can be reproduced without touching any other stream.
class Philox4x32 {
public:
    using result_type = std::uint32_t;

    Philox4x32(std::uint64_t seed, std::uint64_t stream);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (pos_ == 4) {
            refill();
        }
        return block_[pos_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = (*this)();
        return (hi << 32) | (*this)();
    }

    /// Raw block function: 10 rounds of Philox on (counter, key).
    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                              std::array<std::uint32_t, 2> key);

private:
    void refill();

    std::array<std::uint32_t, 4> counter_{};
    std::array<std::uint32_t, 2> key_{};
    std::array<std::uint32_t, 4> block_{};
    int pos_ = 4;
};

/// Variate generation on top of a Philox stream. Distribution algorithms are
/// fixed (Boost.Random implementations plus the helpers here), so draws are
/// bit-reproducible for a given (seed, stream).
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream) : engine_(seed, stream) {}

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() {
        return (static_cast<double>(engine_.next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }
    double normal();
    double exponential();
    /// Gamma(shape, scale 1).
    double gamma(double shape);
    std::uint64_t poisson(double mean);

    Philox4x32& engine() { return engine_; }

private:
    Philox4x32 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace gpx
