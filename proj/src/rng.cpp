#include "gpx/rng.hpp"

#include "gpx/errors.hpp"

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>

#include <cmath>

namespace gpx {

namespace {

constexpr std::uint32_t kMulA = 0xD2511F53;
constexpr std::uint32_t kMulB = 0xCD9E8D57;
constexpr std::uint32_t kWeylA = 0x9E3779B9;
constexpr std::uint32_t kWeylB = 0xBB67AE85;

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::array<std::uint32_t, 4> Philox4x32::block(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeylA;
        key[1] += kWeylB;
    }
    return ctr;
}

Philox4x32::Philox4x32(std::uint64_t seed, std::uint64_t stream) {
    const std::uint64_t k = splitmix64(seed);
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    counter_ = {0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
}

void Philox4x32::refill() {
    block_ = block(counter_, key_);
    if (++counter_[0] == 0) {
        if (++counter_[1] == 0) {
            throw NumericError("Philox4x32: stream exhausted (2^64 blocks)");
        }
    }
    pos_ = 0;
}

double RandomStream::normal() {
    boost::random::normal_distribution<double> dist;
    return dist(engine_);
}

double RandomStream::exponential() {
    return -std::log(uniform());
}

double RandomStream::gamma(double shape) {
    if (!(shape > 0)) {
        throw DomainError("gamma: shape must be positive");
    }
    boost::random::gamma_distribution<double> dist(shape, 1.0);
    return dist(engine_);
}

std::uint64_t RandomStream::poisson(double mean) {
    if (!(mean >= 0)) {
        throw DomainError("poisson: mean must be non-negative");
    }
    if (mean == 0) {
        return 0;
    }
    boost::random::poisson_distribution<std::uint64_t, double> dist(mean);
    return dist(engine_);
}

}  // namespace gpx
