// SPDX-License-Identifier: Apache-2.0
#include "cranest/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cranest {

namespace {

// splitmix64: mixes (seed, stream) into a well-separated engine seed.
std::uint64_t splitmix64(std::uint64_t& state)
{
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t state = seed;
    std::uint64_t key = splitmix64(state);
    state ^= stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL;
    key ^= splitmix64(state);
    return key;
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : engine_(derive_key(seed, stream))
{
}

std::uint64_t RngStream::next_word()
{
    return engine_();
}

double RngStream::uniform01()
{
    // 53 random bits -> [0, 1).
    return static_cast<double>(next_word() >> 11) * 0x1.0p-53;
}

std::pair<double, double> RngStream::normal_pair()
{
    // u1 in (0, 1] keeps the log finite.
    const double u1 = (static_cast<double>(next_word() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform01();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    return {mag * std::cos(ang), mag * std::sin(ang)};
}

cxd RngStream::complex_gaussian(double variance)
{
    if (!(variance > 0.0)) {
        throw std::invalid_argument("complex_gaussian: variance must be > 0");
    }
    const auto [z0, z1] = normal_pair();
    const double s = std::sqrt(variance / 2.0);
    return {s * z0, s * z1};
}

std::uint32_t RngStream::uniform_int(std::uint32_t bound)
{
    if (bound == 0) {
        throw std::invalid_argument("uniform_int: bound must be >= 1");
    }
    // Rejection sampling on the top 32 bits, exactly uniform.
    const std::uint64_t span = 0x100000000ULL;
    const std::uint64_t limit = span - span % bound;
    for (;;) {
        const std::uint64_t x = next_word() >> 32;
        if (x < limit) {
            return static_cast<std::uint32_t>(x % bound);
        }
    }
}

CVec complex_gaussian_vector(RngStream& rng, std::size_t n, double variance)
{
    if (!(variance > 0.0)) {
        throw std::invalid_argument("complex_gaussian_vector: variance must be > 0");
    }
    CVec out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = rng.complex_gaussian(variance);
    }
    return out;
}

std::uint64_t trial_stream(std::uint64_t point, std::uint64_t trial, StreamPurpose purpose)
{
    return (point << 48) ^ (trial << 8) ^ static_cast<std::uint64_t>(purpose);
}

} // namespace cranest
