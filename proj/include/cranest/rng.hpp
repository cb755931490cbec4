// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cranest/cvec.hpp"

#include <cstdint>
#include <random>
#include <utility>

namespace cranest {

/// Deterministic random stream addressed by (seed, stream id).
///
/// Identical addresses reproduce identical draws on every run: the engine
/// is mt19937_64 (standardized output sequence) and every variate is
/// derived from raw engine words with fixed arithmetic, never through
/// std::*_distribution objects whose sequences are implementation-defined.
/// Streams are single-owner; Monte Carlo trials each derive their own set
/// from (seed, point, trial, purpose) and never share one.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream);

    /// Uniform on [0, 1).
    double uniform01();

    /// One standard-normal pair (Box-Muller).
    std::pair<double, double> normal_pair();

    /// Circularly-symmetric complex Gaussian with E|x|^2 = variance.
    cxd complex_gaussian(double variance);

    /// Exactly uniform integer in [0, bound), bound >= 1.
    std::uint32_t uniform_int(std::uint32_t bound);

  private:
    std::uint64_t next_word();

    std::mt19937_64 engine_;
};

/// n independent CN(0, variance) draws; variance must be > 0.
CVec complex_gaussian_vector(RngStream& rng, std::size_t n, double variance);

/// Sub-stream tags so one component's draw count never shifts another's.
enum class StreamPurpose : std::uint64_t {
    BemCoefficients = 1,
    BackhaulGain = 2,
    DataSymbols = 3,
    RelayNoise = 4,
    DirectNoise = 5,
    BackhaulNoise = 6,
};

/// Stream id for (sweep point, trial, purpose).
std::uint64_t trial_stream(std::uint64_t point, std::uint64_t trial, StreamPurpose purpose);

} // namespace cranest
