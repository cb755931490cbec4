// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cranest {

enum class ConfigErrorKind {
    IntegerDivisibility, ///< n_s not a multiple of n_p
    OrderTooHigh,        ///< q_order >= K
    PowerSplit,          ///< epsilon outside (0, 1)
    VarianceMismatch,    ///< sum of v_q_profile != v_h
    BadValue,            ///< unparsable or out-of-domain value
    UnknownKey,          ///< config key not recognized
    Io,                  ///< config file unreadable
};

struct ConfigError : std::runtime_error {
    ConfigError(ConfigErrorKind k, const std::string& msg)
        : std::runtime_error(msg), kind(k)
    {
    }
    ConfigErrorKind kind;
};

/// Every scalar system constant the rest of the library reads.
struct SystemParams {
    std::size_t n_s = 800;           ///< block length (symbols)
    std::size_t n_p = 8;             ///< access training period (symbols)
    std::size_t n_r = 4;             ///< backhaul training length (symbols)
    std::size_t q_order = 2;         ///< basis half-order Q
    double epsilon = 0.3;            ///< training power fraction, in (0, 1)
    double p_s = 1.0;                ///< mobile transmit power
    double p_r = 1.0;                ///< relay transmit power
    double sigma_n2 = 1.0;           ///< per-hop noise variance
    double v_h = 1.0;                ///< access-link channel variance
    double v_g = 1.0;                ///< backhaul-link channel variance
    std::vector<double> v_q_profile; ///< 2Q+1 coefficient variances; empty = uniform
    unsigned mpsk_order = 2;         ///< modulation alphabet size M
    std::size_t i_times = 10;        ///< estimator iteration count
    std::uint64_t seed = 42;         ///< Monte Carlo base seed
};

/// SystemParams plus the derived constants. Produced by validate() and
/// immutable by convention afterwards; safe to share across trial workers
/// by const reference.
struct ValidatedParams {
    std::size_t n_s = 0;
    std::size_t n_p = 0;
    std::size_t n_r = 0;
    std::size_t q_order = 0;
    double epsilon = 0.0;
    double p_s = 0.0;
    double p_r = 0.0;
    double sigma_n2 = 0.0;
    double v_h = 0.0;
    double v_g = 0.0;
    std::vector<double> v_q_profile;
    unsigned mpsk_order = 2;
    std::size_t i_times = 1;
    std::uint64_t seed = 0;

    // Derived.
    std::size_t k = 0;  ///< n_s / n_p
    double alpha = 0.0; ///< relay scaling sqrt(p_r / (v_h*p_s + sigma_n2))
    double v_n = 0.0;   ///< projected-noise variance, see noise_variance_vn

    std::size_t bem_size() const { return 2 * q_order + 1; }
};

/// Checks every structural invariant and attaches the derived constants.
/// Throws ConfigError with the matching kind on violation. Idempotent:
/// validating the embedded SystemParams of a ValidatedParams reproduces it.
ValidatedParams validate(const SystemParams& params);
ValidatedParams validate(const ValidatedParams& params);

/// v_n = (alpha^2*v_g*v_h*(1-eps)*p_s + (alpha^2*v_g + 1)*sigma_n2) / K.
double noise_variance_vn(const ValidatedParams& params);

/// Coefficient variance profiles, both summing exactly to v_h.
std::vector<double> uniform_profile(std::size_t q_order, double v_h);
/// v_q proportional to 1/sqrt(1 - (q/(Q+1))^2), renormalized.
std::vector<double> jakes_profile(std::size_t q_order, double v_h);

/// `key = value` lines, '#' comments, blank lines ignored.
std::map<std::string, std::string> parse_config_text(const std::string& text);

/// Builds SystemParams from key-value pairs; unknown keys are errors.
/// v_q_profile accepts "uniform", "jakes", or an explicit comma list.
SystemParams params_from_kv(const std::map<std::string, std::string>& kv);

SystemParams load_config_file(const std::string& path);

} // namespace cranest
