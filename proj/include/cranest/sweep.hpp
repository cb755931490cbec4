// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cranest/config.hpp"
#include "cranest/cvec.hpp"
#include "cranest/estimator.hpp"
#include "cranest/restoration.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cranest {

enum class Method { Map, Ml };
enum class Restorer { Owa, Baseline };

const char* to_string(Method m);
const char* to_string(Restorer r);

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SweepConfig {
    std::vector<double> snr_points_db{0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
    std::size_t trials_per_point = 2000;
    std::vector<Method> methods{Method::Map, Method::Ml};
    std::vector<Restorer> restorers{Restorer::Owa, Restorer::Baseline};
    std::string output_path;
    unsigned workers = 0; ///< 0 = all hardware threads
};

/// One method's estimate and its per-trial squared errors against truth.
struct MethodOutcome {
    CVec lambda_hat;
    cxd g_hat{0.0, 0.0};
    double bl_sq = 0.0;       ///< |g_hat - g|^2
    double al_coeff_sq = 0.0; ///< sum_q |lambda_hat_q - lambda_q|^2
    double al_time_sq = 0.0;  ///< (1/n_s) sum_n |h_hat(n) - h(n)|^2, unit weights
    bool singular = false;
    std::vector<double> objective_trace;
};

/// Everything one trial produces; aggregation consumes these in trial
/// order so results never depend on scheduling.
struct TrialRecord {
    cxd g{0.0, 0.0};
    CVec lambda;
    MethodOutcome map;
    MethodOutcome ml;
    // Empirical-AESNR contributions of the MAP estimates under the two
    // restorers (numerator term, denominator term).
    double owa_num = 0.0, owa_den = 0.0;
    double baseline_num = 0.0, baseline_den = 0.0;
};

struct MethodMetrics {
    double mse_bl = 0.0;
    double mse_al_coeff = 0.0;
    double mse_al_time = 0.0;
    std::uint64_t singular_count = 0;
};

struct RestorerMetrics {
    double aesnr_emp = 0.0;
    double aesnr_theory = 0.0;
};

struct PointResult {
    double snr_db = 0.0;
    std::vector<std::pair<Method, MethodMetrics>> methods;
    std::vector<std::pair<Restorer, RestorerMetrics>> restorers;
};

struct SweepResult {
    std::vector<PointResult> points;
};

/// Re-derives a parameter set at one sweep point: p_s = p_r =
/// 10^(snr/10), sigma_n2 = 1, everything else from base.
ValidatedParams params_at_snr(const ValidatedParams& base, double snr_db);

/// Runs one full trial: channel + data draw, uplink, projection, both
/// estimators, restoration contributions with eta_owa and unit weights.
/// RNG streams derive from (params.seed, point_index, trial_index), so
/// the record is a pure function of those and the parameters.
TrialRecord run_trial(const ValidatedParams& params, std::uint64_t point_index,
                      std::uint64_t trial_index, const std::vector<double>& eta_owa);

/// Monte Carlo sweep, trials distributed over OpenMP workers. Aggregates
/// are reduced in trial order: bit-identical output for any worker count.
SweepResult run_sweep(const SweepConfig& cfg, const ValidatedParams& base);

std::string to_csv(const SweepResult& result);
void emit_csv(const SweepResult& result, const std::string& path); ///< throws IoError
SweepResult parse_csv(const std::string& text);

/// Bitwise equality of every field (metrics compared as exact doubles).
bool identical(const SweepResult& a, const SweepResult& b);

} // namespace cranest
