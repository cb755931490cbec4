// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cranest/config.hpp"
#include "cranest/restoration.hpp"

#include <functional>
#include <string>
#include <vector>

namespace cranest {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail; ///< measured values, human-readable
};

/// Measured outcome of the projection-annihilation identity over the
/// training sequence: exactness at q = 0 and leakage for 1 <= |q| <= Q.
struct ProjectionIdentity {
    double max_zero_block_error = 0.0; ///< max |(J D_0 t_s)_m - t~_m| / ||t~||
    double max_leakage_ratio = 0.0;    ///< max_q ||J D_q t_s|| / ||t~||
};

ProjectionIdentity projection_identity(const ValidatedParams& params);

/// Sample covariance diagnostics of the projected disturbance w_q over
/// `trials` random blocks: worst relative diagonal deviation from v_n and
/// worst off-diagonal/cross-block magnitude relative to v_n.
struct WhiteningStats {
    double max_diag_rel_dev = 0.0;
    double max_offdiag_rel = 0.0;
};

WhiteningStats whitening_stats(const ValidatedParams& params, std::size_t trials,
                               std::uint64_t stream_salt);

/// Fraction of trials whose regularized-cost trace increases anywhere by
/// more than rel_slack (relative to the running value).
double monotonicity_violation_rate(const ValidatedParams& base,
                                   const std::vector<double>& snr_points_db,
                                   std::size_t trials_per_point, double rel_slack);

/// Largest improvement any competitor found over eta*: positive means the
/// closed form lost by that margin. Competitors: `random_draws` uniform
/// samples of [0,2]^(2Q+1) plus a Nelder-Mead ascent.
double weight_optimality_gap(const ValidatedParams& params, std::size_t random_draws,
                             std::uint64_t stream_salt);

/// Checks map_mse < ml_mse and map_mse < CRB_g over random parameter
/// draws; returns the number of violations.
std::size_t analytic_mse_violations(std::size_t draws, std::uint64_t seed);

/// Nelder-Mead ascent of a scalar function on R^d (used as the weight
/// optimality oracle; returns the best point found).
std::vector<double> nelder_mead_maximize(const std::function<double(const std::vector<double>&)>& f,
                                         std::vector<double> start, double scale,
                                         std::size_t max_iter);

/// Runs the property suites at verification-grade sample sizes.
std::vector<CheckResult> run_property_checks(const ValidatedParams& params);

} // namespace cranest
