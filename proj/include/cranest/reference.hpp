// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cranest/estimator.hpp"
#include "cranest/sweep.hpp"

namespace cranest::reference {

/// Straight-line kernels that follow the defining expressions with no
/// caching, no closed-form reductions, and no parallelism. They exist to
/// cross-check the optimized path and to anchor the benchmark; tests
/// assert the two implementations agree.

/// Dense projection: materializes the (2Q+1)n_p x n_s block-averaging
/// operator and multiplies.
ProjectedObservation project_dense(const CVec& x_s, const ValidatedParams& params);

/// Same coordinate iterations as map_estimate/ml_estimate, but every
/// inner product and the cost are recomputed from full-length vectors
/// each time.
EstimateSet map_estimate_direct(const ProjectedObservation& obs, const CVec& x_r,
                                const CVec& t_r, const CVec& t_s_tilde,
                                const ValidatedParams& params);
EstimateSet ml_estimate_direct(const ProjectedObservation& obs, const CVec& x_r, const CVec& t_r,
                               const CVec& t_s_tilde, const ValidatedParams& params);

/// Full trial through the direct kernels; restoration errors and AESNR
/// contributions evaluated in the time domain.
TrialRecord run_trial(const ValidatedParams& params, std::uint64_t point_index,
                      std::uint64_t trial_index, const std::vector<double>& eta_owa);

/// Serial sweep over the direct kernels.
SweepResult run_sweep(const SweepConfig& cfg, const ValidatedParams& base);

} // namespace cranest::reference
