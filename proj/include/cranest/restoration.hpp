// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cranest/channel.hpp"
#include "cranest/config.hpp"
#include "cranest/cvec.hpp"

#include <stdexcept>
#include <vector>

namespace cranest {

/// Statistics-level quantities of the restoration-weight problem. All
/// matrices are diagonal (r_lambda is), so only diagonals are stored.
struct WeightSystem {
    std::vector<double> upsilon;  ///< diag of the error-coupling matrix
    std::vector<double> xi;       ///< diag of the signal-power matrix
    std::vector<double> r_lambda; ///< diag(v_-Q .. v_Q)
    double c = 0.0;               ///< constant term of the objective
};

struct DegenerateWeights : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonpositiveDenominator : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Builds the weight system from the channel statistics:
///   upsilon = (alpha^2 v_g T/v_n) (R^2 + tr{R} R) + (v_g ||t_r||^2/s2) R
///   xi      = upsilon + R + (v_h + v_n ||t_r||^2 / (s2 alpha^2 T)) I
///   c       = 1' upsilon 1
///             + (v_g + 1/alpha^2) [v_h alpha^2 T/v_n + ||t_r||^2/s2] s2/p_s
/// with T = ||effective training||^2 and R = diag(v_q).
WeightSystem weight_matrices(const ValidatedParams& params);

/// eta* = c * xi^-1 upsilon 1 / (1' upsilon xi^-1 upsilon 1), elementwise.
/// Throws DegenerateWeights if the normalizer is not positive.
std::vector<double> optimal_weights(const WeightSystem& ws);

/// phi* = c^2 / (1' upsilon xi^-1 upsilon 1).
double phi_star(const WeightSystem& ws);

/// gamma(eta) = eta' xi eta (1-eps) / (eta' xi eta - 2 1' upsilon eta + c).
/// Throws NonpositiveDenominator when the denominator is not positive.
double aesnr_theoretical(const std::vector<double>& eta, const WeightSystem& ws, double epsilon);

/// h_hat(n) = sum_q eta_q * lambda_hat_q * exp(j*2*pi*q*n/n_s).
CVec restore(const CVec& lambda_hat, const std::vector<double>& eta, std::size_t n_s);

/// Streaming empirical average-effective-SNR estimator: joint sample
/// means over trials and time, combined as a ratio of averages.
///   value = (1-eps) * mean|g_hat*h_hat(n)|^2 /
///           mean[ |g_hat*h_hat(n) - g*h(n)|^2 + (|g|^2 + 1/alpha^2)*s2/p_s ]
class AesnrAccumulator {
  public:
    /// Adds one trial from time-domain vectors (lengths must match).
    void add_time_domain(cxd g_hat, const CVec& h_hat, cxd g, const CVec& h,
                         const ValidatedParams& params);

    /// Same contribution from coefficient space: weighted_lambda_hat holds
    /// eta_q * lambda_hat_q. Time means reduce exactly to coefficient sums
    /// because the basis columns are orthogonal over the block.
    void add_coefficients(cxd g_hat, const CVec& weighted_lambda_hat, cxd g, const CVec& lambda,
                          const ValidatedParams& params);

    double value(double epsilon) const; ///< throws EmptyInput with no trials
    std::size_t trials() const { return trials_; }

  private:
    double num_ = 0.0;
    double den_ = 0.0;
    std::size_t trials_ = 0;
};

struct RestorationSample {
    cxd g_hat{0.0, 0.0};
    CVec h_hat;
    cxd g{0.0, 0.0};
    CVec h;
};

double aesnr_empirical(const std::vector<RestorationSample>& samples,
                       const ValidatedParams& params);

} // namespace cranest
