// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cranest/config.hpp"
#include "cranest/cvec.hpp"

#include <stdexcept>
#include <vector>

namespace cranest {

/// Per-basis-index averaged observation blocks r_q, each of length n_p.
/// Block i corresponds to q = i - Q.
struct ProjectedObservation {
    std::size_t q_order = 0;
    std::size_t n_p = 0;
    std::vector<CVec> r;

    const CVec& block(std::ptrdiff_t q) const
    {
        return r[static_cast<std::size_t>(q + static_cast<std::ptrdiff_t>(q_order))];
    }
};

/// Joint coefficient/gain estimate plus the cost trace of the iteration.
/// objective_trace[0] is the cost at the initial gain (zero coefficients);
/// each iteration then appends one value after the coefficient sweep and
/// one after the gain update. The trace never increases beyond roundoff.
struct EstimateSet {
    CVec lambda_hat;
    cxd g_hat{0.0, 0.0};
    std::vector<double> objective_trace;
    std::size_t iterations = 0;
};

struct CrbValues {
    std::vector<double> crb_lambda;
    double crb_g = 0.0;
};

/// Analytic mean-square errors of the gain estimate for a fixed
/// coefficient vector.
struct GainMse {
    double map_mse = 0.0;
    double ml_mse = 0.0;
};

/// Thrown by ml_estimate when the working gain reaches exactly zero and
/// the coefficient update would divide by it. Carries the last finite
/// state so callers can count and continue.
struct SingularEstimate : std::runtime_error {
    explicit SingularEstimate(EstimateSet state)
        : std::runtime_error("ml_estimate: gain underflowed to zero"), partial(std::move(state))
    {
    }
    EstimateSet partial;
};

struct ZeroChannel : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Block-averaged projection: r_q(m) = (1/K) * sum_k
/// exp(-j*2*pi*q*(k*n_p+m)/n_s) * x_s(k*n_p+m), without materializing the
/// Kronecker-structured operator.
ProjectedObservation project(const CVec& x_s, const ValidatedParams& params);

/// The training component actually present in the projected observation:
/// sqrt(eps) * t_s_tilde. All estimator and bound formulas see training
/// through this scaling, matching the superimposed transmit power split.
CVec effective_training(const ValidatedParams& params, const CVec& t_s_tilde);

/// ||effective training||^2 = eps * n_p * p_s, as a closed form.
double effective_training_gram(const ValidatedParams& params);

/// Prior-regularized coordinate iteration:
///   init   g = t_r^H x_r / (||t_r||^2 + sigma_n2/v_g)
///   sweep  lambda_q = alpha*conj(g)*t_eff^H r_q /
///                     (alpha^2 |g|^2 ||t_eff||^2 + v_n/v_q)
///   update g = [sum_q alpha*conj(lambda_q)*t_eff^H r_q / v_n
///               + t_r^H x_r / sigma_n2] /
///              [sum_q alpha^2 |lambda_q|^2 ||t_eff||^2 / v_n
///               + ||t_r||^2 / sigma_n2 + 1/v_g]
/// run for exactly params.i_times rounds. Denominators stay positive
/// because v_q, v_g, sigma_n2 > 0. A positive early_exit_tol stops once a
/// full round moves every parameter by less than that relative amount;
/// zero (the default) always runs the full budget.
EstimateSet map_estimate(const ProjectedObservation& obs, const CVec& x_r, const CVec& t_r,
                         const CVec& t_s_tilde, const ValidatedParams& params,
                         double early_exit_tol = 0.0);

/// Same iteration with every prior term removed (v_n/v_q, sigma_n2/v_g,
/// 1/v_g); init g = t_r^H x_r / ||t_r||^2. The recorded trace is the
/// prior-free residual cost. Throws SingularEstimate on a zero gain.
EstimateSet ml_estimate(const ProjectedObservation& obs, const CVec& x_r, const CVec& t_r,
                        const CVec& t_s_tilde, const ValidatedParams& params,
                        double early_exit_tol = 0.0);

/// Full regularized cost:
///   sum_q { ||r_q - alpha*g*lambda_q*t_eff||^2 / v_n + |lambda_q|^2/v_q }
///   + ||x_r - g*t_r||^2 / sigma_n2 + |g|^2 / v_g
/// Training vectors are regenerated from params.
double objective(const CVec& lambda, cxd g, const ProjectedObservation& obs, const CVec& x_r,
                 const ValidatedParams& params);

/// CRB_lambda_q = v_n / (alpha^2 |g|^2 ||t_eff||^2)  (throws ZeroChannel
/// at g = 0); CRB_g = 1 / (alpha^2 ||lambda||^2 ||t_eff||^2 / v_n +
/// ||t_r||^2 / sigma_n2).
CrbValues crb(const ValidatedParams& params, cxd g, const CVec& lambda);

/// Gain MSEs for fixed lambda: ml_mse = 1/S and map_mse = (1/S) *
/// v_g/(v_g + 1/S) with S = alpha^2||lambda||^2||t_eff||^2/v_n +
/// ||t_r||^2/sigma_n2. map_mse < ml_mse = CRB_g always.
GainMse analytic_mse_g(const ValidatedParams& params, const CVec& lambda);

} // namespace cranest
