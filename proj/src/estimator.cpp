// SPDX-License-Identifier: Apache-2.0
#include "cranest/estimator.hpp"

#include "cranest/transceiver.hpp"

#include <cmath>
#include <string>

namespace cranest {

namespace {

// Shared scalar state for the coordinate iterations: everything the
// updates touch reduces to these inner products.
struct IterationContext {
    double alpha = 0.0;
    double alpha2 = 0.0;
    double gram_eff = 0.0;      // ||t_eff||^2
    double gram_backhaul = 0.0; // ||t_r||^2
    cxd trx{0.0, 0.0};          // t_r^H x_r
    double xr_norm2 = 0.0;
    std::vector<cxd> proj;      // t_eff^H r_q per block
    std::vector<double> rq_norm2;
};

IterationContext make_context(const ProjectedObservation& obs, const CVec& x_r, const CVec& t_r,
                              const CVec& t_eff, const ValidatedParams& params)
{
    IterationContext ctx;
    ctx.alpha = params.alpha;
    ctx.alpha2 = params.alpha * params.alpha;
    ctx.gram_eff = norm2(t_eff);
    ctx.gram_backhaul = norm2(t_r);
    ctx.trx = inner(t_r, x_r);
    ctx.xr_norm2 = norm2(x_r);
    ctx.proj.reserve(obs.r.size());
    ctx.rq_norm2.reserve(obs.r.size());
    for (const CVec& rq : obs.r) {
        ctx.proj.push_back(inner(t_eff, rq));
        ctx.rq_norm2.push_back(norm2(rq));
    }
    return ctx;
}

// ||r_q - alpha*g*lambda_q*t_eff||^2 summed over q, via cached products.
double residual_cost(const IterationContext& ctx, const CVec& lambda, cxd g)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        const cxd coef = ctx.alpha * g * lambda[i];
        acc += ctx.rq_norm2[i] - 2.0 * std::real(std::conj(coef) * ctx.proj[i]) +
               std::norm(coef) * ctx.gram_eff;
    }
    return acc;
}

double backhaul_cost(const IterationContext& ctx, cxd g)
{
    return ctx.xr_norm2 - 2.0 * std::real(std::conj(g) * ctx.trx) +
           std::norm(g) * ctx.gram_backhaul;
}

double regularized_cost(const IterationContext& ctx, const CVec& lambda, cxd g,
                        const ValidatedParams& params)
{
    double acc = residual_cost(ctx, lambda, g) / params.v_n;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        acc += std::norm(lambda[i]) / params.v_q_profile[i];
    }
    acc += backhaul_cost(ctx, g) / params.sigma_n2;
    acc += std::norm(g) / params.v_g;
    return acc;
}

double prior_free_cost(const IterationContext& ctx, const CVec& lambda, cxd g,
                       const ValidatedParams& params)
{
    return residual_cost(ctx, lambda, g) / params.v_n + backhaul_cost(ctx, g) / params.sigma_n2;
}

void check_inputs(const ProjectedObservation& obs, const CVec& x_r, const CVec& t_r,
                  const CVec& t_s_tilde, const ValidatedParams& params)
{
    if (obs.r.size() != params.bem_size() || obs.n_p != params.n_p) {
        throw LengthMismatch("estimator: projected observation shape mismatch");
    }
    if (x_r.size() != params.n_r || t_r.size() != params.n_r) {
        throw LengthMismatch("estimator: backhaul segment length mismatch");
    }
    if (t_s_tilde.size() != params.n_p) {
        throw LengthMismatch("estimator: training period length mismatch");
    }
}

} // namespace

ProjectedObservation project(const CVec& x_s, const ValidatedParams& params)
{
    if (x_s.size() != params.n_s) {
        throw LengthMismatch("project: expected length " + std::to_string(params.n_s));
    }
    const std::size_t n_p = params.n_p;
    const std::size_t k_reps = params.k;
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(params.n_s);
    const CVec tw = unit_phases(params.n_s);
    const double inv_k = 1.0 / static_cast<double>(k_reps);

    ProjectedObservation out;
    out.q_order = params.q_order;
    out.n_p = n_p;
    out.r.assign(params.bem_size(), CVec(n_p, cxd{0.0, 0.0}));

    for (std::size_t i = 0; i < params.bem_size(); ++i) {
        const std::ptrdiff_t q =
            static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(params.q_order);
        // exp(-j*2*pi*q*idx/n_s) = conj(tw[(q*idx) mod n_s])
        const std::ptrdiff_t step = ((q % n) + n) % n;
        CVec& rq = out.r[i];
        std::ptrdiff_t phase = 0;
        for (std::size_t idx = 0; idx < params.n_s; ++idx) {
            rq[idx % n_p] += std::conj(tw[static_cast<std::size_t>(phase)]) * x_s[idx];
            phase += step;
            if (phase >= n) phase -= n;
        }
        for (cxd& v : rq) v *= inv_k;
    }
    return out;
}

CVec effective_training(const ValidatedParams& params, const CVec& t_s_tilde)
{
    CVec out = t_s_tilde;
    const double scale = std::sqrt(params.epsilon);
    for (cxd& v : out) v *= scale;
    return out;
}

double effective_training_gram(const ValidatedParams& params)
{
    return params.epsilon * static_cast<double>(params.n_p) * params.p_s;
}


namespace {

double round_change(const CVec& lambda_prev, const CVec& lambda_now, cxd g_prev, cxd g_now)
{
    double rel = std::abs(g_now - g_prev) / std::max(1e-300, std::abs(g_prev));
    for (std::size_t i = 0; i < lambda_now.size(); ++i) {
        rel = std::max(rel, std::abs(lambda_now[i] - lambda_prev[i]) /
                                std::max(1e-300, std::abs(lambda_prev[i])));
    }
    return rel;
}

} // namespace

EstimateSet map_estimate(const ProjectedObservation& obs, const CVec& x_r, const CVec& t_r,
                         const CVec& t_s_tilde, const ValidatedParams& params,
                         double early_exit_tol)
{
    check_inputs(obs, x_r, t_r, t_s_tilde, params);
    const CVec t_eff = effective_training(params, t_s_tilde);
    const IterationContext ctx = make_context(obs, x_r, t_r, t_eff, params);
    const std::size_t width = params.bem_size();

    EstimateSet est;
    est.lambda_hat.assign(width, cxd{0.0, 0.0});
    est.g_hat = ctx.trx / (ctx.gram_backhaul + params.sigma_n2 / params.v_g);
    est.iterations = params.i_times;
    est.objective_trace.reserve(1 + 2 * params.i_times);
    est.objective_trace.push_back(regularized_cost(ctx, est.lambda_hat, est.g_hat, params));

    for (std::size_t it = 0; it < params.i_times; ++it) {
        const CVec lambda_prev = est.lambda_hat;
        const cxd g_prev = est.g_hat;
        const double g_power = ctx.alpha2 * std::norm(est.g_hat) * ctx.gram_eff;
        for (std::size_t i = 0; i < width; ++i) {
            est.lambda_hat[i] = ctx.alpha * std::conj(est.g_hat) * ctx.proj[i] /
                                (g_power + params.v_n / params.v_q_profile[i]);
        }
        est.objective_trace.push_back(regularized_cost(ctx, est.lambda_hat, est.g_hat, params));

        cxd num = ctx.trx / params.sigma_n2;
        double den = ctx.gram_backhaul / params.sigma_n2 + 1.0 / params.v_g;
        for (std::size_t i = 0; i < width; ++i) {
            num += ctx.alpha * std::conj(est.lambda_hat[i]) * ctx.proj[i] / params.v_n;
            den += ctx.alpha2 * std::norm(est.lambda_hat[i]) * ctx.gram_eff / params.v_n;
        }
        est.g_hat = num / den;
        est.objective_trace.push_back(regularized_cost(ctx, est.lambda_hat, est.g_hat, params));
        est.iterations = it + 1;
        if (early_exit_tol > 0.0 && it > 0 &&
            round_change(lambda_prev, est.lambda_hat, g_prev, est.g_hat) < early_exit_tol) {
            break;
        }
    }
    return est;
}

EstimateSet ml_estimate(const ProjectedObservation& obs, const CVec& x_r, const CVec& t_r,
                        const CVec& t_s_tilde, const ValidatedParams& params,
                        double early_exit_tol)
{
    check_inputs(obs, x_r, t_r, t_s_tilde, params);
    const CVec t_eff = effective_training(params, t_s_tilde);
    const IterationContext ctx = make_context(obs, x_r, t_r, t_eff, params);
    const std::size_t width = params.bem_size();

    EstimateSet est;
    est.lambda_hat.assign(width, cxd{0.0, 0.0});
    est.g_hat = ctx.trx / ctx.gram_backhaul;
    est.iterations = params.i_times;
    est.objective_trace.reserve(1 + 2 * params.i_times);
    est.objective_trace.push_back(prior_free_cost(ctx, est.lambda_hat, est.g_hat, params));

    for (std::size_t it = 0; it < params.i_times; ++it) {
        const CVec lambda_prev = est.lambda_hat;
        const cxd g_prev = est.g_hat;
        const double g_power = ctx.alpha2 * std::norm(est.g_hat) * ctx.gram_eff;
        if (g_power == 0.0) {
            throw SingularEstimate(est);
        }
        for (std::size_t i = 0; i < width; ++i) {
            est.lambda_hat[i] = ctx.alpha * std::conj(est.g_hat) * ctx.proj[i] / g_power;
        }
        est.objective_trace.push_back(prior_free_cost(ctx, est.lambda_hat, est.g_hat, params));

        cxd num = ctx.trx / params.sigma_n2;
        double den = ctx.gram_backhaul / params.sigma_n2;
        for (std::size_t i = 0; i < width; ++i) {
            num += ctx.alpha * std::conj(est.lambda_hat[i]) * ctx.proj[i] / params.v_n;
            den += ctx.alpha2 * std::norm(est.lambda_hat[i]) * ctx.gram_eff / params.v_n;
        }
        est.g_hat = num / den;
        est.objective_trace.push_back(prior_free_cost(ctx, est.lambda_hat, est.g_hat, params));
        est.iterations = it + 1;
        if (early_exit_tol > 0.0 && it > 0 &&
            round_change(lambda_prev, est.lambda_hat, g_prev, est.g_hat) < early_exit_tol) {
            break;
        }
    }
    return est;
}

double objective(const CVec& lambda, cxd g, const ProjectedObservation& obs, const CVec& x_r,
                 const ValidatedParams& params)
{
    if (lambda.size() != params.bem_size()) {
        throw LengthMismatch("objective: coefficient vector length mismatch");
    }
    const CVec t_r = generate_backhaul_training(params);
    const CVec t_eff = effective_training(params, generate_access_training(params).t_s_tilde);
    // Residuals formed directly so exact cancellations stay exact; the
    // blocks are short enough that nothing is gained by caching.
    double acc = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        const cxd coef = params.alpha * g * lambda[i];
        double res = 0.0;
        for (std::size_t m = 0; m < params.n_p; ++m) {
            res += std::norm(obs.r[i][m] - coef * t_eff[m]);
        }
        acc += res / params.v_n + std::norm(lambda[i]) / params.v_q_profile[i];
    }
    double res_r = 0.0;
    for (std::size_t m = 0; m < params.n_r; ++m) {
        res_r += std::norm(x_r[m] - g * t_r[m]);
    }
    return acc + res_r / params.sigma_n2 + std::norm(g) / params.v_g;
}

CrbValues crb(const ValidatedParams& params, cxd g, const CVec& lambda)
{
    const double gram_eff = effective_training_gram(params);
    const double gram_backhaul = static_cast<double>(params.n_r) * params.p_r;
    const double a2 = params.alpha * params.alpha;
    const double g2 = std::norm(g);
    if (g2 == 0.0) {
        throw ZeroChannel("crb: coefficient bound undefined at g = 0");
    }
    CrbValues out;
    out.crb_lambda.assign(params.bem_size(), params.v_n / (a2 * g2 * gram_eff));
    out.crb_g =
        1.0 / (a2 * norm2(lambda) * gram_eff / params.v_n + gram_backhaul / params.sigma_n2);
    return out;
}

GainMse analytic_mse_g(const ValidatedParams& params, const CVec& lambda)
{
    const double gram_eff = effective_training_gram(params);
    const double gram_backhaul = static_cast<double>(params.n_r) * params.p_r;
    const double a2 = params.alpha * params.alpha;
    const double s = a2 * norm2(lambda) * gram_eff / params.v_n + gram_backhaul / params.sigma_n2;
    GainMse out;
    out.ml_mse = 1.0 / s;
    out.map_mse = (1.0 / s) * (params.v_g / (params.v_g + 1.0 / s));
    return out;
}

} // namespace cranest
