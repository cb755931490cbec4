// SPDX-License-Identifier: Apache-2.0
#include "cranest/restoration.hpp"

#include "cranest/estimator.hpp"

#include <cmath>

namespace cranest {

WeightSystem weight_matrices(const ValidatedParams& params)
{
    const double a2 = params.alpha * params.alpha;
    const double gram_eff = effective_training_gram(params);
    const double gram_backhaul = static_cast<double>(params.n_r) * params.p_r;
    const double coupling = a2 * params.v_g * gram_eff / params.v_n;
    const double backhaul_snr = params.v_g * gram_backhaul / params.sigma_n2;
    const double trace_r = params.v_h; // sum of v_q, enforced by validate()

    WeightSystem ws;
    ws.r_lambda = params.v_q_profile;
    ws.upsilon.resize(ws.r_lambda.size());
    ws.xi.resize(ws.r_lambda.size());
    const double xi_shift =
        params.v_h + params.v_n * gram_backhaul / (params.sigma_n2 * a2 * gram_eff);
    double upsilon_sum = 0.0;
    for (std::size_t i = 0; i < ws.r_lambda.size(); ++i) {
        const double vq = ws.r_lambda[i];
        ws.upsilon[i] = coupling * (vq * vq + trace_r * vq) + backhaul_snr * vq;
        ws.xi[i] = ws.upsilon[i] + vq + xi_shift;
        upsilon_sum += ws.upsilon[i];
    }
    ws.c = upsilon_sum +
           (params.v_g + 1.0 / a2) *
               (params.v_h * a2 * gram_eff / params.v_n + gram_backhaul / params.sigma_n2) *
               params.sigma_n2 / params.p_s;
    return ws;
}

namespace {

// 1' upsilon xi^-1 upsilon 1, the normalizer of the weight solution.
double weight_normalizer(const WeightSystem& ws)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < ws.upsilon.size(); ++i) {
        acc += ws.upsilon[i] * ws.upsilon[i] / ws.xi[i];
    }
    return acc;
}

} // namespace

std::vector<double> optimal_weights(const WeightSystem& ws)
{
    const double normalizer = weight_normalizer(ws);
    if (!(normalizer > 0.0)) {
        throw DegenerateWeights("optimal_weights: non-positive normalizer, corrupt inputs");
    }
    std::vector<double> eta(ws.upsilon.size());
    for (std::size_t i = 0; i < eta.size(); ++i) {
        eta[i] = ws.c * (ws.upsilon[i] / ws.xi[i]) / normalizer;
    }
    return eta;
}

double phi_star(const WeightSystem& ws)
{
    const double normalizer = weight_normalizer(ws);
    if (!(normalizer > 0.0)) {
        throw DegenerateWeights("phi_star: non-positive normalizer");
    }
    return ws.c * ws.c / normalizer;
}

double aesnr_theoretical(const std::vector<double>& eta, const WeightSystem& ws, double epsilon)
{
    if (eta.size() != ws.xi.size()) {
        throw LengthMismatch("aesnr_theoretical: weight vector length mismatch");
    }
    double quad = 0.0;
    double lin = 0.0;
    for (std::size_t i = 0; i < eta.size(); ++i) {
        quad += eta[i] * eta[i] * ws.xi[i];
        lin += ws.upsilon[i] * eta[i];
    }
    const double den = quad - 2.0 * lin + ws.c;
    if (!(den > 0.0)) {
        throw NonpositiveDenominator("aesnr_theoretical: denominator not positive");
    }
    return quad * (1.0 - epsilon) / den;
}

CVec restore(const CVec& lambda_hat, const std::vector<double>& eta, std::size_t n_s)
{
    if (lambda_hat.size() != eta.size()) {
        throw LengthMismatch("restore: weight vector length mismatch");
    }
    BemCoefficients weighted;
    weighted.lambda.resize(lambda_hat.size());
    for (std::size_t i = 0; i < eta.size(); ++i) {
        weighted.lambda[i] = eta[i] * lambda_hat[i];
    }
    return expand(weighted, n_s);
}

void AesnrAccumulator::add_time_domain(cxd g_hat, const CVec& h_hat, cxd g, const CVec& h,
                                       const ValidatedParams& params)
{
    if (h_hat.size() != h.size()) {
        throw LengthMismatch("aesnr: channel vector length mismatch");
    }
    if (h.empty()) {
        throw EmptyInput("aesnr: empty channel vectors");
    }
    double sig = 0.0;
    double err = 0.0;
    for (std::size_t n = 0; n < h.size(); ++n) {
        const cxd est = g_hat * h_hat[n];
        sig += std::norm(est);
        err += std::norm(est - g * h[n]);
    }
    const double inv_n = 1.0 / static_cast<double>(h.size());
    const double a2 = params.alpha * params.alpha;
    num_ += sig * inv_n;
    den_ += err * inv_n + (std::norm(g) + 1.0 / a2) * params.sigma_n2 / params.p_s;
    ++trials_;
}

void AesnrAccumulator::add_coefficients(cxd g_hat, const CVec& weighted_lambda_hat, cxd g,
                                        const CVec& lambda, const ValidatedParams& params)
{
    if (weighted_lambda_hat.size() != lambda.size()) {
        throw LengthMismatch("aesnr: coefficient vector length mismatch");
    }
    double sig = 0.0;
    double err = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        const cxd est = g_hat * weighted_lambda_hat[i];
        sig += std::norm(est);
        err += std::norm(est - g * lambda[i]);
    }
    const double a2 = params.alpha * params.alpha;
    num_ += sig;
    den_ += err + (std::norm(g) + 1.0 / a2) * params.sigma_n2 / params.p_s;
    ++trials_;
}

double AesnrAccumulator::value(double epsilon) const
{
    if (trials_ == 0) {
        throw EmptyInput("aesnr: no trials accumulated");
    }
    return (1.0 - epsilon) * num_ / den_;
}

double aesnr_empirical(const std::vector<RestorationSample>& samples,
                       const ValidatedParams& params)
{
    if (samples.empty()) {
        throw EmptyInput("aesnr_empirical: no samples");
    }
    AesnrAccumulator acc;
    for (const RestorationSample& s : samples) {
        acc.add_time_domain(s.g_hat, s.h_hat, s.g, s.h, params);
    }
    return acc.value(params.epsilon);
}

} // namespace cranest
