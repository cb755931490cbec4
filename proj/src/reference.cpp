// SPDX-License-Identifier: Apache-2.0
#include "cranest/reference.hpp"

#include "cranest/channel.hpp"
#include "cranest/transceiver.hpp"

#include <cmath>
#include <numbers>

namespace cranest::reference {

namespace {

// Residual + prior cost evaluated from full-length vectors.
double cost_direct(const CVec& lambda, cxd g, const ProjectedObservation& obs, const CVec& x_r,
                   const CVec& t_r, const CVec& t_eff, const ValidatedParams& params,
                   bool with_priors)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        const CVec& rq = obs.r[i];
        double res = 0.0;
        for (std::size_t m = 0; m < rq.size(); ++m) {
            res += std::norm(rq[m] - params.alpha * g * lambda[i] * t_eff[m]);
        }
        acc += res / params.v_n;
        if (with_priors) acc += std::norm(lambda[i]) / params.v_q_profile[i];
    }
    double res_r = 0.0;
    for (std::size_t m = 0; m < x_r.size(); ++m) {
        res_r += std::norm(x_r[m] - g * t_r[m]);
    }
    acc += res_r / params.sigma_n2;
    if (with_priors) acc += std::norm(g) / params.v_g;
    return acc;
}

EstimateSet iterate_direct(const ProjectedObservation& obs, const CVec& x_r, const CVec& t_r,
                           const CVec& t_s_tilde, const ValidatedParams& params, bool map_mode)
{
    const CVec t_eff = effective_training(params, t_s_tilde);
    const double a = params.alpha;
    const double gram_eff = norm2(t_eff);
    const double gram_backhaul = norm2(t_r);
    const std::size_t width = params.bem_size();

    EstimateSet est;
    est.lambda_hat.assign(width, cxd{0.0, 0.0});
    est.g_hat = map_mode ? inner(t_r, x_r) / (gram_backhaul + params.sigma_n2 / params.v_g)
                         : inner(t_r, x_r) / gram_backhaul;
    est.iterations = params.i_times;
    est.objective_trace.push_back(
        cost_direct(est.lambda_hat, est.g_hat, obs, x_r, t_r, t_eff, params, map_mode));

    for (std::size_t it = 0; it < params.i_times; ++it) {
        for (std::size_t i = 0; i < width; ++i) {
            const double prior = map_mode ? params.v_n / params.v_q_profile[i] : 0.0;
            const double den = a * a * std::norm(est.g_hat) * gram_eff + prior;
            if (den == 0.0) {
                throw SingularEstimate(est);
            }
            est.lambda_hat[i] = a * std::conj(est.g_hat) * inner(t_eff, obs.r[i]) / den;
        }
        est.objective_trace.push_back(
            cost_direct(est.lambda_hat, est.g_hat, obs, x_r, t_r, t_eff, params, map_mode));

        cxd num = inner(t_r, x_r) / params.sigma_n2;
        double den = gram_backhaul / params.sigma_n2 + (map_mode ? 1.0 / params.v_g : 0.0);
        for (std::size_t i = 0; i < width; ++i) {
            num += a * std::conj(est.lambda_hat[i]) * inner(t_eff, obs.r[i]) / params.v_n;
            den += a * a * std::norm(est.lambda_hat[i]) * gram_eff / params.v_n;
        }
        est.g_hat = num / den;
        est.objective_trace.push_back(
            cost_direct(est.lambda_hat, est.g_hat, obs, x_r, t_r, t_eff, params, map_mode));
    }
    return est;
}

double time_domain_mse(const CVec& h_hat, const CVec& h)
{
    double acc = 0.0;
    for (std::size_t n = 0; n < h.size(); ++n) {
        acc += std::norm(h_hat[n] - h[n]);
    }
    return acc / static_cast<double>(h.size());
}

} // namespace

ProjectedObservation project_dense(const CVec& x_s, const ValidatedParams& params)
{
    if (x_s.size() != params.n_s) {
        throw LengthMismatch("project_dense: bad input length");
    }
    const std::size_t width = params.bem_size();
    const std::size_t rows = width * params.n_p;
    // Operator row (i*n_p + m), column n:
    //   (1/K) * exp(-j*2*pi*q*n/n_s) * [n mod n_p == m],  q = i - Q.
    std::vector<CVec> op(rows, CVec(params.n_s, cxd{0.0, 0.0}));
    const double inv_k = 1.0 / static_cast<double>(params.k);
    for (std::size_t i = 0; i < width; ++i) {
        const double q = static_cast<double>(i) - static_cast<double>(params.q_order);
        for (std::size_t n = 0; n < params.n_s; ++n) {
            const double ang =
                -2.0 * std::numbers::pi * q * static_cast<double>(n) / static_cast<double>(params.n_s);
            op[i * params.n_p + n % params.n_p][n] = inv_k * std::polar(1.0, ang);
        }
    }
    ProjectedObservation out;
    out.q_order = params.q_order;
    out.n_p = params.n_p;
    out.r.assign(width, CVec(params.n_p, cxd{0.0, 0.0}));
    for (std::size_t i = 0; i < width; ++i) {
        for (std::size_t m = 0; m < params.n_p; ++m) {
            cxd acc{0.0, 0.0};
            const CVec& row = op[i * params.n_p + m];
            for (std::size_t n = 0; n < params.n_s; ++n) {
                acc += row[n] * x_s[n];
            }
            out.r[i][m] = acc;
        }
    }
    return out;
}

EstimateSet map_estimate_direct(const ProjectedObservation& obs, const CVec& x_r, const CVec& t_r,
                                const CVec& t_s_tilde, const ValidatedParams& params)
{
    return iterate_direct(obs, x_r, t_r, t_s_tilde, params, true);
}

EstimateSet ml_estimate_direct(const ProjectedObservation& obs, const CVec& x_r, const CVec& t_r,
                               const CVec& t_s_tilde, const ValidatedParams& params)
{
    return iterate_direct(obs, x_r, t_r, t_s_tilde, params, false);
}

TrialRecord run_trial(const ValidatedParams& params, std::uint64_t point_index,
                      std::uint64_t trial_index, const std::vector<double>& eta_owa)
{
    const std::uint64_t seed = params.seed;
    RngStream bem_rng(seed, trial_stream(point_index, trial_index, StreamPurpose::BemCoefficients));
    RngStream gain_rng(seed, trial_stream(point_index, trial_index, StreamPurpose::BackhaulGain));
    RngStream data_rng(seed, trial_stream(point_index, trial_index, StreamPurpose::DataSymbols));
    NoiseStreams noise{
        RngStream(seed, trial_stream(point_index, trial_index, StreamPurpose::RelayNoise)),
        RngStream(seed, trial_stream(point_index, trial_index, StreamPurpose::DirectNoise)),
        RngStream(seed, trial_stream(point_index, trial_index, StreamPurpose::BackhaulNoise))};

    const ChannelRealization chan = draw_realization(params, bem_rng, gain_rng);
    TransmitBlock block;
    block.b = generate_data(params, data_rng);
    const AccessTraining training = generate_access_training(params);
    block.t_s = training.t_s;
    block.s = superimpose(block.b, block.t_s, params.epsilon);
    const CVec t_r = generate_backhaul_training(params);

    const ReceivedSignals rx = simulate_uplink(params, chan, block, t_r, noise);
    const ProjectedObservation obs = project_dense(rx.x_s, params);

    TrialRecord rec;
    rec.g = chan.g;
    rec.lambda = chan.bem.lambda;

    const std::vector<double> eta_unit(params.bem_size(), 1.0);
    auto fill_outcome = [&](EstimateSet est, bool singular) {
        MethodOutcome out;
        out.g_hat = est.g_hat;
        out.bl_sq = std::norm(est.g_hat - rec.g);
        for (std::size_t i = 0; i < est.lambda_hat.size(); ++i) {
            out.al_coeff_sq += std::norm(est.lambda_hat[i] - rec.lambda[i]);
        }
        out.al_time_sq = time_domain_mse(restore(est.lambda_hat, eta_unit, params.n_s), chan.h);
        out.singular = singular;
        out.objective_trace = std::move(est.objective_trace);
        out.lambda_hat = std::move(est.lambda_hat);
        return out;
    };

    rec.map = fill_outcome(map_estimate_direct(obs, rx.x_r, t_r, training.t_s_tilde, params), false);
    try {
        rec.ml = fill_outcome(ml_estimate_direct(obs, rx.x_r, t_r, training.t_s_tilde, params), false);
    } catch (const SingularEstimate& e) {
        rec.ml = fill_outcome(e.partial, true);
    }

    // Time-domain AESNR contributions.
    const CVec h_owa = restore(rec.map.lambda_hat, eta_owa, params.n_s);
    const CVec h_base = restore(rec.map.lambda_hat, eta_unit, params.n_s);
    const double inv_n = 1.0 / static_cast<double>(params.n_s);
    double owa_num = 0.0, owa_err = 0.0, base_num = 0.0, base_err = 0.0;
    for (std::size_t n = 0; n < params.n_s; ++n) {
        owa_num += std::norm(rec.map.g_hat * h_owa[n]);
        owa_err += std::norm(rec.map.g_hat * h_owa[n] - rec.g * chan.h[n]);
        base_num += std::norm(rec.map.g_hat * h_base[n]);
        base_err += std::norm(rec.map.g_hat * h_base[n] - rec.g * chan.h[n]);
    }
    const double floor_term =
        (std::norm(rec.g) + 1.0 / (params.alpha * params.alpha)) * params.sigma_n2 / params.p_s;
    rec.owa_num = owa_num * inv_n;
    rec.owa_den = owa_err * inv_n + floor_term;
    rec.baseline_num = base_num * inv_n;
    rec.baseline_den = base_err * inv_n + floor_term;
    return rec;
}

SweepResult run_sweep(const SweepConfig& cfg, const ValidatedParams& base)
{
    SweepResult result;
    for (std::size_t pi = 0; pi < cfg.snr_points_db.size(); ++pi) {
        const double snr_db = cfg.snr_points_db[pi];
        const ValidatedParams params = params_at_snr(base, snr_db);
        const WeightSystem ws = weight_matrices(params);
        const std::vector<double> eta_owa = optimal_weights(ws);
        const std::vector<double> eta_unit(params.bem_size(), 1.0);

        MethodMetrics map_metrics;
        MethodMetrics ml_metrics;
        double owa_num = 0.0, owa_den = 0.0, base_num = 0.0, base_den = 0.0;
        for (std::size_t t = 0; t < cfg.trials_per_point; ++t) {
            const TrialRecord rec = reference::run_trial(params, pi, t, eta_owa);
            map_metrics.mse_bl += rec.map.bl_sq;
            map_metrics.mse_al_coeff += rec.map.al_coeff_sq;
            map_metrics.mse_al_time += rec.map.al_time_sq;
            ml_metrics.mse_bl += rec.ml.bl_sq;
            ml_metrics.mse_al_coeff += rec.ml.al_coeff_sq;
            ml_metrics.mse_al_time += rec.ml.al_time_sq;
            ml_metrics.singular_count += rec.ml.singular ? 1 : 0;
            owa_num += rec.owa_num;
            owa_den += rec.owa_den;
            base_num += rec.baseline_num;
            base_den += rec.baseline_den;
        }
        const double inv_trials = 1.0 / static_cast<double>(cfg.trials_per_point);
        const double inv_width = 1.0 / static_cast<double>(params.bem_size());
        for (MethodMetrics* m : {&map_metrics, &ml_metrics}) {
            m->mse_bl *= inv_trials;
            m->mse_al_coeff *= inv_trials * inv_width;
            m->mse_al_time *= inv_trials;
        }

        PointResult point;
        point.snr_db = snr_db;
        for (Method m : cfg.methods) {
            point.methods.emplace_back(m, m == Method::Map ? map_metrics : ml_metrics);
        }
        for (Restorer r : cfg.restorers) {
            RestorerMetrics rm;
            if (r == Restorer::Owa) {
                rm.aesnr_emp = (1.0 - params.epsilon) * owa_num / owa_den;
                rm.aesnr_theory = aesnr_theoretical(eta_owa, ws, params.epsilon);
            } else {
                rm.aesnr_emp = (1.0 - params.epsilon) * base_num / base_den;
                rm.aesnr_theory = aesnr_theoretical(eta_unit, ws, params.epsilon);
            }
            point.restorers.emplace_back(r, rm);
        }
        result.points.push_back(std::move(point));
    }
    return result;
}

} // namespace cranest::reference
