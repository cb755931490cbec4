// SPDX-License-Identifier: Apache-2.0
#include "cranest/verify.hpp"

#include "cranest/channel.hpp"
#include "cranest/estimator.hpp"
#include "cranest/sweep.hpp"
#include "cranest/transceiver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace cranest {

ProjectionIdentity projection_identity(const ValidatedParams& params)
{
    const AccessTraining training = generate_access_training(params);
    const double ref_norm = std::sqrt(norm2(training.t_s_tilde));
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(params.n_s);

    ProjectionIdentity out;
    for (std::ptrdiff_t q = -static_cast<std::ptrdiff_t>(params.q_order);
         q <= static_cast<std::ptrdiff_t>(params.q_order); ++q) {
        // (J D_q t_s)_m = (1/K) sum_k exp(+j*2*pi*q*(k*n_p+m)/n_s) t_s(k*n_p+m)
        CVec block(params.n_p, cxd{0.0, 0.0});
        for (std::size_t idx = 0; idx < params.n_s; ++idx) {
            const double ang = 2.0 * std::numbers::pi * static_cast<double>(q) *
                               static_cast<double>(idx) / static_cast<double>(n);
            block[idx % params.n_p] += std::polar(1.0, ang) * training.t_s[idx];
        }
        for (cxd& v : block) v /= static_cast<double>(params.k);

        if (q == 0) {
            double worst = 0.0;
            for (std::size_t m = 0; m < params.n_p; ++m) {
                worst = std::max(worst, std::abs(block[m] - training.t_s_tilde[m]));
            }
            out.max_zero_block_error = std::max(out.max_zero_block_error, worst / ref_norm);
        } else {
            out.max_leakage_ratio =
                std::max(out.max_leakage_ratio, std::sqrt(norm2(block)) / ref_norm);
        }
    }
    return out;
}

WhiteningStats whitening_stats(const ValidatedParams& params, std::size_t trials,
                               std::uint64_t stream_salt)
{
    const AccessTraining training = generate_access_training(params);
    const CVec t_r = generate_backhaul_training(params);
    const CVec t_eff = effective_training(params, training.t_s_tilde);
    const std::size_t width = params.bem_size();
    const std::size_t dim = width * params.n_p;

    // Accumulated sample covariance of the stacked disturbance.
    std::vector<std::vector<cxd>> cov(dim, std::vector<cxd>(dim, cxd{0.0, 0.0}));
    std::vector<cxd> w(dim);

    for (std::size_t t = 0; t < trials; ++t) {
        RngStream bem_rng(params.seed, trial_stream(stream_salt, t, StreamPurpose::BemCoefficients));
        RngStream gain_rng(params.seed, trial_stream(stream_salt, t, StreamPurpose::BackhaulGain));
        RngStream data_rng(params.seed, trial_stream(stream_salt, t, StreamPurpose::DataSymbols));
        NoiseStreams noise{
            RngStream(params.seed, trial_stream(stream_salt, t, StreamPurpose::RelayNoise)),
            RngStream(params.seed, trial_stream(stream_salt, t, StreamPurpose::DirectNoise)),
            RngStream(params.seed, trial_stream(stream_salt, t, StreamPurpose::BackhaulNoise))};
        const ChannelRealization chan = draw_realization(params, bem_rng, gain_rng);
        TransmitBlock block;
        block.b = generate_data(params, data_rng);
        block.t_s = training.t_s;
        block.s = superimpose(block.b, block.t_s, params.epsilon);
        const ReceivedSignals rx = simulate_uplink(params, chan, block, t_r, noise);
        const ProjectedObservation obs = project(rx.x_s, params);

        // w_q = r_q - alpha*g*lambda_q*t_eff (the known signal removed).
        for (std::size_t i = 0; i < width; ++i) {
            const cxd coef = params.alpha * chan.g * chan.bem.lambda[i];
            for (std::size_t m = 0; m < params.n_p; ++m) {
                w[i * params.n_p + m] = obs.r[i][m] - coef * t_eff[m];
            }
        }
        for (std::size_t a = 0; a < dim; ++a) {
            for (std::size_t b = a; b < dim; ++b) {
                cov[a][b] += w[a] * std::conj(w[b]);
            }
        }
    }

    WhiteningStats stats;
    const double inv = 1.0 / static_cast<double>(trials);
    for (std::size_t a = 0; a < dim; ++a) {
        for (std::size_t b = a; b < dim; ++b) {
            const cxd value = cov[a][b] * inv;
            if (a == b) {
                stats.max_diag_rel_dev =
                    std::max(stats.max_diag_rel_dev, std::abs(value.real() - params.v_n) / params.v_n);
            } else {
                stats.max_offdiag_rel = std::max(stats.max_offdiag_rel, std::abs(value) / params.v_n);
            }
        }
    }
    return stats;
}

double monotonicity_violation_rate(const ValidatedParams& base,
                                   const std::vector<double>& snr_points_db,
                                   std::size_t trials_per_point, double rel_slack)
{
    std::size_t violations = 0;
    std::size_t total = 0;
    for (std::size_t pi = 0; pi < snr_points_db.size(); ++pi) {
        const ValidatedParams params = params_at_snr(base, snr_points_db[pi]);
        const WeightSystem ws = weight_matrices(params);
        const std::vector<double> eta = optimal_weights(ws);
        for (std::size_t t = 0; t < trials_per_point; ++t) {
            const TrialRecord rec = run_trial(params, pi + 1000, t, eta);
            ++total;
            const std::vector<double>& trace = rec.map.objective_trace;
            for (std::size_t i = 1; i < trace.size(); ++i) {
                if (trace[i] > trace[i - 1] + rel_slack * std::max(1.0, std::abs(trace[i - 1]))) {
                    ++violations;
                    break;
                }
            }
        }
    }
    return static_cast<double>(violations) / static_cast<double>(total);
}

std::vector<double> nelder_mead_maximize(const std::function<double(const std::vector<double>&)>& f,
                                         std::vector<double> start, double scale,
                                         std::size_t max_iter)
{
    const std::size_t dim = start.size();
    std::vector<std::vector<double>> simplex(dim + 1, start);
    for (std::size_t i = 0; i < dim; ++i) {
        simplex[i + 1][i] += scale;
    }
    std::vector<double> values(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) values[i] = f(simplex[i]);

    auto order = [&] {
        for (std::size_t i = 0; i <= dim; ++i) {
            for (std::size_t j = i + 1; j <= dim; ++j) {
                if (values[j] > values[i]) {
                    std::swap(values[i], values[j]);
                    std::swap(simplex[i], simplex[j]);
                }
            }
        }
    };

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        order();
        if (std::abs(values[0] - values[dim]) <
            1e-14 * std::max(1.0, std::abs(values[0]))) {
            break;
        }
        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t d = 0; d < dim; ++d) centroid[d] += simplex[i][d];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        auto blend = [&](double w) {
            std::vector<double> p(dim);
            for (std::size_t d = 0; d < dim; ++d) {
                p[d] = centroid[d] + w * (centroid[d] - simplex[dim][d]);
            }
            return p;
        };

        const std::vector<double> reflected = blend(1.0);
        const double fr = f(reflected);
        if (fr > values[0]) {
            const std::vector<double> expanded = blend(2.0);
            const double fe = f(expanded);
            if (fe > fr) {
                simplex[dim] = expanded;
                values[dim] = fe;
            } else {
                simplex[dim] = reflected;
                values[dim] = fr;
            }
        } else if (fr > values[dim - 1]) {
            simplex[dim] = reflected;
            values[dim] = fr;
        } else {
            const std::vector<double> contracted = blend(-0.5);
            const double fc = f(contracted);
            if (fc > values[dim]) {
                simplex[dim] = contracted;
                values[dim] = fc;
            } else {
                for (std::size_t i = 1; i <= dim; ++i) {
                    for (std::size_t d = 0; d < dim; ++d) {
                        simplex[i][d] = 0.5 * (simplex[i][d] + simplex[0][d]);
                    }
                    values[i] = f(simplex[i]);
                }
            }
        }
    }
    order();
    return simplex[0];
}

double weight_optimality_gap(const ValidatedParams& params, std::size_t random_draws,
                             std::uint64_t stream_salt)
{
    const WeightSystem ws = weight_matrices(params);
    const std::vector<double> eta_star = optimal_weights(ws);
    const double best_closed_form = aesnr_theoretical(eta_star, ws, params.epsilon);

    auto gamma = [&](const std::vector<double>& eta) {
        try {
            return aesnr_theoretical(eta, ws, params.epsilon);
        } catch (const NonpositiveDenominator&) {
            return -1.0;
        }
    };

    double best_rival = -1.0;
    RngStream rng(params.seed, trial_stream(stream_salt, 0, StreamPurpose::DataSymbols));
    std::vector<double> eta(params.bem_size());
    for (std::size_t d = 0; d < random_draws; ++d) {
        for (double& v : eta) v = 2.0 * rng.uniform01();
        best_rival = std::max(best_rival, gamma(eta));
    }
    best_rival = std::max(best_rival, gamma(std::vector<double>(params.bem_size(), 1.0)));

    for (const std::vector<double>& start :
         {std::vector<double>(params.bem_size(), 1.0), eta_star}) {
        const std::vector<double> found = nelder_mead_maximize(gamma, start, 0.25, 4000);
        best_rival = std::max(best_rival, gamma(found));
    }
    return best_rival - best_closed_form;
}

std::size_t analytic_mse_violations(std::size_t draws, std::uint64_t seed)
{
    RngStream rng(seed, 0xA11A);
    std::size_t violations = 0;
    for (std::size_t d = 0; d < draws; ++d) {
        SystemParams p;
        p.n_p = 8;
        p.n_s = 800;
        p.n_r = 2 + rng.uniform_int(7);
        p.q_order = rng.uniform_int(4);
        p.epsilon = 0.05 + 0.9 * rng.uniform01();
        p.p_s = std::pow(10.0, 3.0 * rng.uniform01() - 1.0);
        p.p_r = std::pow(10.0, 3.0 * rng.uniform01() - 1.0);
        p.sigma_n2 = std::pow(10.0, 2.0 * rng.uniform01() - 1.0);
        p.v_h = std::pow(10.0, 2.0 * rng.uniform01() - 1.0);
        p.v_g = std::pow(10.0, 2.0 * rng.uniform01() - 1.0);
        const ValidatedParams params = validate(p);

        CVec lambda(params.bem_size());
        for (std::size_t i = 0; i < lambda.size(); ++i) {
            lambda[i] = rng.complex_gaussian(params.v_q_profile[i]);
        }
        const GainMse mse = analytic_mse_g(params, lambda);
        const CrbValues bounds = crb(params, cxd{1.0, 0.0}, lambda);
        if (!(mse.map_mse < mse.ml_mse) || !(mse.map_mse < bounds.crb_g)) {
            ++violations;
        }
    }
    return violations;
}

std::vector<CheckResult> run_property_checks(const ValidatedParams& params)
{
    std::vector<CheckResult> checks;
    char buf[256];

    {
        const ProjectionIdentity id = projection_identity(params);
        std::snprintf(buf, sizeof(buf), "zero-block err = %.3g, leakage = %.3g",
                      id.max_zero_block_error, id.max_leakage_ratio);
        checks.push_back({"projection annihilation",
                          id.max_zero_block_error < 1e-12 && id.max_leakage_ratio < 1e-10, buf});
    }
    {
        const ValidatedParams at10 = params_at_snr(params, 10.0);
        const WhiteningStats st = whitening_stats(at10, 10000, 0xF00D);
        std::snprintf(buf, sizeof(buf), "max diag dev = %.3f%%, max offdiag = %.3f%% of v_n",
                      100.0 * st.max_diag_rel_dev, 100.0 * st.max_offdiag_rel);
        checks.push_back(
            {"projected-noise whitening", st.max_diag_rel_dev < 0.05 && st.max_offdiag_rel < 0.05,
             buf});
    }
    {
        const double rate = monotonicity_violation_rate(params, {0.0, 10.0, 20.0, 30.0}, 2500, 1e-9);
        std::snprintf(buf, sizeof(buf), "violation rate = %.4f%%", 100.0 * rate);
        checks.push_back({"objective monotonicity", rate <= 0.001, buf});
    }
    {
        double worst_gap = -1.0;
        for (double snr : {0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0}) {
            const double gap = weight_optimality_gap(params_at_snr(params, snr), 10000, 0xE7A);
            worst_gap = std::max(worst_gap, gap);
        }
        std::snprintf(buf, sizeof(buf), "largest rival improvement = %.3g", worst_gap);
        checks.push_back({"restoration-weight optimality", worst_gap <= 1e-6, buf});
    }
    {
        const std::size_t bad = analytic_mse_violations(10000, params.seed);
        std::snprintf(buf, sizeof(buf), "violations = %zu / 10000", bad);
        checks.push_back({"gain MSE ordering (map < ml = crb)", bad == 0, buf});
    }
    return checks;
}

} // namespace cranest
