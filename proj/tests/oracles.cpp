// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracles {

TrialData make_trial(const ValidatedParams& params, std::uint64_t salt, std::uint64_t trial)
{
    TrialData t;
    RngStream bem_rng(params.seed, trial_stream(salt, trial, StreamPurpose::BemCoefficients));
    RngStream gain_rng(params.seed, trial_stream(salt, trial, StreamPurpose::BackhaulGain));
    RngStream data_rng(params.seed, trial_stream(salt, trial, StreamPurpose::DataSymbols));
    NoiseStreams noise{RngStream(params.seed, trial_stream(salt, trial, StreamPurpose::RelayNoise)),
                       RngStream(params.seed, trial_stream(salt, trial, StreamPurpose::DirectNoise)),
                       RngStream(params.seed, trial_stream(salt, trial, StreamPurpose::BackhaulNoise))};
    t.chan = draw_realization(params, bem_rng, gain_rng);
    t.training = generate_access_training(params);
    t.block.b = generate_data(params, data_rng);
    t.block.t_s = t.training.t_s;
    t.block.s = superimpose(t.block.b, t.block.t_s, params.epsilon);
    t.t_r = generate_backhaul_training(params);
    t.rx = simulate_uplink(params, t.chan, t.block, t.t_r, noise);
    t.obs = project(t.rx.x_s, params);
    return t;
}

double gain_profile_cost(double g_mag, double g_phase, const ProjectedObservation& obs,
                         const CVec& x_r, const CVec& t_r, const CVec& t_s_tilde,
                         const ValidatedParams& params, bool with_priors)
{
    const cxd g = std::polar(g_mag, g_phase);
    const CVec t_eff = effective_training(params, t_s_tilde);
    const double gram_eff = norm2(t_eff);
    const double a2 = params.alpha * params.alpha;

    double cost = 0.0;
    for (std::size_t m = 0; m < x_r.size(); ++m) {
        cost += std::norm(x_r[m] - g * t_r[m]);
    }
    cost /= params.sigma_n2;
    if (with_priors) {
        cost += std::norm(g) / params.v_g;
    }
    for (std::size_t i = 0; i < obs.r.size(); ++i) {
        const double proj_mag2 = std::norm(inner(t_eff, obs.r[i]));
        const double prior = with_priors
                                 ? params.v_n * params.v_n / params.v_q_profile[i]
                                 : 0.0;
        cost -= a2 * std::norm(g) * proj_mag2 /
                (a2 * params.v_n * gram_eff * std::norm(g) + prior);
    }
    return cost;
}

cxd gain_from_profile_search(const ProjectedObservation& obs, const CVec& x_r, const CVec& t_r,
                             const CVec& t_s_tilde, const ValidatedParams& params,
                             bool with_priors, double g_max)
{
    const double phase = std::arg(inner(t_r, x_r));
    auto cost = [&](double mag) {
        return gain_profile_cost(mag, phase, obs, x_r, t_r, t_s_tilde, params, with_priors);
    };

    // Coarse scan to bracket the global minimum, then golden section.
    const std::size_t grid = 4000;
    double best_mag = 0.0;
    double best_cost = cost(0.0);
    for (std::size_t i = 1; i <= grid; ++i) {
        const double mag = g_max * static_cast<double>(i) / static_cast<double>(grid);
        const double c = cost(mag);
        if (c < best_cost) {
            best_cost = c;
            best_mag = mag;
        }
    }
    double lo = std::max(0.0, best_mag - g_max / static_cast<double>(grid));
    double hi = std::min(g_max, best_mag + g_max / static_cast<double>(grid));
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = cost(x1);
    double f2 = cost(x2);
    while (hi - lo > 1e-12 * std::max(1.0, hi)) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = cost(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = cost(x2);
        }
    }
    return std::polar(0.5 * (lo + hi), phase);
}

std::vector<double> dense_inverse(std::vector<double> a, std::size_t n)
{
    std::vector<double> inv(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row) {
            if (std::abs(a[row * n + col]) > std::abs(a[pivot * n + col])) pivot = row;
        }
        if (a[pivot * n + col] == 0.0) {
            throw std::runtime_error("dense_inverse: singular matrix");
        }
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a[pivot * n + j], a[col * n + j]);
                std::swap(inv[pivot * n + j], inv[col * n + j]);
            }
        }
        const double d = a[col * n + col];
        for (std::size_t j = 0; j < n; ++j) {
            a[col * n + j] /= d;
            inv[col * n + j] /= d;
        }
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col) continue;
            const double f = a[row * n + col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a[row * n + j] -= f * a[col * n + j];
                inv[row * n + j] -= f * inv[col * n + j];
            }
        }
    }
    return inv;
}

std::vector<double> optimal_weights_dense(const WeightSystem& ws)
{
    const std::size_t n = ws.xi.size();
    std::vector<double> xi_mat(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) xi_mat[i * n + i] = ws.xi[i];
    const std::vector<double> xi_inv = dense_inverse(xi_mat, n);

    // v = Xi^-1 * Upsilon * 1
    std::vector<double> v(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            v[i] += xi_inv[i * n + j] * ws.upsilon[j];
        }
    }
    double normalizer = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        normalizer += ws.upsilon[i] * v[i];
    }
    std::vector<double> eta(n);
    for (std::size_t i = 0; i < n; ++i) {
        eta[i] = ws.c * v[i] / normalizer;
    }
    return eta;
}

ComplexMoments complex_moments(const CVec& samples)
{
    ComplexMoments m;
    for (const cxd& v : samples) {
        m.mean += v;
        m.power += std::norm(v);
    }
    const double inv = 1.0 / static_cast<double>(samples.size());
    m.mean *= inv;
    m.power *= inv;
    return m;
}

} // namespace oracles
