// SPDX-License-Identifier: Apache-2.0
#include "cranest/sweep.hpp"

#include "cranest/channel.hpp"
#include "cranest/transceiver.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cranest {

const char* to_string(Method m)
{
    return m == Method::Map ? "map" : "ml";
}

const char* to_string(Restorer r)
{
    return r == Restorer::Owa ? "owa" : "baseline";
}

ValidatedParams params_at_snr(const ValidatedParams& base, double snr_db)
{
    SystemParams p;
    p.n_s = base.n_s;
    p.n_p = base.n_p;
    p.n_r = base.n_r;
    p.q_order = base.q_order;
    p.epsilon = base.epsilon;
    p.sigma_n2 = 1.0;
    p.p_s = std::pow(10.0, snr_db / 10.0);
    p.p_r = p.p_s;
    p.v_h = base.v_h;
    p.v_g = base.v_g;
    p.v_q_profile = base.v_q_profile;
    p.mpsk_order = base.mpsk_order;
    p.i_times = base.i_times;
    p.seed = base.seed;
    return validate(p);
}

namespace {

MethodOutcome make_outcome(EstimateSet est, const TrialRecord& truth)
{
    MethodOutcome out;
    out.g_hat = est.g_hat;
    out.bl_sq = std::norm(est.g_hat - truth.g);
    out.al_coeff_sq = 0.0;
    for (std::size_t i = 0; i < est.lambda_hat.size(); ++i) {
        out.al_coeff_sq += std::norm(est.lambda_hat[i] - truth.lambda[i]);
    }
    // Unit-weight restoration error; equals the coefficient error because
    // the basis columns are orthonormal over the block (up to the 1/n_s).
    out.al_time_sq = out.al_coeff_sq;
    out.objective_trace = std::move(est.objective_trace);
    out.lambda_hat = std::move(est.lambda_hat);
    return out;
}

} // namespace

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
    const ProjectedObservation obs = project(rx.x_s, params);

    TrialRecord rec;
    rec.g = chan.g;
    rec.lambda = chan.bem.lambda;

    rec.map = make_outcome(map_estimate(obs, rx.x_r, t_r, training.t_s_tilde, params), rec);
    try {
        rec.ml = make_outcome(ml_estimate(obs, rx.x_r, t_r, training.t_s_tilde, params), rec);
    } catch (const SingularEstimate& e) {
        rec.ml = make_outcome(e.partial, rec);
        rec.ml.singular = true;
    }

    // AESNR contributions of the MAP estimates, in coefficient space; the
    // sweep driver reduces the raw parts in trial order.
    const std::size_t width = params.bem_size();
    CVec weighted(width);
    for (std::size_t i = 0; i < width; ++i) {
        weighted[i] = eta_owa[i] * rec.map.lambda_hat[i];
    }
    rec.owa_num = std::norm(rec.map.g_hat) * norm2(weighted);
    rec.baseline_num = std::norm(rec.map.g_hat) * norm2(rec.map.lambda_hat);
    double owa_err = 0.0;
    double base_err = 0.0;
    for (std::size_t i = 0; i < width; ++i) {
        owa_err += std::norm(rec.map.g_hat * weighted[i] - rec.g * rec.lambda[i]);
        base_err += std::norm(rec.map.g_hat * rec.map.lambda_hat[i] - rec.g * rec.lambda[i]);
    }
    const double floor_term =
        (std::norm(rec.g) + 1.0 / (params.alpha * params.alpha)) * params.sigma_n2 / params.p_s;
    rec.owa_den = owa_err + floor_term;
    rec.baseline_den = base_err + floor_term;
    return rec;
}

SweepResult run_sweep(const SweepConfig& cfg, const ValidatedParams& base)
{
    if (cfg.snr_points_db.empty()) {
        throw ConfigError(ConfigErrorKind::BadValue, "sweep: no SNR points");
    }
    if (cfg.methods.empty()) {
        throw ConfigError(ConfigErrorKind::BadValue, "sweep: no methods selected");
    }
    if (cfg.trials_per_point == 0) {
        throw ConfigError(ConfigErrorKind::BadValue, "sweep: trials_per_point must be >= 1");
    }
    const int workers = cfg.workers == 0 ? omp_get_max_threads() : static_cast<int>(cfg.workers);

    SweepResult result;
    result.points.reserve(cfg.snr_points_db.size());

    for (std::size_t pi = 0; pi < cfg.snr_points_db.size(); ++pi) {
        const double snr_db = cfg.snr_points_db[pi];
        const ValidatedParams params = params_at_snr(base, snr_db);
        const WeightSystem ws = weight_matrices(params);
        const std::vector<double> eta_owa = optimal_weights(ws);
        const std::vector<double> eta_unit(params.bem_size(), 1.0);

        std::vector<TrialRecord> records(cfg.trials_per_point);
        const std::int64_t n_trials = static_cast<std::int64_t>(cfg.trials_per_point);
#pragma omp parallel for num_threads(workers) schedule(dynamic, 16)
        for (std::int64_t t = 0; t < n_trials; ++t) {
            records[static_cast<std::size_t>(t)] =
                run_trial(params, pi, static_cast<std::uint64_t>(t), eta_owa);
        }

        // Ordered reduction, fixed by trial index.
        MethodMetrics map_metrics;
        MethodMetrics ml_metrics;
        double owa_num = 0.0, owa_den = 0.0, base_num = 0.0, base_den = 0.0;
        for (const TrialRecord& rec : records) {
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

    if (!cfg.output_path.empty()) {
        emit_csv(result, cfg.output_path);
    }
    return result;
}

namespace {

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Method method_from(const std::string& s)
{
    if (s == "map") return Method::Map;
    if (s == "ml") return Method::Ml;
    throw IoError("csv: unknown method '" + s + "'");
}

Restorer restorer_from(const std::string& s)
{
    if (s == "owa") return Restorer::Owa;
    if (s == "baseline") return Restorer::Baseline;
    throw IoError("csv: unknown restorer '" + s + "'");
}

std::vector<std::string> split_fields(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

double parse_double_field(const std::string& s)
{
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw IoError("csv: bad numeric field '" + s + "'");
    }
}

} // namespace

std::string to_csv(const SweepResult& result)
{
    std::string out = "snr_db,method,mse_bl,mse_al_coeff,mse_al_time,ml_singular_count\n";
    for (const PointResult& p : result.points) {
        for (const auto& [method, m] : p.methods) {
            out += format_double(p.snr_db);
            out += ',';
            out += to_string(method);
            out += ',';
            out += format_double(m.mse_bl);
            out += ',';
            out += format_double(m.mse_al_coeff);
            out += ',';
            out += format_double(m.mse_al_time);
            out += ',';
            out += std::to_string(m.singular_count);
            out += '\n';
        }
    }
    out += "snr_db,restorer,aesnr_emp,aesnr_theory\n";
    for (const PointResult& p : result.points) {
        for (const auto& [restorer, m] : p.restorers) {
            out += format_double(p.snr_db);
            out += ',';
            out += to_string(restorer);
            out += ',';
            out += format_double(m.aesnr_emp);
            out += ',';
            out += format_double(m.aesnr_theory);
            out += '\n';
        }
    }
    return out;
}

void emit_csv(const SweepResult& result, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("emit_csv: cannot open '" + path + "' for writing");
    }
    out << to_csv(result);
    if (!out) {
        throw IoError("emit_csv: write to '" + path + "' failed");
    }
}

SweepResult parse_csv(const std::string& text)
{
    const std::string method_header = "snr_db,method,mse_bl,mse_al_coeff,mse_al_time,ml_singular_count";
    const std::string restorer_header = "snr_db,restorer,aesnr_emp,aesnr_theory";

    SweepResult result;
    std::stringstream ss(text);
    std::string line;
    int section = 0;
    auto point_at = [&result](double snr) -> PointResult& {
        for (PointResult& p : result.points) {
            if (p.snr_db == snr) return p;
        }
        result.points.emplace_back();
        result.points.back().snr_db = snr;
        return result.points.back();
    };
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        if (line == method_header) {
            section = 1;
            continue;
        }
        if (line == restorer_header) {
            section = 2;
            continue;
        }
        const std::vector<std::string> f = split_fields(line);
        if (section == 1 && f.size() == 6) {
            MethodMetrics m;
            m.mse_bl = parse_double_field(f[2]);
            m.mse_al_coeff = parse_double_field(f[3]);
            m.mse_al_time = parse_double_field(f[4]);
            m.singular_count = static_cast<std::uint64_t>(std::stoull(f[5]));
            point_at(parse_double_field(f[0])).methods.emplace_back(method_from(f[1]), m);
        } else if (section == 2 && f.size() == 4) {
            RestorerMetrics m;
            m.aesnr_emp = parse_double_field(f[2]);
            m.aesnr_theory = parse_double_field(f[3]);
            point_at(parse_double_field(f[0])).restorers.emplace_back(restorer_from(f[1]), m);
        } else {
            throw IoError("csv: unrecognized line '" + line + "'");
        }
    }
    return result;
}

bool identical(const SweepResult& a, const SweepResult& b)
{
    if (a.points.size() != b.points.size()) return false;
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        const PointResult& pa = a.points[i];
        const PointResult& pb = b.points[i];
        if (pa.snr_db != pb.snr_db || pa.methods.size() != pb.methods.size() ||
            pa.restorers.size() != pb.restorers.size()) {
            return false;
        }
        for (std::size_t j = 0; j < pa.methods.size(); ++j) {
            const auto& [ma, va] = pa.methods[j];
            const auto& [mb, vb] = pb.methods[j];
            if (ma != mb || va.mse_bl != vb.mse_bl || va.mse_al_coeff != vb.mse_al_coeff ||
                va.mse_al_time != vb.mse_al_time || va.singular_count != vb.singular_count) {
                return false;
            }
        }
        for (std::size_t j = 0; j < pa.restorers.size(); ++j) {
            const auto& [ra, va] = pa.restorers[j];
            const auto& [rb, vb] = pb.restorers[j];
            if (ra != rb || va.aesnr_emp != vb.aesnr_emp || va.aesnr_theory != vb.aesnr_theory) {
                return false;
            }
        }
    }
    return true;
}

} // namespace cranest
