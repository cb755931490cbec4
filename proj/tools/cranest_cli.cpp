// SPDX-License-Identifier: Apache-2.0
//
// Command line front end: `sweep` produces the MSE / AESNR curves as CSV,
// `verify` runs the property suites, `crb` prints the analytic bounds.
// Exit codes: 0 success, 1 verification failure, 2 configuration error.

#include "cranest/channel.hpp"
#include "cranest/config.hpp"
#include "cranest/estimator.hpp"
#include "cranest/sweep.hpp"
#include "cranest/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace {

using namespace cranest;

std::vector<double> parse_snr_grid(const std::string& text)
{
    std::vector<double> out;
    const std::size_t c1 = text.find(':');
    if (c1 != std::string::npos) {
        const std::size_t c2 = text.find(':', c1 + 1);
        if (c2 == std::string::npos) {
            throw ConfigError(ConfigErrorKind::BadValue, "--snr range must be start:step:stop");
        }
        const double start = std::stod(text.substr(0, c1));
        const double step = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        const double stop = std::stod(text.substr(c2 + 1));
        if (!(step > 0.0)) {
            throw ConfigError(ConfigErrorKind::BadValue, "--snr step must be positive");
        }
        for (double v = start; v <= stop + 1e-9; v += step) out.push_back(v);
        return out;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string item = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (!item.empty()) out.push_back(std::stod(item));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) {
        throw ConfigError(ConfigErrorKind::BadValue, "--snr grid is empty");
    }
    return out;
}

SystemParams assemble_params(const std::string& config_path,
                             const std::vector<std::string>& overrides)
{
    std::map<std::string, std::string> kv;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            throw ConfigError(ConfigErrorKind::Io, "cannot open config file '" + config_path + "'");
        }
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        kv = parse_config_text(text);
    }
    for (const std::string& ov : overrides) {
        const std::size_t eq = ov.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(ConfigErrorKind::BadValue, "--set expects key=value, got '" + ov + "'");
        }
        kv[ov.substr(0, eq)] = ov.substr(eq + 1);
    }
    return params_from_kv(kv);
}

int run_sweep_command(const SystemParams& sys, const SweepConfig& cfg,
                      const std::string& dump_channels)
{
    const ValidatedParams base = validate(sys);
    const SweepResult result = run_sweep(cfg, base);
    std::printf("wrote %s (%zu SNR points, %zu trials each)\n", cfg.output_path.c_str(),
                result.points.size(), cfg.trials_per_point);

    if (!dump_channels.empty()) {
        // Debug hook: realizations of the first sweep point.
        const ValidatedParams params = params_at_snr(base, cfg.snr_points_db.front());
        std::vector<ChannelRealization> dump;
        dump.reserve(cfg.trials_per_point);
        for (std::size_t t = 0; t < cfg.trials_per_point; ++t) {
            RngStream bem(params.seed, trial_stream(0, t, StreamPurpose::BemCoefficients));
            RngStream gain(params.seed, trial_stream(0, t, StreamPurpose::BackhaulGain));
            dump.push_back(draw_realization(params, bem, gain));
        }
        std::ofstream out(dump_channels, std::ios::binary);
        if (!out) {
            throw IoError("cannot open '" + dump_channels + "' for writing");
        }
        out << channels_to_csv(dump);
        std::printf("wrote %s\n", dump_channels.c_str());
    }
    return 0;
}

int run_verify_command(const SystemParams& sys)
{
    const ValidatedParams params = validate(sys);
    const std::vector<CheckResult> checks = run_property_checks(params);
    bool all_pass = true;
    for (const CheckResult& c : checks) {
        std::printf("%-40s %s  (%s)\n", c.name.c_str(), c.pass ? "PASS" : "FAIL",
                    c.detail.c_str());
        all_pass = all_pass && c.pass;
    }
    return all_pass ? 0 : 1;
}

int run_crb_command(const SystemParams& sys, const std::string& snr_text)
{
    const ValidatedParams base = validate(sys);
    const std::vector<double> grid = parse_snr_grid(snr_text);
    std::printf("snr_db,v_n,crb_lambda,crb_g,mse_g_map,mse_g_ml\n");
    for (double snr : grid) {
        const ValidatedParams p = params_at_snr(base, snr);
        // Reference channel: |g|^2 = v_g, |lambda_q|^2 = v_q.
        const cxd g_ref{std::sqrt(p.v_g), 0.0};
        CVec lambda_ref(p.bem_size());
        for (std::size_t i = 0; i < lambda_ref.size(); ++i) {
            lambda_ref[i] = cxd{std::sqrt(p.v_q_profile[i]), 0.0};
        }
        const CrbValues bounds = crb(p, g_ref, lambda_ref);
        const GainMse mse = analytic_mse_g(p, lambda_ref);
        std::printf("%g,%.12g,%.12g,%.12g,%.12g,%.12g\n", snr, p.v_n, bounds.crb_lambda.front(),
                    bounds.crb_g, mse.map_mse, mse.ml_mse);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Superimposed-segment training and basis-expansion channel estimation harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "key = value configuration file")->configurable(false);
    app.add_option("--set", overrides, "override a config key, e.g. --set epsilon=0.4");

    auto* sweep_cmd = app.add_subcommand("sweep", "run the Monte Carlo SNR sweep, emit CSV");
    sweep_cmd->fallthrough();
    SweepConfig sweep_cfg;
    std::string snr_text = "0:5:30";
    std::string methods_text = "map,ml";
    std::string restorers_text = "owa,baseline";
    std::string dump_channels;
    std::uint64_t seed_override = 0;
    bool have_seed = false;
    sweep_cmd->add_option("--snr", snr_text, "grid: start:step:stop or comma list (dB)");
    sweep_cmd->add_option("--trials", sweep_cfg.trials_per_point, "trials per SNR point");
    sweep_cmd->add_option("--out", sweep_cfg.output_path, "output CSV path")->required();
    sweep_cmd->add_option("--workers", sweep_cfg.workers, "worker threads (0 = all)");
    sweep_cmd->add_option("--methods", methods_text, "subset of map,ml");
    sweep_cmd->add_option("--restorers", restorers_text, "subset of owa,baseline");
    sweep_cmd->add_option("--dump-channels", dump_channels,
                          "also dump first-point channel realizations to this CSV");
    sweep_cmd->add_option("--seed", seed_override, "override the RNG seed")
        ->each([&](const std::string&) { have_seed = true; });

    auto* verify_cmd = app.add_subcommand("verify", "run the property suites");
    verify_cmd->fallthrough();
    verify_cmd->add_option("--seed", seed_override, "override the RNG seed")
        ->each([&](const std::string&) { have_seed = true; });

    auto* crb_cmd = app.add_subcommand("crb", "print analytic bounds per SNR point");
    crb_cmd->fallthrough();
    std::string crb_snr_text = "0:5:30";
    crb_cmd->add_option("--snr", crb_snr_text, "grid: start:step:stop or comma list (dB)");

    CLI11_PARSE(app, argc, argv);

    try {
        SystemParams sys = assemble_params(config_path, overrides);
        if (have_seed) sys.seed = seed_override;

        if (sweep_cmd->parsed()) {
            sweep_cfg.snr_points_db = parse_snr_grid(snr_text);
            sweep_cfg.methods.clear();
            for (const std::string& m : {std::string("map"), std::string("ml")}) {
                if (methods_text.find(m) != std::string::npos) {
                    sweep_cfg.methods.push_back(m == "map" ? Method::Map : Method::Ml);
                }
            }
            sweep_cfg.restorers.clear();
            if (restorers_text.find("owa") != std::string::npos) {
                sweep_cfg.restorers.push_back(Restorer::Owa);
            }
            if (restorers_text.find("baseline") != std::string::npos) {
                sweep_cfg.restorers.push_back(Restorer::Baseline);
            }
            return run_sweep_command(sys, sweep_cfg, dump_channels);
        }
        if (verify_cmd->parsed()) {
            return run_verify_command(sys);
        }
        return run_crb_command(sys, crb_snr_text);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
