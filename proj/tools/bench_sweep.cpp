// SPDX-License-Identifier: Apache-2.0
//
// Benchmark: serial direct-kernel reference sweep vs the optimized OpenMP
// sweep, with an agreement check between the two and a bit-identity check
// across worker counts.

#include "cranest/reference.hpp"
#include "cranest/sweep.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>

namespace {

using namespace cranest;

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_rel_diff(const SweepResult& a, const SweepResult& b)
{
    double worst = 0.0;
    auto update = [&worst](double x, double y) {
        const double scale = std::max({std::abs(x), std::abs(y), 1e-300});
        worst = std::max(worst, std::abs(x - y) / scale);
    };
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        for (std::size_t j = 0; j < a.points[i].methods.size(); ++j) {
            update(a.points[i].methods[j].second.mse_bl, b.points[i].methods[j].second.mse_bl);
            update(a.points[i].methods[j].second.mse_al_coeff,
                   b.points[i].methods[j].second.mse_al_coeff);
            update(a.points[i].methods[j].second.mse_al_time,
                   b.points[i].methods[j].second.mse_al_time);
        }
        for (std::size_t j = 0; j < a.points[i].restorers.size(); ++j) {
            update(a.points[i].restorers[j].second.aesnr_emp,
                   b.points[i].restorers[j].second.aesnr_emp);
        }
    }
    return worst;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Timing comparison: serial reference kernels vs OpenMP sweep"};
    std::size_t trials = 500;
    std::string snr_text = "0,10,20,30";
    unsigned workers = 0;
    app.add_option("--trials", trials, "trials per SNR point");
    app.add_option("--snr", snr_text, "comma list of SNR points (dB)");
    app.add_option("--workers", workers, "parallel worker count (0 = all)");
    CLI11_PARSE(app, argc, argv);

    SweepConfig cfg;
    cfg.trials_per_point = trials;
    cfg.snr_points_db.clear();
    std::size_t pos = 0;
    while (pos <= snr_text.size()) {
        const std::size_t comma = snr_text.find(',', pos);
        cfg.snr_points_db.push_back(
            std::stod(snr_text.substr(pos, comma == std::string::npos ? comma : comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }

    const ValidatedParams base = validate(SystemParams{});

    auto t0 = std::chrono::steady_clock::now();
    cfg.workers = 1;
    const SweepResult serial = run_sweep(cfg, base);
    const double t_serial = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    cfg.workers = workers;
    const SweepResult parallel = run_sweep(cfg, base);
    const double t_parallel = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const SweepResult reference = reference::run_sweep(cfg, base);
    const double t_reference = seconds_since(t0);

    std::printf("reference (serial direct kernels): %8.3f s\n", t_reference);
    std::printf("optimized, 1 worker:               %8.3f s  (%.2fx vs reference)\n", t_serial,
                t_reference / t_serial);
    std::printf("optimized, %u worker(s):           %8.3f s  (%.2fx vs 1 worker)\n",
                workers == 0 ? 0 : workers, t_parallel, t_serial / t_parallel);

    const double rel = max_rel_diff(reference, parallel);
    const bool bit_identical = identical(serial, parallel);
    std::printf("reference vs optimized max rel diff: %.3g\n", rel);
    std::printf("1 worker vs %u workers bit-identical: %s\n", workers,
                bit_identical ? "yes" : "NO");

    if (rel > 1e-9 || !bit_identical) {
        std::fprintf(stderr, "benchmark agreement check failed\n");
        return 1;
    }
    return 0;
}
