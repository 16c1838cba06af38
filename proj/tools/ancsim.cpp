// ancsim - correlated-fading relay network simulator
// Copyright (C) 2026 the ancsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// ------------------------------------------------------------------------

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ancsim/config.hpp"
#include "ancsim/runner.hpp"

int main(int argc, char **argv) {
    CLI::App app{"ancsim - Monte Carlo study of residual noise and outage in "
                 "amplify-and-forward relay networks with analog network coding "
                 "under correlated Rayleigh fading"};

    std::string config_path;
    std::string mode_name;
    std::string out_path;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    unsigned workers = 0;

    app.add_option("--config", config_path, "JSON experiment description")
        ->required()
        ->check(CLI::ExistingFile);
    const auto *mode_opt =
        app.add_option("--mode", mode_name,
                       "override the run mode (variance_sweep | outage_sweep | oracle_check)");
    const auto *seed_opt =
        app.add_option("--seed", seed, "override the active mode's master seed");
    const auto *trials_opt = app.add_option(
        "--trials", trials, "override draws per cell / trials per cell / noise draws");
    const auto *out_opt = app.add_option("--out", out_path, "override the output CSV path");
    const auto *workers_opt =
        app.add_option("--workers", workers, "worker threads (0 = all hardware threads)");

    CLI11_PARSE(app, argc, argv);

    try {
        ancsim::ExperimentConfig cfg = ancsim::load_config(config_path);
        if (*mode_opt)
            cfg.mode = ancsim::parse_mode(mode_name);
        if (*seed_opt) {
            switch (cfg.mode) {
            case ancsim::RunMode::variance_sweep:
                cfg.ensemble_seed = seed;
                break;
            case ancsim::RunMode::outage_sweep:
                cfg.outage_seed = seed;
                break;
            case ancsim::RunMode::oracle_check:
                cfg.oracle_seed = seed;
                break;
            }
        }
        if (*trials_opt) {
            if (trials < 1)
                throw std::invalid_argument("--trials: must be >= 1");
            switch (cfg.mode) {
            case ancsim::RunMode::variance_sweep:
                cfg.ensemble_draws = trials;
                break;
            case ancsim::RunMode::outage_sweep:
                cfg.outage_trials = trials;
                break;
            case ancsim::RunMode::oracle_check:
                if (trials < 2)
                    throw std::invalid_argument("--trials: oracle_check needs >= 2 noise draws");
                cfg.oracle_noise_draws = trials;
                break;
            }
        }
        if (*out_opt)
            cfg.output_path = out_path;
        if (*workers_opt)
            cfg.workers = workers;
        ancsim::require_mode_section(cfg);
        return ancsim::run_experiment(cfg, std::cerr);
    } catch (const std::exception &e) {
        std::cerr << "[ancsim] error: " << e.what() << "\n";
        return 2;
    }
}
