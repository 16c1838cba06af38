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

#ifndef ANCSIM_CONFIG_HPP
#define ANCSIM_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ancsim/anc_noise.hpp"
#include "ancsim/channel.hpp"
#include "ancsim/topology.hpp"

namespace ancsim {

enum class RunMode { variance_sweep, outage_sweep, oracle_check };

std::string to_string(RunMode mode);
RunMode parse_mode(const std::string &name);

// One correlation setting of a sweep: either a uniform rho or an explicit
// 3x3 matrix applied to every ordered pair. `label` is what the CSV rho
// column carries (the rho value, or the (1,2) entry of an explicit matrix).
struct CorrelationEntry {
    double label = 0.0;
    CorrelationSpec<double> spec;
};

// A fully validated experiment description. All dB -> linear conversions and
// thermal-noise evaluation happen at load time; everything here is linear.
struct ExperimentConfig {
    int schema_version = 1;
    RunMode mode = RunMode::variance_sweep;

    SweepConfig<double> sweep;
    double p_total = 0.0;
    std::vector<double> psi;
    double sigma2_dest = 0.0;
    double sigma2_relay = 0.0;
    std::vector<CorrelationEntry> correlation;
    Statistic<double> statistic;

    // variance_sweep
    std::uint64_t ensemble_draws = 0;
    std::uint64_t ensemble_seed = 0;
    bool has_ensemble = false;

    // outage_sweep
    double beta_linear = 1.0;
    std::uint64_t outage_trials = 0;
    std::uint64_t outage_seed = 0;
    bool has_outage = false;

    // oracle_check
    std::uint64_t oracle_realizations = 0;
    std::uint64_t oracle_noise_draws = 0;
    std::uint64_t oracle_seed = 0;
    bool has_oracle = false;

    std::string output_path;
    unsigned workers = 0; // 0 = all hardware threads
};

// Thermal noise power over `bandwidth_hz` at -174 dBm/Hz, linear watts.
double thermal_noise_power(double bandwidth_hz);

// Parse + validate. Errors are std::invalid_argument with the offending
// config field in the message.
ExperimentConfig parse_config(const std::string &json_text);
ExperimentConfig load_config(const std::string &path);

// Checks that the section required by cfg.mode is present (used after CLI
// overrides may have switched the mode).
void require_mode_section(const ExperimentConfig &cfg);

} // namespace ancsim

#endif
