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

#ifndef ANCSIM_RUNNER_HPP
#define ANCSIM_RUNNER_HPP

#include <cstdint>
#include <functional>
#include <ostream>
#include <vector>

#include "ancsim/config.hpp"

namespace ancsim {

// Column order matches the documented CSV schemas exactly.
struct VarianceRow {
    double distance_ref;       // d_{S2 D1} of the sweep point
    double rho;                // correlation label
    double statistic_value;    // chosen statistic of sigma^2_NC
    double term2_statistic;    // statistic of the relay-gain term T2
    double term3_statistic;    // statistic of the cancellation-ratio term T3
    std::uint64_t n_floored;   // floor events across the cell's ensemble
};

struct OutageRow {
    double distance_ref;
    double rho;
    double p_out;
    double ci_halfwidth;
    std::uint64_t n_trials;
    std::uint64_t seed; // per-cell seed; rerunning the cell alone reproduces the row
};

struct OracleRow {
    std::uint64_t realization;
    std::uint64_t seed;
    double closed_form;
    double empirical;
    double rel_error;
    std::uint64_t n_floored;
};

struct OracleReport {
    std::vector<OracleRow> rows;
    double max_rel_error = 0.0;
    bool ok = true; // every row within the 2% gate
};

// Deterministic per-cell seed derived from the master seed (so distinct sweep
// cells never share RNG substreams).
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index);

std::vector<VarianceRow> run_variance_sweep(const ExperimentConfig &cfg, unsigned workers);
std::vector<OutageRow> run_outage_sweep(const ExperimentConfig &cfg, unsigned workers);
OracleReport run_oracle_check(const ExperimentConfig &cfg, unsigned workers);

// Closed-form hook so the oracle gate can be shown to catch a wrong formula.
using VarianceFn = std::function<double(Eigen::Index, const NetworkTopology<double> &,
                                        const PowerAllocation<double> &,
                                        const ChannelRealization<double> &, double,
                                        const NoisePowers<double> &)>;
OracleReport run_oracle_check_with(const ExperimentConfig &cfg, unsigned workers,
                                   const VarianceFn &closed_form);

void write_csv(std::ostream &os, const std::vector<VarianceRow> &rows);
void write_csv(std::ostream &os, const std::vector<OutageRow> &rows);
void write_csv(std::ostream &os, const OracleReport &report);

// Full experiment: dispatch on cfg.mode, write the CSV to cfg.output_path,
// log progress to `log`. Returns the process exit code (0 on success, 3 when
// the oracle gate fails).
int run_experiment(const ExperimentConfig &cfg, std::ostream &log);

} // namespace ancsim

#endif
