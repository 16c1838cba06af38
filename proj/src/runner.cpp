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

#include "ancsim/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "ancsim/csv.hpp"
#include "ancsim/outage.hpp"
#include "ancsim/parallel.hpp"

namespace ancsim {

namespace {

constexpr Eigen::Index k_ref_dest = 0; // reference destination D_1

struct CellContext {
    std::vector<NetworkTopology<double>> topologies;
    PowerAllocation<double> alloc;
    NoisePowers<double> sigma2;
};

CellContext make_context(const ExperimentConfig &cfg) {
    CellContext ctx;
    ctx.topologies = build_symmetric_sweep(cfg.sweep);
    ctx.alloc = allocate(cfg.p_total,
                         Vec<double>(Eigen::Map<const Vec<double>>(
                             cfg.psi.data(), static_cast<Eigen::Index>(cfg.psi.size()))));
    ctx.sigma2.sigma2_dest = Vec<double>::Constant(cfg.sweep.num_pairs, cfg.sigma2_dest);
    ctx.sigma2.sigma2_relay = cfg.sigma2_relay;
    return ctx;
}

// Per-draw closed-form samples of one ensemble block.
struct VarianceBlock {
    std::vector<double> total;
    std::vector<double> relay_gain;
    std::vector<double> ratio_sum;
    std::uint64_t n_floored = 0;
};

} // namespace

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
    // splitmix64 finalizer over master + index increments; any two distinct
    // (master, index) pairs land on effectively unrelated seeds.
    std::uint64_t z = master + (index + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d649bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<VarianceRow> run_variance_sweep(const ExperimentConfig &cfg, unsigned workers) {
    if (!cfg.has_ensemble)
        throw std::invalid_argument("config.ensemble: required for mode variance_sweep");
    const CellContext ctx = make_context(cfg);
    const std::size_t n_points = ctx.topologies.size();
    const std::uint64_t n_draws = cfg.ensemble_draws;
    const std::uint64_t n_blocks = (n_draws + k_trials_per_block - 1) / k_trials_per_block;

    std::vector<VarianceRow> rows;
    rows.reserve(cfg.correlation.size() * n_points);
    for (std::size_t e = 0; e < cfg.correlation.size(); ++e) {
        const CorrelationEntry &entry = cfg.correlation[e];
        for (std::size_t p = 0; p < n_points; ++p) {
            const NetworkTopology<double> &topo = ctx.topologies[p];
            const std::uint64_t cell_seed =
                mix_seed(cfg.ensemble_seed, static_cast<std::uint64_t>(e * n_points + p));

            const std::vector<VarianceBlock> blocks = run_blocks<VarianceBlock>(
                static_cast<std::size_t>(n_blocks), workers, [&](std::size_t block) {
                    Rng rng = Rng::substream(cell_seed, static_cast<std::uint64_t>(block));
                    const std::uint64_t lo =
                        static_cast<std::uint64_t>(block) * k_trials_per_block;
                    const std::uint64_t hi =
                        std::min<std::uint64_t>(lo + k_trials_per_block, n_draws);
                    VarianceBlock out;
                    out.total.reserve(static_cast<std::size_t>(hi - lo));
                    out.relay_gain.reserve(static_cast<std::size_t>(hi - lo));
                    out.ratio_sum.reserve(static_cast<std::size_t>(hi - lo));
                    for (std::uint64_t t = lo; t < hi; ++t) {
                        const ChannelRealization<double> h = sample_channels(entry.spec, rng);
                        const double a_f =
                            amplification_factor(ctx.alloc, topo, h, ctx.sigma2.sigma2_relay);
                        const VarianceTerms<double> terms =
                            noise_variance_terms(k_ref_dest, topo, ctx.alloc, h, a_f, ctx.sigma2);
                        out.total.push_back(terms.total);
                        out.relay_gain.push_back(terms.relay_gain);
                        out.ratio_sum.push_back(terms.ratio_sum);
                        out.n_floored += static_cast<std::uint64_t>(terms.n_floored);
                    }
                    return out;
                });

            std::vector<double> totals, t2s, t3s;
            totals.reserve(static_cast<std::size_t>(n_draws));
            t2s.reserve(static_cast<std::size_t>(n_draws));
            t3s.reserve(static_cast<std::size_t>(n_draws));
            std::uint64_t n_floored = 0;
            for (const VarianceBlock &b : blocks) {
                totals.insert(totals.end(), b.total.begin(), b.total.end());
                t2s.insert(t2s.end(), b.relay_gain.begin(), b.relay_gain.end());
                t3s.insert(t3s.end(), b.ratio_sum.begin(), b.ratio_sum.end());
                n_floored += b.n_floored;
            }

            VarianceRow row;
            row.distance_ref = cfg.sweep.d_cross[p];
            row.rho = entry.label;
            row.statistic_value = eval_statistic(std::move(totals), cfg.statistic);
            row.term2_statistic = eval_statistic(std::move(t2s), cfg.statistic);
            row.term3_statistic = eval_statistic(std::move(t3s), cfg.statistic);
            row.n_floored = n_floored;
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<OutageRow> run_outage_sweep(const ExperimentConfig &cfg, unsigned workers) {
    if (!cfg.has_outage)
        throw std::invalid_argument("config.outage: required for mode outage_sweep");
    const CellContext ctx = make_context(cfg);
    const std::size_t n_points = ctx.topologies.size();

    std::vector<OutageRow> rows;
    rows.reserve(cfg.correlation.size() * n_points);
    for (std::size_t e = 0; e < cfg.correlation.size(); ++e) {
        const CorrelationEntry &entry = cfg.correlation[e];
        for (std::size_t p = 0; p < n_points; ++p) {
            const std::uint64_t cell_seed =
                mix_seed(cfg.outage_seed, static_cast<std::uint64_t>(e * n_points + p));
            const OutageResult<double> result =
                estimate_outage(ctx.topologies[p], ctx.alloc, entry.spec, ctx.sigma2,
                                cfg.beta_linear, cfg.outage_trials, cell_seed, workers);
            OutageRow row;
            row.distance_ref = cfg.sweep.d_cross[p];
            row.rho = entry.label;
            row.p_out = result.p_out;
            row.ci_halfwidth = result.ci_halfwidth;
            row.n_trials = result.n_trials;
            row.seed = cell_seed;
            rows.push_back(row);
        }
    }
    return rows;
}

OracleReport run_oracle_check(const ExperimentConfig &cfg, unsigned workers) {
    return run_oracle_check_with(
        cfg, workers,
        [](Eigen::Index dest, const NetworkTopology<double> &topo,
           const PowerAllocation<double> &alloc, const ChannelRealization<double> &h, double a_f,
           const NoisePowers<double> &sigma2) {
            return noise_variance(dest, topo, alloc, h, a_f, sigma2);
        });
}

OracleReport run_oracle_check_with(const ExperimentConfig &cfg, unsigned workers,
                                   const VarianceFn &closed_form) {
    if (!cfg.has_oracle)
        throw std::invalid_argument("config.oracle: required for mode oracle_check");
    if (cfg.correlation.empty())
        throw std::invalid_argument("config.correlation: must provide at least one setting");
    const CellContext ctx = make_context(cfg);
    const NetworkTopology<double> &topo = ctx.topologies.front();
    const CorrelationSpec<double> &spec = cfg.correlation.front().spec;

    OracleReport report;
    report.rows.reserve(static_cast<std::size_t>(cfg.oracle_realizations));
    for (std::uint64_t r = 0; r < cfg.oracle_realizations; ++r) {
        const std::uint64_t row_seed = mix_seed(cfg.oracle_seed, r);
        // s1 = 1 keeps the channel draw off the noise substreams (s1 = 0)
        Rng channel_rng = Rng::substream(row_seed, 0, 1);
        const ChannelRealization<double> h = sample_channels(spec, channel_rng);
        const double a_f = amplification_factor(ctx.alloc, topo, h, ctx.sigma2.sigma2_relay);
        const VarianceTerms<double> terms =
            noise_variance_terms(k_ref_dest, topo, ctx.alloc, h, a_f, ctx.sigma2);
        const double closed = closed_form(k_ref_dest, topo, ctx.alloc, h, a_f, ctx.sigma2);
        const double empirical = residual_variance_oracle(
            k_ref_dest, topo, ctx.alloc, h, ctx.sigma2, cfg.oracle_noise_draws, row_seed, workers);

        OracleRow row;
        row.realization = r;
        row.seed = row_seed;
        row.closed_form = closed;
        row.empirical = empirical;
        if (closed == 0.0)
            row.rel_error = (empirical == 0.0) ? 0.0 : std::numeric_limits<double>::infinity();
        else
            row.rel_error = std::abs(empirical - closed) / std::abs(closed);
        row.n_floored = static_cast<std::uint64_t>(terms.n_floored);
        report.rows.push_back(row);
        report.max_rel_error = std::max(report.max_rel_error, row.rel_error);
        if (!(row.rel_error <= 0.02))
            report.ok = false;
    }
    return report;
}

void write_csv(std::ostream &os, const std::vector<VarianceRow> &rows) {
    os << "distance_ref,rho,statistic_value,term2_statistic,term3_statistic,n_floored\n";
    for (const VarianceRow &r : rows)
        csv::write_row(os, {csv::field(r.distance_ref), csv::field(r.rho),
                            csv::field(r.statistic_value), csv::field(r.term2_statistic),
                            csv::field(r.term3_statistic), csv::field(r.n_floored)});
}

void write_csv(std::ostream &os, const std::vector<OutageRow> &rows) {
    os << "distance_ref,rho,p_out,ci_halfwidth,n_trials,seed\n";
    for (const OutageRow &r : rows)
        csv::write_row(os, {csv::field(r.distance_ref), csv::field(r.rho), csv::field(r.p_out),
                            csv::field(r.ci_halfwidth), csv::field(r.n_trials),
                            csv::field(r.seed)});
}

void write_csv(std::ostream &os, const OracleReport &report) {
    os << "realization,seed,closed_form,empirical,rel_error,n_floored\n";
    for (const OracleRow &r : report.rows)
        csv::write_row(os, {csv::field(r.realization), csv::field(r.seed),
                            csv::field(r.closed_form), csv::field(r.empirical),
                            csv::field(r.rel_error), csv::field(r.n_floored)});
}

int run_experiment(const ExperimentConfig &cfg, std::ostream &log) {
    require_mode_section(cfg);
    const unsigned workers = cfg.workers;
    std::ofstream out(cfg.output_path, std::ios::binary); // binary: identical bytes everywhere
    if (!out)
        throw std::invalid_argument("config.output.path: cannot open '" + cfg.output_path + "'");

    switch (cfg.mode) {
    case RunMode::variance_sweep: {
        log << "[ancsim] variance_sweep: " << cfg.sweep.d_cross.size() << " points x "
            << cfg.correlation.size() << " correlation settings, " << cfg.ensemble_draws
            << " draws/cell\n";
        const std::vector<VarianceRow> rows = run_variance_sweep(cfg, workers);
        write_csv(out, rows);
        log << "[ancsim] wrote " << rows.size() << " rows to " << cfg.output_path << "\n";
        return 0;
    }
    case RunMode::outage_sweep: {
        log << "[ancsim] outage_sweep: " << cfg.sweep.d_cross.size() << " points x "
            << cfg.correlation.size() << " correlation settings, " << cfg.outage_trials
            << " trials/cell\n";
        const std::vector<OutageRow> rows = run_outage_sweep(cfg, workers);
        write_csv(out, rows);
        log << "[ancsim] wrote " << rows.size() << " rows to " << cfg.output_path << "\n";
        return 0;
    }
    case RunMode::oracle_check: {
        log << "[ancsim] oracle_check: " << cfg.oracle_realizations << " realizations x "
            << cfg.oracle_noise_draws << " noise draws\n";
        const OracleReport report = run_oracle_check(cfg, workers);
        write_csv(out, report);
        log << "[ancsim] wrote " << report.rows.size() << " rows to " << cfg.output_path << "\n";
        log << "[ancsim] max relative error " << report.max_rel_error << "\n";
        if (!report.ok) {
            const CorrelationSpec<double> &spec = cfg.correlation.front().spec;
            for (const OracleRow &r : report.rows) {
                if (r.rel_error <= 0.02)
                    continue;
                log << "[ancsim] realization " << r.realization << " (seed " << r.seed
                    << "): closed form " << r.closed_form << ", empirical " << r.empirical
                    << ", relative error " << r.rel_error << "\n";
                Rng channel_rng = Rng::substream(r.seed, 0, 1);
                const ChannelRealization<double> h = sample_channels(spec, channel_rng);
                log << "[ancsim]   h_source_dest =\n" << h.h_source_dest << "\n";
                log << "[ancsim]   h_source_relay = " << h.h_source_relay.transpose() << "\n";
                log << "[ancsim]   h_relay_dest   = " << h.h_relay_dest.transpose() << "\n";
            }
            log << "[ancsim] oracle gate FAILED (tolerance 0.02)\n";
            return 3;
        }
        log << "[ancsim] oracle gate passed (tolerance 0.02)\n";
        return 0;
    }
    }
    throw std::logic_error("Unhandled run mode.");
}

} // namespace ancsim
