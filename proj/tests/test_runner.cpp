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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ancsim/csv.hpp"
#include "ancsim/outage.hpp"
#include "ancsim/runner.hpp"

using namespace ancsim;

namespace {

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const char *k_single_point_variance = R"({
  "schema_version": 1,
  "mode": "variance_sweep",
  "topology": {
    "alpha": 4.0,
    "sweep": {"points": {"cross": [200.0], "direct": [400.0], "relay": [223.6]}}
  },
  "power": {"p_total": 2.0, "psi": [0.375, 0.375]},
  "noise": {"model": "thermal", "bandwidth_hz": 22.0e6},
  "correlation": {"rho": [0.0]},
  "ensemble": {"n_draws": 5000, "seed": 909},
  "output": {"path": "unused.csv"}
})";

const char *k_two_point_variance = R"({
  "schema_version": 1,
  "mode": "variance_sweep",
  "topology": {
    "alpha": 4.0,
    "sweep": {"points": {"cross": [200.0, 300.0], "direct": [400.0, 500.0],
                          "relay": [223.6, 250.0]}}
  },
  "power": {"p_total": 2.0, "psi": [0.375, 0.375]},
  "noise": {"model": "thermal", "bandwidth_hz": 22.0e6},
  "correlation": {"rho": [0.0, 0.9]},
  "ensemble": {"n_draws": 20000, "seed": 31},
  "output": {"path": "unused.csv"}
})";

const char *k_mid_outage = R"({
  "schema_version": 1,
  "mode": "outage_sweep",
  "topology": {
    "alpha": 4.0,
    "sweep": {"points": {"cross": [1500.0], "direct": [1700.0],
                          "relay": [1138.7212121212121]}}
  },
  "power": {"p_total": 2.0, "psi": [0.375, 0.375]},
  "noise": {"model": "thermal", "bandwidth_hz": 22.0e6},
  "correlation": {"rho": [0.5]},
  "outage": {"beta_db": 0.0, "n_trials": 20000, "seed": 5},
  "output": {"path": "unused.csv"}
})";

const char *k_trivial_outage = R"({
  "schema_version": 1,
  "mode": "outage_sweep",
  "topology": {
    "alpha": 4.0,
    "sweep": {"points": {"cross": [200.0], "direct": [400.0], "relay": [223.6]}}
  },
  "power": {"p_total": 2.0, "psi": [0.375, 0.375]},
  "noise": {"model": "fixed", "sigma2_dest": 1.0e-30, "sigma2_relay": 1.0e-30},
  "correlation": {"rho": [0.0, 0.5]},
  "outage": {"beta_db": 0.0, "n_trials": 2000, "seed": 17},
  "output": {"path": "ancsim_test_outage_run.csv"}
})";

const char *k_oracle = R"({
  "schema_version": 1,
  "mode": "oracle_check",
  "topology": {
    "alpha": 4.0,
    "sweep": {"points": {"cross": [200.0], "direct": [400.0], "relay": [223.6]}}
  },
  "power": {"p_total": 2.0, "psi": [0.375, 0.375]},
  "noise": {"model": "thermal", "bandwidth_hz": 22.0e6},
  "correlation": {"rho": [0.5]},
  "oracle": {"n_realizations": 3, "n_noise_draws": 50000, "seed": 7070},
  "output": {"path": "ancsim_test_oracle_run.csv"}
})";

} // namespace

TEST_SUITE("runner") {

TEST_CASE("mix_seed is deterministic and collision-free over a sweep") {
    CHECK(mix_seed(424242, 0) == mix_seed(424242, 0));
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i)
        seen.insert(mix_seed(99, i));
    CHECK(seen.size() == 1000);
    CHECK(mix_seed(1, 5) != mix_seed(2, 5));
}

TEST_CASE("the variance sweep is exactly the library pipeline") {
    const ExperimentConfig cfg = parse_config(k_single_point_variance);
    const std::vector<VarianceRow> rows = run_variance_sweep(cfg, 1);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].distance_ref == 200.0);
    CHECK(rows[0].rho == 0.0);

    // replay the single cell by hand: one block, substream 0 of the cell seed
    const NetworkTopology<double> topo =
        make_symmetric_topology<double>(2, 4.0, 200.0, 400.0, 223.6);
    const PowerAllocation<double> alloc =
        allocate<double>(cfg.p_total, Eigen::Map<const Vec<double>>(cfg.psi.data(), 2));
    const NoisePowers<double> sigma2 = {Vec<double>::Constant(2, cfg.sigma2_dest),
                                        cfg.sigma2_relay};
    Rng rng = Rng::substream(mix_seed(cfg.ensemble_seed, 0), 0);
    std::vector<double> totals, t2s, t3s;
    std::uint64_t n_floored = 0;
    for (std::uint64_t t = 0; t < cfg.ensemble_draws; ++t) {
        const ChannelRealization<double> h = sample_channels(cfg.correlation[0].spec, rng);
        const double a_f = amplification_factor(alloc, topo, h, sigma2.sigma2_relay);
        const VarianceTerms<double> terms = noise_variance_terms(0, topo, alloc, h, a_f, sigma2);
        totals.push_back(terms.total);
        t2s.push_back(terms.relay_gain);
        t3s.push_back(terms.ratio_sum);
        n_floored += static_cast<std::uint64_t>(terms.n_floored);
    }
    CHECK(rows[0].statistic_value == eval_statistic(std::move(totals), cfg.statistic));
    CHECK(rows[0].term2_statistic == eval_statistic(std::move(t2s), cfg.statistic));
    CHECK(rows[0].term3_statistic == eval_statistic(std::move(t3s), cfg.statistic));
    CHECK(rows[0].n_floored == n_floored);
}

TEST_CASE("variance rows do not depend on the worker count") {
    const ExperimentConfig cfg = parse_config(k_two_point_variance);
    const std::vector<VarianceRow> a = run_variance_sweep(cfg, 1);
    const std::vector<VarianceRow> b = run_variance_sweep(cfg, 3);
    REQUIRE(a.size() == 4); // rho-major: (0,p0) (0,p1) (0.9,p0) (0.9,p1)
    REQUIRE(b.size() == 4);
    CHECK(a[0].rho == 0.0);
    CHECK(a[2].rho == 0.9);
    CHECK(a[1].distance_ref == 300.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].statistic_value == b[i].statistic_value);
        CHECK(a[i].term2_statistic == b[i].term2_statistic);
        CHECK(a[i].term3_statistic == b[i].term3_statistic);
        CHECK(a[i].n_floored == b[i].n_floored);
    }
}

TEST_CASE("the outage sweep forwards per-cell seeds to the estimator") {
    const ExperimentConfig cfg = parse_config(k_mid_outage);
    const std::vector<OutageRow> rows = run_outage_sweep(cfg, 2);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].seed == mix_seed(5, 0));
    CHECK(rows[0].n_trials == 20000);

    const NetworkTopology<double> topo =
        make_symmetric_topology<double>(2, 4.0, 1500.0, 1700.0, 1138.7212121212121);
    const PowerAllocation<double> alloc =
        allocate<double>(cfg.p_total, Eigen::Map<const Vec<double>>(cfg.psi.data(), 2));
    const NoisePowers<double> sigma2 = {Vec<double>::Constant(2, cfg.sigma2_dest),
                                        cfg.sigma2_relay};
    const OutageResult<double> direct = estimate_outage(
        topo, alloc, cfg.correlation[0].spec, sigma2, cfg.beta_linear, 20000, mix_seed(5, 0), 2);
    CHECK(rows[0].p_out == direct.p_out);
    CHECK(rows[0].ci_halfwidth == direct.ci_halfwidth);
    CHECK(rows[0].p_out > 0.3); // mid-range point
    CHECK(rows[0].p_out < 0.8);
}

TEST_CASE("an essentially noiseless network never drops below threshold") {
    const ExperimentConfig cfg = parse_config(k_trivial_outage);
    const std::vector<OutageRow> rows = run_outage_sweep(cfg, 1);
    REQUIRE(rows.size() == 2);
    for (const OutageRow &r : rows) {
        CHECK(r.p_out == 0.0);
        CHECK(r.ci_halfwidth == 0.0);
    }
}

TEST_CASE("csv fields are locale-free shortest forms") {
    CHECK(csv::field(1.0) == "1");
    CHECK(csv::field(0.5) == "0.5");
    CHECK(csv::field(200.0) == "200");
    CHECK(csv::field(std::uint64_t{0}) == "0");
    CHECK(csv::field(std::uint64_t{123456789012345}) == "123456789012345");
    const double v = 8.758357752176968e-14;
    CHECK(std::strtod(csv::field(v).c_str(), nullptr) == v); // round-trips
    CHECK(csv::field(std::string("plain")) == "plain");
    CHECK(csv::field(std::string("a,b")) == "\"a,b\"");
    CHECK(csv::field(std::string("say \"hi\"")) == "\"say \"\"hi\"\"\"");
    CHECK(csv::field(std::string("line\nbreak")) == "\"line\nbreak\"");
    std::ostringstream os;
    csv::write_row(os, {"a", "b,c", "1"});
    CHECK(os.str() == "a,\"b,c\",1\n");
}

TEST_CASE("csv writers emit the documented schemas byte for byte") {
    VarianceRow vrow;
    vrow.distance_ref = 200.0;
    vrow.rho = 0.9;
    vrow.statistic_value = 1.5;
    vrow.term2_statistic = 0.25;
    vrow.term3_statistic = 2.0;
    vrow.n_floored = 7;
    std::ostringstream vs;
    write_csv(vs, std::vector<VarianceRow>{vrow});
    CHECK(vs.str() == "distance_ref,rho,statistic_value,term2_statistic,term3_statistic,"
                      "n_floored\n200,0.9,1.5,0.25,2,7\n");

    std::ostringstream os;
    write_csv(os, std::vector<OutageRow>{});
    CHECK(os.str() == "distance_ref,rho,p_out,ci_halfwidth,n_trials,seed\n");

    std::ostringstream ors;
    write_csv(ors, OracleReport{});
    CHECK(ors.str() == "realization,seed,closed_form,empirical,rel_error,n_floored\n");
}

TEST_CASE("identical runs produce identical csv bytes") {
    ExperimentConfig cfg = parse_config(k_two_point_variance);
    cfg.ensemble_draws = 4000;
    std::ostringstream a, b;
    write_csv(a, run_variance_sweep(cfg, 1));
    write_csv(b, run_variance_sweep(cfg, 3));
    CHECK(a.str() == b.str());
    CHECK(a.str().find("distance_ref") == 0);
}

TEST_CASE("run_experiment writes reproducible files and logs progress") {
    ExperimentConfig cfg = parse_config(k_trivial_outage);
    std::ostringstream log1, log2;
    cfg.output_path = "ancsim_test_run_a.csv";
    REQUIRE(run_experiment(cfg, log1) == 0);
    cfg.output_path = "ancsim_test_run_b.csv";
    REQUIRE(run_experiment(cfg, log2) == 0);
    const std::string a = slurp("ancsim_test_run_a.csv");
    const std::string b = slurp("ancsim_test_run_b.csv");
    CHECK(a == b);
    CHECK(a.rfind("distance_ref,rho,p_out,ci_halfwidth,n_trials,seed\n", 0) == 0);
    CHECK(log1.str().find("[ancsim] outage_sweep") != std::string::npos);
    CHECK(log1.str().find("wrote 2 rows") != std::string::npos);
    std::remove("ancsim_test_run_a.csv");
    std::remove("ancsim_test_run_b.csv");
}

TEST_CASE("the oracle gate passes honestly at realistic draw counts") {
    const ExperimentConfig cfg = parse_config(k_oracle);
    const OracleReport report = run_oracle_check(cfg, 2);
    REQUIRE(report.rows.size() == 3);
    CHECK(report.ok);
    CHECK(report.max_rel_error < 0.02);
    for (std::size_t r = 0; r < report.rows.size(); ++r) {
        CHECK(report.rows[r].realization == r);
        CHECK(report.rows[r].seed == mix_seed(7070, r));
        CHECK(report.rows[r].closed_form > 0.0);
        CHECK(report.rows[r].rel_error ==
              std::abs(report.rows[r].empirical - report.rows[r].closed_form) /
                  report.rows[r].closed_form);
    }
}

TEST_CASE("the oracle gate catches a corrupted closed form") {
    const ExperimentConfig cfg = parse_config(k_oracle);
    const OracleReport off = run_oracle_check_with(
        cfg, 2,
        [](Eigen::Index dest, const NetworkTopology<double> &topo,
           const PowerAllocation<double> &alloc, const ChannelRealization<double> &h, double a_f,
           const NoisePowers<double> &sigma2) {
            return 1.1 * noise_variance(dest, topo, alloc, h, a_f, sigma2);
        });
    CHECK(!off.ok);
    CHECK(off.max_rel_error > 0.05); // ~ 1 - 1/1.1

    const OracleReport zero = run_oracle_check_with(
        cfg, 2,
        [](Eigen::Index, const NetworkTopology<double> &, const PowerAllocation<double> &,
           const ChannelRealization<double> &, double, const NoisePowers<double> &) {
            return 0.0;
        });
    CHECK(!zero.ok);
    CHECK(std::isinf(zero.max_rel_error));
}

TEST_CASE("a failed oracle gate exits 3 and dumps the offending draws") {
    ExperimentConfig cfg = parse_config(k_oracle);
    cfg.oracle_noise_draws = 2; // two draws cannot estimate a variance to 2%
    cfg.oracle_seed = 11;
    cfg.output_path = "ancsim_test_oracle_fail.csv";
    std::ostringstream log;
    CHECK(run_experiment(cfg, log) == 3);
    CHECK(log.str().find("oracle gate FAILED") != std::string::npos);
    CHECK(log.str().find("h_source_dest") != std::string::npos);
    CHECK(log.str().find("seed") != std::string::npos);
    const std::string out = slurp("ancsim_test_oracle_fail.csv");
    CHECK(out.rfind("realization,seed,closed_form,empirical,rel_error,n_floored\n", 0) == 0);
    std::remove("ancsim_test_oracle_fail.csv");
}

TEST_CASE("sweep runners demand their config section") {
    const ExperimentConfig cfg = parse_config(k_trivial_outage);
    CHECK_THROWS_AS(run_variance_sweep(cfg, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_oracle_check(cfg, 1), std::invalid_argument);
}

} // TEST_SUITE
