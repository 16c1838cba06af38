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

#include "ancsim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ancsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string &path, const std::string &what) {
    throw std::invalid_argument("config." + path + ": " + what);
}

const json &require(const json &j, const char *key, const std::string &path) {
    const auto it = j.find(key);
    if (it == j.end())
        fail(path + "." + key, "missing required field");
    return *it;
}

double number(const json &j, const std::string &path) {
    if (!j.is_number())
        fail(path, "expected a number");
    return j.get<double>();
}

double positive(const json &j, const std::string &path) {
    const double v = number(j, path);
    if (!(v > 0.0))
        fail(path, "must be strictly positive");
    return v;
}

std::uint64_t count(const json &j, const std::string &path) {
    if (!j.is_number_unsigned())
        fail(path, "expected a non-negative integer");
    return j.get<std::uint64_t>();
}

std::string text(const json &j, const std::string &path) {
    if (!j.is_string())
        fail(path, "expected a string");
    return j.get<std::string>();
}

std::vector<double> number_list(const json &j, const std::string &path) {
    if (!j.is_array() || j.empty())
        fail(path, "expected a non-empty array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

// Topology: either linear co-sweep ranges or explicit parallel point vectors.
SweepConfig<double> parse_topology(const json &j) {
    const std::string path = "topology";
    Eigen::Index num_pairs = 2;
    if (j.contains("num_pairs")) {
        const std::uint64_t k = count(j["num_pairs"], path + ".num_pairs");
        if (k < 1)
            fail(path + ".num_pairs", "must be >= 1");
        num_pairs = static_cast<Eigen::Index>(k);
    }
    const double alpha = number(require(j, "alpha", path), path + ".alpha");
    if (alpha < 2.0)
        fail(path + ".alpha", "pathloss exponent must be >= 2");

    const json &sweep = require(j, "sweep", path);
    const bool has_ranges = sweep.contains("ranges");
    const bool has_points = sweep.contains("points");
    if (has_ranges == has_points)
        fail(path + ".sweep", "provide exactly one of 'ranges' or 'points'");

    try {
        if (has_ranges) {
            const json &r = sweep["ranges"];
            const std::string rp = path + ".sweep.ranges";
            const std::uint64_t n = count(require(r, "n_steps", rp), rp + ".n_steps");
            if (n < 1)
                fail(rp + ".n_steps", "must be >= 1");
            auto endpoints = [&](const char *key) {
                const std::vector<double> v = number_list(require(r, key, rp), rp + "." + key);
                if (v.size() != 2)
                    fail(rp + "." + key, "expected [lo, hi]");
                if (!(v[0] > 0.0) || !(v[1] > 0.0))
                    fail(rp + "." + key, "distances must be strictly positive");
                return v;
            };
            const auto cross = endpoints("cross");
            const auto direct = endpoints("direct");
            const auto relay = endpoints("relay");
            return make_linear_sweep(num_pairs, alpha, static_cast<int>(n), cross[0], cross[1],
                                     direct[0], direct[1], relay[0], relay[1]);
        }
        const json &p = sweep["points"];
        const std::string pp = path + ".sweep.points";
        SweepConfig<double> cfg;
        cfg.num_pairs = num_pairs;
        cfg.alpha = alpha;
        cfg.d_cross = number_list(require(p, "cross", pp), pp + ".cross");
        cfg.d_direct = number_list(require(p, "direct", pp), pp + ".direct");
        cfg.d_relay = number_list(require(p, "relay", pp), pp + ".relay");
        build_symmetric_sweep(cfg); // validates lengths and positivity
        return cfg;
    } catch (const std::invalid_argument &e) {
        const std::string msg = e.what();
        if (msg.rfind("config.", 0) == 0)
            throw;
        fail(path + ".sweep", msg);
    }
}

void parse_noise(const json &j, ExperimentConfig &cfg) {
    const std::string path = "noise";
    const std::string model = text(require(j, "model", path), path + ".model");
    if (model == "thermal") {
        const double bw = positive(require(j, "bandwidth_hz", path), path + ".bandwidth_hz");
        cfg.sigma2_dest = thermal_noise_power(bw);
        cfg.sigma2_relay = cfg.sigma2_dest;
    } else if (model == "fixed") {
        cfg.sigma2_dest = number(require(j, "sigma2_dest", path), path + ".sigma2_dest");
        cfg.sigma2_relay = number(require(j, "sigma2_relay", path), path + ".sigma2_relay");
        if (cfg.sigma2_dest < 0.0 || cfg.sigma2_relay < 0.0)
            fail(path, "noise powers must be non-negative");
    } else {
        fail(path + ".model", "expected 'thermal' or 'fixed', got '" + model + "'");
    }
}

void parse_correlation(const json &j, Eigen::Index num_pairs, ExperimentConfig &cfg) {
    const std::string path = "correlation";
    const bool has_rho = j.contains("rho");
    const bool has_gamma = j.contains("gamma");
    if (has_rho == has_gamma)
        fail(path, "provide exactly one of 'rho' or 'gamma'");
    if (has_rho) {
        const std::vector<double> rhos = number_list(j["rho"], path + ".rho");
        for (std::size_t i = 0; i < rhos.size(); ++i) {
            CorrelationEntry entry;
            entry.label = rhos[i];
            try {
                entry.spec = uniform_gamma(rhos[i], num_pairs);
            } catch (const std::invalid_argument &e) {
                fail(path + ".rho[" + std::to_string(i) + "]", e.what());
            }
            cfg.correlation.push_back(std::move(entry));
        }
        return;
    }
    const json &g = j["gamma"];
    if (!g.is_array() || g.size() != 3)
        fail(path + ".gamma", "expected a 3x3 matrix");
    Eigen::Matrix3d m;
    for (int r = 0; r < 3; ++r) {
        if (!g[r].is_array() || g[r].size() != 3)
            fail(path + ".gamma", "expected a 3x3 matrix");
        for (int c = 0; c < 3; ++c)
            m(r, c) = number(g[r][c], path + ".gamma[" + std::to_string(r) + "][" +
                                          std::to_string(c) + "]");
    }
    CorrelationEntry entry;
    entry.label = m(0, 1);
    entry.spec.num_pairs = num_pairs;
    entry.spec.gamma_.assign(static_cast<std::size_t>(num_pairs * num_pairs), m);
    try {
        validate(entry.spec);
    } catch (const std::invalid_argument &e) {
        fail(path + ".gamma", e.what());
    }
    cfg.correlation.push_back(std::move(entry));
}

void parse_statistic(const json &j, ExperimentConfig &cfg) {
    const std::string path = "statistic";
    const std::string kind = text(require(j, "kind", path), path + ".kind");
    if (kind == "median") {
        cfg.statistic.kind = StatKind::median;
    } else if (kind == "trimmed_mean") {
        cfg.statistic.kind = StatKind::trimmed_mean;
        if (j.contains("trim")) {
            const double trim = number(j["trim"], path + ".trim");
            if (!(trim >= 0.0) || !(trim < 0.5))
                fail(path + ".trim", "must lie in [0, 0.5)");
            cfg.statistic.trim = trim;
        }
    } else {
        fail(path + ".kind", "expected 'median' or 'trimmed_mean', got '" + kind + "'");
    }
}

} // namespace

std::string to_string(RunMode mode) {
    switch (mode) {
    case RunMode::variance_sweep:
        return "variance_sweep";
    case RunMode::outage_sweep:
        return "outage_sweep";
    case RunMode::oracle_check:
        return "oracle_check";
    }
    return "?";
}

RunMode parse_mode(const std::string &name) {
    if (name == "variance_sweep")
        return RunMode::variance_sweep;
    if (name == "outage_sweep")
        return RunMode::outage_sweep;
    if (name == "oracle_check")
        return RunMode::oracle_check;
    throw std::invalid_argument(
        "config.mode: expected 'variance_sweep', 'outage_sweep' or 'oracle_check', got '" + name +
        "'");
}

double thermal_noise_power(double bandwidth_hz) {
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("config.noise.bandwidth_hz: must be strictly positive");
    return std::pow(10.0, -174.0 / 10.0) * 1e-3 * bandwidth_hz; // -174 dBm/Hz noise density
}

ExperimentConfig parse_config(const std::string &json_text) {
    json j;
    try {
        j = json::parse(json_text, nullptr, true, /*allow comments*/ true);
    } catch (const json::parse_error &e) {
        throw std::invalid_argument(std::string("config: not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw std::invalid_argument("config: top level must be an object");

    ExperimentConfig cfg;
    const std::uint64_t version = count(require(j, "schema_version", "root"), "schema_version");
    if (version != 1)
        fail("schema_version", "unsupported version " + std::to_string(version) +
                                   " (this build reads version 1)");
    cfg.schema_version = 1;
    cfg.mode = parse_mode(text(require(j, "mode", "root"), "mode"));

    cfg.sweep = parse_topology(require(j, "topology", "root"));

    const json &power = require(j, "power", "root");
    cfg.p_total = positive(require(power, "p_total", "power"), "power.p_total");
    cfg.psi = number_list(require(power, "psi", "power"), "power.psi");
    if (static_cast<Eigen::Index>(cfg.psi.size()) != cfg.sweep.num_pairs)
        fail("power.psi", "length must equal topology.num_pairs");
    try {
        const Vec<double> psi = Eigen::Map<const Vec<double>>(
            cfg.psi.data(), static_cast<Eigen::Index>(cfg.psi.size()));
        allocate(cfg.p_total, psi);
    } catch (const std::invalid_argument &e) {
        fail("power", e.what());
    }

    parse_noise(require(j, "noise", "root"), cfg);
    parse_correlation(require(j, "correlation", "root"), cfg.sweep.num_pairs, cfg);
    if (j.contains("statistic"))
        parse_statistic(j["statistic"], cfg);

    if (j.contains("ensemble")) {
        const json &e = j["ensemble"];
        cfg.ensemble_draws = count(require(e, "n_draws", "ensemble"), "ensemble.n_draws");
        if (cfg.ensemble_draws < 1)
            fail("ensemble.n_draws", "must be >= 1");
        cfg.ensemble_seed = count(require(e, "seed", "ensemble"), "ensemble.seed");
        cfg.has_ensemble = true;
    }
    if (j.contains("outage")) {
        const json &o = j["outage"];
        const double beta_db = number(require(o, "beta_db", "outage"), "outage.beta_db");
        cfg.beta_linear = std::pow(10.0, beta_db / 10.0);
        cfg.outage_trials = count(require(o, "n_trials", "outage"), "outage.n_trials");
        if (cfg.outage_trials < 1)
            fail("outage.n_trials", "must be >= 1");
        cfg.outage_seed = count(require(o, "seed", "outage"), "outage.seed");
        cfg.has_outage = true;
    }
    if (j.contains("oracle")) {
        const json &o = j["oracle"];
        cfg.oracle_realizations =
            count(require(o, "n_realizations", "oracle"), "oracle.n_realizations");
        if (cfg.oracle_realizations < 1)
            fail("oracle.n_realizations", "must be >= 1");
        cfg.oracle_noise_draws =
            count(require(o, "n_noise_draws", "oracle"), "oracle.n_noise_draws");
        if (cfg.oracle_noise_draws < 2)
            fail("oracle.n_noise_draws", "must be >= 2");
        cfg.oracle_seed = count(require(o, "seed", "oracle"), "oracle.seed");
        cfg.has_oracle = true;
    }

    const json &output = require(j, "output", "root");
    cfg.output_path = text(require(output, "path", "output"), "output.path");
    if (cfg.output_path.empty())
        fail("output.path", "must not be empty");

    if (j.contains("workers")) {
        const std::uint64_t w = count(j["workers"], "workers");
        cfg.workers = static_cast<unsigned>(w);
    }

    require_mode_section(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void require_mode_section(const ExperimentConfig &cfg) {
    if (cfg.mode == RunMode::variance_sweep && !cfg.has_ensemble)
        throw std::invalid_argument("config.ensemble: required for mode variance_sweep");
    if (cfg.mode == RunMode::outage_sweep && !cfg.has_outage)
        throw std::invalid_argument("config.outage: required for mode outage_sweep");
    if (cfg.mode == RunMode::oracle_check && !cfg.has_oracle)
        throw std::invalid_argument("config.oracle: required for mode oracle_check");
}

} // namespace ancsim
