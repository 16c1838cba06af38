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

#ifndef ANCSIM_TOPOLOGY_HPP
#define ANCSIM_TOPOLOGY_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ancsim/types.hpp"

namespace ancsim {

// K source-destination pairs plus one relay. Geometry is carried as distances
// only; there is no coordinate system.
template <typename Scalar>
struct NetworkTopology {
    Eigen::Index num_pairs = 0;   // K
    Mat<Scalar> d_source_dest;    // (i,j) = d_{S_i D_j}, meters
    Vec<Scalar> d_source_relay;   // d_{S_i R}
    Vec<Scalar> d_relay_dest;     // d_{R D_j}
    Scalar alpha = Scalar(4);     // pathloss exponent
};

template <typename Scalar>
void validate(const NetworkTopology<Scalar> &topo) {
    if (topo.num_pairs < 1)
        throw std::invalid_argument("Topology must have at least one source-destination pair.");
    if (topo.alpha < Scalar(2))
        throw std::invalid_argument("Pathloss exponent must be >= 2.");
    if (topo.d_source_dest.rows() != topo.num_pairs || topo.d_source_dest.cols() != topo.num_pairs)
        throw std::invalid_argument("Source-destination distance matrix must be K x K.");
    if (topo.d_source_relay.size() != topo.num_pairs || topo.d_relay_dest.size() != topo.num_pairs)
        throw std::invalid_argument("Relay distance vectors must have length K.");
    if (!(topo.d_source_dest.array() > Scalar(0)).all() ||
        !(topo.d_source_relay.array() > Scalar(0)).all() ||
        !(topo.d_relay_dest.array() > Scalar(0)).all())
        throw std::invalid_argument("All distances must be strictly positive.");
}

// Amplitude-domain pathloss d^(-alpha/2); the received power factor is the
// square of this value.
template <typename Scalar>
Scalar amplitude_attenuation(Scalar d, Scalar alpha) {
    if (!(d > Scalar(0)))
        throw std::domain_error("Distance must be strictly positive.");
    if (alpha < Scalar(0))
        throw std::domain_error("Pathloss exponent must be non-negative.");
    return std::pow(d, -alpha / Scalar(2));
}

// Symmetric sweep description: parallel per-index distance vectors. Index k
// describes one network instance (all cross links share one distance, all
// direct links another, and the relay sits symmetrically so that every
// source-relay and relay-destination leg is equal).
template <typename Scalar>
struct SweepConfig {
    Eigen::Index num_pairs = 2;
    Scalar alpha = Scalar(4);
    std::vector<Scalar> d_cross;  // d_{S_i D_j}, i != j (the reference distance)
    std::vector<Scalar> d_direct; // d_{S_i D_i}
    std::vector<Scalar> d_relay;  // d_{S_i R} = d_{R D_j}
};

// Linear co-sweep between range endpoints, index-aligned across the three
// distance families; n = 1 degenerates to the lower endpoints.
template <typename Scalar>
SweepConfig<Scalar> make_linear_sweep(Eigen::Index num_pairs, Scalar alpha, int n,
                                      Scalar cross_lo, Scalar cross_hi,
                                      Scalar direct_lo, Scalar direct_hi,
                                      Scalar relay_lo, Scalar relay_hi) {
    if (n < 1)
        throw std::invalid_argument("Sweep must have at least one point.");
    SweepConfig<Scalar> cfg;
    cfg.num_pairs = num_pairs;
    cfg.alpha = alpha;
    cfg.d_cross.reserve(n);
    cfg.d_direct.reserve(n);
    cfg.d_relay.reserve(n);
    for (int k = 0; k < n; ++k) {
        const Scalar t = (n == 1) ? Scalar(0) : Scalar(k) / Scalar(n - 1);
        cfg.d_cross.push_back(cross_lo + (cross_hi - cross_lo) * t);
        cfg.d_direct.push_back(direct_lo + (direct_hi - direct_lo) * t);
        cfg.d_relay.push_back(relay_lo + (relay_hi - relay_lo) * t);
    }
    return cfg;
}

template <typename Scalar>
NetworkTopology<Scalar> make_symmetric_topology(Eigen::Index num_pairs, Scalar alpha,
                                                Scalar d_cross, Scalar d_direct, Scalar d_relay) {
    NetworkTopology<Scalar> topo;
    topo.num_pairs = num_pairs;
    topo.alpha = alpha;
    topo.d_source_dest = Mat<Scalar>::Constant(num_pairs, num_pairs, d_cross);
    topo.d_source_dest.diagonal().setConstant(d_direct);
    topo.d_source_relay = Vec<Scalar>::Constant(num_pairs, d_relay);
    topo.d_relay_dest = Vec<Scalar>::Constant(num_pairs, d_relay);
    validate(topo);
    return topo;
}

template <typename Scalar>
std::vector<NetworkTopology<Scalar>> build_symmetric_sweep(const SweepConfig<Scalar> &cfg) {
    const std::size_t n = cfg.d_cross.size();
    if (cfg.d_direct.size() != n || cfg.d_relay.size() != n)
        throw std::invalid_argument("Sweep distance vectors must have equal length, got " +
                                    std::to_string(n) + "/" + std::to_string(cfg.d_direct.size()) +
                                    "/" + std::to_string(cfg.d_relay.size()) + ".");
    if (n == 0)
        throw std::invalid_argument("Sweep must have at least one point.");
    std::vector<NetworkTopology<Scalar>> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k)
        out.push_back(make_symmetric_topology(cfg.num_pairs, cfg.alpha, cfg.d_cross[k],
                                              cfg.d_direct[k], cfg.d_relay[k]));
    return out;
}

} // namespace ancsim

#endif
