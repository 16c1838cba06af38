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

#ifndef ANCSIM_POWER_HPP
#define ANCSIM_POWER_HPP

#include <cmath>
#include <stdexcept>

#include "ancsim/channel.hpp"
#include "ancsim/topology.hpp"
#include "ancsim/types.hpp"

namespace ancsim {

// Total-power split: each source gets psi_i * P_tot, the relay the remainder.
template <typename Scalar>
struct PowerAllocation {
    Scalar p_total = Scalar(0);
    Vec<Scalar> psi;
    Vec<Scalar> p_source;
    Scalar p_relay = Scalar(0);
};

template <typename Scalar>
PowerAllocation<Scalar> allocate(Scalar p_total, const Vec<Scalar> &psi) {
    if (!(p_total > Scalar(0)))
        throw std::invalid_argument("Total power must be strictly positive.");
    if (psi.size() < 1)
        throw std::invalid_argument("Power fraction vector must not be empty.");
    for (Eigen::Index i = 0; i < psi.size(); ++i)
        if (!(psi(i) > Scalar(0)) || psi(i) > Scalar(1))
            throw std::invalid_argument("Each power fraction must lie in (0, 1].");
    const Scalar sum = psi.sum();
    if (sum > Scalar(1) + Scalar(1e-12))
        throw std::invalid_argument("Power fractions must sum to at most 1.");
    PowerAllocation<Scalar> alloc;
    alloc.p_total = p_total;
    alloc.psi = psi;
    alloc.p_source = psi * p_total;
    alloc.p_relay = std::max(Scalar(0), (Scalar(1) - sum) * p_total); // clamp round-off
    return alloc;
}

// Relay gain A_f = sqrt(P_R / (sum_m P_{S_m} |h_{S_m R}|^2 / d_{S_m R}^alpha
// + K sigma_R^2)), chosen so the relay's expected transmit power is P_R.
// Uses the canonical source-relay draws.
template <typename Scalar>
Scalar amplification_factor(const PowerAllocation<Scalar> &alloc,
                            const NetworkTopology<Scalar> &topo,
                            const ChannelRealization<Scalar> &h, Scalar sigma2_relay) {
    if (sigma2_relay < Scalar(0))
        throw std::invalid_argument("Relay noise power must be non-negative.");
    const Eigen::Index k = topo.num_pairs;
    if (alloc.p_source.size() != k || h.h_source_relay.size() != k)
        throw std::invalid_argument("Power allocation, topology and channels disagree on K.");
    Scalar denom = Scalar(k) * sigma2_relay;
    for (Eigen::Index m = 0; m < k; ++m)
        denom += alloc.p_source(m) * std::norm(h.h_source_relay(m)) *
                 std::pow(topo.d_source_relay(m), -topo.alpha);
    if (!(denom > Scalar(0)))
        throw std::domain_error("Amplification factor denominator is zero.");
    return std::sqrt(alloc.p_relay / denom);
}

} // namespace ancsim

#endif
