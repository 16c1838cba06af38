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

#ifndef ANCSIM_ANC_NOISE_HPP
#define ANCSIM_ANC_NOISE_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ancsim/power.hpp"
#include "ancsim/rng.hpp"
#include "ancsim/topology.hpp"
#include "ancsim/types.hpp"

namespace ancsim {

// |h|^2 floor inside the cancellation ratio. E[1/|h|^2] diverges for Rayleigh
// fading; without a floor single draws can blow up the third noise term by
// many orders of magnitude. Floored evaluations are counted, not rejected.
inline constexpr double k_h2_floor = 1e-9;

// ---------- slot cycle ----------

// Receiver noise for one K+1-slot cycle. Slot m carries source S_m; the last
// slot carries the relay broadcast. Every draw is independent (one physical
// noise process per receiver per slot).
template <typename Scalar>
struct NoiseDraws {
    CMat<Scalar> n_dest;            // (m, j): at D_j during slot m
    CVec<Scalar> n_relay;           // (m): at R during slot m
    CVec<Scalar> n_dest_relay_slot; // (j): at D_j during the relay slot
};

// Draw order is slot-by-slot (all destinations, then the relay) so a fixed
// seed pins every byte of a cycle.
template <typename Scalar>
NoiseDraws<Scalar> draw_noise(const NoisePowers<Scalar> &powers, Eigen::Index num_pairs,
                              Rng &rng) {
    using C = std::complex<Scalar>;
    if (powers.sigma2_dest.size() != num_pairs)
        throw std::invalid_argument("Noise power vector must have one entry per destination.");
    NoiseDraws<Scalar> d;
    d.n_dest = CMat<Scalar>(num_pairs, num_pairs);
    d.n_relay = CVec<Scalar>(num_pairs);
    d.n_dest_relay_slot = CVec<Scalar>(num_pairs);
    for (Eigen::Index m = 0; m < num_pairs; ++m) {
        for (Eigen::Index j = 0; j < num_pairs; ++j) {
            const std::complex<double> z = rng.complex_normal();
            const Scalar s = std::sqrt(powers.sigma2_dest(j));
            d.n_dest(m, j) = C(static_cast<Scalar>(z.real()) * s, static_cast<Scalar>(z.imag()) * s);
        }
        const std::complex<double> z = rng.complex_normal();
        const Scalar s = std::sqrt(powers.sigma2_relay);
        d.n_relay(m) = C(static_cast<Scalar>(z.real()) * s, static_cast<Scalar>(z.imag()) * s);
    }
    for (Eigen::Index j = 0; j < num_pairs; ++j) {
        const std::complex<double> z = rng.complex_normal();
        const Scalar s = std::sqrt(powers.sigma2_dest(j));
        d.n_dest_relay_slot(j) =
            C(static_cast<Scalar>(z.real()) * s, static_cast<Scalar>(z.imag()) * s);
    }
    return d;
}

template <typename Scalar>
NoiseDraws<Scalar> zero_noise(Eigen::Index num_pairs) {
    NoiseDraws<Scalar> d;
    d.n_dest = CMat<Scalar>::Zero(num_pairs, num_pairs);
    d.n_relay = CVec<Scalar>::Zero(num_pairs);
    d.n_dest_relay_slot = CVec<Scalar>::Zero(num_pairs);
    return d;
}

// Everything received during one cycle, plus the relay broadcast sample.
template <typename Scalar>
struct SlotSignals {
    CMat<Scalar> y_dest;              // (i,j): Y_{S_i D_j}
    CVec<Scalar> y_relay;             // (i): Y_{S_i R}
    std::complex<Scalar> x_relay;     // X_R = A_f * sum_m Y_{S_m R}
    CVec<Scalar> y_relay_dest;        // (j): Y_{R D_j}
    Scalar a_f = Scalar(0);           // gain used for x_relay
};

// Straight-line evaluation of the cycle. Sources transmit x_m =
// sqrt(P_{S_m}) s_m with unit-power symbols; the relay rebroadcasts
// A_f * sum of what it heard. sigma2_relay enters only through A_f. The
// canonical channel draws represent the single physical reality here; the
// per-triple copies matter only for the closed-form side (see
// noise_variance_terms).
template <typename Scalar>
SlotSignals<Scalar> simulate_cycle(const NetworkTopology<Scalar> &topo,
                                   const PowerAllocation<Scalar> &alloc,
                                   const ChannelRealization<Scalar> &h,
                                   const CVec<Scalar> &symbols, const NoiseDraws<Scalar> &noise,
                                   Scalar sigma2_relay) {
    using C = std::complex<Scalar>;
    const Eigen::Index k = topo.num_pairs;
    if (symbols.size() != k)
        throw std::invalid_argument("Symbol vector must have one entry per source.");
    if (noise.n_dest.rows() != k || noise.n_relay.size() != k ||
        noise.n_dest_relay_slot.size() != k)
        throw std::invalid_argument("Noise draws do not match the pair count.");

    SlotSignals<Scalar> s;
    s.a_f = amplification_factor(alloc, topo, h, sigma2_relay);
    s.y_dest = CMat<Scalar>(k, k);
    s.y_relay = CVec<Scalar>(k);
    s.y_relay_dest = CVec<Scalar>(k);

    for (Eigen::Index i = 0; i < k; ++i) {
        const C x_i = std::sqrt(alloc.p_source(i)) * symbols(i);
        for (Eigen::Index j = 0; j < k; ++j)
            s.y_dest(i, j) = amplitude_attenuation(topo.d_source_dest(i, j), topo.alpha) *
                                 h.h_source_dest(i, j) * x_i +
                             noise.n_dest(i, j);
        s.y_relay(i) = amplitude_attenuation(topo.d_source_relay(i), topo.alpha) *
                           h.h_source_relay(i) * x_i +
                       noise.n_relay(i);
    }
    s.x_relay = s.a_f * s.y_relay.sum();
    for (Eigen::Index j = 0; j < k; ++j)
        s.y_relay_dest(j) = amplitude_attenuation(topo.d_relay_dest(j), topo.alpha) *
                                h.h_relay_dest(j) * s.x_relay +
                            noise.n_dest_relay_slot(j);
    return s;
}

// ---------- reconstruction ----------

// h with its squared magnitude floored, phase kept. h = 0 becomes the real
// floor value. Used for every division by a cross-link coefficient so that
// the empirical path and the closed form clamp identically.
template <typename Scalar>
std::complex<Scalar> floor_h(const std::complex<Scalar> &h, bool *floored = nullptr) {
    const Scalar h2 = std::norm(h);
    if (h2 >= Scalar(k_h2_floor)) {
        if (floored)
            *floored = false;
        return h;
    }
    if (floored)
        *floored = true;
    const Scalar mag = std::sqrt(Scalar(k_h2_floor));
    if (h2 == Scalar(0))
        return {mag, Scalar(0)};
    return h * (mag / std::sqrt(h2));
}

// Cancellation coefficient for undesired source i at destination j:
// C_i = A_f d_{R D_j}^{-a/2} h_{R D_j} d_{S_i R}^{-a/2} h_{S_i R}
//       / (d_{S_i D_j}^{-a/2} h_{S_i D_j}).
// The caller picks which h draws to use; this keeps the empirical path
// (canonical draws) and the closed form (per-triple draws) on one formula.
template <typename Scalar>
std::complex<Scalar> cancellation_coefficient(Scalar a_f, Scalar d_relay_dest, Scalar d_source_relay,
                                              Scalar d_source_dest, Scalar alpha,
                                              const std::complex<Scalar> &h_relay_dest,
                                              const std::complex<Scalar> &h_source_relay,
                                              const std::complex<Scalar> &h_source_dest,
                                              bool *floored = nullptr) {
    const std::complex<Scalar> num = a_f * amplitude_attenuation(d_relay_dest, alpha) *
                                     h_relay_dest * amplitude_attenuation(d_source_relay, alpha) *
                                     h_source_relay;
    const std::complex<Scalar> den =
        amplitude_attenuation(d_source_dest, alpha) * floor_h(h_source_dest, floored);
    return num / den;
}

// Relay-path desired component at destination j: the relay's copy of the own
// signal, A_f d_{R D_j}^{-a/2} h_{R D_j} Y_{S_j R}. Carries the slot-j relay
// noise with it.
template <typename Scalar>
std::complex<Scalar> desired_component(Eigen::Index dest, const SlotSignals<Scalar> &signals,
                                       const NetworkTopology<Scalar> &topo,
                                       const ChannelRealization<Scalar> &h) {
    return signals.a_f * amplitude_attenuation(topo.d_relay_dest(dest), topo.alpha) *
           h.h_relay_dest(dest) * signals.y_relay(dest);
}

// Destination-side reconstruction: subtract the scaled overheard copy of
// every undesired source from the relay broadcast. Exact CSI is assumed, so
// each subtraction removes that source's signal completely (up to the
// denominator floor).
template <typename Scalar>
std::complex<Scalar> reconstruct(Eigen::Index dest, const SlotSignals<Scalar> &signals,
                                 const NetworkTopology<Scalar> &topo,
                                 const ChannelRealization<Scalar> &h, Scalar a_f) {
    const Eigen::Index k = topo.num_pairs;
    if (dest < 0 || dest >= k)
        throw std::invalid_argument("Destination index out of range.");
    std::complex<Scalar> y = signals.y_relay_dest(dest);
    for (Eigen::Index i = 0; i < k; ++i) {
        if (i == dest)
            continue;
        const std::complex<Scalar> c = cancellation_coefficient(
            a_f, topo.d_relay_dest(dest), topo.d_source_relay(i), topo.d_source_dest(i, dest),
            topo.alpha, h.h_relay_dest(dest), h.h_source_relay(i), h.h_source_dest(i, dest));
        y -= c * signals.y_dest(i, dest);
    }
    return y;
}

// The reconstructed signal split into its three parts: the desired relay-path
// copy, the destination's own relay-slot noise, and the residual that analog
// network coding leaves behind (forwarded foreign-slot relay noise minus the
// scaled overheard noise).
template <typename Scalar>
struct NoiseDecomposition {
    std::complex<Scalar> desired;
    std::complex<Scalar> background;
    std::complex<Scalar> anc_residual;
};

template <typename Scalar>
NoiseDecomposition<Scalar> decompose(Eigen::Index dest, const SlotSignals<Scalar> &signals,
                                     const NetworkTopology<Scalar> &topo,
                                     const ChannelRealization<Scalar> &h, Scalar a_f,
                                     const NoiseDraws<Scalar> &noise) {
    const Eigen::Index k = topo.num_pairs;
    if (dest < 0 || dest >= k)
        throw std::invalid_argument("Destination index out of range.");
    NoiseDecomposition<Scalar> out;
    out.desired = desired_component(dest, signals, topo, h);
    out.background = noise.n_dest_relay_slot(dest);
    out.anc_residual = std::complex<Scalar>(0, 0);
    const std::complex<Scalar> relay_gain =
        a_f * amplitude_attenuation(topo.d_relay_dest(dest), topo.alpha) * h.h_relay_dest(dest);
    for (Eigen::Index i = 0; i < k; ++i) {
        if (i == dest)
            continue;
        const std::complex<Scalar> c = cancellation_coefficient(
            a_f, topo.d_relay_dest(dest), topo.d_source_relay(i), topo.d_source_dest(i, dest),
            topo.alpha, h.h_relay_dest(dest), h.h_source_relay(i), h.h_source_dest(i, dest));
        out.anc_residual += relay_gain * noise.n_relay(i) - c * noise.n_dest(i, dest);
    }
    return out;
}

// ---------- closed-form variance ----------

template <typename Scalar>
struct VarianceTerms {
    Scalar total = Scalar(0);      // sigma^2 of the residual noise at D_j
    Scalar relay_gain = Scalar(0); // |A_f d^{-a/2}_{R D_j} h_{R D_j}|^2 (second-term factor)
    Scalar ratio_sum = Scalar(0);  // sum_i |C_i|^2 (third-term factor)
    int n_floored = 0;             // cancellation ratios that hit the |h|^2 floor
};

// sigma^2_NC at destination j:
//   sigma^2_{D_j} + (K-1) sigma^2_R T2 + sigma^2_{D_j} T3,
//   T2 = |A_f d^{-a/2}_{R D_j} h_{R D_j}|^2, T3 = sum_{i != j} |C_i|^2.
// Squares of complex gain products are squared magnitudes (these are
// variances of complex noise through complex gains). The second term uses
// the canonical h_{R D_j} (one physical relay link carries all foreign-slot
// relay noise); the per-source ratio terms use the draws of the (i,j) triple.
template <typename Scalar>
VarianceTerms<Scalar> noise_variance_terms(Eigen::Index dest, const NetworkTopology<Scalar> &topo,
                                           const PowerAllocation<Scalar> &alloc,
                                           const ChannelRealization<Scalar> &h, Scalar a_f,
                                           const NoisePowers<Scalar> &sigma2) {
    (void)alloc; // P only enters through a_f; kept for interface symmetry
    const Eigen::Index k = topo.num_pairs;
    if (dest < 0 || dest >= k)
        throw std::invalid_argument("Destination index out of range.");
    if (sigma2.sigma2_dest.size() != k)
        throw std::invalid_argument("Noise power vector must have one entry per destination.");

    VarianceTerms<Scalar> t;
    const Scalar att_rd = amplitude_attenuation(topo.d_relay_dest(dest), topo.alpha);
    t.relay_gain = a_f * a_f * att_rd * att_rd * std::norm(h.h_relay_dest(dest));
    for (Eigen::Index i = 0; i < k; ++i) {
        if (i == dest)
            continue;
        bool floored = false;
        const std::complex<Scalar> c = cancellation_coefficient(
            a_f, topo.d_relay_dest(dest), topo.d_source_relay(i), topo.d_source_dest(i, dest),
            topo.alpha, h.triple_relay_dest(i, dest), h.triple_source_relay(i, dest),
            h.h_source_dest(i, dest), &floored);
        t.ratio_sum += std::norm(c);
        if (floored)
            ++t.n_floored;
    }
    t.total = sigma2.sigma2_dest(dest) + Scalar(k - 1) * sigma2.sigma2_relay * t.relay_gain +
              sigma2.sigma2_dest(dest) * t.ratio_sum;
    return t;
}

template <typename Scalar>
Scalar noise_variance(Eigen::Index dest, const NetworkTopology<Scalar> &topo,
                      const PowerAllocation<Scalar> &alloc, const ChannelRealization<Scalar> &h,
                      Scalar a_f, const NoisePowers<Scalar> &sigma2) {
    return noise_variance_terms(dest, topo, alloc, h, a_f, sigma2).total;
}

// ---------- ensemble statistics ----------

enum class StatKind { median, trimmed_mean };

template <typename Scalar>
struct Statistic {
    StatKind kind = StatKind::median;
    Scalar trim = Scalar(0.01); // per-tail fraction for trimmed_mean
};

// Robust location estimate of a sample. Median of an even-sized sample is the
// mean of the two central order statistics; the trimmed mean drops
// floor(trim * n) values from each end.
template <typename Scalar>
Scalar eval_statistic(std::vector<Scalar> values, const Statistic<Scalar> &stat) {
    const std::size_t n = values.size();
    if (n == 0)
        throw std::invalid_argument("Statistic of an empty sample.");
    if (stat.kind == StatKind::median) {
        const std::size_t mid = n / 2;
        std::nth_element(values.begin(), values.begin() + mid, values.end());
        const Scalar hi = values[mid];
        if (n % 2 == 1)
            return hi;
        const Scalar lo = *std::max_element(values.begin(), values.begin() + mid);
        return (lo + hi) / Scalar(2);
    }
    if (!(stat.trim >= Scalar(0)) || !(stat.trim < Scalar(0.5)))
        throw std::invalid_argument("Trim fraction must lie in [0, 0.5).");
    const std::size_t cut = static_cast<std::size_t>(stat.trim * static_cast<Scalar>(n));
    if (2 * cut >= n)
        throw std::invalid_argument("Trim fraction removes every sample.");
    std::sort(values.begin(), values.end());
    Scalar acc = Scalar(0);
    for (std::size_t i = cut; i < n - cut; ++i)
        acc += values[i];
    return acc / static_cast<Scalar>(n - 2 * cut);
}

template <typename Scalar>
struct EnsembleStats {
    Scalar value = Scalar(0);      // statistic of sigma^2_NC
    Scalar relay_gain = Scalar(0); // statistic of T2
    Scalar ratio_sum = Scalar(0);  // statistic of T3
    std::uint64_t n_floored = 0;   // floor events across the whole ensemble
};

// Statistic of the per-realization variance (and of both dimensionless terms,
// for the term-breakdown output) over an ensemble of channel draws.
template <typename Scalar>
EnsembleStats<Scalar> ensemble_variance_stats(Eigen::Index dest,
                                              const std::vector<ChannelRealization<Scalar>> &ensemble,
                                              const NetworkTopology<Scalar> &topo,
                                              const PowerAllocation<Scalar> &alloc,
                                              const NoisePowers<Scalar> &sigma2,
                                              const Statistic<Scalar> &stat) {
    if (ensemble.empty())
        throw std::invalid_argument("Ensemble must not be empty.");
    std::vector<Scalar> totals, t2s, t3s;
    totals.reserve(ensemble.size());
    t2s.reserve(ensemble.size());
    t3s.reserve(ensemble.size());
    EnsembleStats<Scalar> out;
    for (const auto &h : ensemble) {
        const Scalar a_f = amplification_factor(alloc, topo, h, sigma2.sigma2_relay);
        const VarianceTerms<Scalar> t = noise_variance_terms(dest, topo, alloc, h, a_f, sigma2);
        totals.push_back(t.total);
        t2s.push_back(t.relay_gain);
        t3s.push_back(t.ratio_sum);
        out.n_floored += static_cast<std::uint64_t>(t.n_floored);
    }
    out.value = eval_statistic(std::move(totals), stat);
    out.relay_gain = eval_statistic(std::move(t2s), stat);
    out.ratio_sum = eval_statistic(std::move(t3s), stat);
    return out;
}

template <typename Scalar>
Scalar variance_statistic(Eigen::Index dest, const std::vector<ChannelRealization<Scalar>> &ensemble,
                          const NetworkTopology<Scalar> &topo, const PowerAllocation<Scalar> &alloc,
                          const NoisePowers<Scalar> &sigma2, const Statistic<Scalar> &stat) {
    return ensemble_variance_stats(dest, ensemble, topo, alloc, sigma2, stat).value;
}

} // namespace ancsim

#endif
