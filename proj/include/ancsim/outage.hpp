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

#ifndef ANCSIM_OUTAGE_HPP
#define ANCSIM_OUTAGE_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "ancsim/anc_noise.hpp"
#include "ancsim/channel.hpp"
#include "ancsim/parallel.hpp"
#include "ancsim/power.hpp"
#include "ancsim/rng.hpp"
#include "ancsim/topology.hpp"
#include "ancsim/types.hpp"

namespace ancsim {

// Trials per RNG substream. Fixing this makes the estimate a pure function of
// (seed, n_trials) regardless of how many workers happen to run.
inline constexpr std::uint64_t k_trials_per_block = 16384;

template <typename Scalar>
struct SnrPair {
    Scalar snr_direct = Scalar(0);
    Scalar snr_relay = Scalar(0);
};

// Per-branch SNRs at destination j under selection combining. The direct
// branch sees only its own link and receiver noise; the relay branch is the
// desired component of the reconstructed signal over the residual-noise
// variance.
template <typename Scalar>
SnrPair<Scalar> snr_pair(Eigen::Index dest, const NetworkTopology<Scalar> &topo,
                         const PowerAllocation<Scalar> &alloc, const ChannelRealization<Scalar> &h,
                         Scalar a_f, const NoisePowers<Scalar> &sigma2, int *n_floored = nullptr) {
    SnrPair<Scalar> snr;
    const Scalar att_dd = amplitude_attenuation(topo.d_source_dest(dest, dest), topo.alpha);
    snr.snr_direct = alloc.p_source(dest) * att_dd * att_dd *
                     std::norm(h.h_source_dest(dest, dest)) / sigma2.sigma2_dest(dest);
    const VarianceTerms<Scalar> t = noise_variance_terms(dest, topo, alloc, h, a_f, sigma2);
    const Scalar att_sr = amplitude_attenuation(topo.d_source_relay(dest), topo.alpha);
    snr.snr_relay = t.relay_gain * alloc.p_source(dest) * att_sr * att_sr *
                    std::norm(h.h_source_relay(dest)) / t.total;
    if (n_floored)
        *n_floored = t.n_floored;
    return snr;
}

template <typename Scalar>
struct OutageResult {
    Scalar p_out = Scalar(0);
    Scalar ci_halfwidth = Scalar(0); // 95% normal-approximation half width
    std::uint64_t n_trials = 0;
    std::uint64_t n_floored = 0;
    std::uint64_t seed = 0;
};

// P(max(SNR_D, SNR_R) < beta) over independent correlated channel draws.
// Ties select the direct branch (irrelevant for the maximum; pinned for
// determinism of any per-branch bookkeeping). The sampler is injectable so
// degenerate fixed-channel configurations can be tested; the default draws
// from the correlation spec.
template <typename Scalar, typename Sampler>
OutageResult<Scalar> estimate_outage_with(const NetworkTopology<Scalar> &topo,
                                          const PowerAllocation<Scalar> &alloc,
                                          const NoisePowers<Scalar> &sigma2, Scalar beta,
                                          std::uint64_t n_trials, std::uint64_t seed,
                                          unsigned n_workers, Sampler &&sampler) {
    if (n_trials < 1)
        throw std::invalid_argument("Outage estimation needs at least one trial.");
    if (!(beta > Scalar(0)))
        throw std::invalid_argument("SNR threshold must be strictly positive (linear).");

    struct BlockCounts {
        std::uint64_t outages = 0;
        std::uint64_t floored = 0;
    };
    const std::uint64_t n_blocks = (n_trials + k_trials_per_block - 1) / k_trials_per_block;
    const std::vector<BlockCounts> partial = run_blocks<BlockCounts>(
        static_cast<std::size_t>(n_blocks), n_workers, [&](std::size_t block) {
            Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(block));
            const std::uint64_t lo = static_cast<std::uint64_t>(block) * k_trials_per_block;
            const std::uint64_t hi = std::min<std::uint64_t>(lo + k_trials_per_block, n_trials);
            BlockCounts counts;
            for (std::uint64_t t = lo; t < hi; ++t) {
                const ChannelRealization<Scalar> h = sampler(rng);
                const Scalar a_f = amplification_factor(alloc, topo, h, sigma2.sigma2_relay);
                int floored = 0;
                const SnrPair<Scalar> snr = snr_pair(0, topo, alloc, h, a_f, sigma2, &floored);
                const Scalar sc =
                    (snr.snr_relay > snr.snr_direct) ? snr.snr_relay : snr.snr_direct;
                if (sc < beta)
                    ++counts.outages;
                counts.floored += static_cast<std::uint64_t>(floored);
            }
            return counts;
        });

    std::uint64_t outages = 0, floored = 0;
    for (const BlockCounts &c : partial) {
        outages += c.outages;
        floored += c.floored;
    }
    OutageResult<Scalar> result;
    result.n_trials = n_trials;
    result.n_floored = floored;
    result.seed = seed;
    result.p_out = static_cast<Scalar>(outages) / static_cast<Scalar>(n_trials);
    result.ci_halfwidth = Scalar(1.96) * std::sqrt(result.p_out * (Scalar(1) - result.p_out) /
                                                   static_cast<Scalar>(n_trials));
    return result;
}

template <typename Scalar>
OutageResult<Scalar> estimate_outage(const NetworkTopology<Scalar> &topo,
                                     const PowerAllocation<Scalar> &alloc,
                                     const CorrelationSpec<Scalar> &spec,
                                     const NoisePowers<Scalar> &sigma2, Scalar beta,
                                     std::uint64_t n_trials, std::uint64_t seed,
                                     unsigned n_workers = 1) {
    return estimate_outage_with(topo, alloc, sigma2, beta, n_trials, seed, n_workers,
                                [&spec](Rng &rng) { return sample_channels(spec, rng); });
}

// Brute-force counterpart of noise_variance: hold the channels and symbols
// fixed, draw fresh receiver noise, push it through the slot cycle and the
// reconstruction, and take the sample variance of what is left after removing
// the desired component. Agreement with the closed form is the core oracle of
// the whole artifact.
template <typename Scalar>
Scalar residual_variance_oracle(Eigen::Index dest, const NetworkTopology<Scalar> &topo,
                                const PowerAllocation<Scalar> &alloc,
                                const ChannelRealization<Scalar> &h,
                                const NoisePowers<Scalar> &sigma2, std::uint64_t n_noise_draws,
                                std::uint64_t seed, unsigned n_workers = 1) {
    if (n_noise_draws < 2)
        throw std::invalid_argument("Variance needs at least two noise draws.");
    const CVec<Scalar> symbols = CVec<Scalar>::Ones(topo.num_pairs);

    struct BlockSums {
        std::complex<double> sum{0.0, 0.0};
        double sum_sq = 0.0;
    };
    const std::uint64_t n_blocks =
        (n_noise_draws + k_trials_per_block - 1) / k_trials_per_block;
    const std::vector<BlockSums> partial = run_blocks<BlockSums>(
        static_cast<std::size_t>(n_blocks), n_workers, [&](std::size_t block) {
            Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(block));
            const std::uint64_t lo = static_cast<std::uint64_t>(block) * k_trials_per_block;
            const std::uint64_t hi =
                std::min<std::uint64_t>(lo + k_trials_per_block, n_noise_draws);
            BlockSums sums;
            for (std::uint64_t t = lo; t < hi; ++t) {
                const NoiseDraws<Scalar> noise = draw_noise(sigma2, topo.num_pairs, rng);
                const SlotSignals<Scalar> signals =
                    simulate_cycle(topo, alloc, h, symbols, noise, sigma2.sigma2_relay);
                const std::complex<Scalar> residual =
                    reconstruct(dest, signals, topo, h, signals.a_f) -
                    desired_component(dest, signals, topo, h);
                sums.sum += std::complex<double>(residual);
                sums.sum_sq += static_cast<double>(std::norm(residual));
            }
            return sums;
        });

    std::complex<double> sum{0.0, 0.0};
    double sum_sq = 0.0;
    for (const BlockSums &s : partial) {
        sum += s.sum;
        sum_sq += s.sum_sq;
    }
    const double n = static_cast<double>(n_noise_draws);
    return static_cast<Scalar>((sum_sq - std::norm(sum) / n) / (n - 1.0));
}

// Empirical E|X_R|^2 for a fixed realization, expectation over unit-power
// random-phase symbols and relay noise. Checks the power normalization built
// into A_f (the cross terms vanish only in expectation over symbols).
template <typename Scalar>
Scalar relay_power_oracle(const NetworkTopology<Scalar> &topo, const PowerAllocation<Scalar> &alloc,
                          const ChannelRealization<Scalar> &h, Scalar sigma2_relay,
                          std::uint64_t n_draws, std::uint64_t seed, unsigned n_workers = 1) {
    if (n_draws < 1)
        throw std::invalid_argument("Power oracle needs at least one draw.");
    const Scalar a_f = amplification_factor(alloc, topo, h, sigma2_relay);
    const Eigen::Index k = topo.num_pairs;

    const std::uint64_t n_blocks = (n_draws + k_trials_per_block - 1) / k_trials_per_block;
    const std::vector<double> partial = run_blocks<double>(
        static_cast<std::size_t>(n_blocks), n_workers, [&](std::size_t block) {
            Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(block));
            const std::uint64_t lo = static_cast<std::uint64_t>(block) * k_trials_per_block;
            const std::uint64_t hi = std::min<std::uint64_t>(lo + k_trials_per_block, n_draws);
            const Scalar noise_scale = std::sqrt(sigma2_relay);
            double acc = 0.0;
            for (std::uint64_t t = lo; t < hi; ++t) {
                std::complex<Scalar> x_r{0, 0};
                for (Eigen::Index m = 0; m < k; ++m) {
                    const std::complex<Scalar> s(rng.random_phase());
                    const std::complex<Scalar> n_r =
                        noise_scale * std::complex<Scalar>(rng.complex_normal());
                    x_r += amplitude_attenuation(topo.d_source_relay(m), topo.alpha) *
                               h.h_source_relay(m) * std::sqrt(alloc.p_source(m)) * s +
                           n_r;
                }
                acc += static_cast<double>(std::norm(a_f * x_r));
            }
            return acc;
        });

    double total = 0.0;
    for (const double p : partial)
        total += p;
    return static_cast<Scalar>(total / static_cast<double>(n_draws));
}

} // namespace ancsim

#endif
