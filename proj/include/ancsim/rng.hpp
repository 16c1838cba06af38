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

#ifndef ANCSIM_RNG_HPP
#define ANCSIM_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace ancsim {

// Deterministic random stream. The standard library distribution objects are
// implementation-defined, so every experiment would produce different bytes on
// a different stdlib; all transformations from raw 64-bit words to doubles and
// Gaussians are therefore done by hand here and nowhere else.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Independent child stream. Streams for distinct (s0, s1) pairs derived
    // from the same master seed are used for parallel blocks; seed_seq mixes
    // the words, so nearby indices do not produce overlapping streams.
    static Rng substream(std::uint64_t master, std::uint64_t s0, std::uint64_t s1 = 0) {
        std::seed_seq seq{
            static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
            static_cast<std::uint32_t>(s0),     static_cast<std::uint32_t>(s0 >> 32),
            static_cast<std::uint32_t>(s1),     static_cast<std::uint32_t>(s1 >> 32)};
        Rng r(0);
        r.gen_.seed(seq);
        return r;
    }

    std::uint64_t raw() { return gen_(); }

    // Uniform on (0, 1]: never returns 0, so log() below is always finite.
    double uniform01() {
        return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard real Gaussian (Box-Muller, cosine branch only).
    double normal() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    // Circularly symmetric complex Gaussian with E|z|^2 = 1.
    std::complex<double> complex_normal() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-std::log(u1));
        return {r * std::cos(2.0 * std::numbers::pi * u2),
                r * std::sin(2.0 * std::numbers::pi * u2)};
    }

    // Unit-magnitude complex symbol with uniform phase.
    std::complex<double> random_phase() {
        const double u = uniform01();
        return {std::cos(2.0 * std::numbers::pi * u), std::sin(2.0 * std::numbers::pi * u)};
    }

  private:
    std::mt19937_64 gen_;
};

} // namespace ancsim

#endif
