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

#ifndef ANCSIM_CHANNEL_HPP
#define ANCSIM_CHANNEL_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ancsim/rng.hpp"
#include "ancsim/types.hpp"

namespace ancsim {

// Number of channels that shape the residual noise at the destinations:
// K(K-1) cross links + K source-relay links + K relay-destination links.
inline Eigen::Index channel_count(Eigen::Index num_pairs) {
    if (num_pairs < 1)
        throw std::invalid_argument("Pair count must be >= 1.");
    return num_pairs * (num_pairs + 1);
}

// Per ordered pair (i,j), i != j, a 3x3 correlation matrix over the triple
// [h_{S_i D_j}, h_{S_i R}, h_{R D_j}]. Triples for distinct (i,j) are
// independent of each other.
template <typename Scalar>
struct CorrelationSpec {
    Eigen::Index num_pairs = 0;
    std::vector<Eigen::Matrix<Scalar, 3, 3>> gamma_; // row-major (i * K + j); diagonal slots unused

    const Eigen::Matrix<Scalar, 3, 3> &gamma(Eigen::Index i, Eigen::Index j) const {
        return gamma_[static_cast<std::size_t>(i * num_pairs + j)];
    }
    Eigen::Matrix<Scalar, 3, 3> &gamma(Eigen::Index i, Eigen::Index j) {
        return gamma_[static_cast<std::size_t>(i * num_pairs + j)];
    }
};

template <typename Scalar>
void validate(const CorrelationSpec<Scalar> &spec) {
    if (spec.num_pairs < 1)
        throw std::invalid_argument("Correlation spec must cover at least one pair.");
    if (spec.gamma_.size() != static_cast<std::size_t>(spec.num_pairs * spec.num_pairs))
        throw std::invalid_argument("Correlation spec has the wrong number of matrices.");
    for (Eigen::Index i = 0; i < spec.num_pairs; ++i) {
        for (Eigen::Index j = 0; j < spec.num_pairs; ++j) {
            if (i == j)
                continue;
            // guard against config round-off before checking eigenvalues
            const Eigen::Matrix<Scalar, 3, 3> g =
                Scalar(0.5) * (spec.gamma(i, j) + spec.gamma(i, j).transpose());
            const std::string where =
                " in Gamma(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ").";
            for (int r = 0; r < 3; ++r) {
                if (std::abs(g(r, r) - Scalar(1)) > Scalar(1e-12))
                    throw std::invalid_argument("Diagonal entries must be 1" + where);
                for (int c = 0; c < 3; ++c)
                    if (std::abs(g(r, c)) > Scalar(1) + Scalar(1e-12))
                        throw std::invalid_argument("Correlations must lie in [-1, 1]" + where);
            }
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Scalar, 3, 3>> es(g,
                                                                          Eigen::EigenvaluesOnly);
            if (es.eigenvalues().minCoeff() < Scalar(-1e-12))
                throw std::invalid_argument("Matrix is not positive semi-definite" + where);
        }
    }
}

// All off-diagonals equal rho. The 3x3 matrix is PSD iff rho >= -1/2; the
// boundary is excluded so that downstream factorizations stay well-behaved.
template <typename Scalar>
CorrelationSpec<Scalar> uniform_gamma(Scalar rho, Eigen::Index num_pairs) {
    if (!(rho >= Scalar(-1) && rho <= Scalar(1)))
        throw std::invalid_argument("Correlation factor must lie in [-1, 1].");
    if (!(rho > Scalar(-0.5)))
        throw std::invalid_argument("Uniform correlation factor must lie in (-0.5, 1]; " +
                                    std::to_string(rho) + " is not positive semi-definite.");
    if (num_pairs < 1)
        throw std::invalid_argument("Pair count must be >= 1.");
    CorrelationSpec<Scalar> spec;
    spec.num_pairs = num_pairs;
    Eigen::Matrix<Scalar, 3, 3> g = Eigen::Matrix<Scalar, 3, 3>::Constant(rho);
    g.diagonal().setOnes();
    spec.gamma_.assign(static_cast<std::size_t>(num_pairs * num_pairs), g);
    return spec;
}

// Lower-triangular factor L with L L^T = A for symmetric positive
// SEMI-definite A. Eigen's LLT rejects semidefinite input (e.g. the rank-1
// all-ones matrix at rho = 1), so the factorization is done by hand: a pivot
// that vanishes (to tolerance) zeroes its column, which is exact whenever the
// matrix is truly PSD. The reconstruction is verified afterwards.
template <typename Scalar, int N>
Eigen::Matrix<Scalar, N, N> cholesky_psd(const Eigen::Matrix<Scalar, N, N> &a_in) {
    const Eigen::Matrix<Scalar, N, N> a = Scalar(0.5) * (a_in + a_in.transpose());
    const int n = static_cast<int>(a.rows());
    Eigen::Matrix<Scalar, N, N> l = Eigen::Matrix<Scalar, N, N>::Zero(n, n);
    const Scalar scale = std::max(a.diagonal().maxCoeff(), Scalar(1));
    for (int j = 0; j < n; ++j) {
        Scalar d = a(j, j);
        for (int k = 0; k < j; ++k)
            d -= l(j, k) * l(j, k);
        if (d > scale * Scalar(1e-12)) {
            l(j, j) = std::sqrt(d);
            for (int i = j + 1; i < n; ++i) {
                Scalar s = a(i, j);
                for (int k = 0; k < j; ++k)
                    s -= l(i, k) * l(j, k);
                l(i, j) = s / l(j, j);
            }
        }
        // else: pivot ~ 0, column stays zero
    }
    if (((l * l.transpose()) - a).template lpNorm<Eigen::Infinity>() > Scalar(1e-10))
        throw std::invalid_argument("Matrix is not positive semi-definite (factorization failed).");
    return l;
}

// One draw of every coefficient needed for a slot cycle. Each (i,j) triple is
// stored separately because for K >= 3 a relay-side channel belongs to more
// than one triple while the triples are still sampled independently; the
// evaluation of destination j then uses the (i,j)-triple draw. The canonical
// vectors pick the draw from the owning triple (lowest foreign index) and are
// what A_f and the desired path use. For K = 2 the triples are disjoint, so
// the per-triple and canonical views are the same numbers.
template <typename Scalar>
struct ChannelRealization {
    Eigen::Index num_pairs = 0;
    CMat<Scalar> h_source_dest;       // (i,j) = h_{S_i D_j}
    CVec<Scalar> h_source_relay;      // canonical h_{S_i R}
    CVec<Scalar> h_relay_dest;        // canonical h_{R D_j}
    CMat<Scalar> triple_source_relay; // (i,j) = h_{S_i R} as drawn in triple (i,j)
    CMat<Scalar> triple_relay_dest;   // (i,j) = h_{R D_j} as drawn in triple (i,j)
};

template <typename Scalar>
ChannelRealization<Scalar> sample_channels(const CorrelationSpec<Scalar> &spec, Rng &rng) {
    using C = std::complex<Scalar>;
    const Eigen::Index k = spec.num_pairs;
    ChannelRealization<Scalar> h;
    h.num_pairs = k;
    h.h_source_dest = CMat<Scalar>::Zero(k, k);
    h.h_source_relay = CVec<Scalar>::Zero(k);
    h.h_relay_dest = CVec<Scalar>::Zero(k);
    h.triple_source_relay = CMat<Scalar>::Zero(k, k);
    h.triple_relay_dest = CMat<Scalar>::Zero(k, k);

    // correlated triples, row-major order for a reproducible draw sequence
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            if (i == j)
                continue;
            const Eigen::Matrix<Scalar, 3, 3> l = cholesky_psd<Scalar, 3>(spec.gamma(i, j));
            Eigen::Matrix<C, 3, 1> w;
            for (int m = 0; m < 3; ++m) {
                const std::complex<double> z = rng.complex_normal();
                w(m) = C(static_cast<Scalar>(z.real()), static_cast<Scalar>(z.imag()));
            }
            const Eigen::Matrix<C, 3, 1> z = l.template cast<C>() * w;
            h.h_source_dest(i, j) = z(0);
            h.triple_source_relay(i, j) = z(1);
            h.triple_relay_dest(i, j) = z(2);
        }
    }
    // direct links are not part of any triple
    for (Eigen::Index i = 0; i < k; ++i) {
        const std::complex<double> z = rng.complex_normal();
        h.h_source_dest(i, i) = C(static_cast<Scalar>(z.real()), static_cast<Scalar>(z.imag()));
    }
    // canonical relay-side draws: owning triple = lowest foreign index
    for (Eigen::Index i = 0; i < k; ++i) {
        if (k >= 2) {
            const Eigen::Index j_own = (i == 0) ? 1 : 0;
            h.h_source_relay(i) = h.triple_source_relay(i, j_own);
        } else {
            const std::complex<double> z = rng.complex_normal();
            h.h_source_relay(i) = C(static_cast<Scalar>(z.real()), static_cast<Scalar>(z.imag()));
        }
    }
    for (Eigen::Index j = 0; j < k; ++j) {
        if (k >= 2) {
            const Eigen::Index i_own = (j == 0) ? 1 : 0;
            h.h_relay_dest(j) = h.triple_relay_dest(i_own, j);
        } else {
            const std::complex<double> z = rng.complex_normal();
            h.h_relay_dest(j) = C(static_cast<Scalar>(z.real()), static_cast<Scalar>(z.imag()));
        }
    }
    return h;
}

} // namespace ancsim

#endif
