// Copyright 2026 The wirecircuit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

#include "wirecircuit/hamiltonian.hpp"
#include "wirecircuit/sector.hpp"

namespace wirecircuit {

inline constexpr double kNormTolerance = 1e-9;

/// Exact propagator for one piecewise-constant segment,
///   ψ(t) = exp(−i (H − i R) t) ψ(0),
/// where R holds the per-element amplitude decay rates of the lossy cavity
/// channel. Lossless segments are diagonalized as real-symmetric matrices;
/// lossy ones with a general complex eigendecomposition, and the probability
/// lost to the channel, 2 Σ_b R_b ∫|ψ_b|² dt, is integrated in closed form.
class SegmentPropagator {
   public:
    SegmentPropagator(const SparseMatrix &h, const Eigen::VectorXd &loss_rates);

    bool lossless() const { return lossless_; }
    Eigen::Index dimension() const { return dim_; }

    Eigen::VectorXcd evolve(const Eigen::VectorXcd &psi, double t) const;
    /// Probability leaving through the lossy channel during [0, t].
    double loss_integral(const Eigen::VectorXcd &psi, double t) const;

    /// Advances the state in place and checks ‖ψ‖² + loss bookkeeping.
    void advance(SectorState &state, double duration) const;

   private:
    Eigen::Index dim_ = 0;
    bool lossless_ = true;
    Eigen::VectorXd loss_rates_;
    // Lossless: real orthogonal eigenvectors.
    Eigen::MatrixXd vectors_;
    Eigen::VectorXd energies_;
    // Lossy: complex eigenvectors, their inverse, complex eigenvalues.
    Eigen::MatrixXcd cvectors_;
    Eigen::MatrixXcd cinverse_;
    Eigen::VectorXcd cenergies_;
    std::vector<Eigen::Index> lossy_elements_;
};

/// One-shot propagation with loss bookkeeping.
SectorState propagate(const SectorState &state, const SparseMatrix &h, double duration, double gamma2);

/// Independent route: truncated Taylor series with scaling,
/// exp(−i (H − i R) t) v, using only sparse matrix–vector products.
Eigen::VectorXcd taylor_expmv(const SparseMatrix &h, const Eigen::VectorXd &loss_rates, const Eigen::VectorXcd &v,
                              double t);

}  // namespace wirecircuit
