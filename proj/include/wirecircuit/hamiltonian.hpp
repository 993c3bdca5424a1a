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

#include <map>
#include <memory>
#include <vector>

#include <Eigen/Sparse>

#include "wirecircuit/control.hpp"
#include "wirecircuit/model.hpp"
#include "wirecircuit/sector.hpp"

namespace wirecircuit {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// The switchable control parameters of a running machine.
struct ControlParams {
    std::map<int, double> node_detuning;  // center frequency minus ω₀, rad/s
    std::map<int, int> comb_sign;         // memory nodes only
    double gamma1 = 0.0;
};

ControlParams initial_controls(const QCSpec &spec);

/// Uniform comb of K waveguide modes across the bandwidth W, centered on ω₀.
struct DiscretizedContinuum {
    std::vector<double> mode_frequencies;  // ω_k − ω₀
    double spacing = 0.0;                  // δω = W / K
    double coupling = 0.0;                 // per-mode cavity coupling

    double recurrence_time() const;
    /// Index of the mode at −(ω_k − ω₀).
    std::size_t mirror(std::size_t k) const { return mode_frequencies.size() - 1 - k; }
};

/// Per-mode coupling √(γ₁ δω / π) gives a cavity amplitude decay rate γ₁.
DiscretizedContinuum make_continuum(const WaveguidePort &port, double gamma1);

/// Real-symmetric excitation-sector Hamiltonian (rad/s). The cavity–atom term
/// i g (S⁻a⁺ − S⁺a) is taken in the gauge a → i a, so every coupling is real.
SparseMatrix build_hamiltonian(const QCSpec &spec, const SectorBasis &basis, const ControlParams &controls);

struct SectorHamiltonian {
    std::shared_ptr<const SectorBasis> basis;
    SparseMatrix matrix;
};

SectorHamiltonian build_hamiltonian(const QCSpec &spec, Sector sector, const std::map<int, double> &node_detunings,
                                    double gamma1);

/// Per-element amplitude decay rates γ₂·n_cavity for the lossy cavity channel.
Eigen::VectorXd cavity_loss_rates(const SectorBasis &basis, double gamma2);

}  // namespace wirecircuit
