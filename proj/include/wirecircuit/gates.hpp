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

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "wirecircuit/control.hpp"
#include "wirecircuit/memory.hpp"
#include "wirecircuit/model.hpp"
#include "wirecircuit/simulation.hpp"
#include "wirecircuit/waveform.hpp"

namespace wirecircuit {

/// Collective two-node basis: |00⟩, |10⟩, |01⟩, |11⟩, with |1⟩_m the node's
/// symmetric single excitation.
enum CollectiveState { k00 = 0, k10 = 1, k01 = 2, k11 = 3 };

/// (g²/Δ)·[[0,0,0,0],[0,N,N,0],[0,N,N,0],[0,0,0,2N]] in rad/s.
Eigen::Matrix4d effective_matrix(std::int64_t atom_count, RadPerSec g, RadPerSec delta);

/// exp(−i·matrix·t) for a real-symmetric generator.
Eigen::Matrix4cd collective_evolution(const Eigen::Matrix4d &matrix, double t);

struct GateCalibration {
    double omega_c = 0.0;
    double t_iswap = 0.0;              // π/ω_c, full |10⟩ → |01⟩ transfer
    double t_sqrt_iswap = 0.0;         // π/(2ω_c)
    double t_iswap_quoted = 0.0;       // 1/ω_c as commonly quoted
    double t_sqrt_iswap_quoted = 0.0;  // 1/(2ω_c)
    double delta = 0.0;
    double leakage_estimate = 0.0;  // 4Ng²/Δ², peak virtual bus population
    std::vector<Diagnostic> warnings;
};

GateCalibration gate_times(std::int64_t atom_count, RadPerSec g, RadPerSec delta);

enum class TargetGate { ISwap, SqrtISwap };

Eigen::Matrix4cd target_unitary(TargetGate gate);

/// max over a global phase and per-qubit Z phases applied before and after
/// `actual` of |Tr(target† · Z · actual · Z′)|² / 16. Throws Contract when
/// `actual` is not unitary within 1e-9.
double gate_fidelity(const Eigen::Matrix4cd &actual, TargetGate target);

/// Two equal homogeneous nodes (ids 1, 2) of N atoms, detuned by Δ from a
/// bus with frequency 1 rad/s; no memory node and no waveguide.
QCSpec gate_pair_spec(int atom_count, RadPerSec g, RadPerSec delta);

struct OscillationResult {
    double omega_measured = 0.0;
    double omega_formula = 0.0;
    double max_leakage = 0.0;  // population outside span{|10⟩, |01⟩}
    double leakage_bound = 0.0;
    std::vector<double> times;
    std::vector<double> p_target;  // symmetric population of node 2
};

struct OscillationOptions {
    double periods = 2.6;  // simulated span in units of 2π/ω_c
    std::size_t samples_per_period = 20000;
};

/// Brute-force single-excitation dynamics of two N-atom nodes plus the bus,
/// starting from |10⟩. The exchange frequency is 2π over the spacing of the
/// first two maxima of the node-2 population, each located by a least-squares
/// parabola through the samples above 0.75. Throws Regime without two maxima.
OscillationResult full_model_oscillation(int atom_count, RadPerSec g, RadPerSec delta,
                                         const OscillationOptions &options = {});

/// Four nodes in two pairs detuned by Δ_a and Δ_b. Returns the largest
/// population reaching the other pair from either pair's |10⟩ over one
/// iSWAP time of the slower pair.
double parallel_pair_crosstalk(int atom_count, RadPerSec g, RadPerSec delta_a, RadPerSec delta_b,
                               std::size_t samples = 4000);

struct TwoExcitationResult {
    double max_leakage = 0.0;        // 1 − |⟨11|ψ⟩|² maximized over [0, t_iswap]
    double leakage_at_sqrt = 0.0;    // at t_√iswap
    double leakage_at_iswap = 0.0;   // at t_iswap
};

/// |11⟩ dynamics in the two-excitation sector of the full model.
TwoExcitationResult two_excitation_leakage(int atom_count, RadPerSec g, RadPerSec delta, std::size_t samples = 400);

struct TransferPlan {
    int stored_modes = 1;
    std::vector<Retrieval> retrievals;  // ascending echo order
    double mode_duration = 0.0;         // defaults to 10/Γ
    double mode_gap = 0.0;              // defaults to 2/Γ
    double grid_step = 0.0;             // input sampling, defaults to 1/(50 Γ)
    bool equalize = true;               // false leaves the targets parked
    bool strict = true;                 // a parked target is a sequencing error
    std::size_t field_samples = 400;
};

struct TransferOutcome {
    int mode = 0;
    int target = 0;
    double marker = 0.0;         // t_k
    double fidelity = 0.0;       // target symmetric population at 2t_k / stored
    double self_mode_overlap = 0.0;
    double stored_population = 0.0;
    double target_population = 0.0;
};

struct TransferResult {
    std::vector<TransferOutcome> outcomes;
    std::vector<ControlEvent> events;
    double t_prime = 0.0;
    double stored_total = 0.0;
    NormReport norm;
    Waveform cavity_field;  // bus field before the first rephasing
    Waveform self_mode;
};

/// Loads self-mode-shaped photons through the waveguide into the memory
/// (targets parked), switches the waveguide off, reverses the memory at t′
/// and retrieves each listed mode into its target node.
TransferResult transfer_qm_to_node(const QCSpec &spec, const TransferPlan &plan);
TransferResult transfer_qm_to_node(const QCSpec &spec, int target_node, int mode = 1, int stored_modes = 1);

}  // namespace wirecircuit
