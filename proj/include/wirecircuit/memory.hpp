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

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "wirecircuit/control.hpp"
#include "wirecircuit/model.hpp"
#include "wirecircuit/sector.hpp"
#include "wirecircuit/simulation.hpp"
#include "wirecircuit/waveform.hpp"

namespace wirecircuit {

/// Line-centre storage efficiency 4γ₁Γ / (γ₁+γ₂+Γ)².
double storage_efficiency(RadPerSec Gamma, RadPerSec gamma1, RadPerSec gamma2);

/// Stationary absorption probability at detuning δ from ω₀ for a cavity
/// loaded by a Lorentzian ensemble line of half-width Δ_in:
///   A(δ) = 4γ₁ Re S(δ) / |γ₁+γ₂−iδ+S(δ)|²,  S(δ) = ΓΔ_in/(Δ_in − iδ).
double spectral_absorption(double delta, RadPerSec Gamma, RadPerSec gamma1, RadPerSec gamma2, RadPerSec delta_in);

/// A(δ) averaged over a Lorentzian input power spectrum of half-width δω.
/// Throws Bandwidth when δω ≥ `bandwidth`.
double spectral_efficiency(RadPerSec delta_omega, RadPerSec Gamma, RadPerSec gamma1, RadPerSec gamma2,
                           RadPerSec delta_in,
                           RadPerSec bandwidth = RadPerSec(std::numeric_limits<double>::infinity()));

/// Frequencies below are offsets from ω₀ (rad/s); an inverted spectrum has
/// output_centroid = −input_centroid.
struct MemoryResult {
    double stored_fraction = 0.0;
    double echo_efficiency = 0.0;
    double echo_fidelity = 0.0;
    double input_centroid = 0.0;
    double output_centroid = 0.0;
    double echo_peak_time = 0.0;
    double input_width = 0.0;  // rms duration of the input
    double norm_deviation = 0.0;
    Waveform echo_field;  // output field, gated to t ≥ t′
};

/// Settling time of the loaded cavity after the drive ends.
double settle_time(const QCSpec &spec);

struct StorageRun {
    Simulation sim;  // holds the state at the end of storage
    MemoryResult result;
    DiscretizedContinuum continuum;
    Eigen::VectorXcd input_modes;  // b̃_in
    double input_start = 0.0;      // support of the input, 1e-12 tails dropped
    double input_end = 0.0;
    std::vector<Diagnostic> diagnostics;
};

struct StorageOptions {
    std::optional<double> end_time;  // defaults to input end + settle time
    BasisOptions basis;              // defaults to the memory node alone
};

/// Loads the input wave packet into the waveguide modes and propagates with
/// the waveguide coupled until the pulse has entered.
StorageRun simulate_storage(const QCSpec &spec, const Waveform &input, const StorageOptions &options = {});

/// Flips the memory detunings at t′ and collects the echo emitted into the
/// waveguide within [t′, 2t′ − input_start + settle].
MemoryResult simulate_echo(StorageRun stored, const QCSpec &spec, double t_prime);

/// Echo-order markers t_m = t′ − r_m/2 of modes whose reversal reference is
/// r_m (pulse centre, or self-mode start); mode m rephases at 2t_m.
std::vector<double> echo_markers(const std::vector<double> &references, double t_prime);

/// Time-bin layout of M self-mode photons loaded back to back: mode i starts
/// at s_i = i·(duration + gap), the reversal t′ follows the last mode by one
/// settling time, and markers are the echo-order t_m.
struct MemoryLayout {
    std::vector<double> starts;
    std::vector<double> markers;
    double t_prime = 0.0;
    double mode_duration = 0.0;
    double mode_gap = 0.0;
};

/// Defaults: duration 10/Γ, gap 2/Γ.
MemoryLayout self_mode_layout(const QCSpec &spec, int stored_modes, double mode_duration = 0.0, double mode_gap = 0.0);

struct LoadedMemory {
    StorageRun run;  // state at t′, waveguide still coupled
    MemoryLayout layout;
    Waveform input;
    std::vector<Waveform> mode_inputs;  // per echo index, normalized
    std::vector<double> mode_weights;   // per echo index, share of the input probability
};

/// Loads one photon spread equally over the layout's time bins, each shaped
/// (self_mode_input) for the collective coupling listed at its echo index.
/// Every node of the spec is simulated; processing nodes should be parked.
LoadedMemory load_self_modes(const QCSpec &spec, const MemoryLayout &layout, const std::vector<double> &couplings,
                             double grid_step = 0.0);

struct Retrieval {
    int mode = 1;  // index into ascending echo markers
    int target = 0;
};

struct RetrievalOptions {
    double t_prime = 0.0;
    std::optional<double> guard;  // defaults to 10/Γ
};

/// Schedule retrieving the listed modes (ascending mode index) into their
/// targets after a single reversal at t′. The memory node is parked while
/// modes it must not release rephase.
std::vector<ControlEvent> retrieval_schedule(const std::vector<Retrieval> &retrievals,
                                             const std::vector<double> &markers, const QCSpec &spec,
                                             const RetrievalOptions &options);

std::vector<ControlEvent> selective_retrieval_schedule(int k, const std::vector<double> &markers, const QCSpec &spec,
                                                       int target_node, const RetrievalOptions &options);

/// E_k(t) = E₀ e^{−Γ|t−2t_k|/2} sin S(t−2t_k)/S for t < 2t_k, zero afterwards,
/// S = √(Ng² − Γ²/4), normalized on the grid.
Waveform self_mode_waveform(std::int64_t atom_count, RadPerSec g, RadPerSec Gamma, double t_k, const UniformGrid &grid);

/// Waveguide input that drives the loaded cavity (memory node resonant) along
/// the forward self-mode a(τ) = e^{−Γτ/2} sin Sτ for τ ∈ [0, duration].
/// Includes the exact response of the discrete memory comb.
Waveform self_mode_input(const QCSpec &spec, double collective_g, double start, double duration,
                         const UniformGrid &grid);

}  // namespace wirecircuit
