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

#include <complex>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wirecircuit/hamiltonian.hpp"
#include "wirecircuit/model.hpp"

namespace wirecircuit {

/// Uniform sample grid: origin + i·step, i = 0..count-1.
struct UniformGrid {
    double origin = 0.0;
    double step = 1.0;
    std::size_t count = 0;

    double at(std::size_t i) const { return origin + static_cast<double>(i) * step; }
    double end() const { return at(count == 0 ? 0 : count - 1); }
};

enum class WaveformDomain { Time, Frequency };

/// Complex envelope in the frame rotating at `carrier` (ω₀ by default).
/// Time samples are in seconds, frequency samples are offsets from ω₀ in rad/s.
struct Waveform {
    WaveformDomain domain = WaveformDomain::Time;
    UniformGrid grid;
    Eigen::VectorXcd envelope;
    double carrier = 0.0;
    std::vector<double> mode_markers;

    /// Σ|envelope|²·step, the photon probability carried.
    double probability() const;
    void normalize();
    /// |⟨a|b⟩| of two waveforms on the same grid, each normalized.
    static double overlap(const Waveform &a, const Waveform &b);
};

enum class ModeShape { Gaussian, Exponential, SelfMode };

const char *mode_shape_name(ModeShape shape);
ModeShape parse_mode_shape(const std::string &name);

/// Maximum pairwise probability overlap allowed between adjacent modes.
inline constexpr double kModeOverlapLimit = 1e-6;

/// Unnormalized single-mode profile centered at `center`. Gaussian is
/// exp(−τ²/2w²); Exponential is exp(−|τ|/w); SelfMode is the rising, time-
/// reversed self-mode e^{−|τ|/2w}·sin(|τ|/w) for τ < 0 and zero afterwards.
std::complex<double> mode_profile(ModeShape shape, double t, double center, double width);

/// Equal-weight train of M modes at t_m = first_center + m·spacing.
/// Throws TemporalCrowding when adjacent modes overlap by ≥ 1e-6 in probability
/// and InvalidParameter when a mode does not fit in the grid.
Waveform make_input_waveform(int modes, ModeShape shape, double spacing, double width, const UniformGrid &grid,
                             double first_center = 0.0);

/// Time grid dual to the discretized waveguide: K samples spaced 2π/W from `origin`.
UniformGrid waveguide_time_grid(const WaveguidePort &port, double origin);

/// Free-field mode amplitudes b̃_k = √(δω/2π)·Σ_n φ(t_n) e^{iδ_k t_n} Δt of a time
/// waveform. On the dual grid this is an exact unitary transform.
Eigen::VectorXcd mode_amplitudes(const Waveform &wave, const DiscretizedContinuum &continuum);

/// Inverse of mode_amplitudes on the dual grid starting at `origin`.
Waveform from_mode_amplitudes(const Eigen::VectorXcd &modes, const DiscretizedContinuum &continuum, double origin);

/// Resamples a time waveform onto frequency offsets (the modes' δ_k).
Waveform spectrum(const Waveform &wave, const DiscretizedContinuum &continuum);

/// Σ δ_k |b̃_k|² / Σ |b̃_k|².
double spectral_centroid(const Eigen::VectorXcd &modes, const DiscretizedContinuum &continuum);

/// CSV with columns time_s|omega_rad_s, re, im. Lines starting with '#' are comments.
void write_waveform_csv(std::ostream &os, const Waveform &wave);
Waveform read_waveform_csv(std::istream &is);

}  // namespace wirecircuit
