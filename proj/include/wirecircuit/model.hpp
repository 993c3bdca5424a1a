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
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wirecircuit/units.hpp"

namespace wirecircuit {

/// Lumped parameters of the wire-circuit bus (R-loop, twisted-pair line, node loops).
struct BusParams {
    Henry inductance{1.0};
    Farad capacitance{1.0};
    Ohm loss_resistance{1.0};
    double permittivity = 1.0;
    int harmonic_index = 1;
    // Loop diameters are carried as metadata only.
    std::optional<Meters> receiver_loop_diameter;
    std::optional<Meters> node_loop_diameter;
};

/// Every atom of the node shares one offset from the node center frequency.
struct Homogeneous {
    RadPerSec offset{0.0};
};

/// Gradient-broadened memory line: Lorentzian of half-width `width`, discretized
/// as a deterministic symmetric comb. `sign` tracks detuning reversals.
struct InhomogeneousComb {
    RadPerSec width{0.0};
    int sign = +1;
};

using DetuningProfile = std::variant<Homogeneous, InhomogeneousComb>;

enum class NodeRole { Memory, Processing };

struct NodeSpec {
    int id = 0;
    int atom_count = 1;
    RadPerSec center_frequency{0.0};
    DetuningProfile profile = Homogeneous{};
    RadPerSec coupling_g{0.0};
    Seconds t2{1.0};
    NodeRole role = NodeRole::Processing;
    int bus = 0;
};

struct WaveguidePort {
    RadPerSec gamma1{0.0};
    RadPerSec gamma2{0.0};
    RadPerSec bandwidth{1.0};
    int mode_count = 2;
};

/// Bus graph of a 2D/3D layout. Node membership lives on NodeSpec::bus;
/// links are the vertical TWT lines joining neighbouring buses.
struct Topology {
    std::vector<int> buses{0};
    std::vector<std::pair<int, int>> links;
};

struct QCSpec {
    BusParams bus;
    WaveguidePort port;
    std::vector<NodeSpec> nodes;
    Topology topology;
};

struct Diagnostic {
    std::string code;
    std::string message;
};

// Dispersive regime requires |Δ| ≥ kDispersiveMargin · g√N.
inline constexpr double kDispersiveMargin = 10.0;
// Protocol durations must stay below T₂ / kT2BudgetFactor.
inline constexpr double kT2BudgetFactor = 10.0;
// Off-resonant parking detuning in units of g√N.
inline constexpr double kParkingFactor = 1e4;

RadPerSec resonant_frequency(const BusParams &bus);
double q_factor(const BusParams &bus);
Meters twt_line_length(const BusParams &bus, RadPerSec omega0);

/// Γ = N g² / Δ_in, the cavity damping rate produced by the memory ensemble.
RadPerSec ensemble_coupling(const NodeSpec &node);
std::int64_t matched_atom_number(RadPerSec gamma1, RadPerSec g, RadPerSec delta_in);
RadPerSec coherent_gate_frequency(std::int64_t atom_count, RadPerSec g, RadPerSec delta);

/// g√N, the coupling of the node's symmetric excitation to the bus.
RadPerSec collective_coupling(const NodeSpec &node);

/// Detuning that tunes a node away from the bus: kParkingFactor · g√N.
double parking_detuning(const NodeSpec &node);

/// Offsets of every atom from the node center frequency, in atom order.
std::vector<double> atom_offsets(const NodeSpec &node);

const NodeSpec &node_by_id(const QCSpec &spec, int id);
const NodeSpec &memory_node(const QCSpec &spec);
bool has_node(const QCSpec &spec, int id);

/// Node center frequency minus the bus frequency.
double initial_detuning(const QCSpec &spec, const NodeSpec &node);
Seconds min_t2(const QCSpec &spec);

/// Structural invariants (positivity, single memory node, connected bus graph).
/// Throws Error(InvalidParameter) on the first violation.
void check_spec(const QCSpec &spec);

/// Physics-validity diagnostics for a protocol of the given duration.
std::vector<Diagnostic> validate_spec(const QCSpec &spec, Seconds protocol_duration);

}  // namespace wirecircuit
