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

#include "wirecircuit/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "wirecircuit/errors.hpp"

namespace wirecircuit {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

RadPerSec resonant_frequency(const BusParams &bus) {
    const double l = bus.inductance.value();
    const double c = bus.capacitance.value();
    if (!(l > 0.0) || !(c > 0.0)) {
        fail(ErrorCode::InvalidParameter, "inductance and capacitance must be positive");
    }
    return RadPerSec(1.0 / std::sqrt(l * c));
}

double q_factor(const BusParams &bus) {
    const double l = bus.inductance.value();
    const double c = bus.capacitance.value();
    const double r = bus.loss_resistance.value();
    if (!(r > 0.0)) {
        fail(ErrorCode::InvalidParameter, "loss resistance must be positive");
    }
    if (!(l > 0.0) || !(c > 0.0)) {
        fail(ErrorCode::InvalidParameter, "inductance and capacitance must be positive");
    }
    return std::sqrt(l / c) / r;
}

Meters twt_line_length(const BusParams &bus, RadPerSec omega0) {
    if (!(omega0.value() > 0.0)) fail(ErrorCode::InvalidParameter, "omega0 must be positive");
    if (!(bus.permittivity >= 1.0)) fail(ErrorCode::InvalidParameter, "permittivity must be >= 1");
    if (bus.harmonic_index < 1) fail(ErrorCode::InvalidParameter, "harmonic index must be >= 1");
    return Meters(bus.harmonic_index * std::numbers::pi * kSpeedOfLight /
                  (omega0.value() * std::sqrt(bus.permittivity)));
}

RadPerSec ensemble_coupling(const NodeSpec &node) {
    const auto *comb = std::get_if<InhomogeneousComb>(&node.profile);
    if (comb == nullptr) {
        fail(ErrorCode::WrongProfile, "ensemble coupling needs an inhomogeneous node");
    }
    if (node.atom_count < 1) fail(ErrorCode::InvalidParameter, "atom count must be >= 1");
    if (!(comb->width.value() > 0.0)) fail(ErrorCode::InvalidParameter, "inhomogeneous width must be positive");
    const double g = node.coupling_g.value();
    return RadPerSec(node.atom_count * g * g / comb->width.value());
}

std::int64_t matched_atom_number(RadPerSec gamma1, RadPerSec g, RadPerSec delta_in) {
    if (!(gamma1.value() > 0.0) || !(g.value() > 0.0) || !(delta_in.value() > 0.0)) {
        fail(ErrorCode::InvalidParameter, "gamma1, g and delta_in must be positive");
    }
    const double n = gamma1.value() * delta_in.value() / (g.value() * g.value());
    if (n >= static_cast<double>(std::numeric_limits<std::int64_t>::max())) {
        fail(ErrorCode::InvalidParameter, "matched atom number overflows");
    }
    const std::int64_t rounded = std::llround(n);
    if (rounded < 1) {
        fail(ErrorCode::InfeasibleMatching, "matching needs fewer than one atom (N=" + fmt(n) + ")");
    }
    return rounded;
}

RadPerSec coherent_gate_frequency(std::int64_t atom_count, RadPerSec g, RadPerSec delta) {
    if (atom_count < 1) fail(ErrorCode::InvalidParameter, "atom count must be >= 1");
    if (delta.value() == 0.0) {
        fail(ErrorCode::ResonantRegime, "zero detuning: the dispersive exchange model does not apply");
    }
    return RadPerSec(2.0 * static_cast<double>(atom_count) * g.value() * g.value() / delta.value());
}

RadPerSec collective_coupling(const NodeSpec &node) {
    return RadPerSec(node.coupling_g.value() * std::sqrt(static_cast<double>(node.atom_count)));
}

double parking_detuning(const NodeSpec &node) { return kParkingFactor * collective_coupling(node).value(); }

std::vector<double> atom_offsets(const NodeSpec &node) {
    const auto n = static_cast<std::size_t>(std::max(node.atom_count, 0));
    std::vector<double> out(n, 0.0);
    if (const auto *h = std::get_if<Homogeneous>(&node.profile)) {
        std::fill(out.begin(), out.end(), h->offset.value());
        return out;
    }
    const auto &comb = std::get<InhomogeneousComb>(node.profile);
    // Quantiles of a Lorentzian of half-width Δ_in; mirror-symmetric by construction.
    for (std::size_t j = 0; j < n; ++j) {
        const double u = (static_cast<double>(j) + 0.5) / static_cast<double>(n);
        double d = comb.width.value() * std::tan(std::numbers::pi * (u - 0.5));
        if (2 * j + 1 == n) d = 0.0;
        out[j] = comb.sign * d;
    }
    for (std::size_t j = 0; j < n / 2; ++j) {
        const double sym = 0.5 * (out[n - 1 - j] - out[j]);
        out[j] = -sym;
        out[n - 1 - j] = sym;
    }
    return out;
}

const NodeSpec &node_by_id(const QCSpec &spec, int id) {
    for (const auto &n : spec.nodes) {
        if (n.id == id) return n;
    }
    fail(ErrorCode::Addressing, "unknown node id " + std::to_string(id));
}

bool has_node(const QCSpec &spec, int id) {
    return std::any_of(spec.nodes.begin(), spec.nodes.end(), [id](const NodeSpec &n) { return n.id == id; });
}

const NodeSpec &memory_node(const QCSpec &spec) {
    for (const auto &n : spec.nodes) {
        if (n.role == NodeRole::Memory) return n;
    }
    fail(ErrorCode::Addressing, "spec has no memory node");
}

double initial_detuning(const QCSpec &spec, const NodeSpec &node) {
    return node.center_frequency.value() - resonant_frequency(spec.bus).value();
}

Seconds min_t2(const QCSpec &spec) {
    double t = std::numeric_limits<double>::infinity();
    for (const auto &n : spec.nodes) t = std::min(t, n.t2.value());
    return Seconds(t);
}

void check_spec(const QCSpec &spec) {
    const auto &bus = spec.bus;
    if (!(bus.inductance.value() > 0.0) || !(bus.capacitance.value() > 0.0) ||
        !(bus.loss_resistance.value() > 0.0)) {
        fail(ErrorCode::InvalidParameter, "bus L, C and r must be positive");
    }
    if (!(bus.permittivity >= 1.0)) fail(ErrorCode::InvalidParameter, "permittivity must be >= 1");
    if (bus.harmonic_index < 1) fail(ErrorCode::InvalidParameter, "harmonic index must be >= 1");
    if (bus.receiver_loop_diameter && bus.node_loop_diameter &&
        !(bus.node_loop_diameter->value() < bus.receiver_loop_diameter->value())) {
        fail(ErrorCode::InvalidParameter, "node loop diameter must be smaller than the receiver loop");
    }

    const auto &port = spec.port;
    if (port.gamma1.value() < 0.0 || port.gamma2.value() < 0.0) {
        fail(ErrorCode::InvalidParameter, "waveguide rates must be non-negative");
    }
    if (!(port.bandwidth.value() > 0.0)) fail(ErrorCode::InvalidParameter, "waveguide bandwidth must be positive");
    if (port.mode_count < 2) fail(ErrorCode::InvalidParameter, "waveguide needs at least two modes");

    std::set<int> ids;
    int memory_count = 0;
    const std::set<int> buses(spec.topology.buses.begin(), spec.topology.buses.end());
    for (const auto &n : spec.nodes) {
        if (!ids.insert(n.id).second) fail(ErrorCode::InvalidParameter, "duplicate node id " + std::to_string(n.id));
        if (n.atom_count < 1) fail(ErrorCode::InvalidParameter, "node atom count must be >= 1");
        if (!(n.coupling_g.value() > 0.0)) fail(ErrorCode::InvalidParameter, "node coupling g must be positive");
        if (!(n.t2.value() > 0.0)) fail(ErrorCode::InvalidParameter, "node T2 must be positive");
        if (!(n.center_frequency.value() > 0.0)) fail(ErrorCode::InvalidParameter, "node center frequency must be positive");
        if (!buses.contains(n.bus)) fail(ErrorCode::InvalidParameter, "node on unknown bus " + std::to_string(n.bus));
        const bool inhomogeneous = std::holds_alternative<InhomogeneousComb>(n.profile);
        if (n.role == NodeRole::Memory) {
            ++memory_count;
            if (!inhomogeneous) fail(ErrorCode::InvalidParameter, "memory node must be inhomogeneous");
            const auto &comb = std::get<InhomogeneousComb>(n.profile);
            if (!(comb.width.value() > 0.0)) fail(ErrorCode::InvalidParameter, "memory width must be positive");
            if (comb.sign != 1 && comb.sign != -1) fail(ErrorCode::InvalidParameter, "comb sign must be +1 or -1");
        } else if (inhomogeneous) {
            fail(ErrorCode::InvalidParameter, "processing nodes must be homogeneous");
        }
    }
    if (memory_count != 1) fail(ErrorCode::InvalidParameter, "spec needs exactly one memory node");

    // Bus graph connectivity.
    if (buses.size() != spec.topology.buses.size()) fail(ErrorCode::InvalidParameter, "duplicate bus id");
    std::map<int, std::vector<int>> adj;
    for (const auto &[a, b] : spec.topology.links) {
        if (!buses.contains(a) || !buses.contains(b)) fail(ErrorCode::InvalidParameter, "link references unknown bus");
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    if (!buses.empty()) {
        std::set<int> seen{*buses.begin()};
        std::vector<int> stack{*buses.begin()};
        while (!stack.empty()) {
            const int b = stack.back();
            stack.pop_back();
            for (int nb : adj[b]) {
                if (seen.insert(nb).second) stack.push_back(nb);
            }
        }
        if (seen.size() != buses.size()) fail(ErrorCode::InvalidParameter, "bus graph is not connected");
    }
    (void)resonant_frequency(bus);
}

std::vector<Diagnostic> validate_spec(const QCSpec &spec, Seconds protocol_duration) {
    std::vector<Diagnostic> out;
    const double t2 = min_t2(spec).value();
    if (protocol_duration.value() >= t2 / kT2BudgetFactor) {
        out.push_back({"t2_budget", "protocol duration " + fmt(protocol_duration.value()) + " s is not << T2 (min T2 " +
                                        fmt(t2) + " s, budget T2/10)"});
    }
    for (const auto &n : spec.nodes) {
        if (n.role != NodeRole::Processing) continue;
        const double detuning = std::abs(initial_detuning(spec, n));
        const double margin = kDispersiveMargin * collective_coupling(n).value();
        if (detuning < margin) {
            out.push_back({"dispersive_margin", "node " + std::to_string(n.id) + " detuning " + fmt(detuning) +
                                                    " rad/s is below 10 g sqrt(N) = " + fmt(margin) + " rad/s"});
        }
    }
    const double recurrence =
        2.0 * std::numbers::pi * spec.port.mode_count / spec.port.bandwidth.value();
    if (recurrence <= protocol_duration.value()) {
        out.push_back({"waveguide_recurrence", "waveguide recurrence time " + fmt(recurrence) +
                                                   " s does not exceed the protocol duration"});
    }
    return out;
}

}  // namespace wirecircuit
