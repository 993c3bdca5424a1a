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

#include <cmath>
#include <vector>

#include "wirecircuit/model.hpp"

namespace wirecircuit::fixtures {

/// Memory-only spec at desk scale: ω₀ = 1 rad/s, memory comb of half-width
/// `delta_in` holding N atoms with Γ = N g²/Δ_in.
inline QCSpec memory_spec(int atoms, double Gamma, double gamma1, double gamma2, double delta_in, double bandwidth,
                          int modes) {
    QCSpec s;
    s.port.gamma1 = RadPerSec(gamma1);
    s.port.gamma2 = RadPerSec(gamma2);
    s.port.bandwidth = RadPerSec(bandwidth);
    s.port.mode_count = modes;
    NodeSpec m;
    m.id = 1;
    m.atom_count = atoms;
    m.center_frequency = RadPerSec(1.0);
    m.profile = InhomogeneousComb{RadPerSec(delta_in), 1};
    m.coupling_g = RadPerSec(std::sqrt(Gamma * delta_in / atoms));
    m.t2 = Seconds(1e9);
    m.role = NodeRole::Memory;
    s.nodes.push_back(m);
    return s;
}

/// One memory node (id 1) plus processing nodes of `atoms` atoms and collective
/// coupling G, parked at 1e4·G above the bus, ids 2, 3, ...
inline QCSpec processor_spec(int processing_nodes = 2, int atoms = 3, double G = 0.8, int memory_atoms = 300,
                             double delta_in = 4.0, double bandwidth = 20.0, int modes = 400) {
    QCSpec s = memory_spec(memory_atoms, 1.0, 1.0, 0.0, delta_in, bandwidth, modes);
    for (int i = 0; i < processing_nodes; ++i) {
        NodeSpec p;
        p.id = 2 + i;
        p.atom_count = atoms;
        p.coupling_g = RadPerSec(G / std::sqrt(static_cast<double>(atoms)));
        p.center_frequency = RadPerSec(1.0 + kParkingFactor * G);
        p.t2 = Seconds(1e9);
        s.nodes.push_back(p);
    }
    return s;
}

}  // namespace wirecircuit::fixtures
