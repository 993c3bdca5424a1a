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

#include <cstddef>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wirecircuit/model.hpp"

namespace wirecircuit {

enum class Sector { One, Two };

struct Slot {
    enum class Kind { Cavity, Atom, WaveguideMode };
    Kind kind = Kind::Cavity;
    int node = -1;   // Atom only
    int index = -1;  // atom index within the node, or waveguide mode index

    bool operator==(const Slot &) const = default;
};

std::string slot_label(const Slot &slot);

struct BasisOptions {
    std::vector<int> nodes;         // empty selects every node of the spec
    bool include_waveguide = true;  // forced off in sector Two
};

/// Ordered single-particle slots and the sector elements built over them.
/// Sector One: one element per slot. Sector Two: unordered slot pairs, with
/// doubly excited atoms excluded (cavity and waveguide slots are bosonic).
class SectorBasis {
   public:
    SectorBasis(const QCSpec &spec, Sector sector, const BasisOptions &options = {});

    Sector sector() const { return sector_; }
    std::size_t size() const { return elements_.size(); }
    const std::vector<Slot> &slots() const { return slots_; }
    /// Slot indices of an element; for sector One both entries are equal.
    const std::pair<int, int> &element(std::size_t i) const { return elements_[i]; }
    /// Element index of a slot pair, or -1 when excluded.
    long index_of(int slot_a, int slot_b) const;
    long index_of(int slot) const { return index_of(slot, slot); }

    int cavity_slot() const { return 0; }
    const std::vector<int> &atom_slots(int node) const;
    const std::vector<int> &waveguide_slots() const { return waveguide_slots_; }
    const std::vector<int> &nodes() const { return nodes_; }
    bool has_waveguide() const { return !waveguide_slots_.empty(); }

    /// Number of cavity photons in element i.
    int cavity_occupancy(std::size_t i) const;
    /// Closed-form sector dimension for the slot layout.
    static std::size_t expected_dimension(Sector sector, std::size_t slots, std::size_t atom_slots);

   private:
    Sector sector_;
    std::vector<Slot> slots_;
    std::vector<std::pair<int, int>> elements_;
    std::unordered_map<long long, long> lookup_;
    std::vector<int> nodes_;
    std::unordered_map<int, std::vector<int>> atom_slots_;
    std::vector<int> waveguide_slots_;
};

struct SectorState {
    std::shared_ptr<const SectorBasis> basis;
    Eigen::VectorXcd amplitudes;
    double accumulated_loss = 0.0;
    double time = 0.0;

    double norm_squared() const { return amplitudes.squaredNorm(); }
};

SectorState make_vacuum_like(std::shared_ptr<const SectorBasis> basis, double time);

/// Amplitude of the node's symmetric single excitation |1⟩_m (sector One).
std::complex<double> symmetric_amplitude(const SectorState &state, int node);
/// Total excitation probability held by the atoms of a node (sector One).
double node_population(const SectorState &state, int node);
double atom_population(const SectorState &state);
double waveguide_population(const SectorState &state);

}  // namespace wirecircuit
