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

#include "wirecircuit/sector.hpp"

#include <algorithm>
#include <cmath>

#include "wirecircuit/errors.hpp"

namespace wirecircuit {

namespace {

long long pair_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<long long>(a) << 32) | static_cast<long long>(static_cast<unsigned>(b));
}

const std::vector<int> kNoSlots;

}  // namespace

std::string slot_label(const Slot &slot) {
    switch (slot.kind) {
        case Slot::Kind::Cavity: return "cavity";
        case Slot::Kind::Atom: return "atom(" + std::to_string(slot.node) + "," + std::to_string(slot.index) + ")";
        case Slot::Kind::WaveguideMode: return "mode(" + std::to_string(slot.index) + ")";
    }
    return "?";
}

SectorBasis::SectorBasis(const QCSpec &spec, Sector sector, const BasisOptions &options) : sector_(sector) {
    slots_.push_back({Slot::Kind::Cavity, -1, -1});
    for (const auto &node : spec.nodes) {
        if (!options.nodes.empty() &&
            std::find(options.nodes.begin(), options.nodes.end(), node.id) == options.nodes.end()) {
            continue;
        }
        nodes_.push_back(node.id);
        auto &ids = atom_slots_[node.id];
        for (int j = 0; j < node.atom_count; ++j) {
            ids.push_back(static_cast<int>(slots_.size()));
            slots_.push_back({Slot::Kind::Atom, node.id, j});
        }
    }
    for (int requested : options.nodes) {
        if (!atom_slots_.contains(requested)) fail(ErrorCode::Addressing, "unknown node id " + std::to_string(requested));
    }
    if (options.include_waveguide && sector == Sector::One) {
        for (int k = 0; k < spec.port.mode_count; ++k) {
            waveguide_slots_.push_back(static_cast<int>(slots_.size()));
            slots_.push_back({Slot::Kind::WaveguideMode, -1, k});
        }
    }

    const int n = static_cast<int>(slots_.size());
    if (sector == Sector::One) {
        elements_.reserve(n);
        for (int i = 0; i < n; ++i) elements_.emplace_back(i, i);
    } else {
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                if (i == j && slots_[i].kind == Slot::Kind::Atom) continue;
                elements_.emplace_back(i, j);
            }
        }
    }
    lookup_.reserve(elements_.size());
    for (std::size_t e = 0; e < elements_.size(); ++e) {
        lookup_.emplace(pair_key(elements_[e].first, elements_[e].second), static_cast<long>(e));
    }
}

long SectorBasis::index_of(int slot_a, int slot_b) const {
    if (sector_ == Sector::One && slot_a != slot_b) return -1;
    auto it = lookup_.find(pair_key(slot_a, slot_b));
    return it == lookup_.end() ? -1 : it->second;
}

const std::vector<int> &SectorBasis::atom_slots(int node) const {
    auto it = atom_slots_.find(node);
    return it == atom_slots_.end() ? kNoSlots : it->second;
}

int SectorBasis::cavity_occupancy(std::size_t i) const {
    const auto [a, b] = elements_[i];
    if (sector_ == Sector::One) return a == cavity_slot() ? 1 : 0;
    return (a == cavity_slot() ? 1 : 0) + (b == cavity_slot() ? 1 : 0);
}

std::size_t SectorBasis::expected_dimension(Sector sector, std::size_t slots, std::size_t atom_slots) {
    if (sector == Sector::One) return slots;
    return slots * (slots + 1) / 2 - atom_slots;
}

SectorState make_vacuum_like(std::shared_ptr<const SectorBasis> basis, double time) {
    SectorState s;
    s.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
    s.basis = std::move(basis);
    s.time = time;
    return s;
}

std::complex<double> symmetric_amplitude(const SectorState &state, int node) {
    const auto &ids = state.basis->atom_slots(node);
    if (ids.empty()) fail(ErrorCode::Addressing, "node " + std::to_string(node) + " not in basis");
    std::complex<double> sum = 0.0;
    for (int s : ids) sum += state.amplitudes[state.basis->index_of(s)];
    return sum / std::sqrt(static_cast<double>(ids.size()));
}

double node_population(const SectorState &state, int node) {
    double p = 0.0;
    for (int s : state.basis->atom_slots(node)) p += std::norm(state.amplitudes[state.basis->index_of(s)]);
    return p;
}

double atom_population(const SectorState &state) {
    double p = 0.0;
    for (int node : state.basis->nodes()) p += node_population(state, node);
    return p;
}

double waveguide_population(const SectorState &state) {
    double p = 0.0;
    for (int s : state.basis->waveguide_slots()) p += std::norm(state.amplitudes[state.basis->index_of(s)]);
    return p;
}

}  // namespace wirecircuit
