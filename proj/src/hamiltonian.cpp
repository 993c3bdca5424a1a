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

#include "wirecircuit/hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>

#include "wirecircuit/errors.hpp"

namespace wirecircuit {

ControlParams initial_controls(const QCSpec &spec) {
    ControlParams c;
    for (const auto &n : spec.nodes) {
        c.node_detuning[n.id] = initial_detuning(spec, n);
        if (const auto *comb = std::get_if<InhomogeneousComb>(&n.profile)) c.comb_sign[n.id] = comb->sign;
    }
    c.gamma1 = spec.port.gamma1.value();
    return c;
}

double DiscretizedContinuum::recurrence_time() const { return 2.0 * std::numbers::pi / spacing; }

DiscretizedContinuum make_continuum(const WaveguidePort &port, double gamma1) {
    if (port.mode_count < 2 || !(port.bandwidth.value() > 0.0)) {
        fail(ErrorCode::InvalidParameter, "waveguide needs K >= 2 and W > 0");
    }
    if (gamma1 < 0.0) fail(ErrorCode::InvalidParameter, "gamma1 must be non-negative");
    DiscretizedContinuum c;
    const int k = port.mode_count;
    const double w = port.bandwidth.value();
    c.spacing = w / k;
    c.mode_frequencies.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) c.mode_frequencies[static_cast<std::size_t>(i)] = -0.5 * w + (i + 0.5) * c.spacing;
    for (int i = 0; i < k / 2; ++i) {
        auto &lo = c.mode_frequencies[static_cast<std::size_t>(i)];
        auto &hi = c.mode_frequencies[static_cast<std::size_t>(k - 1 - i)];
        const double m = 0.5 * (hi - lo);
        lo = -m;
        hi = m;
    }
    if (k % 2 == 1) c.mode_frequencies[static_cast<std::size_t>(k / 2)] = 0.0;
    c.coupling = std::sqrt(gamma1 * c.spacing / std::numbers::pi);
    return c;
}

namespace {

struct SingleParticle {
    std::vector<double> energy;
    // Off-diagonal couplings as adjacency lists (slot -> (slot, value)).
    std::vector<std::vector<std::pair<int, double>>> hop;
};

SingleParticle single_particle(const QCSpec &spec, const SectorBasis &basis, const ControlParams &controls) {
    const auto &slots = basis.slots();
    SingleParticle sp;
    sp.energy.assign(slots.size(), 0.0);
    sp.hop.assign(slots.size(), {});
    auto couple = [&](int a, int b, double v) {
        if (v == 0.0) return;
        sp.hop[static_cast<std::size_t>(a)].emplace_back(b, v);
        sp.hop[static_cast<std::size_t>(b)].emplace_back(a, v);
    };
    const int cav = basis.cavity_slot();
    for (int id : basis.nodes()) {
        const NodeSpec &node = node_by_id(spec, id);
        auto offsets = atom_offsets(node);
        if (auto it = controls.comb_sign.find(id); it != controls.comb_sign.end()) {
            const auto *comb = std::get_if<InhomogeneousComb>(&node.profile);
            if (comb != nullptr && it->second != comb->sign) {
                for (auto &o : offsets) o = -o;
            }
        }
        auto det = controls.node_detuning.find(id);
        const double center = det == controls.node_detuning.end() ? initial_detuning(spec, node) : det->second;
        const auto &ids = basis.atom_slots(id);
        for (std::size_t j = 0; j < ids.size(); ++j) {
            sp.energy[static_cast<std::size_t>(ids[j])] = center + offsets[j];
            couple(cav, ids[j], node.coupling_g.value());
        }
    }
    if (basis.has_waveguide()) {
        const auto continuum = make_continuum(spec.port, controls.gamma1);
        const auto &ws = basis.waveguide_slots();
        for (std::size_t k = 0; k < ws.size(); ++k) {
            sp.energy[static_cast<std::size_t>(ws[k])] = continuum.mode_frequencies[k];
            couple(cav, ws[k], continuum.coupling);
        }
    }
    return sp;
}

}  // namespace

SparseMatrix build_hamiltonian(const QCSpec &spec, const SectorBasis &basis, const ControlParams &controls) {
    if (basis.sector() == Sector::Two && controls.gamma1 > 0.0) {
        fail(ErrorCode::UnsupportedConfiguration, "two-excitation sector requires the waveguide switched off");
    }
    const auto sp = single_particle(spec, basis, controls);
    const auto n = static_cast<Eigen::Index>(basis.size());
    std::vector<Eigen::Triplet<double>> triplets;

    if (basis.sector() == Sector::One) {
        triplets.reserve(basis.size() * 3);
        for (std::size_t s = 0; s < sp.energy.size(); ++s) {
            const auto i = static_cast<Eigen::Index>(s);
            if (sp.energy[s] != 0.0) triplets.emplace_back(i, i, sp.energy[s]);
            for (const auto &[t, v] : sp.hop[s]) triplets.emplace_back(static_cast<Eigen::Index>(t), i, v);
        }
    } else {
        for (std::size_t e = 0; e < basis.size(); ++e) {
            const auto [a, b] = basis.element(e);
            const auto col = static_cast<Eigen::Index>(e);
            const double diag = sp.energy[static_cast<std::size_t>(a)] + sp.energy[static_cast<std::size_t>(b)];
            if (diag != 0.0) triplets.emplace_back(col, col, diag);
            // Move one excitation out of slot `from`, leaving `stay` behind.
            auto hop_from = [&](int from, int stay, double occupancy_from) {
                for (const auto &[to, v] : sp.hop[static_cast<std::size_t>(from)]) {
                    const long row = basis.index_of(to, stay);
                    if (row < 0) continue;  // hard-core atom
                    const double occupancy_to = (to == stay) ? 2.0 : 1.0;
                    triplets.emplace_back(row, col, v * std::sqrt(occupancy_from * occupancy_to));
                }
            };
            if (a == b) {
                hop_from(a, a, 2.0);
            } else {
                hop_from(a, b, 1.0);
                hop_from(b, a, 1.0);
            }
        }
    }
    SparseMatrix h(n, n);
    h.setFromTriplets(triplets.begin(), triplets.end());
    h.makeCompressed();
    return h;
}

SectorHamiltonian build_hamiltonian(const QCSpec &spec, Sector sector, const std::map<int, double> &node_detunings,
                                    double gamma1) {
    auto controls = initial_controls(spec);
    for (const auto &[id, d] : node_detunings) {
        if (!has_node(spec, id)) fail(ErrorCode::Addressing, "unknown node id " + std::to_string(id));
        controls.node_detuning[id] = d;
    }
    controls.gamma1 = gamma1;
    BasisOptions opts;
    opts.include_waveguide = sector == Sector::One;
    auto basis = std::make_shared<const SectorBasis>(spec, sector, opts);
    return {basis, build_hamiltonian(spec, *basis, controls)};
}

Eigen::VectorXd cavity_loss_rates(const SectorBasis &basis, double gamma2) {
    Eigen::VectorXd r(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) r[static_cast<Eigen::Index>(i)] = gamma2 * basis.cavity_occupancy(i);
    return r;
}

}  // namespace wirecircuit
