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

#include "wirecircuit/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wirecircuit/errors.hpp"

namespace wirecircuit {

void apply_control_event(const QCSpec &spec, ControlParams &controls, double now, const ControlEvent &event) {
    if (event.time < now) {
        std::ostringstream os;
        os << "event at t=" << event.time << " precedes state time " << now;
        fail(ErrorCode::Sequencing, os.str());
    }
    std::visit(
        [&](const auto &a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, SetNodeDetuning>) {
                if (!has_node(spec, a.node)) fail(ErrorCode::Addressing, "unknown node id " + std::to_string(a.node));
                controls.node_detuning[a.node] = a.detuning;
            } else if constexpr (std::is_same_v<T, ReverseQMDetunings>) {
                const NodeSpec &node = node_by_id(spec, a.node);
                if (node.role != NodeRole::Memory || !std::holds_alternative<InhomogeneousComb>(node.profile)) {
                    fail(ErrorCode::Addressing, "detuning reversal targets non-memory node " + std::to_string(a.node));
                }
                auto &sign = controls.comb_sign[a.node];
                sign = -sign;
            } else {
                if (!(a.gamma1 >= 0.0)) fail(ErrorCode::InvalidParameter, "gamma1 must be non-negative");
                controls.gamma1 = a.gamma1;
            }
        },
        event.action);
}

NormReport norm_accounting(const std::vector<NormSample> &trajectory) {
    if (trajectory.empty()) fail(ErrorCode::InvalidParameter, "empty trajectory");
    NormReport r;
    r.samples = trajectory.size();
    double prev = trajectory.front().accumulated_loss;
    for (const auto &s : trajectory) {
        r.max_deviation = std::max(r.max_deviation, std::abs(s.norm_squared + s.accumulated_loss - 1.0));
        if (s.accumulated_loss < prev) r.loss_monotone = false;
        prev = s.accumulated_loss;
    }
    return r;
}

NormReport norm_accounting(const std::vector<SectorState> &trajectory) {
    std::vector<NormSample> samples;
    samples.reserve(trajectory.size());
    for (const auto &s : trajectory) samples.push_back({s.time, s.norm_squared(), s.accumulated_loss});
    return norm_accounting(samples);
}

Simulation::Simulation(const QCSpec &spec, Sector sector, const BasisOptions &options)
    : spec_(spec),
      basis_(std::make_shared<const SectorBasis>(spec, sector, options)),
      controls_(initial_controls(spec)),
      state_(make_vacuum_like(basis_, 0.0)) {
    if (sector == Sector::Two) controls_.gamma1 = 0.0;
}

void Simulation::set_state(SectorState state) {
    if (state.basis != basis_ || state.amplitudes.size() != static_cast<Eigen::Index>(basis_->size())) {
        fail(ErrorCode::InvalidParameter, "state does not belong to this simulation's basis");
    }
    state_ = std::move(state);
    trajectory_.clear();
    record();
}

void Simulation::set_time(double t) { state_.time = t; }

void Simulation::apply(const ControlEvent &event) {
    advance_to(event.time);
    apply_control_event(spec_, controls_, state_.time, event);
    propagator_.reset();
}

SparseMatrix Simulation::hamiltonian() const { return build_hamiltonian(spec_, *basis_, controls_); }

const SegmentPropagator &Simulation::propagator() {
    if (!propagator_) {
        propagator_ = std::make_unique<SegmentPropagator>(
            hamiltonian(), cavity_loss_rates(*basis_, spec_.port.gamma2.value()));
    }
    return *propagator_;
}

void Simulation::record() { trajectory_.push_back({state_.time, state_.norm_squared(), state_.accumulated_loss}); }

void Simulation::advance_to(double t) {
    if (t < state_.time) fail(ErrorCode::Sequencing, "cannot propagate backwards in time");
    if (t == state_.time) return;
    propagator().advance(state_, t - state_.time);
    state_.time = t;
    record();
}

void Simulation::run(std::vector<ControlEvent> events, const std::vector<double> &sample_times,
                     const Observer &observe) {
    std::stable_sort(events.begin(), events.end(), event_before);
    std::vector<double> samples = sample_times;
    std::sort(samples.begin(), samples.end());
    std::size_t e = 0;
    std::size_t s = 0;
    while (e < events.size() || s < samples.size()) {
        // Samples at an event time observe the state before the switch.
        if (s < samples.size() && (e == events.size() || samples[s] <= events[e].time)) {
            advance_to(samples[s]);
            if (observe) observe(state_);
            ++s;
        } else {
            apply(events[e]);
            ++e;
        }
    }
}

}  // namespace wirecircuit
