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

#include <functional>
#include <memory>
#include <vector>

#include "wirecircuit/control.hpp"
#include "wirecircuit/hamiltonian.hpp"
#include "wirecircuit/model.hpp"
#include "wirecircuit/propagator.hpp"
#include "wirecircuit/sector.hpp"

namespace wirecircuit {

/// Applies an instantaneous control switch. Only the named parameter changes.
/// Throws Sequencing when the event precedes `now`, Addressing for unknown
/// or ineligible nodes.
void apply_control_event(const QCSpec &spec, ControlParams &controls, double now, const ControlEvent &event);

struct NormSample {
    double time = 0.0;
    double norm_squared = 0.0;
    double accumulated_loss = 0.0;
};

struct NormReport {
    double max_deviation = 0.0;  // max |‖ψ‖² + loss − 1|
    bool loss_monotone = true;
    std::size_t samples = 0;
};

NormReport norm_accounting(const std::vector<SectorState> &trajectory);
NormReport norm_accounting(const std::vector<NormSample> &trajectory);

/// Piecewise-constant evolution of one excitation sector under a stream of
/// control events. The segment propagator is rebuilt only after a switch.
class Simulation {
   public:
    using Observer = std::function<void(const SectorState &)>;

    Simulation(const QCSpec &spec, Sector sector = Sector::One, const BasisOptions &options = {});

    const QCSpec &spec() const { return spec_; }
    const SectorBasis &basis() const { return *basis_; }
    std::shared_ptr<const SectorBasis> basis_ptr() const { return basis_; }
    const ControlParams &controls() const { return controls_; }
    const SectorState &state() const { return state_; }
    const std::vector<NormSample> &trajectory() const { return trajectory_; }

    /// Replaces the state; it must live on this simulation's basis.
    void set_state(SectorState state);
    void set_time(double t);

    void apply(const ControlEvent &event);
    void advance_to(double t);

    /// Applies events in timeline order, calling `observe` at each sample time.
    void run(std::vector<ControlEvent> events, const std::vector<double> &sample_times = {},
             const Observer &observe = {});

    SparseMatrix hamiltonian() const;

   private:
    const SegmentPropagator &propagator();
    void record();

    QCSpec spec_;
    std::shared_ptr<const SectorBasis> basis_;
    ControlParams controls_;
    SectorState state_;
    std::unique_ptr<SegmentPropagator> propagator_;
    std::vector<NormSample> trajectory_;
};

}  // namespace wirecircuit
