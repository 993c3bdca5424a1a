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

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wirecircuit/control.hpp"
#include "wirecircuit/memory.hpp"
#include "wirecircuit/model.hpp"

namespace wirecircuit {

/// Retrieve stored qubit `qubit` (1-based echo order) into `target`.
struct Transfer {
    int qubit = 1;
    int target = 0;
};
struct ISwap {
    int a = 0;
    int b = 0;
};
struct SqrtISwap {
    int a = 0;
    int b = 0;
};
/// Opaque single-qubit operation performed through the waveguide.
struct SingleQubitExternal {
    int node = 0;
    std::string rotation;
};
using PairInstruction = std::variant<ISwap, SqrtISwap>;
/// Pairs executed simultaneously at distinct detunings.
struct ParallelBlock {
    std::vector<PairInstruction> pairs;
};

using Instruction = std::variant<Transfer, ISwap, SqrtISwap, SingleQubitExternal, ParallelBlock>;

struct Program {
    std::vector<Instruction> instructions;
};

/// Gate detuning in units of the pair's collective coupling g√N.
inline constexpr double kGateDetuningFactor = 50.0;
/// Concurrent pairs need |Δ_a − Δ_b| ≥ kParallelSeparation · max ω_c.
inline constexpr double kParallelSeparation = 100.0;

struct TimelineNote {
    double start = 0.0;
    double end = 0.0;
    int origin = -1;
    std::string text;
};

struct ControlTimeline {
    std::vector<ControlEvent> events;
    double start_time = 0.0;
    double end_time = 0.0;
    std::vector<TimelineNote> notes;
    std::vector<std::string> assumptions;

    double duration() const { return end_time - start_time; }
};

/// Builds start/end from the event times of a hand-made event list.
ControlTimeline make_timeline(std::vector<ControlEvent> events);

struct CompileOptions {
    /// Stored-mode layout; defaults to self_mode_layout for the highest
    /// qubit index the program references.
    std::optional<MemoryLayout> memory;
    /// Opaque single-qubit interval; defaults to 10/Γ.
    double single_qubit_duration = 0.0;
};

/// Guard gap between consecutive resonant intervals: 1/(10Γ).
double guard_gap(const QCSpec &spec);

ControlTimeline compile(const Program &program, const QCSpec &spec, const CompileOptions &options = {});

/// Empty when the timeline satisfies bus exclusivity, parallel separation,
/// the T₂ budget, memory-only reversals, valid node ids and ordering.
std::vector<Diagnostic> validate_timeline(const ControlTimeline &timeline, const QCSpec &spec);

struct Reachability {
    enum class Kind { DirectSameBus, CrossBus, Unreachable };
    Kind kind = Kind::Unreachable;
    std::vector<int> bus_path;  // buses visited from a's bus to b's bus

    std::size_t links() const { return bus_path.empty() ? 0 : bus_path.size() - 1; }
};

Reachability topology_reachability(const QCSpec &spec, int a, int b);

const char *action_name(const ControlAction &action);

/// CSV with columns time_s, action, node_id, value (node_id −1 for the waveguide,
/// value empty for reversals).
void write_timeline_csv(std::ostream &os, const ControlTimeline &timeline);

}  // namespace wirecircuit
