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

#include <tuple>
#include <variant>

namespace wirecircuit {

/// Sets the node center frequency to ω₀ + detuning (rad/s).
struct SetNodeDetuning {
    int node = 0;
    double detuning = 0.0;
};

/// Flips the sign of every per-atom offset of the memory node (Δ_j → −Δ_j).
struct ReverseQMDetunings {
    int node = 0;
};

/// Switches the waveguide coupling γ₁ (rad/s).
struct SetWaveguideCoupling {
    double gamma1 = 0.0;
};

using ControlAction = std::variant<SetNodeDetuning, ReverseQMDetunings, SetWaveguideCoupling>;

struct ControlEvent {
    double time = 0.0;  // seconds
    ControlAction action;
    int origin = -1;  // program instruction id, -1 when hand-built
};

enum class ActionKind { SetNodeDetuning = 0, ReverseQMDetunings = 1, SetWaveguideCoupling = 2 };

inline ActionKind action_kind(const ControlAction &a) { return static_cast<ActionKind>(a.index()); }

/// Node addressed by the action; -1 for waveguide events.
inline int action_node(const ControlAction &a) {
    if (const auto *s = std::get_if<SetNodeDetuning>(&a)) return s->node;
    if (const auto *r = std::get_if<ReverseQMDetunings>(&a)) return r->node;
    return -1;
}

/// Timeline order: time, then node id, then action kind.
inline bool event_before(const ControlEvent &a, const ControlEvent &b) {
    return std::make_tuple(a.time, action_node(a.action), static_cast<int>(action_kind(a.action))) <
           std::make_tuple(b.time, action_node(b.action), static_cast<int>(action_kind(b.action)));
}

}  // namespace wirecircuit
