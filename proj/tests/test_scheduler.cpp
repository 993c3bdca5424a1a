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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "support.hpp"
#include "wirecircuit/csv.hpp"
#include "wirecircuit/errors.hpp"
#include "wirecircuit/gates.hpp"
#include "wirecircuit/scheduler.hpp"

using namespace wirecircuit;

namespace {

template <class F>
ErrorCode code_of(F &&f) {
    try {
        f();
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorCode::Contract;
}

bool has_code(const std::vector<Diagnostic> &d, const std::string &code) {
    return std::any_of(d.begin(), d.end(), [&](const Diagnostic &x) { return x.code == code; });
}

std::string csv_of(const ControlTimeline &tl) {
    std::ostringstream os;
    write_timeline_csv(os, tl);
    return os.str();
}

struct Detune {
    double time;
    int node;
    double value;
};

std::vector<Detune> detunings(const ControlTimeline &tl, int node) {
    std::vector<Detune> out;
    for (const auto &e : tl.events) {
        if (const auto *s = std::get_if<SetNodeDetuning>(&e.action); s && s->node == node) out.push_back({e.time, node, s->detuning});
    }
    return out;
}

// Four processing nodes with identical g√N.
QCSpec four_node_spec() { return fixtures::processor_spec(4, 3, 0.8, 300, 4.0, 20.0, 200); }

}  // namespace

TEST(Compile, EmptyProgramGivesEmptyTimeline) {
    const auto tl = compile({}, fixtures::processor_spec());
    EXPECT_TRUE(tl.events.empty());
    EXPECT_EQ(tl.duration(), 0.0);
    EXPECT_TRUE(validate_timeline(tl, fixtures::processor_spec()).empty());
}

TEST(Compile, TransfersThenGateFollowProtocolOrder) {
    const QCSpec s = fixtures::processor_spec(2, 3, 0.8, 300, 4.0, 20.0, 200);
    CompileOptions o;
    o.memory = self_mode_layout(s, 2);
    const auto tl = compile({{Transfer{1, 2}, Transfer{2, 3}, SqrtISwap{2, 3}}}, s, o);
    EXPECT_TRUE(validate_timeline(tl, s).empty());
    const double tp = o.memory->t_prime;
    // The memory is reversed at t′ with the waveguide switched off.
    bool reversed_at_tp = false;
    bool waveguide_off_at_tp = false;
    for (const auto &e : tl.events) {
        reversed_at_tp = reversed_at_tp || (e.time == tp && std::holds_alternative<ReverseQMDetunings>(e.action));
        if (const auto *w = std::get_if<SetWaveguideCoupling>(&e.action)) waveguide_off_at_tp = waveguide_off_at_tp || (e.time == tp && w->gamma1 == 0.0);
    }
    EXPECT_TRUE(reversed_at_tp);
    EXPECT_TRUE(waveguide_off_at_tp);

    const auto n2 = detunings(tl, 2);
    const auto n3 = detunings(tl, 3);
    ASSERT_EQ(n2.size(), 4u);  // on, park, gate on, gate park
    ASSERT_EQ(n3.size(), 4u);
    // Qubit 1 rephases at 2t₁, qubit 2 at 2t₂.
    EXPECT_DOUBLE_EQ(n2[1].time, 2.0 * o.memory->markers[0]);
    EXPECT_DOUBLE_EQ(n3[1].time, 2.0 * o.memory->markers[1]);
    EXPECT_EQ(n2[0].value, 0.0);
    EXPECT_LT(n2[1].time, n3[0].time);
    // The gate starts after both transfers, at 50 g√N, and lasts π/(2ω_c).
    EXPECT_GT(n2[2].time, n3[1].time);
    EXPECT_EQ(n2[2].time, n3[2].time);
    const double G = collective_coupling(s.nodes[1]).value();
    EXPECT_DOUBLE_EQ(n2[2].value, kGateDetuningFactor * G);
    const double wc = 2.0 * G * G / n2[2].value;
    EXPECT_NEAR(n2[3].time - n2[2].time, std::numbers::pi / (2.0 * wc), 1e-9);
    // The memory stays parked during the gate.
    const auto mem = detunings(tl, 1);
    ASSERT_FALSE(mem.empty());
    EXPECT_GT(std::abs(mem.back().value), 0.5 * parking_detuning(s.nodes[0]));
    EXPECT_DOUBLE_EQ(tl.end_time, n2[3].time);
}

TEST(Compile, ParallelPairsGetSeparatedDetunings) {
    const QCSpec s = four_node_spec();
    const auto tl = compile({{ParallelBlock{{ISwap{2, 3}, SqrtISwap{4, 5}}}}}, s);
    EXPECT_TRUE(validate_timeline(tl, s).empty());
    const double d23 = detunings(tl, 2).front().value;
    const double d45 = detunings(tl, 4).front().value;
    EXPECT_EQ(d23, detunings(tl, 3).front().value);
    EXPECT_EQ(d45, detunings(tl, 5).front().value);
    const double G = collective_coupling(s.nodes[1]).value();
    const double wc = 2.0 * G * G / (kGateDetuningFactor * G);
    EXPECT_GE(std::abs(d45 - d23), kParallelSeparation * wc * (1.0 - 1e-12));
}

TEST(Compile, SingleQubitOperationIsAnOpaqueInterval) {
    const QCSpec s = fixtures::processor_spec();
    const auto tl = compile({{SingleQubitExternal{2, "x90"}}}, s);
    ASSERT_EQ(tl.notes.size(), 1u);
    EXPECT_NEAR(tl.notes[0].end - tl.notes[0].start, 10.0, 1e-12);
    EXPECT_NE(tl.notes[0].text.find("x90"), std::string::npos);
    EXPECT_TRUE(validate_timeline(tl, s).empty());
}

TEST(Compile, Errors) {
    const QCSpec s = fixtures::processor_spec();
    EXPECT_EQ(code_of([&] { compile({{Transfer{1, 1}}}, s); }), ErrorCode::Addressing);
    EXPECT_EQ(code_of([&] { compile({{Transfer{1, 2}, Transfer{1, 3}}}, s); }), ErrorCode::Addressing);
    EXPECT_EQ(code_of([&] { compile({{ISwap{2, 2}}}, s); }), ErrorCode::Addressing);
    EXPECT_EQ(code_of([&] { compile({{ISwap{2, 9}}}, s); }), ErrorCode::Addressing);
    EXPECT_EQ(code_of([&] { compile({{ParallelBlock{{ISwap{2, 3}, ISwap{3, 2}}}}}, s); }), ErrorCode::Addressing);
    QCSpec unequal = s;
    unequal.nodes[2].coupling_g = RadPerSec(0.01);
    EXPECT_EQ(code_of([&] { compile({{ISwap{2, 3}}}, unequal); }), ErrorCode::Scheduling);
}

TEST(Compile, InfeasibleParallelBlockIsRejected) {
    // A weak pair parks far closer to the bus than a strong pair needs.
    QCSpec s = four_node_spec();
    for (int i : {1, 2}) {
        s.nodes[static_cast<std::size_t>(i)].coupling_g = RadPerSec(0.01 / std::sqrt(3.0));
        s.nodes[static_cast<std::size_t>(i)].center_frequency = RadPerSec(1.0 + kParkingFactor * 0.01);
    }
    for (int i : {3, 4}) {
        s.nodes[static_cast<std::size_t>(i)].coupling_g = RadPerSec(1.0 / std::sqrt(3.0));
        s.nodes[static_cast<std::size_t>(i)].center_frequency = RadPerSec(1.0 + kParkingFactor);
    }
    EXPECT_EQ(code_of([&] { compile({{ParallelBlock{{ISwap{2, 3}, ISwap{4, 5}}}}}, s); }), ErrorCode::Scheduling);
}

namespace {

QCSpec two_bus_spec() {
    QCSpec s = four_node_spec();
    s.topology.buses = {0, 1, 2};
    s.topology.links = {{0, 1}, {1, 2}};
    s.nodes[3].bus = 2;
    s.nodes[4].bus = 2;
    return s;
}

}  // namespace

TEST(Reachability, SameBusAndCrossBus) {
    const QCSpec s = two_bus_spec();
    const auto same = topology_reachability(s, 2, 3);
    EXPECT_EQ(same.kind, Reachability::Kind::DirectSameBus);
    EXPECT_EQ(same.links(), 0u);
    const auto cross = topology_reachability(s, 2, 4);
    EXPECT_EQ(cross.kind, Reachability::Kind::CrossBus);
    EXPECT_EQ(cross.bus_path, (std::vector<int>{0, 1, 2}));
    EXPECT_EQ(cross.links(), 2u);
    QCSpec one_link = s;
    one_link.topology.links = {{0, 2}};
    EXPECT_EQ(topology_reachability(one_link, 2, 4).links(), 1u);
    QCSpec cut = s;
    cut.topology.links = {{0, 1}};
    EXPECT_EQ(topology_reachability(cut, 2, 4).kind, Reachability::Kind::Unreachable);
    EXPECT_EQ(code_of([&] { topology_reachability(s, 2, 42); }), ErrorCode::Addressing);
}

TEST(Reachability, CrossBusWorkIsRejected) {
    const QCSpec s = two_bus_spec();
    EXPECT_EQ(code_of([&] { compile({{ISwap{2, 4}}}, s); }), ErrorCode::Reachability);
    EXPECT_EQ(code_of([&] { compile({{Transfer{1, 4}}}, s); }), ErrorCode::Reachability);
    const auto tl = compile(Program{{ISwap{2, 3}, ISwap{4, 5}}}, s);
    EXPECT_TRUE(validate_timeline(tl, s).empty());
}

TEST(Validate, ReportsViolations) {
    const QCSpec s = fixtures::processor_spec();
    // Two instructions holding nodes on the bus at the same time.
    std::vector<ControlEvent> ev{{1.0, SetNodeDetuning{2, 0.0}, 0}, {2.0, SetNodeDetuning{3, 0.0}, 1},
                                 {3.0, SetNodeDetuning{2, 8000.0}, 0}, {4.0, SetNodeDetuning{3, 8000.0}, 1}};
    EXPECT_TRUE(has_code(validate_timeline(make_timeline(ev), s), "bus_exclusivity"));
    // The same nodes in one instruction are a gate, not a conflict.
    for (auto &e : ev) e.origin = 0;
    EXPECT_FALSE(has_code(validate_timeline(make_timeline(ev), s), "bus_exclusivity"));

    auto diag = validate_timeline(make_timeline({{1.0, ReverseQMDetunings{2}}, {2.0, SetNodeDetuning{7, 0.0}}}), s);
    EXPECT_TRUE(has_code(diag, "reverse_target"));
    EXPECT_TRUE(has_code(diag, "unknown_node"));
    diag = validate_timeline(make_timeline({{2.0, SetNodeDetuning{2, 1.0}}, {1.0, SetNodeDetuning{2, 2.0}}}), s);
    EXPECT_TRUE(has_code(diag, "ordering"));
    diag = validate_timeline(make_timeline({{-1.0, SetWaveguideCoupling{-2.0}}}), s);
    EXPECT_TRUE(has_code(diag, "negative_time"));
    EXPECT_TRUE(has_code(diag, "invalid_value"));

    QCSpec short_t2 = s;
    short_t2.nodes[1].t2 = Seconds(100.0);
    const auto tl = compile({{ISwap{2, 3}}}, short_t2);
    EXPECT_TRUE(has_code(validate_timeline(tl, short_t2), "t2_budget"));
}

TEST(Validate, ParallelSeparation) {
    const QCSpec s = four_node_spec();
    std::vector<ControlEvent> ev{{1.0, SetNodeDetuning{2, 40.0}, 0}, {1.0, SetNodeDetuning{3, 40.0}, 0},
                                 {1.0, SetNodeDetuning{4, 40.5}, 0}, {1.0, SetNodeDetuning{5, 40.5}, 0}};
    std::stable_sort(ev.begin(), ev.end(), event_before);
    EXPECT_TRUE(has_code(validate_timeline(make_timeline(ev), s), "parallel_separation"));
}

TEST(Timeline, DeterministicCsv) {
    const QCSpec s = four_node_spec();
    const Program p{{Transfer{1, 2}, ParallelBlock{{ISwap{2, 3}, SqrtISwap{4, 5}}}, SingleQubitExternal{3, "z"}}};
    EXPECT_EQ(csv_of(compile(p, s)), csv_of(compile(p, s)));
}

TEST(Timeline, CsvFormat) {
    const QCSpec s = fixtures::processor_spec();
    const auto tl = compile({{SqrtISwap{2, 3}}}, s);
    std::istringstream is(csv_of(tl));
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "time_s,action,node_id,value");
    const double G = collective_coupling(s.nodes[1]).value();
    const double tp = self_mode_layout(s, 1).t_prime;
    const double t_end = tp + std::numbers::pi / (2.0 * 2.0 * G * G / (kGateDetuningFactor * G));
    struct Row {
        double time;
        std::string action;
        int node;
        double value;
    };
    const std::vector<Row> expect{{tp, "set_waveguide_coupling", -1, 0.0},
                                  {tp, "set_node_detuning", 1, parking_detuning(s.nodes[0])},
                                  {tp, "set_node_detuning", 2, kGateDetuningFactor * G},
                                  {tp, "set_node_detuning", 3, kGateDetuningFactor * G},
                                  {t_end, "set_node_detuning", 2, parking_detuning(s.nodes[1])},
                                  {t_end, "set_node_detuning", 3, parking_detuning(s.nodes[2])}};
    for (const auto &row : expect) {
        ASSERT_TRUE(std::getline(is, line));
        const auto cells = split_csv_line(line);
        ASSERT_EQ(cells.size(), 4u);
        EXPECT_NEAR(parse_number(cells[0]), row.time, 1e-9);
        EXPECT_EQ(cells[1], row.action);
        EXPECT_EQ(std::stoi(cells[2]), row.node);
        EXPECT_NEAR(parse_number(cells[3]), row.value, 1e-9);
    }
    EXPECT_FALSE(std::getline(is, line));
}

// Random programs over four nodes and three stored modes always compile to
// timelines that pass validation.
TEST(Timeline, RandomProgramsValidate) {
    const QCSpec s = four_node_spec();
    std::mt19937 rng(2024);
    const std::vector<int> nodes{2, 3, 4, 5};
    int compiled = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        Program p;
        std::vector<int> qubits{1, 2, 3};
        std::shuffle(qubits.begin(), qubits.end(), rng);
        const int length = 1 + static_cast<int>(rng() % 6);
        for (int i = 0; i < length; ++i) {
            std::vector<int> pick = nodes;
            std::shuffle(pick.begin(), pick.end(), rng);
            switch (rng() % 5) {
                case 0:
                    if (!qubits.empty()) {
                        p.instructions.push_back(Transfer{qubits.back(), pick[0]});
                        qubits.pop_back();
                    }
                    break;
                case 1: p.instructions.push_back(ISwap{pick[0], pick[1]}); break;
                case 2: p.instructions.push_back(SqrtISwap{pick[0], pick[1]}); break;
                case 3: p.instructions.push_back(ParallelBlock{{ISwap{pick[0], pick[1]}, SqrtISwap{pick[2], pick[3]}}}); break;
                default: p.instructions.push_back(SingleQubitExternal{pick[0], "y"}); break;
            }
        }
        CompileOptions o;
        o.memory = self_mode_layout(s, 3);
        const auto tl = compile(p, s, o);
        const auto diag = validate_timeline(tl, s);
        EXPECT_TRUE(diag.empty()) << "trial " << trial << ": " << (diag.empty() ? "" : diag[0].code + " " + diag[0].message);
        for (std::size_t i = 1; i < tl.events.size(); ++i) ASSERT_FALSE(event_before(tl.events[i], tl.events[i - 1]));
        ++compiled;
    }
    EXPECT_EQ(compiled, 1000);
}

// Applying a compiled single transfer to the loaded memory moves the stored
// excitation into the target.
TEST(Timeline, CompiledTransferDrivesTheDynamics) {
    const QCSpec s = fixtures::processor_spec(2, 3, 0.8, 300, 4.0, 20.0, 200);
    const auto layout = self_mode_layout(s, 1);
    CompileOptions o;
    o.memory = layout;
    const auto tl = compile({{Transfer{1, 2}}}, s, o);
    const double G = collective_coupling(s.nodes[1]).value();
    auto loaded = load_self_modes(s, layout, {G});
    auto &sim = loaded.run.sim;
    const double stored = node_population(sim.state(), 1);
    sim.run(tl.events);
    sim.advance_to(tl.end_time);
    EXPECT_GE(std::norm(symmetric_amplitude(sim.state(), 2)) / stored, 0.95);
    EXPECT_LT(norm_accounting(sim.trajectory()).max_deviation, 1e-9);
}
