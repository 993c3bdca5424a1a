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

#include "wirecircuit/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "wirecircuit/csv.hpp"
#include "wirecircuit/errors.hpp"

namespace wirecircuit {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::string node_str(int id) { return "node " + std::to_string(id); }

double gamma_of(const QCSpec &spec) { return ensemble_coupling(memory_node(spec)).value(); }

int max_qubit(const Program &program) {
    int m = 0;
    for (const auto &ins : program.instructions) {
        if (const auto *t = std::get_if<Transfer>(&ins)) m = std::max(m, t->qubit);
    }
    return m;
}

struct PairView {
    int a;
    int b;
    bool sqrt;
};

PairView view(const PairInstruction &p) {
    if (const auto *i = std::get_if<ISwap>(&p)) return {i->a, i->b, false};
    const auto &s = std::get<SqrtISwap>(p);
    return {s.a, s.b, true};
}

// Emits the events of one program onto a cursor, tracking the rephasing
// clock of every stored mode. A mode's phase age A evolves as dA/dt = σ,
// σ = ±1 flipping at each reversal; the mode rephases where A = 0.
class Compiler {
   public:
    Compiler(const QCSpec &spec, const CompileOptions &options, int needed_modes)
        : spec_(spec), mem_(memory_node(spec)) {
        check_spec(spec);
        gamma_ = gamma_of(spec);
        layout_ = options.memory ? *options.memory : self_mode_layout(spec, std::max(needed_modes, 1));
        if (layout_.markers.empty()) fail(ErrorCode::InvalidParameter, "memory layout has no modes");
        single_duration_ = options.single_qubit_duration > 0.0 ? options.single_qubit_duration : 10.0 / gamma_;
        lead_ = 10.0 / gamma_;
        gap_ = guard_gap(spec);
        cursor_ = layout_.t_prime;
        clock_ = layout_.t_prime;
        for (double t_m : layout_.markers) age_.push_back(2.0 * t_m - layout_.t_prime);
        retrieved_.assign(layout_.markers.size(), false);
        mem_on_ = initial_detuning(spec, mem_);
        mem_park_ = mem_on_ + parking_detuning(mem_);
        waveguide_on_ = spec.port.gamma1.value() > 0.0;
        for (const auto &n : spec.nodes) detuning_[n.id] = initial_detuning(spec, n);
    }

    void add(const Instruction &ins, int origin) {
        origin_ = origin;
        if (first_) prepare_nodes();
        first_ = false;
        std::visit([this](const auto &x) { this->emit(x); }, ins);
    }

    ControlTimeline finish() {
        ControlTimeline tl;
        std::stable_sort(events_.begin(), events_.end(), event_before);
        tl.events = std::move(events_);
        tl.start_time = 0.0;
        tl.end_time = tl.events.empty() ? 0.0 : tl.events.back().time;
        tl.notes = std::move(notes_);
        if (!tl.events.empty()) {
            tl.assumptions.push_back(
                "independent per-node control fields allow arbitrary simultaneous detuning patterns");
            tl.assumptions.push_back("time origin is the start of memory loading; the memory is reversed for the first time at t' = " +
                                     format_number(layout_.t_prime) + " s");
        }
        return tl;
    }

   private:
    void push(double t, ControlAction a) {
        if (const auto *s = std::get_if<SetNodeDetuning>(&a)) detuning_[s->node] = s->detuning;
        events_.push_back({t, a, origin_});
    }

    double park_of(int id) const {
        const NodeSpec &n = node_by_id(spec_, id);
        return n.role == NodeRole::Memory ? mem_park_ : parking_detuning(n);
    }

    // Processing nodes that start close to the bus are parked before the first instruction.
    void prepare_nodes() {
        for (const auto &n : spec_.nodes) {
            if (n.role != NodeRole::Processing) continue;
            if (std::abs(detuning_[n.id]) < 0.5 * parking_detuning(n)) push(cursor_, SetNodeDetuning{n.id, parking_detuning(n)});
        }
    }

    void advance_clock(double t) {
        for (auto &a : age_) a += sigma_ * (t - clock_);
        clock_ = t;
    }

    void reverse_at(double t) {
        advance_clock(t);
        push(t, ReverseQMDetunings{mem_.id});
        sigma_ = -sigma_;
    }

    // Waveguide decoupled and memory parked: the idle state between instructions.
    void quiesce(double t, bool park_memory) {
        if (waveguide_on_) {
            push(t, SetWaveguideCoupling{0.0});
            waveguide_on_ = false;
        }
        if (park_memory && qm_active_) {
            push(t, SetNodeDetuning{mem_.id, mem_park_});
            qm_active_ = false;
        }
    }

    const NodeSpec &processing(int id, const char *what) const {
        const NodeSpec &n = node_by_id(spec_, id);
        if (n.role != NodeRole::Processing) fail(ErrorCode::Addressing, std::string(what) + " " + node_str(id) + " is not a processing node");
        return n;
    }

    void emit(const Transfer &t) {
        const int m = static_cast<int>(layout_.markers.size());
        if (t.qubit < 1 || t.qubit > m) fail(ErrorCode::Addressing, "qubit index " + std::to_string(t.qubit) + " out of range 1.." + std::to_string(m));
        if (retrieved_[static_cast<std::size_t>(t.qubit - 1)]) fail(ErrorCode::Addressing, "qubit " + std::to_string(t.qubit) + " was already retrieved");
        const NodeSpec &target = processing(t.target, "transfer target");
        const auto reach = topology_reachability(spec_, mem_.id, target.id);
        if (reach.kind != Reachability::Kind::DirectSameBus) fail(ErrorCode::Reachability, "transfer target " + node_str(target.id) + " is not on the memory bus");

        const double t0 = cursor_;
        const std::size_t k = static_cast<std::size_t>(t.qubit - 1);
        advance_clock(t0);
        const double a = age_[k];
        const bool approaching = sigma_ * a < 0.0;
        double t_star = 0.0;
        std::optional<double> t_rev;
        if (approaching && std::abs(a) >= lead_) {
            t_star = t0 + std::abs(a);
        } else if (approaching) {
            // Too close to rephase with a useful lead: let it pass, then bring it back.
            t_rev = t0 + std::abs(a) + lead_;
            t_star = *t_rev + lead_;
        } else {
            t_rev = t0 + std::max(0.0, lead_ - std::abs(a));
            t_star = *t_rev + std::abs(a) + (*t_rev - t0);
        }

        double t_eq = std::max(t0, t_star - lead_);
        if (t_rev) reverse_at(*t_rev);
        advance_clock(t_eq);
        // Memory must stay parked while any other stored mode rephases.
        double latest = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < age_.size(); ++j) {
            if (j == k || retrieved_[j]) continue;
            const double r = t_eq - sigma_ * age_[j];  // zero crossing of A_j
            if (r >= t_eq && r < t_star) latest = std::max(latest, r);
        }
        if (std::isfinite(latest)) t_eq = 0.5 * (latest + t_star);
        if (!(t_star > t_eq)) fail(ErrorCode::Scheduling, "no equalization window before qubit " + std::to_string(t.qubit) + " rephases");
        quiesce(t0, t_eq > t0);

        if (!qm_active_) push(t_eq, SetNodeDetuning{mem_.id, mem_on_});
        qm_active_ = true;
        push(t_eq, SetNodeDetuning{target.id, 0.0});
        push(t_star, SetNodeDetuning{target.id, parking_detuning(target)});
        push(t_star, SetNodeDetuning{mem_.id, mem_park_});
        qm_active_ = false;
        advance_clock(t_star);
        retrieved_[k] = true;
        cursor_ = t_star + gap_;
    }

    struct PairPlan {
        const NodeSpec *a;
        const NodeSpec *b;
        double coupling;
        bool sqrt;
    };

    PairPlan check_pair(const PairView &p) const {
        if (p.a == p.b) fail(ErrorCode::Addressing, "gate pair needs two distinct nodes");
        const NodeSpec &a = processing(p.a, "gate");
        const NodeSpec &b = processing(p.b, "gate");
        const auto reach = topology_reachability(spec_, a.id, b.id);
        if (reach.kind == Reachability::Kind::CrossBus) {
            fail(ErrorCode::Reachability, node_str(a.id) + " and " + node_str(b.id) + " sit on different buses (" +
                                              std::to_string(reach.links()) + " link path); cross-bus gates are not compiled");
        }
        if (reach.kind == Reachability::Kind::Unreachable) fail(ErrorCode::Reachability, node_str(a.id) + " cannot reach " + node_str(b.id));
        const double ga = collective_coupling(a).value();
        const double gb = collective_coupling(b).value();
        if (std::abs(ga - gb) > 1e-12 * std::max(ga, gb)) {
            fail(ErrorCode::Scheduling, "gate " + node_str(a.id) + "/" + node_str(b.id) + " needs equal collective couplings g sqrt(N)");
        }
        return {&a, &b, ga, p.sqrt};
    }

    void run_pairs(const std::vector<PairPlan> &plans) {
        // Detunings ascend from 50 g√N with 100·ω_c separation between pairs.
        double min_park = std::numeric_limits<double>::infinity();
        double max_wc = 0.0;
        for (const auto &p : plans) {
            min_park = std::min({min_park, parking_detuning(*p.a), parking_detuning(*p.b)});
            const double d = kGateDetuningFactor * p.coupling;
            max_wc = std::max(max_wc, 2.0 * p.coupling * p.coupling / d);
        }
        const double t0 = cursor_;
        quiesce(t0, true);
        double prev = 0.0;
        double end = t0;
        for (std::size_t i = 0; i < plans.size(); ++i) {
            const auto &p = plans[i];
            double delta = kGateDetuningFactor * p.coupling;
            if (i > 0) delta = std::max(delta, prev + kParallelSeparation * max_wc);
            if (delta >= 0.1 * min_park) {
                fail(ErrorCode::Scheduling, "parallel block needs detuning " + fmt(delta) +
                                                " rad/s, too close to the parking detuning " + fmt(min_park) + " rad/s");
            }
            prev = delta;
            const double wc = 2.0 * p.coupling * p.coupling / delta;
            const double t_gate = (p.sqrt ? 0.5 : 1.0) * std::numbers::pi / wc;
            push(t0, SetNodeDetuning{p.a->id, delta});
            push(t0, SetNodeDetuning{p.b->id, delta});
            push(t0 + t_gate, SetNodeDetuning{p.a->id, parking_detuning(*p.a)});
            push(t0 + t_gate, SetNodeDetuning{p.b->id, parking_detuning(*p.b)});
            end = std::max(end, t0 + t_gate);
        }
        cursor_ = end + gap_;
    }

    void emit(const ISwap &g) { run_pairs({check_pair({g.a, g.b, false})}); }
    void emit(const SqrtISwap &g) { run_pairs({check_pair({g.a, g.b, true})}); }

    void emit(const ParallelBlock &block) {
        if (block.pairs.empty()) fail(ErrorCode::Addressing, "empty parallel block");
        std::set<int> seen;
        std::vector<PairPlan> plans;
        for (const auto &p : block.pairs) {
            const PairView v = view(p);
            if (!seen.insert(v.a).second || !seen.insert(v.b).second) {
                fail(ErrorCode::Addressing, "a node appears more than once in a parallel block");
            }
            plans.push_back(check_pair(v));
        }
        run_pairs(plans);
    }

    void emit(const SingleQubitExternal &s) {
        processing(s.node, "single-qubit");
        const double gamma1 = spec_.port.gamma1.value();
        if (!(gamma1 > 0.0)) fail(ErrorCode::Scheduling, "single-qubit operations need a waveguide with gamma1 > 0");
        const double t0 = cursor_;
        if (qm_active_) {
            push(t0, SetNodeDetuning{mem_.id, mem_park_});
            qm_active_ = false;
        }
        if (!waveguide_on_) push(t0, SetWaveguideCoupling{gamma1});
        push(t0 + single_duration_, SetWaveguideCoupling{0.0});
        waveguide_on_ = false;
        notes_.push_back({t0, t0 + single_duration_, origin_,
                          "single-qubit rotation '" + s.rotation + "' on " + node_str(s.node) + " (external, opaque)"});
        cursor_ = t0 + single_duration_ + gap_;
    }

    const QCSpec &spec_;
    const NodeSpec &mem_;
    double gamma_ = 0.0;
    MemoryLayout layout_;
    double single_duration_ = 0.0;
    double lead_ = 0.0;
    double gap_ = 0.0;
    double cursor_ = 0.0;
    double clock_ = 0.0;
    double sigma_ = 1.0;
    std::vector<double> age_;
    std::vector<bool> retrieved_;
    double mem_on_ = 0.0;
    double mem_park_ = 0.0;
    bool waveguide_on_ = false;
    bool qm_active_ = true;
    bool first_ = true;
    int origin_ = -1;
    std::map<int, double> detuning_;
    std::vector<ControlEvent> events_;
    std::vector<TimelineNote> notes_;
};

struct Segment {
    double start;
    double end;
    long origin;
    int node;
};

}  // namespace

double guard_gap(const QCSpec &spec) { return 0.1 / gamma_of(spec); }

ControlTimeline make_timeline(std::vector<ControlEvent> events) {
    ControlTimeline tl;
    tl.events = std::move(events);
    tl.start_time = 0.0;
    for (const auto &e : tl.events) tl.end_time = std::max(tl.end_time, e.time);
    return tl;
}

ControlTimeline compile(const Program &program, const QCSpec &spec, const CompileOptions &options) {
    if (program.instructions.empty()) {
        check_spec(spec);
        return {};
    }
    Compiler c(spec, options, max_qubit(program));
    for (std::size_t i = 0; i < program.instructions.size(); ++i) c.add(program.instructions[i], static_cast<int>(i));
    return c.finish();
}

std::vector<Diagnostic> validate_timeline(const ControlTimeline &timeline, const QCSpec &spec) {
    std::vector<Diagnostic> out;
    const auto &ev = timeline.events;

    for (std::size_t i = 0; i < ev.size(); ++i) {
        const auto &e = ev[i];
        if (!(e.time >= 0.0) || !std::isfinite(e.time)) out.push_back({"negative_time", "event " + std::to_string(i) + " has invalid time " + fmt(e.time)});
        if (i > 0 && !event_before(ev[i - 1], e)) out.push_back({"ordering", "event " + std::to_string(i) + " is out of order or duplicates its predecessor"});
        const int node = action_node(e.action);
        if (node >= 0 || std::holds_alternative<SetNodeDetuning>(e.action)) {
            if (!has_node(spec, node)) {
                out.push_back({"unknown_node", "event " + std::to_string(i) + " addresses unknown " + node_str(node)});
                continue;
            }
        }
        if (const auto *r = std::get_if<ReverseQMDetunings>(&e.action)) {
            if (node_by_id(spec, r->node).role != NodeRole::Memory) {
                out.push_back({"reverse_target", "event " + std::to_string(i) + " reverses non-memory " + node_str(r->node)});
            }
        }
        if (const auto *s = std::get_if<SetNodeDetuning>(&e.action); s && !std::isfinite(s->detuning)) {
            out.push_back({"invalid_value", "event " + std::to_string(i) + " has a non-finite detuning"});
        }
        if (const auto *w = std::get_if<SetWaveguideCoupling>(&e.action); w && !(w->gamma1 >= 0.0)) {
            out.push_back({"invalid_value", "event " + std::to_string(i) + " has a negative waveguide coupling"});
        }
    }

    // (a) Bus exclusivity over engaged detuning segments.
    std::map<int, std::vector<std::pair<std::size_t, const ControlEvent *>>> by_node;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (const auto *s = std::get_if<SetNodeDetuning>(&ev[i].action); s && has_node(spec, s->node)) by_node[s->node].push_back({i, &ev[i]});
    }
    std::map<int, std::vector<Segment>> engaged_by_bus;
    for (auto &[id, list] : by_node) {
        const NodeSpec &n = node_by_id(spec, id);
        std::stable_sort(list.begin(), list.end(), [](const auto &x, const auto &y) { return x.second->time < y.second->time; });
        const double park = parking_detuning(n);
        for (std::size_t j = 0; j < list.size(); ++j) {
            const auto &[idx, e] = list[j];
            const double det = std::get<SetNodeDetuning>(e->action).detuning;
            if (!(std::abs(det) < 0.5 * park)) continue;
            const double end = j + 1 < list.size() ? list[j + 1].second->time : std::numeric_limits<double>::infinity();
            const long key = e->origin >= 0 ? e->origin : -static_cast<long>(idx) - 2;
            engaged_by_bus[n.bus].push_back({e->time, end, key, id});
        }
    }
    for (auto &[bus, segs] : engaged_by_bus) {
        std::set<std::pair<long, long>> reported;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            for (std::size_t j = i + 1; j < segs.size(); ++j) {
                const auto &x = segs[i];
                const auto &y = segs[j];
                if (x.origin == y.origin || x.node == y.node) continue;
                if (!(x.start < y.end && y.start < x.end)) continue;
                const auto key = std::minmax(x.origin, y.origin);
                if (!reported.insert(key).second) continue;
                out.push_back({"bus_exclusivity", node_str(x.node) + " and " + node_str(y.node) + " are resonant with bus " +
                                                      std::to_string(bus) + " at the same time in different instructions (from " +
                                                      fmt(std::max(x.start, y.start)) + " s)"});
            }
        }
    }

    // (b) Separation between concurrent pairs of one instruction.
    std::map<int, std::map<double, std::vector<int>>> groups;  // origin → detuning → nodes
    for (const auto &e : ev) {
        const auto *s = std::get_if<SetNodeDetuning>(&e.action);
        if (!s || e.origin < 0 || !has_node(spec, s->node) || s->detuning == 0.0) continue;
        const NodeSpec &n = node_by_id(spec, s->node);
        if (!(std::abs(s->detuning) < 0.5 * parking_detuning(n))) continue;
        auto &nodes = groups[e.origin][s->detuning];
        if (std::find(nodes.begin(), nodes.end(), s->node) == nodes.end()) nodes.push_back(s->node);
    }
    for (const auto &[origin, by_det] : groups) {
        std::vector<std::pair<double, double>> pairs;  // detuning, ω_c
        std::vector<int> buses;
        for (const auto &[det, nodes] : by_det) {
            if (nodes.size() < 2) continue;
            const NodeSpec &a = node_by_id(spec, nodes[0]);
            const NodeSpec &b = node_by_id(spec, nodes[1]);
            pairs.push_back({det, 2.0 * collective_coupling(a).value() * collective_coupling(b).value() / std::abs(det)});
            buses.push_back(a.bus);
        }
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            for (std::size_t j = i + 1; j < pairs.size(); ++j) {
                if (buses[i] != buses[j]) continue;
                const double need = kParallelSeparation * std::max(pairs[i].second, pairs[j].second);
                if (std::abs(pairs[i].first - pairs[j].first) < need) {
                    out.push_back({"parallel_separation", "instruction " + std::to_string(origin) + " runs pairs at " + fmt(pairs[i].first) +
                                                              " and " + fmt(pairs[j].first) + " rad/s, closer than " + fmt(need) + " rad/s"});
                }
            }
        }
    }

    // (c) Coherence budget.
    const double budget = min_t2(spec).value() / kT2BudgetFactor;
    if (timeline.duration() > budget) {
        out.push_back({"t2_budget", "timeline lasts " + fmt(timeline.duration()) + " s, above min T2/10 = " + fmt(budget) + " s"});
    }
    return out;
}

Reachability topology_reachability(const QCSpec &spec, int a, int b) {
    const int bus_a = node_by_id(spec, a).bus;
    const int bus_b = node_by_id(spec, b).bus;
    Reachability r;
    if (bus_a == bus_b) {
        r.kind = Reachability::Kind::DirectSameBus;
        r.bus_path = {bus_a};
        return r;
    }
    std::map<int, std::vector<int>> adj;
    for (const auto &[x, y] : spec.topology.links) {
        adj[x].push_back(y);
        adj[y].push_back(x);
    }
    for (auto &[bus, nb] : adj) std::sort(nb.begin(), nb.end());
    std::map<int, int> parent{{bus_a, bus_a}};
    std::deque<int> queue{bus_a};
    while (!queue.empty()) {
        const int x = queue.front();
        queue.pop_front();
        if (x == bus_b) break;
        for (int y : adj[x]) {
            if (parent.emplace(y, x).second) queue.push_back(y);
        }
    }
    if (!parent.contains(bus_b)) return r;
    r.kind = Reachability::Kind::CrossBus;
    for (int x = bus_b; x != bus_a; x = parent[x]) r.bus_path.push_back(x);
    r.bus_path.push_back(bus_a);
    std::reverse(r.bus_path.begin(), r.bus_path.end());
    return r;
}

const char *action_name(const ControlAction &action) {
    switch (action_kind(action)) {
        case ActionKind::SetNodeDetuning: return "set_node_detuning";
        case ActionKind::ReverseQMDetunings: return "reverse_qm_detunings";
        case ActionKind::SetWaveguideCoupling: return "set_waveguide_coupling";
    }
    return "unknown";
}

void write_timeline_csv(std::ostream &os, const ControlTimeline &timeline) {
    os << "time_s,action,node_id,value\n";
    for (const auto &e : timeline.events) {
        os << format_number(e.time) << ',' << action_name(e.action) << ',' << action_node(e.action) << ',';
        if (const auto *s = std::get_if<SetNodeDetuning>(&e.action)) os << format_number(s->detuning);
        if (const auto *w = std::get_if<SetWaveguideCoupling>(&e.action)) os << format_number(w->gamma1);
        os << '\n';
    }
}

}  // namespace wirecircuit
