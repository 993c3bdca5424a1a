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

#include "wirecircuit/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "wirecircuit/csv.hpp"
#include "wirecircuit/errors.hpp"

namespace wirecircuit {

namespace {

struct Unit {
    const char *name;
    Dimension dim;
    double scale;
};

constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr Unit kUnits[] = {
    {"rad/s", Dimension::Frequency, 1.0},     {"krad/s", Dimension::Frequency, 1e3},
    {"Mrad/s", Dimension::Frequency, 1e6},    {"Grad/s", Dimension::Frequency, 1e9},
    {"Hz", Dimension::Frequency, kTwoPi},     {"kHz", Dimension::Frequency, kTwoPi * 1e3},
    {"MHz", Dimension::Frequency, kTwoPi * 1e6}, {"GHz", Dimension::Frequency, kTwoPi * 1e9},
    {"s", Dimension::Time, 1.0},              {"ms", Dimension::Time, 1e-3},
    {"us", Dimension::Time, 1e-6},            {"ns", Dimension::Time, 1e-9},
    {"ps", Dimension::Time, 1e-12},           {"H", Dimension::Inductance, 1.0},
    {"mH", Dimension::Inductance, 1e-3},      {"uH", Dimension::Inductance, 1e-6},
    {"nH", Dimension::Inductance, 1e-9},      {"pH", Dimension::Inductance, 1e-12},
    {"F", Dimension::Capacitance, 1.0},       {"uF", Dimension::Capacitance, 1e-6},
    {"nF", Dimension::Capacitance, 1e-9},     {"pF", Dimension::Capacitance, 1e-12},
    {"fF", Dimension::Capacitance, 1e-15},    {"ohm", Dimension::Resistance, 1.0},
    {"mohm", Dimension::Resistance, 1e-3},    {"kohm", Dimension::Resistance, 1e3},
    {"m", Dimension::Length, 1.0},            {"cm", Dimension::Length, 1e-2},
    {"mm", Dimension::Length, 1e-3},          {"um", Dimension::Length, 1e-6},
};

const char *dimension_name(Dimension d) {
    switch (d) {
        case Dimension::Frequency: return "frequency";
        case Dimension::Time: return "time";
        case Dimension::Inductance: return "inductance";
        case Dimension::Capacitance: return "capacitance";
        case Dimension::Resistance: return "resistance";
        case Dimension::Length: return "length";
    }
    return "quantity";
}

[[noreturn]] void config_error(const std::string &what) { fail(ErrorCode::Config, what); }

const Json &need(const Json &obj, const char *key, const std::string &where) {
    if (!obj.contains(key)) config_error(where + ": missing key '" + key + "'");
    return obj.at(key);
}

double quantity(const Json &v, Dimension dim, const std::string &where) {
    if (!v.is_string()) config_error(where + ": expected a string with a " + dimension_name(dim) + " unit");
    try {
        return parse_quantity(v.get<std::string>(), dim);
    } catch (const Error &e) {
        config_error(where + ": " + e.what());
    }
}

std::int64_t integer(const Json &v, const std::string &where) {
    if (!v.is_number_integer()) config_error(where + ": expected an integer");
    return v.get<std::int64_t>();
}

double number(const Json &v, const std::string &where) {
    if (!v.is_number()) config_error(where + ": expected a number");
    return v.get<double>();
}

const Json &object(const Json &v, const std::string &where) {
    if (!v.is_object()) config_error(where + ": expected an object");
    return v;
}

int node_id(const Json &v, const std::string &where) { return static_cast<int>(integer(v, where)); }

std::pair<int, int> node_pair(const Json &v, const std::string &where) {
    if (!v.is_array() || v.size() != 2) config_error(where + ": 'nodes' must list exactly two node ids");
    return {node_id(v[0], where), node_id(v[1], where)};
}

PairInstruction parse_pair(const Json &j, const std::string &where) {
    object(j, where);
    require_keys(j, {"op", "nodes"}, where);
    const std::string op = need(j, "op", where).is_string() ? j.at("op").get<std::string>() : "";
    const auto [a, b] = node_pair(need(j, "nodes", where), where);
    if (op == "iswap") return ISwap{a, b};
    if (op == "sqrt_iswap") return SqrtISwap{a, b};
    config_error(where + ": parallel pairs must be 'iswap' or 'sqrt_iswap'");
}

Instruction parse_instruction(const Json &j, const std::string &where) {
    object(j, where);
    const Json &opj = need(j, "op", where);
    if (!opj.is_string()) config_error(where + ": 'op' must be a string");
    const std::string op = opj.get<std::string>();
    if (op == "transfer") {
        require_keys(j, {"op", "qubit", "target"}, where);
        return Transfer{static_cast<int>(integer(need(j, "qubit", where), where + ".qubit")),
                        node_id(need(j, "target", where), where + ".target")};
    }
    if (op == "iswap" || op == "sqrt_iswap") return std::visit([](auto p) -> Instruction { return p; }, parse_pair(j, where));
    if (op == "single_qubit") {
        require_keys(j, {"op", "node", "rotation"}, where);
        const Json &rot = need(j, "rotation", where);
        if (!rot.is_string()) config_error(where + ".rotation: expected a string label");
        return SingleQubitExternal{node_id(need(j, "node", where), where + ".node"), rot.get<std::string>()};
    }
    if (op == "parallel") {
        require_keys(j, {"op", "pairs"}, where);
        const Json &pairs = need(j, "pairs", where);
        if (!pairs.is_array()) config_error(where + ".pairs: expected an array");
        ParallelBlock block;
        for (std::size_t i = 0; i < pairs.size(); ++i) block.pairs.push_back(parse_pair(pairs[i], where + ".pairs[" + std::to_string(i) + "]"));
        return block;
    }
    config_error(where + ": unknown op '" + op + "'");
}

std::initializer_list<const char *> experiment_parameters(const std::string &experiment) {
    static constexpr std::initializer_list<const char *> surface{"delta_omega_ratio", "gamma_ratio", "gamma2_ratio"};
    static constexpr std::initializer_list<const char *> echo{"shape", "width", "modes", "spacing", "carrier", "grid_step", "t_prime"};
    static constexpr std::initializer_list<const char *> gates{"atoms", "g", "detuning_factor", "two_excitation"};
    static constexpr std::initializer_list<const char *> transfer{"stored_modes", "retrievals", "mode_duration", "mode_gap", "grid_step"};
    static constexpr std::initializer_list<const char *> program{"program", "memory", "single_qubit_duration"};
    if (experiment == "efficiency-surface") return surface;
    if (experiment == "memory-echo") return echo;
    if (experiment == "gate-scaling") return gates;
    if (experiment == "transfer") return transfer;
    if (experiment == "compile") return program;
    return {};
}

Json parse_json(const std::string &text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error &e) {
        config_error(std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace

double parse_quantity(const std::string &text, Dimension dim) {
    std::istringstream is(text);
    std::string num;
    std::string unit;
    std::string extra;
    is >> num >> unit;
    if (num.empty()) config_error("empty quantity");
    if (unit.empty()) config_error("'" + text + "' has no unit");
    if (is >> extra) config_error("'" + text + "' has trailing text");
    const double value = parse_number(num);
    for (const auto &u : kUnits) {
        if (unit == u.name) {
            if (u.dim != dim) config_error("'" + text + "' is not a " + dimension_name(dim));
            return value * u.scale;
        }
    }
    config_error("unknown unit '" + unit + "'");
}

void require_keys(const Json &obj, std::initializer_list<const char *> allowed, const std::string &where) {
    if (!obj.is_object()) config_error(where + ": expected an object");
    for (const auto &[key, value] : obj.items()) {
        (void)value;
        if (std::none_of(allowed.begin(), allowed.end(), [&key](const char *a) { return key == a; })) {
            config_error(where + ": unknown key '" + key + "'");
        }
    }
}

double quantity_or(const Json &obj, const char *key, Dimension dim, double fallback) {
    return obj.contains(key) ? quantity(obj.at(key), dim, key) : fallback;
}

double number_or(const Json &obj, const char *key, double fallback) {
    return obj.contains(key) ? number(obj.at(key), key) : fallback;
}

std::int64_t integer_or(const Json &obj, const char *key, std::int64_t fallback) {
    return obj.contains(key) ? integer(obj.at(key), key) : fallback;
}

static QCSpec parse_spec_impl(const Json &j) {
    object(j, "spec");
    require_keys(j, {"bus", "waveguide", "nodes", "topology"}, "spec");
    QCSpec s;

    const Json &bus = object(need(j, "bus", "spec"), "spec.bus");
    require_keys(bus, {"inductance", "capacitance", "loss_resistance", "permittivity", "harmonic_index",
                       "receiver_loop_diameter", "node_loop_diameter"},
                 "spec.bus");
    s.bus.inductance = Henry(quantity(need(bus, "inductance", "spec.bus"), Dimension::Inductance, "spec.bus.inductance"));
    s.bus.capacitance = Farad(quantity(need(bus, "capacitance", "spec.bus"), Dimension::Capacitance, "spec.bus.capacitance"));
    s.bus.loss_resistance = Ohm(quantity(need(bus, "loss_resistance", "spec.bus"), Dimension::Resistance, "spec.bus.loss_resistance"));
    s.bus.permittivity = number_or(bus, "permittivity", 1.0);
    s.bus.harmonic_index = static_cast<int>(integer_or(bus, "harmonic_index", 1));
    if (bus.contains("receiver_loop_diameter")) s.bus.receiver_loop_diameter = Meters(quantity(bus.at("receiver_loop_diameter"), Dimension::Length, "spec.bus.receiver_loop_diameter"));
    if (bus.contains("node_loop_diameter")) s.bus.node_loop_diameter = Meters(quantity(bus.at("node_loop_diameter"), Dimension::Length, "spec.bus.node_loop_diameter"));
    const double omega0 = resonant_frequency(s.bus).value();

    if (j.contains("waveguide")) {
        const Json &wg = object(j.at("waveguide"), "spec.waveguide");
        require_keys(wg, {"gamma1", "gamma2", "bandwidth", "modes"}, "spec.waveguide");
        s.port.gamma1 = RadPerSec(quantity(need(wg, "gamma1", "spec.waveguide"), Dimension::Frequency, "spec.waveguide.gamma1"));
        s.port.gamma2 = RadPerSec(quantity_or(wg, "gamma2", Dimension::Frequency, 0.0));
        s.port.bandwidth = RadPerSec(quantity(need(wg, "bandwidth", "spec.waveguide"), Dimension::Frequency, "spec.waveguide.bandwidth"));
        s.port.mode_count = static_cast<int>(integer(need(wg, "modes", "spec.waveguide"), "spec.waveguide.modes"));
    }

    const Json &nodes = need(j, "nodes", "spec");
    if (!nodes.is_array()) config_error("spec.nodes: expected an array");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string where = "spec.nodes[" + std::to_string(i) + "]";
        const Json &nj = object(nodes[i], where);
        require_keys(nj, {"id", "role", "atoms", "center", "detuning", "g", "t2", "bus", "inhomogeneous_width", "offset"}, where);
        NodeSpec n;
        n.id = node_id(need(nj, "id", where), where + ".id");
        const Json &role = need(nj, "role", where);
        if (role == "memory") {
            n.role = NodeRole::Memory;
        } else if (role == "processing") {
            n.role = NodeRole::Processing;
        } else {
            config_error(where + ".role: expected 'memory' or 'processing'");
        }
        n.atom_count = static_cast<int>(integer(need(nj, "atoms", where), where + ".atoms"));
        if (nj.contains("center") == nj.contains("detuning")) config_error(where + ": give exactly one of 'center' or 'detuning'");
        n.center_frequency = RadPerSec(nj.contains("center")
                                           ? quantity(nj.at("center"), Dimension::Frequency, where + ".center")
                                           : omega0 + quantity(nj.at("detuning"), Dimension::Frequency, where + ".detuning"));
        n.coupling_g = RadPerSec(quantity(need(nj, "g", where), Dimension::Frequency, where + ".g"));
        n.t2 = Seconds(quantity(need(nj, "t2", where), Dimension::Time, where + ".t2"));
        n.bus = static_cast<int>(integer_or(nj, "bus", 0));
        if (n.role == NodeRole::Memory) {
            if (nj.contains("offset")) config_error(where + ": memory nodes take 'inhomogeneous_width', not 'offset'");
            n.profile = InhomogeneousComb{RadPerSec(quantity(need(nj, "inhomogeneous_width", where), Dimension::Frequency,
                                                             where + ".inhomogeneous_width")),
                                          1};
        } else {
            if (nj.contains("inhomogeneous_width")) config_error(where + ": processing nodes are homogeneous");
            n.profile = Homogeneous{RadPerSec(quantity_or(nj, "offset", Dimension::Frequency, 0.0))};
        }
        s.nodes.push_back(n);
    }

    if (j.contains("topology")) {
        const Json &tj = object(j.at("topology"), "spec.topology");
        require_keys(tj, {"buses", "links"}, "spec.topology");
        s.topology.buses.clear();
        s.topology.links.clear();
        const Json &buses = need(tj, "buses", "spec.topology");
        if (!buses.is_array()) config_error("spec.topology.buses: expected an array");
        for (const auto &b : buses) s.topology.buses.push_back(static_cast<int>(integer(b, "spec.topology.buses")));
        if (tj.contains("links")) {
            if (!tj.at("links").is_array()) config_error("spec.topology.links: expected an array");
            for (const auto &l : tj.at("links")) {
                const auto p = node_pair(l, "spec.topology.links");
                s.topology.links.push_back(p);
            }
        }
    }
    check_spec(s);
    return s;
}

QCSpec parse_spec(const Json &j) {
    try {
        return parse_spec_impl(j);
    } catch (const Error &e) {
        if (e.code() == ErrorCode::Config) throw;
        config_error(std::string("invalid spec: ") + e.what());
    }
}

ExperimentConfig parse_config(const std::string &text) {
    const Json j = parse_json(text);
    if (!j.is_object() || j.empty()) config_error("config must be a non-empty JSON object");
    require_keys(j, {"experiment", "spec", "parameters", "seed", "output_dir"}, "config");
    ExperimentConfig c;
    const Json &exp = need(j, "experiment", "config");
    if (!exp.is_string()) config_error("config.experiment: expected a string");
    c.experiment = exp.get<std::string>();
    if (std::none_of(std::begin(kExperiments), std::end(kExperiments), [&c](const char *e) { return c.experiment == e; })) {
        config_error("unknown experiment '" + c.experiment + "'");
    }
    c.spec = parse_spec(need(j, "spec", "config"));
    if (j.contains("parameters")) c.parameters = object(j.at("parameters"), "config.parameters");
    require_keys(c.parameters, experiment_parameters(c.experiment), "config.parameters");
    c.seed = integer_or(j, "seed", 0);
    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string()) config_error("config.output_dir: expected a string");
        c.output_dir = j.at("output_dir").get<std::string>();
    }
    // Canonical text: sorted keys, no whitespace.
    c.hash = fnv1a_hex(j.dump());
    return c;
}

std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) config_error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig load_config(const std::string &path) { return parse_config(read_text_file(path)); }

QCSpec load_spec_file(const std::string &path) {
    const std::string text = read_text_file(path);
    const Json j = parse_json(text);
    if (j.is_object() && j.contains("spec")) return parse_config(text).spec;
    return parse_spec(j);
}

ProgramFile parse_program(const Json &j, const QCSpec &spec) {
    object(j, "program file");
    require_keys(j, {"program", "memory", "single_qubit_duration"}, "program file");
    const Json &list = need(j, "program", "program file");
    if (!list.is_array()) config_error("program: expected an array of instructions");
    ProgramFile pf;
    for (std::size_t i = 0; i < list.size(); ++i) {
        pf.program.instructions.push_back(parse_instruction(list[i], "program[" + std::to_string(i) + "]"));
    }
    if (j.contains("memory")) {
        const Json &m = object(j.at("memory"), "memory");
        require_keys(m, {"stored_modes", "mode_duration", "mode_gap"}, "memory");
        const auto modes = integer(need(m, "stored_modes", "memory"), "memory.stored_modes");
        if (modes < 1) config_error("memory.stored_modes must be >= 1");
        pf.options.memory = self_mode_layout(spec, static_cast<int>(modes), quantity_or(m, "mode_duration", Dimension::Time, 0.0),
                                             quantity_or(m, "mode_gap", Dimension::Time, 0.0));
    }
    pf.options.single_qubit_duration = quantity_or(j, "single_qubit_duration", Dimension::Time, 0.0);
    return pf;
}

ProgramFile load_program_file(const std::string &path, const QCSpec &spec) {
    return parse_program(parse_json(read_text_file(path)), spec);
}

}  // namespace wirecircuit
