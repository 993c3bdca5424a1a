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

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "wirecircuit/model.hpp"
#include "wirecircuit/scheduler.hpp"

namespace wirecircuit {

using Json = nlohmann::json;

enum class Dimension { Frequency, Time, Inductance, Capacitance, Resistance, Length };

/// Parses "<number> <unit>" into SI / angular units. Frequencies in Hz
/// (Hz, kHz, MHz, GHz) are multiplied by 2π; rad/s prefixes are kept as is.
/// Throws Config on a missing or wrong-dimension unit.
double parse_quantity(const std::string &text, Dimension dim);

struct ExperimentConfig {
    std::string experiment;
    QCSpec spec;
    Json parameters = Json::object();
    std::int64_t seed = 0;
    std::string output_dir = ".";
    std::string hash;  // FNV-1a of the canonical config text
};

inline constexpr const char *kExperiments[] = {"efficiency-surface", "memory-echo", "gate-scaling",
                                               "transfer", "compile", "design-report"};

/// Strict parse: unknown keys, missing units and unknown experiments raise Config.
ExperimentConfig parse_config(const std::string &text);
ExperimentConfig load_config(const std::string &path);

QCSpec parse_spec(const Json &j);

/// A file holding either a bare spec object or a full experiment config.
QCSpec load_spec_file(const std::string &path);

struct ProgramFile {
    Program program;
    CompileOptions options;
};

ProgramFile parse_program(const Json &j, const QCSpec &spec);
ProgramFile load_program_file(const std::string &path, const QCSpec &spec);

std::string read_text_file(const std::string &path);

/// Helpers for experiment parameters; all throw Config on bad input.
void require_keys(const Json &obj, std::initializer_list<const char *> allowed, const std::string &where);
double quantity_or(const Json &obj, const char *key, Dimension dim, double fallback);
double number_or(const Json &obj, const char *key, double fallback);
std::int64_t integer_or(const Json &obj, const char *key, std::int64_t fallback);

}  // namespace wirecircuit
