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
#include <iosfwd>
#include <string>
#include <vector>

#include "wirecircuit/config.hpp"
#include "wirecircuit/model.hpp"

namespace wirecircuit {

inline constexpr const char *kToolName = "wirecircuit";
inline constexpr const char *kToolVersion = "1.0.0";

struct RunOptions {
    std::string output_dir;  // overrides the config when non-empty
    unsigned threads = 0;    // 0 uses the hardware concurrency
};

struct ExperimentOutput {
    std::vector<std::string> files;
    std::vector<Diagnostic> warnings;  // physics-validity diagnostics
};

/// Runs the configured experiment and writes its CSV files. Every file starts
/// with '#' metadata lines (tool, version, experiment, config hash, units,
/// timestamp) followed by a header row and data rows.
ExperimentOutput run_experiment(const ExperimentConfig &config, const RunOptions &options = {});

/// Writes the metadata block shared by every output file.
void write_metadata(std::ostream &os, const std::string &experiment, const std::string &config_hash,
                    const std::string &units);

/// Value of a "# key: value" metadata line, empty when absent.
std::string read_metadata(std::istream &is, const std::string &key);

/// Runs fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)> &fn);

}  // namespace wirecircuit
