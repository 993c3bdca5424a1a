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

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wirecircuit/config.hpp"
#include "wirecircuit/errors.hpp"
#include "wirecircuit/experiments.hpp"
#include "wirecircuit/model.hpp"
#include "wirecircuit/scheduler.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

using namespace wirecircuit;

void report(const std::vector<Diagnostic> &diags) {
    for (const auto &d : diags) std::cerr << "warning [" << d.code << "]: " << d.message << '\n';
}

int finish(const std::vector<Diagnostic> &diags, bool strict) {
    report(diags);
    if (strict && !diags.empty()) {
        std::cerr << "error: " << diags.size() << " diagnostic(s) with --strict\n";
        return kExitRuntime;
    }
    return kExitOk;
}

int cmd_run(const std::string &path, const std::string &out, unsigned threads, bool strict) {
    const ExperimentConfig cfg = load_config(path);
    RunOptions opts;
    opts.output_dir = out;
    opts.threads = threads;
    const ExperimentOutput result = run_experiment(cfg, opts);
    for (const auto &f : result.files) std::cout << f << '\n';
    return finish(result.warnings, strict);
}

int cmd_validate(const std::string &path, bool strict) {
    const ExperimentConfig cfg = load_config(path);
    std::cout << "config ok: experiment " << cfg.experiment << ", hash " << cfg.hash << '\n';
    return finish(validate_spec(cfg.spec, Seconds(0.0)), strict);
}

int cmd_compile(const std::string &program_path, const std::string &spec_path, const std::string &out, bool strict) {
    const QCSpec spec = load_spec_file(spec_path);
    const ProgramFile pf = load_program_file(program_path, spec);
    const ControlTimeline tl = compile(pf.program, spec, pf.options);
    if (out.empty()) {
        write_timeline_csv(std::cout, tl);
    } else {
        std::filesystem::create_directories(out);
        const auto file = std::filesystem::path(out) / "timeline.csv";
        std::ofstream os(file, std::ios::binary);
        if (!os) fail(ErrorCode::InternalConsistency, "cannot write '" + file.string() + "'");
        write_timeline_csv(os, tl);
        std::cout << file.string() << '\n';
    }
    for (const auto &a : tl.assumptions) std::cerr << "assumption: " << a << '\n';
    return finish(validate_timeline(tl, spec), strict);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Wire-circuit ensemble quantum computer simulator and schedule compiler"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.require_subcommand(1);

    bool strict = false;
    std::string out;
    unsigned threads = 0;
    app.add_flag("--strict", strict, "Treat physics-validity diagnostics as failures (exit 3)");
    app.add_option("--out", out, "Output directory");
    app.add_option("--threads", threads, "Worker threads for sweeps (0 = all cores)");

    std::string config_path;
    auto *run = app.add_subcommand("run", "Run the experiment described by a config file");
    run->add_option("config", config_path, "Experiment config (JSON)")->required();
    run->fallthrough();

    std::string validate_path;
    auto *validate = app.add_subcommand("validate", "Parse and check a config file");
    validate->add_option("config", validate_path, "Experiment config (JSON)")->required();
    validate->fallthrough();

    std::string program_path;
    std::string spec_path;
    auto *comp = app.add_subcommand("compile", "Compile a gate program into a control timeline CSV");
    comp->add_option("program", program_path, "Program file (JSON)")->required();
    comp->add_option("--spec", spec_path, "Spec or experiment config (JSON)")->required();
    comp->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) return cmd_run(config_path, out, threads, strict);
        if (*validate) return cmd_validate(validate_path, strict);
        return cmd_compile(program_path, spec_path, out, strict);
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::Config ? kExitConfig : kExitRuntime;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
