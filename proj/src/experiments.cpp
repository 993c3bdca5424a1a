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

#include "wirecircuit/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "wirecircuit/csv.hpp"
#include "wirecircuit/errors.hpp"
#include "wirecircuit/gates.hpp"
#include "wirecircuit/memory.hpp"
#include "wirecircuit/scheduler.hpp"
#include "wirecircuit/waveform.hpp"

namespace wirecircuit {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void config_error(const std::string &what) { fail(ErrorCode::Config, what); }

std::string quoted(const std::string &text) {
    std::string q = "\"";
    for (char ch : text) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

class Writer {
   public:
    Writer(const ExperimentConfig &config, const fs::path &dir, const std::string &name, const std::string &units,
           const std::vector<std::string> &columns, ExperimentOutput &out)
        : path_(dir / name), os_(path_, std::ios::binary) {
        if (!os_) fail(ErrorCode::InternalConsistency, "cannot write '" + path_.string() + "'");
        write_metadata(os_, config.experiment, config.hash, units);
        for (std::size_t i = 0; i < columns.size(); ++i) os_ << (i ? "," : "") << columns[i];
        if (!columns.empty()) os_ << '\n';
        out.files.push_back(path_.string());
    }

    void row(const std::vector<double> &values) {
        for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << format_number(values[i]);
        os_ << '\n';
    }

    void raw(const std::string &line) { os_ << line << '\n'; }

    std::ostream &stream() { return os_; }

   private:
    fs::path path_;
    std::ofstream os_;
};

// A sweep axis: explicit list of numbers or {min, max, count, log}.
std::vector<double> axis(const Json &p, const char *key, double lo, double hi, std::size_t count, bool log) {
    if (p.contains(key)) {
        const Json &a = p.at(key);
        if (a.is_array()) {
            std::vector<double> v;
            for (const auto &x : a) {
                if (!x.is_number()) config_error(std::string(key) + ": expected numbers");
                v.push_back(x.get<double>());
            }
            if (v.empty()) config_error(std::string(key) + ": empty list");
            std::sort(v.begin(), v.end());
            return v;
        }
        require_keys(a, {"min", "max", "count", "log"}, key);
        lo = number_or(a, "min", lo);
        hi = number_or(a, "max", hi);
        count = static_cast<std::size_t>(integer_or(a, "count", static_cast<std::int64_t>(count)));
        if (a.contains("log")) {
            if (!a.at("log").is_boolean()) config_error(std::string(key) + ".log: expected a boolean");
            log = a.at("log").get<bool>();
        }
    }
    if (count < 1 || !(hi >= lo) || (log && !(lo > 0.0))) config_error(std::string(key) + ": invalid range");
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double u = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        v[i] = log ? lo * std::pow(hi / lo, u) : lo + u * (hi - lo);
    }
    return v;
}

const NodeSpec &first_processing(const QCSpec &spec) {
    for (const auto &n : spec.nodes) {
        if (n.role == NodeRole::Processing) return n;
    }
    config_error("the experiment needs a processing node");
}

void write_field(Writer &w, const Waveform &a, const Waveform *b) {
    for (std::size_t i = 0; i < a.grid.count; ++i) {
        const auto idx = static_cast<Eigen::Index>(i);
        std::vector<double> r{a.grid.at(i), a.envelope[idx].real(), a.envelope[idx].imag(), std::norm(a.envelope[idx])};
        if (b) r.push_back(i < b->grid.count ? std::norm(b->envelope[idx]) : 0.0);
        w.row(r);
    }
}

ExperimentOutput efficiency_surface(const ExperimentConfig &c, const fs::path &dir, unsigned threads) {
    const Json &p = c.parameters;
    require_keys(p, {"delta_omega_ratio", "gamma_ratio", "gamma2_ratio"}, "parameters");
    const auto dw = axis(p, "delta_omega_ratio", 0.01, 1.0, 25, true);
    const auto gr = axis(p, "gamma_ratio", 0.1, 4.0, 40, false);
    const double g2r = number_or(p, "gamma2_ratio", c.spec.port.gamma2.value() / c.spec.port.gamma1.value());
    const double gamma1 = c.spec.port.gamma1.value();
    if (!(gamma1 > 0.0)) config_error("efficiency-surface needs gamma1 > 0");
    const auto &mem = memory_node(c.spec);
    const double din = std::get<InhomogeneousComb>(mem.profile).width.value();

    std::vector<double> eff(dw.size() * gr.size());
    parallel_for(eff.size(), threads, [&](std::size_t i) {
        const double d = dw[i / gr.size()] * din;
        const double G = gr[i % gr.size()] * gamma1;
        eff[i] = spectral_efficiency(RadPerSec(d), RadPerSec(G), RadPerSec(gamma1), RadPerSec(g2r * gamma1),
                                     RadPerSec(din), c.spec.port.bandwidth);
    });
    ExperimentOutput out;
    Writer w(c, dir, "efficiency_surface.csv", "ratios dimensionless; efficiency is a probability",
             {"delta_omega_ratio", "gamma_ratio", "efficiency", "line_center_efficiency"}, out);
    Writer peaks(c, dir, "efficiency_surface_peaks.csv", "ratios dimensionless",
                 {"delta_omega_ratio", "best_gamma_ratio", "best_efficiency"}, out);
    for (std::size_t a = 0; a < dw.size(); ++a) {
        std::size_t best = 0;
        for (std::size_t b = 0; b < gr.size(); ++b) {
            const double e = eff[a * gr.size() + b];
            if (e > eff[a * gr.size() + best]) best = b;
            w.row({dw[a], gr[b], e,
                   storage_efficiency(RadPerSec(gr[b] * gamma1), RadPerSec(gamma1), RadPerSec(g2r * gamma1))});
        }
        peaks.row({dw[a], gr[best], eff[a * gr.size() + best]});
    }
    return out;
}

ExperimentOutput memory_echo(const ExperimentConfig &c, const fs::path &dir) {
    const Json &p = c.parameters;
    require_keys(p, {"shape", "width", "modes", "spacing", "carrier", "grid_step", "t_prime"}, "parameters");
    const auto &mem = memory_node(c.spec);
    const double gamma = ensemble_coupling(mem).value();
    std::string shape_name = "gaussian";
    if (p.contains("shape")) {
        if (!p.at("shape").is_string()) config_error("shape: expected a string");
        shape_name = p.at("shape").get<std::string>();
    }
    ModeShape shape{};
    try {
        shape = parse_mode_shape(shape_name);
    } catch (const Error &e) {
        config_error(e.what());
    }
    const double width = quantity_or(p, "width", Dimension::Time, 6.0 / gamma);
    const int modes = static_cast<int>(integer_or(p, "modes", 1));
    const double spacing = quantity_or(p, "spacing", Dimension::Time, 12.0 * width);
    const double carrier = quantity_or(p, "carrier", Dimension::Frequency, 0.0);
    const double step = quantity_or(p, "grid_step", Dimension::Time, 0.05 / gamma);
    if (modes < 1 || !(width > 0.0) || !(step > 0.0)) config_error("memory-echo: modes, width and grid_step must be positive");
    const double span = (modes - 1) * spacing + 10.0 * width;
    const UniformGrid grid{-5.0 * width, step, static_cast<std::size_t>(std::ceil(span / step)) + 1};
    Waveform in = make_input_waveform(modes, shape, spacing, width, grid);
    for (std::size_t i = 0; i < grid.count; ++i) in.envelope[static_cast<Eigen::Index>(i)] *= std::polar(1.0, -carrier * grid.at(i));

    StorageRun run = simulate_storage(c.spec, in);
    ExperimentOutput out;
    out.warnings = run.diagnostics;
    const double t_prime = quantity_or(p, "t_prime", Dimension::Time, run.sim.state().time);
    const auto continuum = run.continuum;
    const Waveform in_spec = spectrum(in, continuum);
    const MemoryResult r = simulate_echo(std::move(run), c.spec, t_prime);
    const Waveform out_spec = spectrum(r.echo_field, continuum);

    Writer s(c, dir, "memory_echo_summary.csv", "time s; frequency offsets from omega0 in rad/s", {"quantity", "value"}, out);
    const std::pair<const char *, double> rows[] = {
        {"stored_fraction", r.stored_fraction}, {"echo_efficiency", r.echo_efficiency},
        {"echo_fidelity", r.echo_fidelity},     {"t_prime", t_prime},
        {"echo_peak_time", r.echo_peak_time},   {"expected_peak_time", 2.0 * t_prime},
        {"input_width", r.input_width},         {"input_centroid", r.input_centroid},
        {"output_centroid", r.output_centroid}, {"spectral_spacing", continuum.spacing},
        {"norm_deviation", r.norm_deviation}};
    for (const auto &[k, v] : rows) s.raw(std::string(k) + "," + format_number(v));
    Writer fi(c, dir, "memory_echo_input.csv", "time s; envelope sqrt(1/s)", {"time_s", "re", "im", "abs2"}, out);
    write_field(fi, in, nullptr);
    Writer fo(c, dir, "memory_echo_output.csv", "time s; envelope sqrt(1/s)", {"time_s", "re", "im", "abs2"}, out);
    write_field(fo, r.echo_field, nullptr);
    Writer sp(c, dir, "memory_echo_spectra.csv", "frequency offset from omega0 rad/s",
              {"omega_rad_s", "input_re", "input_im", "input_abs2", "output_abs2"}, out);
    write_field(sp, in_spec, &out_spec);
    return out;
}

ExperimentOutput gate_scaling(const ExperimentConfig &c, const fs::path &dir, unsigned threads) {
    const Json &p = c.parameters;
    require_keys(p, {"atoms", "g", "detuning_factor", "two_excitation"}, "parameters");
    std::vector<int> atoms{1, 2, 3, 4, 5};
    if (p.contains("atoms")) {
        atoms.clear();
        if (!p.at("atoms").is_array()) config_error("atoms: expected an array of integers");
        for (const auto &a : p.at("atoms")) {
            if (!a.is_number_integer() || a.get<int>() < 1) config_error("atoms: expected positive integers");
            atoms.push_back(a.get<int>());
        }
        std::sort(atoms.begin(), atoms.end());
        atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    }
    if (atoms.size() < 2) config_error("atoms: at least two values are needed for the slope");
    const double g = quantity_or(p, "g", Dimension::Frequency, 1.0);
    const double factor = number_or(p, "detuning_factor", kGateDetuningFactor);
    bool two = true;
    if (p.contains("two_excitation")) {
        if (!p.at("two_excitation").is_boolean()) config_error("two_excitation: expected a boolean");
        two = p.at("two_excitation").get<bool>();
    }
    const double fixed_delta = factor * g * std::sqrt(static_cast<double>(atoms.back()));

    struct Row {
        double delta, wf, wm, leak, bound, ti, ts, fi, fs, leak11 = 0.0, fixed_wm, fixed_wf;
    };
    std::vector<Row> rows(atoms.size());
    parallel_for(atoms.size(), threads, [&](std::size_t i) {
        const int n = atoms[i];
        const double delta = factor * g * std::sqrt(static_cast<double>(n));
        const auto cal = gate_times(n, RadPerSec(g), RadPerSec(delta));
        const auto osc = full_model_oscillation(n, RadPerSec(g), RadPerSec(delta));
        const auto m = effective_matrix(n, RadPerSec(g), RadPerSec(delta));
        Row r{delta, osc.omega_formula, osc.omega_measured, osc.max_leakage, osc.leakage_bound, cal.t_iswap, cal.t_sqrt_iswap,
              gate_fidelity(collective_evolution(m, cal.t_iswap), TargetGate::ISwap),
              gate_fidelity(collective_evolution(m, cal.t_sqrt_iswap), TargetGate::SqrtISwap), 0.0, 0.0, 0.0};
        if (two) r.leak11 = two_excitation_leakage(n, RadPerSec(g), RadPerSec(delta)).max_leakage;
        const auto fixed = full_model_oscillation(n, RadPerSec(g), RadPerSec(fixed_delta));
        r.fixed_wm = fixed.omega_measured;
        r.fixed_wf = fixed.omega_formula;
        rows[i] = r;
    });

    ExperimentOutput out;
    Writer w(c, dir, "gate_scaling.csv", "frequency rad/s; time s",
             {"N", "delta_rad_s", "omega_c_formula", "omega_c_measured", "relative_error", "leakage", "leakage_bound",
              "t_iswap_s", "t_sqrt_iswap_s", "fidelity_iswap", "fidelity_sqrt_iswap", "leakage_11_max"},
             out);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const auto &r = rows[i];
        w.row({static_cast<double>(atoms[i]), r.delta, r.wf, r.wm, r.wm / r.wf - 1.0, r.leak, r.bound, r.ti, r.ts, r.fi, r.fs,
               two ? r.leak11 : std::nan("")});
        const double x = atoms[i];
        sx += x;
        sy += r.fixed_wm;
        sxx += x * x;
        sxy += x * r.fixed_wm;
    }
    const double n = static_cast<double>(atoms.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double slope_formula = 2.0 * g * g / fixed_delta;
    Writer s(c, dir, "gate_scaling_slope.csv", "frequency rad/s", {"quantity", "value"}, out);
    s.raw("fixed_delta," + format_number(fixed_delta));
    s.raw("slope_measured," + format_number(slope));
    s.raw("slope_formula," + format_number(slope_formula));
    s.raw("slope_relative_error," + format_number(slope / slope_formula - 1.0));
    return out;
}

ExperimentOutput transfer(const ExperimentConfig &c, const fs::path &dir) {
    const Json &p = c.parameters;
    require_keys(p, {"stored_modes", "retrievals", "mode_duration", "mode_gap", "grid_step"}, "parameters");
    TransferPlan plan;
    plan.stored_modes = static_cast<int>(integer_or(p, "stored_modes", 1));
    plan.mode_duration = quantity_or(p, "mode_duration", Dimension::Time, 0.0);
    plan.mode_gap = quantity_or(p, "mode_gap", Dimension::Time, 0.0);
    plan.grid_step = quantity_or(p, "grid_step", Dimension::Time, 0.0);
    if (p.contains("retrievals")) {
        if (!p.at("retrievals").is_array()) config_error("retrievals: expected an array");
        for (const auto &r : p.at("retrievals")) {
            require_keys(r, {"mode", "target"}, "retrievals[]");
            plan.retrievals.push_back({static_cast<int>(integer_or(r, "mode", 1)), static_cast<int>(integer_or(r, "target", 0))});
        }
    } else {
        plan.retrievals = {{1, first_processing(c.spec).id}};
    }
    const TransferResult r = transfer_qm_to_node(c.spec, plan);
    ExperimentOutput out;
    Writer w(c, dir, "transfer_outcomes.csv", "time s; populations are probabilities",
             {"mode", "target", "marker", "rephase_time", "fidelity", "self_mode_overlap", "stored_population",
              "target_population"},
             out);
    for (const auto &o : r.outcomes) {
        w.row({static_cast<double>(o.mode), static_cast<double>(o.target), o.marker, 2.0 * o.marker, o.fidelity,
               o.self_mode_overlap, o.stored_population, o.target_population});
    }
    Writer s(c, dir, "transfer_summary.csv", "time s", {"quantity", "value"}, out);
    s.raw("t_prime," + format_number(r.t_prime));
    s.raw("stored_total," + format_number(r.stored_total));
    s.raw("norm_deviation," + format_number(r.norm.max_deviation));
    Writer f(c, dir, "transfer_field.csv", "time s; bus field and self-mode normalized",
             {"time_s", "re", "im", "abs2", "self_mode_abs2"}, out);
    write_field(f, r.cavity_field, &r.self_mode);
    Writer e(c, dir, "transfer_timeline.csv", "time s; rad/s", {"time_s", "action", "node_id", "value"}, out);
    std::ostringstream tl;
    write_timeline_csv(tl, make_timeline(r.events));
    std::string line;
    std::istringstream is(tl.str());
    std::getline(is, line);  // header already written
    while (std::getline(is, line)) e.raw(line);
    return out;
}

ExperimentOutput compile_experiment(const ExperimentConfig &c, const fs::path &dir) {
    const ProgramFile pf = parse_program(c.parameters, c.spec);
    const ControlTimeline tl = compile(pf.program, c.spec, pf.options);
    ExperimentOutput out;
    out.warnings = validate_timeline(tl, c.spec);
    Writer w(c, dir, "timeline.csv", "time s; rad/s", {}, out);
    // The timeline writer brings its own header row.
    std::ostringstream os;
    write_timeline_csv(os, tl);
    w.stream() << os.str();
    Writer n(c, dir, "timeline_notes.csv", "time s", {"start_s", "end_s", "origin", "note"}, out);
    for (const auto &note : tl.notes) {
        n.raw(format_number(note.start) + "," + format_number(note.end) + "," + std::to_string(note.origin) + "," + quoted(note.text));
    }
    // Modelling assumptions are recorded, not reported as physics warnings.
    for (const auto &a : tl.assumptions) n.raw(format_number(tl.start_time) + "," + format_number(tl.end_time) + ",-1," + quoted(a));
    return out;
}

ExperimentOutput design_report(const ExperimentConfig &c, const fs::path &dir) {
    require_keys(c.parameters, {}, "parameters");
    const auto &spec = c.spec;
    const double w0 = resonant_frequency(spec.bus).value();
    ExperimentOutput out;
    Writer w(c, dir, "design_report.csv", "SI units; angular frequencies in rad/s", {"quantity", "value", "unit"}, out);
    auto put = [&w](const std::string &k, double v, const char *unit) { w.raw(k + "," + format_number(v) + "," + unit); };
    put("omega0", w0, "rad/s");
    put("frequency", w0 / (2.0 * std::numbers::pi), "Hz");
    put("wavelength", 2.0 * std::numbers::pi * kSpeedOfLight / (w0 * std::sqrt(spec.bus.permittivity)), "m");
    put("q_factor", q_factor(spec.bus), "1");
    put("line_length", twt_line_length(spec.bus, RadPerSec(w0)).value(), "m");
    put("gamma1", spec.port.gamma1.value(), "rad/s");
    const auto &mem = memory_node(spec);
    const double din = std::get<InhomogeneousComb>(mem.profile).width.value();
    put("memory_Gamma", ensemble_coupling(mem).value(), "rad/s");
    if (spec.port.gamma1.value() > 0.0) {
        put("memory_matched_atom_number",
            static_cast<double>(matched_atom_number(spec.port.gamma1, mem.coupling_g, RadPerSec(din))), "1");
    }
    put("memory_storage_efficiency", storage_efficiency(ensemble_coupling(mem), spec.port.gamma1, spec.port.gamma2), "1");
    for (const auto &n : spec.nodes) {
        if (n.role != NodeRole::Processing) continue;
        const std::string pre = "node" + std::to_string(n.id) + "_";
        const double delta = initial_detuning(spec, n);
        put(pre + "collective_coupling", collective_coupling(n).value(), "rad/s");
        put(pre + "detuning", delta, "rad/s");
        if (delta != 0.0) {
            const auto cal = gate_times(n.atom_count, n.coupling_g, RadPerSec(delta));
            put(pre + "omega_c", std::abs(cal.omega_c), "rad/s");
            put(pre + "t_iswap_quoted", std::abs(cal.t_iswap_quoted), "s");
            put(pre + "t_sqrt_iswap_quoted", std::abs(cal.t_sqrt_iswap_quoted), "s");
        }
    }
    return out;
}

}  // namespace

void write_metadata(std::ostream &os, const std::string &experiment, const std::string &config_hash,
                    const std::string &units) {
    os << "# tool: " << kToolName << '\n';
    os << "# version: " << kToolVersion << '\n';
    os << "# experiment: " << experiment << '\n';
    os << "# config_hash: " << config_hash << '\n';
    os << "# units: " << units << '\n';
    os << "# generated: " << utc_now() << '\n';
}

std::string read_metadata(std::istream &is, const std::string &key) {
    std::string line;
    const std::string prefix = "# " + key + ": ";
    while (std::getline(is, line)) {
        if (line.rfind('#', 0) != 0) break;
        if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
    }
    return {};
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)> &fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!error) error = std::current_exception();
                    next = count;
                }
            }
        });
    }
    for (auto &t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

ExperimentOutput run_experiment(const ExperimentConfig &config, const RunOptions &options) {
    const fs::path dir = options.output_dir.empty() ? fs::path(config.output_dir) : fs::path(options.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorCode::InternalConsistency, "cannot create output directory '" + dir.string() + "'");
    const auto &e = config.experiment;
    ExperimentOutput out;
    if (e == "efficiency-surface") out = efficiency_surface(config, dir, options.threads);
    else if (e == "memory-echo") out = memory_echo(config, dir);
    else if (e == "gate-scaling") out = gate_scaling(config, dir, options.threads);
    else if (e == "transfer") out = transfer(config, dir);
    else if (e == "compile") out = compile_experiment(config, dir);
    else if (e == "design-report") out = design_report(config, dir);
    else config_error("unknown experiment '" + e + "'");

    for (auto &d : validate_spec(config.spec, Seconds(0.0))) out.warnings.push_back(std::move(d));
    if (!out.warnings.empty()) {
        const fs::path path = dir / (e + "_warnings.csv");
        std::ofstream os(path, std::ios::binary);
        write_metadata(os, e, config.hash, "none");
        os << "code,message\n";
        for (const auto &d : out.warnings) os << d.code << ',' << quoted(d.message) << '\n';
        out.files.push_back(path.string());
    }
    return out;
}

}  // namespace wirecircuit
