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

#include "wirecircuit/memory.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wirecircuit/errors.hpp"

namespace wirecircuit {

using cd = std::complex<double>;

double storage_efficiency(RadPerSec Gamma, RadPerSec gamma1, RadPerSec gamma2) {
    const double G = Gamma.value();
    const double g1 = gamma1.value();
    const double g2 = gamma2.value();
    if (!(g1 >= 0.0) || !(g2 >= 0.0) || !(G >= 0.0)) fail(ErrorCode::InvalidParameter, "rates must be non-negative");
    const double gamma = g1 + g2;
    if (!(gamma > 0.0)) fail(ErrorCode::InvalidParameter, "gamma1 + gamma2 must be positive");
    const double x = G / gamma;
    return (g1 / gamma) * (4.0 * x) / ((1.0 + x) * (1.0 + x));
}

double spectral_absorption(double delta, RadPerSec Gamma, RadPerSec gamma1, RadPerSec gamma2, RadPerSec delta_in) {
    const double din = delta_in.value();
    if (!(din > 0.0)) fail(ErrorCode::InvalidParameter, "delta_in must be positive");
    const cd s = Gamma.value() * din / cd(din, -delta);
    const cd den = cd(gamma1.value() + gamma2.value(), -delta) + s;
    return 4.0 * gamma1.value() * s.real() / std::norm(den);
}

double spectral_efficiency(RadPerSec delta_omega, RadPerSec Gamma, RadPerSec gamma1, RadPerSec gamma2,
                           RadPerSec delta_in, RadPerSec bandwidth) {
    const double dw = delta_omega.value();
    if (!(dw > 0.0)) fail(ErrorCode::InvalidParameter, "spectral width must be positive");
    if (!(dw < bandwidth.value())) fail(ErrorCode::Bandwidth, "spectral width exceeds the simulated bandwidth");
    if (!(gamma1.value() + gamma2.value() > 0.0)) fail(ErrorCode::InvalidParameter, "gamma1 + gamma2 must be positive");
    // δ = δω tan θ maps the Lorentzian weight onto dθ/π over (−π/2, π/2).
    auto f = [&](double theta) {
        return spectral_absorption(dw * std::tan(theta), Gamma, gamma1, gamma2, delta_in) / std::numbers::pi;
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double h = 0.5 * std::numbers::pi;
    return GK::integrate(f, -h, 0.0, 20, 1e-13) + GK::integrate(f, 0.0, h, 20, 1e-13);
}

double settle_time(const QCSpec &spec) {
    const NodeSpec &mem = memory_node(spec);
    const double G = ensemble_coupling(mem).value();
    const double din = std::get<InhomogeneousComb>(mem.profile).width.value();
    const double kappa = spec.port.gamma1.value() + spec.port.gamma2.value() + G;
    return 20.0 * (1.0 + G / din) / kappa;
}

namespace {

// Time span holding all but 1e-12 of the waveform's probability.
std::pair<double, double> support(const Waveform &w) {
    const double total = w.envelope.squaredNorm();
    const double cut = 1e-12 * total;
    Eigen::Index lo = 0;
    double acc = 0.0;
    for (; lo < w.envelope.size(); ++lo) {
        acc += std::norm(w.envelope[lo]);
        if (acc > cut) break;
    }
    Eigen::Index hi = w.envelope.size() - 1;
    acc = 0.0;
    for (; hi > 0; --hi) {
        acc += std::norm(w.envelope[hi]);
        if (acc > cut) break;
    }
    return {w.grid.at(static_cast<std::size_t>(lo)), w.grid.at(static_cast<std::size_t>(std::max(lo, hi)))};
}

double rms_duration(const Waveform &w) {
    double p = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    for (Eigen::Index i = 0; i < w.envelope.size(); ++i) {
        const double t = w.grid.at(static_cast<std::size_t>(i));
        const double q = std::norm(w.envelope[i]);
        p += q;
        m1 += q * t;
        m2 += q * t * t;
    }
    if (p == 0.0) return 0.0;
    m1 /= p;
    return std::sqrt(std::max(0.0, m2 / p - m1 * m1));
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

StorageRun simulate_storage(const QCSpec &spec, const Waveform &input, const StorageOptions &options) {
    check_spec(spec);
    if (input.domain != WaveformDomain::Time) fail(ErrorCode::InvalidParameter, "storage input must be a time waveform");
    const NodeSpec &mem = memory_node(spec);
    BasisOptions bopts = options.basis;
    if (bopts.nodes.empty()) bopts.nodes = {mem.id};
    bopts.include_waveguide = true;

    Simulation sim(spec, Sector::One, bopts);
    const auto continuum = make_continuum(spec.port, sim.controls().gamma1);
    const double t0 = input.grid.origin;
    if (input.grid.end() - t0 >= continuum.recurrence_time()) {
        fail(ErrorCode::InvalidParameter, "input grid spans more than the waveguide recurrence time " +
                                              fmt(continuum.recurrence_time()));
    }
    const auto [start, stop] = support(input);
    Eigen::VectorXcd modes = mode_amplitudes(input, continuum);
    const double captured = modes.squaredNorm();
    if (!(captured > 0.0)) fail(ErrorCode::InvalidParameter, "input has no weight inside the waveguide band");
    modes /= std::sqrt(captured);

    StorageRun run{std::move(sim), {}, continuum, modes, start, stop, {}};
    const double settle = settle_time(spec);
    const double end = options.end_time.value_or(stop + settle);
    if (end < stop) fail(ErrorCode::Sequencing, "storage ends before the input has entered");

    run.diagnostics = validate_spec(spec, Seconds(end - t0));
    if (std::abs(initial_detuning(spec, mem)) > 0.0) {
        run.diagnostics.push_back({"memory_detuned", "memory node is not resonant with the bus"});
    }
    const double centroid = spectral_centroid(modes, continuum);
    double var = 0.0;
    for (Eigen::Index k = 0; k < modes.size(); ++k) {
        const double d = continuum.mode_frequencies[static_cast<std::size_t>(k)] - centroid;
        var += std::norm(modes[k]) * d * d;
    }
    const double width = std::get<InhomogeneousComb>(mem.profile).width.value();
    if (std::sqrt(var) > 0.2 * width) {
        run.diagnostics.push_back({"narrowband", "input rms bandwidth " + fmt(std::sqrt(var)) +
                                                     " rad/s is not << the memory width " + fmt(width)});
    }
    if (std::abs(1.0 - captured / std::max(input.probability(), 1e-300)) > 1e-3) {
        run.diagnostics.push_back({"band_edge", "input probability outside the waveguide band: " +
                                                    fmt(1.0 - captured / input.probability())});
    }

    SectorState state = make_vacuum_like(run.sim.basis_ptr(), t0);
    const auto &ws = run.sim.basis().waveguide_slots();
    for (std::size_t k = 0; k < ws.size(); ++k) {
        const double d = continuum.mode_frequencies[k];
        state.amplitudes[run.sim.basis().index_of(ws[k])] = modes[static_cast<Eigen::Index>(k)] * std::polar(1.0, -d * t0);
    }
    run.sim.set_state(std::move(state));
    run.sim.advance_to(end);

    run.result.stored_fraction = atom_population(run.sim.state());
    run.result.input_centroid = centroid;
    run.result.input_width = rms_duration(input);
    run.result.norm_deviation = norm_accounting(run.sim.trajectory()).max_deviation;
    return run;
}

MemoryResult simulate_echo(StorageRun stored, const QCSpec &spec, double t_prime) {
    Simulation &sim = stored.sim;
    if (t_prime < sim.state().time) {
        fail(ErrorCode::Sequencing, "reversal time " + fmt(t_prime) + " precedes storage completion at " +
                                        fmt(sim.state().time));
    }
    const NodeSpec &mem = memory_node(spec);
    const auto &continuum = stored.continuum;
    const double settle = settle_time(spec);
    const double t_end = 2.0 * t_prime - stored.input_start + settle;
    if (!(stored.input_start + continuum.recurrence_time() > t_end)) {
        fail(ErrorCode::InvalidParameter, "waveguide recurrence time " + fmt(continuum.recurrence_time()) +
                                              " is too short for the echo window ending at " + fmt(t_end));
    }
    std::vector<ControlEvent> events;
    if (sim.controls().gamma1 != spec.port.gamma1.value()) {
        events.push_back({sim.state().time, SetWaveguideCoupling{spec.port.gamma1.value()}});
    }
    events.push_back({t_prime, ReverseQMDetunings{mem.id}});
    sim.run(events);
    sim.advance_to(t_end);

    const auto &ws = sim.basis().waveguide_slots();
    const auto k = static_cast<Eigen::Index>(ws.size());
    Eigen::VectorXcd out(k);
    for (Eigen::Index q = 0; q < k; ++q) {
        const double d = continuum.mode_frequencies[static_cast<std::size_t>(q)];
        out[q] = sim.state().amplitudes[sim.basis().index_of(ws[static_cast<std::size_t>(q)])] * std::polar(1.0, d * t_end);
    }
    Waveform field = from_mode_amplitudes(out, continuum, t_end - continuum.recurrence_time());
    Eigen::Index peak = -1;
    double peak_value = -1.0;
    for (Eigen::Index n = 0; n < field.envelope.size(); ++n) {
        if (field.grid.at(static_cast<std::size_t>(n)) < t_prime) {
            field.envelope[n] = 0.0;
        } else if (std::norm(field.envelope[n]) > peak_value) {
            peak_value = std::norm(field.envelope[n]);
            peak = n;
        }
    }
    MemoryResult r = stored.result;
    r.echo_efficiency = field.probability();
    const Eigen::VectorXcd echo = mode_amplitudes(field, continuum);
    Eigen::VectorXcd target(k);
    for (Eigen::Index q = 0; q < k; ++q) {
        const double d = continuum.mode_frequencies[static_cast<std::size_t>(q)];
        target[q] = stored.input_modes[static_cast<Eigen::Index>(continuum.mirror(static_cast<std::size_t>(q)))] *
                    std::polar(1.0, 2.0 * d * t_prime);
    }
    const double norms = echo.norm() * target.norm();
    r.echo_fidelity = norms > 0.0 ? std::abs(target.dot(echo)) / norms : 0.0;
    r.output_centroid = r.echo_efficiency > 0.0 ? spectral_centroid(echo, continuum) : 0.0;
    if (peak > 0 && peak + 1 < field.envelope.size()) {
        // Parabolic refinement of the sampled maximum.
        const double a = std::norm(field.envelope[peak - 1]);
        const double b = std::norm(field.envelope[peak]);
        const double c = std::norm(field.envelope[peak + 1]);
        const double den = a - 2.0 * b + c;
        const double shift = den != 0.0 ? 0.5 * (a - c) / den : 0.0;
        r.echo_peak_time = field.grid.at(static_cast<std::size_t>(peak)) + std::clamp(shift, -0.5, 0.5) * field.grid.step;
    } else if (peak >= 0) {
        r.echo_peak_time = field.grid.at(static_cast<std::size_t>(peak));
    }
    r.norm_deviation = std::max(r.norm_deviation, norm_accounting(sim.trajectory()).max_deviation);
    r.echo_field = std::move(field);
    return r;
}

std::vector<double> echo_markers(const std::vector<double> &references, double t_prime) {
    std::vector<double> out;
    out.reserve(references.size());
    for (double r : references) out.push_back(t_prime - 0.5 * r);
    std::sort(out.begin(), out.end());
    return out;
}

MemoryLayout self_mode_layout(const QCSpec &spec, int stored_modes, double mode_duration, double mode_gap) {
    if (stored_modes < 1) fail(ErrorCode::InvalidParameter, "at least one stored mode is required");
    const double gamma = ensemble_coupling(memory_node(spec)).value();
    MemoryLayout l;
    l.mode_duration = mode_duration > 0.0 ? mode_duration : 10.0 / gamma;
    l.mode_gap = mode_gap > 0.0 ? mode_gap : 2.0 / gamma;
    for (int i = 0; i < stored_modes; ++i) l.starts.push_back(i * (l.mode_duration + l.mode_gap));
    l.t_prime = l.starts.back() + l.mode_duration + settle_time(spec);
    l.markers = echo_markers(l.starts, l.t_prime);
    return l;
}

LoadedMemory load_self_modes(const QCSpec &spec, const MemoryLayout &layout, const std::vector<double> &couplings,
                             double grid_step) {
    const std::size_t m = layout.starts.size();
    if (m == 0 || couplings.size() != m) fail(ErrorCode::InvalidParameter, "one coupling per stored mode is required");
    const double gamma = ensemble_coupling(memory_node(spec)).value();
    const double step = grid_step > 0.0 ? grid_step : 1.0 / (50.0 * gamma);
    const double origin = -layout.mode_gap;
    const double stop = layout.starts.back() + layout.mode_duration + layout.mode_gap;
    const UniformGrid grid{origin, step, static_cast<std::size_t>(std::ceil((stop - origin) / step)) + 1};

    std::vector<Waveform> by_echo(m);
    Waveform input;
    input.grid = grid;
    input.envelope = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(grid.count));
    // Storage index i rephases as echo index M − i (last in, first out).
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t k = m - 1 - i;
        by_echo[k] = self_mode_input(spec, couplings[k], layout.starts[i], layout.mode_duration, grid);
        input.envelope += by_echo[k].envelope;
        input.mode_markers.push_back(layout.starts[i]);
    }
    const double total = input.probability();
    input.normalize();
    std::vector<double> weights;
    for (const auto &w : by_echo) weights.push_back(w.probability() / total);

    StorageOptions sopts;
    sopts.end_time = layout.t_prime;
    for (const auto &n : spec.nodes) sopts.basis.nodes.push_back(n.id);
    StorageRun run = simulate_storage(spec, input, sopts);
    return {std::move(run), layout, std::move(input), std::move(by_echo), std::move(weights)};
}

std::vector<ControlEvent> retrieval_schedule(const std::vector<Retrieval> &retrievals,
                                             const std::vector<double> &markers, const QCSpec &spec,
                                             const RetrievalOptions &options) {
    const int m = static_cast<int>(markers.size());
    if (m == 0) fail(ErrorCode::Addressing, "no stored modes");
    for (int i = 1; i < m; ++i) {
        if (!(markers[static_cast<std::size_t>(i)] > markers[static_cast<std::size_t>(i - 1)])) {
            fail(ErrorCode::Addressing, "mode markers must be strictly ascending");
        }
    }
    const NodeSpec &mem = memory_node(spec);
    const double guard = options.guard.value_or(10.0 / ensemble_coupling(mem).value());
    const double tp = options.t_prime;
    const double mem_on = initial_detuning(spec, mem);
    const double mem_park = mem_on + parking_detuning(mem);

    std::vector<ControlEvent> ev;
    ev.push_back({tp, SetWaveguideCoupling{0.0}});
    ev.push_back({tp, ReverseQMDetunings{mem.id}});
    bool parked = false;
    if (!retrievals.empty() && retrievals.front().mode > 1) {
        ev.push_back({tp, SetNodeDetuning{mem.id, mem_park}});
        parked = true;
    }
    double prev_end = tp;
    int prev_mode = 0;
    for (const auto &r : retrievals) {
        if (r.mode < 1 || r.mode > m) fail(ErrorCode::Addressing, "mode index " + std::to_string(r.mode) + " out of range");
        if (r.mode <= prev_mode) fail(ErrorCode::Addressing, "retrievals must follow ascending echo order");
        const NodeSpec &target = node_by_id(spec, r.target);
        if (target.role != NodeRole::Processing) fail(ErrorCode::Addressing, "transfer target must be a processing node");
        const double t_k = markers[static_cast<std::size_t>(r.mode - 1)];
        const double t_rephase = 2.0 * t_k;
        double t_eq = r.mode == 1 ? std::max(tp, t_rephase - guard) : t_k + markers[static_cast<std::size_t>(r.mode - 2)];
        t_eq = std::max(t_eq, prev_end);
        if (!(t_rephase > t_eq)) {
            fail(ErrorCode::Sequencing, "mode " + std::to_string(r.mode) + " rephases at " + fmt(t_rephase) +
                                            " before its equalization time " + fmt(t_eq));
        }
        if (parked) {
            ev.push_back({t_eq, SetNodeDetuning{mem.id, mem_on}});
            parked = false;
        }
        ev.push_back({t_eq, SetNodeDetuning{target.id, 0.0}});
        ev.push_back({t_rephase, SetNodeDetuning{target.id, parking_detuning(target)}});
        if (r.mode < m) {
            ev.push_back({t_rephase, SetNodeDetuning{mem.id, mem_park}});
            parked = true;
        }
        prev_end = t_rephase;
        prev_mode = r.mode;
    }
    std::stable_sort(ev.begin(), ev.end(), event_before);
    return ev;
}

std::vector<ControlEvent> selective_retrieval_schedule(int k, const std::vector<double> &markers, const QCSpec &spec,
                                                       int target_node, const RetrievalOptions &options) {
    if (k < 1 || k > static_cast<int>(markers.size())) {
        fail(ErrorCode::Addressing, "mode index " + std::to_string(k) + " out of range");
    }
    return retrieval_schedule({{k, target_node}}, markers, spec, options);
}

Waveform self_mode_waveform(std::int64_t atom_count, RadPerSec g, RadPerSec Gamma, double t_k, const UniformGrid &grid) {
    if (atom_count < 1) fail(ErrorCode::InvalidParameter, "atom count must be >= 1");
    const double G = Gamma.value();
    const double s2 = static_cast<double>(atom_count) * g.value() * g.value() - 0.25 * G * G;
    if (!(s2 > 0.0)) fail(ErrorCode::OverdampedRegime, "N g^2 <= (Gamma/2)^2: no oscillatory self-mode");
    const double s = std::sqrt(s2);
    Waveform w;
    w.grid = grid;
    w.envelope = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(grid.count));
    w.mode_markers = {t_k};
    for (std::size_t i = 0; i < grid.count; ++i) {
        const double t = grid.at(i);
        if (t < 2.0 * t_k) {
            const double tau = 2.0 * t_k - t;
            w.envelope[static_cast<Eigen::Index>(i)] = std::exp(-0.5 * G * tau) * std::sin(-s * tau) / s;
        }
    }
    w.normalize();
    return w;
}

Waveform self_mode_input(const QCSpec &spec, double collective_g, double start, double duration,
                         const UniformGrid &grid) {
    const NodeSpec &mem = memory_node(spec);
    const double G = ensemble_coupling(mem).value();
    const double s2 = collective_g * collective_g - 0.25 * G * G;
    if (!(s2 > 0.0)) fail(ErrorCode::OverdampedRegime, "target coupling too weak for an oscillatory self-mode");
    const double gamma1 = spec.port.gamma1.value();
    if (!(gamma1 > 0.0)) fail(ErrorCode::InvalidParameter, "loading through the waveguide needs gamma1 > 0");
    const double s = std::sqrt(s2);
    const double loss = gamma1 + spec.port.gamma2.value();
    const double g = mem.coupling_g.value();
    std::vector<double> detunings = atom_offsets(mem);
    for (auto &d : detunings) d += initial_detuning(spec, mem);

    const cd ap(-0.5 * G, s);
    const cd am(-0.5 * G, -s);
    const cd i(0.0, 1.0);
    Waveform w;
    w.grid = grid;
    w.envelope = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(grid.count));
    w.mode_markers = {start};
    for (std::size_t n = 0; n < grid.count; ++n) {
        const double tau = grid.at(n) - start;
        if (tau < 0.0 || tau > duration) continue;
        // a(τ) = (e^{α₊τ} − e^{α₋τ}) / 2i and its derivative.
        const cd a = (std::exp(ap * tau) - std::exp(am * tau)) / (2.0 * i);
        const cd da = (ap * std::exp(ap * tau) - am * std::exp(am * tau)) / (2.0 * i);
        // g Σ_j c_j with c_j = −i g ∫₀^τ a(u) e^{−iΔ_j(τ−u)} du.
        cd drive = 0.0;
        for (double d : detunings) {
            const cd e = std::polar(1.0, -d * tau);
            const cd ip = (std::exp(ap * tau) - e) / (ap + i * d);
            const cd im = (std::exp(am * tau) - e) / (am + i * d);
            drive += (ip - im) / (2.0 * i);
        }
        drive *= -i * g * g;
        w.envelope[static_cast<Eigen::Index>(n)] = i * (da + loss * a + i * drive) / std::sqrt(2.0 * gamma1);
    }
    w.normalize();
    return w;
}

}  // namespace wirecircuit
