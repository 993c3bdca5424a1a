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

#include "wirecircuit/gates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "wirecircuit/errors.hpp"
#include "wirecircuit/hamiltonian.hpp"

namespace wirecircuit {

using cd = std::complex<double>;

Eigen::Matrix4d effective_matrix(std::int64_t atom_count, RadPerSec g, RadPerSec delta) {
    if (atom_count < 1) fail(ErrorCode::InvalidParameter, "atom count must be >= 1");
    if (delta.value() == 0.0) fail(ErrorCode::ResonantRegime, "delta = 0: the dispersive effective model is invalid");
    const double n = static_cast<double>(atom_count);
    const double s = g.value() * g.value() / delta.value();
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(k10, k10) = m(k10, k01) = m(k01, k10) = m(k01, k01) = n * s;
    m(k11, k11) = 2.0 * n * s;
    return m;
}

Eigen::Matrix4cd collective_evolution(const Eigen::Matrix4d &matrix, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(matrix);
    const Eigen::Matrix4cd v = es.eigenvectors().cast<cd>();
    Eigen::Vector4cd phase;
    for (int i = 0; i < 4; ++i) phase[i] = std::polar(1.0, -es.eigenvalues()[i] * t);
    return v * phase.asDiagonal() * v.transpose();
}

GateCalibration gate_times(std::int64_t atom_count, RadPerSec g, RadPerSec delta) {
    GateCalibration c;
    c.omega_c = std::abs(coherent_gate_frequency(atom_count, g, delta).value());
    c.delta = delta.value();
    c.t_iswap = std::numbers::pi / c.omega_c;
    c.t_sqrt_iswap = 0.5 * c.t_iswap;
    c.t_iswap_quoted = 1.0 / c.omega_c;
    c.t_sqrt_iswap_quoted = 0.5 / c.omega_c;
    const double gn2 = static_cast<double>(atom_count) * g.value() * g.value();
    c.leakage_estimate = 4.0 * gn2 / (delta.value() * delta.value());
    const double margin = kDispersiveMargin * std::sqrt(gn2);
    if (std::abs(delta.value()) < margin) {
        std::ostringstream os;
        os << "|delta| = " << std::abs(delta.value()) << " rad/s is below 10 g sqrt(N) = " << margin << " rad/s";
        c.warnings.push_back({"dispersive_margin", os.str()});
    }
    return c;
}

Eigen::Matrix4cd target_unitary(TargetGate gate) {
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
    u(k00, k00) = u(k11, k11) = 1.0;
    if (gate == TargetGate::ISwap) {
        u(k10, k01) = u(k01, k10) = cd(0.0, 1.0);
    } else {
        const double r = 1.0 / std::numbers::sqrt2;
        u(k10, k10) = u(k01, k01) = r;
        u(k10, k01) = u(k01, k10) = cd(0.0, r);
    }
    return u;
}

namespace {

// Bit masks of the collective states: qubit 1 excited in |10⟩, |11⟩; qubit 2 in |01⟩, |11⟩.
constexpr std::array<int, 4> kQubit1{0, 1, 0, 1};
constexpr std::array<int, 4> kQubit2{0, 0, 1, 1};

}  // namespace

double gate_fidelity(const Eigen::Matrix4cd &actual, TargetGate target) {
    const double unitarity = (actual.adjoint() * actual - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff();
    if (!(unitarity <= 1e-9)) fail(ErrorCode::Contract, "gate_fidelity requires a unitary input");
    const Eigen::Matrix4cd t = target_unitary(target);
    // f(φ) = Σ_{j,i} conj(T_ji) U_ji e^{i(θ_j + ρ_i)}, θ from the left phases, ρ from the right.
    Eigen::Matrix4cd w;
    for (int j = 0; j < 4; ++j) {
        for (int i = 0; i < 4; ++i) w(j, i) = std::conj(t(j, i)) * actual(j, i);
    }
    auto value = [&](const std::array<double, 4> &p, int skip, cd &with, cd &without) {
        with = 0.0;
        without = 0.0;
        for (int j = 0; j < 4; ++j) {
            for (int i = 0; i < 4; ++i) {
                const std::array<int, 4> uses{kQubit1[j], kQubit2[j], kQubit1[i], kQubit2[i]};
                double phase = 0.0;
                for (int q = 0; q < 4; ++q) {
                    if (uses[q] && q != skip) phase += p[q];
                }
                const cd term = w(j, i) * std::polar(1.0, phase);
                if (skip >= 0 && uses[skip]) {
                    with += term;
                } else {
                    without += term;
                }
            }
        }
    };
    double best = 0.0;
    const double h = 0.5 * std::numbers::pi;
    for (int start = 0; start < 256; ++start) {
        std::array<double, 4> p{h * (start & 3), h * ((start >> 2) & 3), h * ((start >> 4) & 3), h * ((start >> 6) & 3)};
        double last = -1.0;
        for (int iter = 0; iter < 200; ++iter) {
            for (int q = 0; q < 4; ++q) {
                cd b, a;
                value(p, q, b, a);
                // |a + b e^{iφ}| is largest when both terms align.
                if (std::abs(b) > 0.0) p[q] = std::arg(a) - std::arg(b);
            }
            cd b, a;
            value(p, -1, b, a);
            const double f = std::abs(a);
            if (std::abs(f - last) < 1e-15) break;
            last = f;
        }
        best = std::max(best, last);
    }
    return std::min(1.0, best * best / 16.0);
}

QCSpec gate_pair_spec(int atom_count, RadPerSec g, RadPerSec delta) {
    QCSpec spec;
    spec.bus.inductance = Henry(1.0);
    spec.bus.capacitance = Farad(1.0);
    spec.port.gamma1 = RadPerSec(0.0);
    for (int id : {1, 2}) {
        NodeSpec n;
        n.id = id;
        n.atom_count = atom_count;
        n.center_frequency = RadPerSec(1.0) + delta;
        n.profile = Homogeneous{};
        n.coupling_g = g;
        n.role = NodeRole::Processing;
        spec.nodes.push_back(n);
    }
    return spec;
}

namespace {

struct Eigensystem {
    Eigen::MatrixXd vectors;
    Eigen::VectorXd energies;
};

Eigensystem diagonalize(const SparseMatrix &h) {
    const Eigen::MatrixXd dense = Eigen::MatrixXd(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    if (es.info() != Eigen::Success) fail(ErrorCode::InternalConsistency, "eigendecomposition failed");
    return {es.eigenvectors(), es.eigenvalues()};
}

Eigen::VectorXd symmetric_vector(const SectorBasis &basis, int node) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
    const auto &ids = basis.atom_slots(node);
    for (int s : ids) v[basis.index_of(s)] = 1.0 / std::sqrt(static_cast<double>(ids.size()));
    return v;
}

// Amplitude ⟨probe|e^{−iHt}|ψ₀⟩ from precomputed projections.
cd amplitude(const Eigen::VectorXd &probe_proj, const Eigen::VectorXd &init_proj, const Eigen::VectorXd &energies,
             double t) {
    cd acc = 0.0;
    for (Eigen::Index m = 0; m < energies.size(); ++m) acc += probe_proj[m] * init_proj[m] * std::polar(1.0, -energies[m] * t);
    return acc;
}

double lobe_vertex(const std::vector<double> &t, const std::vector<double> &y, std::size_t lo, std::size_t hi) {
    const double t0 = 0.5 * (t[lo] + t[hi]);
    const double scale = std::max(t[hi] - t[lo], 1e-300);
    Eigen::MatrixXd a(static_cast<Eigen::Index>(hi - lo + 1), 3);
    Eigen::VectorXd b(a.rows());
    for (std::size_t i = lo; i <= hi; ++i) {
        const double x = (t[i] - t0) / scale;
        const auto r = static_cast<Eigen::Index>(i - lo);
        a(r, 0) = x * x;
        a(r, 1) = x;
        a(r, 2) = 1.0;
        b[r] = y[i];
    }
    const Eigen::Vector3d c = a.colPivHouseholderQr().solve(b);
    if (!(c[0] < 0.0)) fail(ErrorCode::Regime, "population lobe is not a maximum");
    return t0 - scale * c[1] / (2.0 * c[0]);
}

}  // namespace

OscillationResult full_model_oscillation(int atom_count, RadPerSec g, RadPerSec delta,
                                         const OscillationOptions &options) {
    if (atom_count < 1 || atom_count > 6) fail(ErrorCode::InvalidParameter, "brute-force oracle supports 1 <= N <= 6");
    OscillationResult r;
    r.omega_formula = std::abs(coherent_gate_frequency(atom_count, g, delta).value());
    const double gn = g.value() * std::sqrt(static_cast<double>(atom_count));
    r.leakage_bound = 1.5 * 4.0 * gn * gn / (delta.value() * delta.value());

    const QCSpec spec = gate_pair_spec(atom_count, g, delta);
    BasisOptions opts;
    opts.include_waveguide = false;
    const SectorBasis basis(spec, Sector::One, opts);
    auto controls = initial_controls(spec);
    controls.gamma1 = 0.0;
    const auto eig = diagonalize(build_hamiltonian(spec, basis, controls));
    const Eigen::VectorXd p1 = eig.vectors.transpose() * symmetric_vector(basis, 1);
    const Eigen::VectorXd p2 = eig.vectors.transpose() * symmetric_vector(basis, 2);

    const double period = 2.0 * std::numbers::pi / r.omega_formula;
    const auto n = static_cast<std::size_t>(options.periods * static_cast<double>(options.samples_per_period));
    r.times.resize(n);
    r.p_target.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = period * options.periods * static_cast<double>(i) / static_cast<double>(n - 1);
        const double q1 = std::norm(amplitude(p1, p1, eig.energies, t));
        const double q2 = std::norm(amplitude(p2, p1, eig.energies, t));
        r.times[i] = t;
        r.p_target[i] = q2;
        r.max_leakage = std::max(r.max_leakage, 1.0 - q1 - q2);
    }
    std::vector<double> vertices;
    std::size_t i = 0;
    while (i < n && vertices.size() < 2) {
        if (r.p_target[i] <= 0.75) {
            ++i;
            continue;
        }
        // A lobe ends only when the trace falls below 0.25, so fast bus
        // ripple near the 0.75 crossing cannot split it.
        std::size_t j = i;
        std::size_t k = i;
        while (k < n && r.p_target[k] >= 0.25) {
            if (r.p_target[k] > 0.75) j = k;
            ++k;
        }
        if (k == n) break;  // lobe cut by the end of the trace
        if (j - i >= 4) vertices.push_back(lobe_vertex(r.times, r.p_target, i, j));
        i = k;
    }
    if (vertices.size() < 2) fail(ErrorCode::Regime, "population trace shows fewer than two exchange maxima");
    r.omega_measured = 2.0 * std::numbers::pi / (vertices[1] - vertices[0]);
    return r;
}

double parallel_pair_crosstalk(int atom_count, RadPerSec g, RadPerSec delta_a, RadPerSec delta_b,
                               std::size_t samples) {
    QCSpec spec = gate_pair_spec(atom_count, g, delta_a);
    const QCSpec pair_b = gate_pair_spec(atom_count, g, delta_b);
    for (auto n : pair_b.nodes) {
        n.id += 2;
        spec.nodes.push_back(n);
    }
    BasisOptions opts;
    opts.include_waveguide = false;
    const SectorBasis basis(spec, Sector::One, opts);
    auto controls = initial_controls(spec);
    controls.gamma1 = 0.0;
    const auto eig = diagonalize(build_hamiltonian(spec, basis, controls));
    const double t_end = std::max(gate_times(atom_count, g, delta_a).t_iswap, gate_times(atom_count, g, delta_b).t_iswap);

    double worst = 0.0;
    for (const auto &[source, others] : {std::pair{1, std::array{3, 4}}, std::pair{3, std::array{1, 2}}}) {
        const Eigen::VectorXd c = eig.vectors.transpose() * symmetric_vector(basis, source);
        std::vector<int> far;
        for (int node : others) {
            for (int s : basis.atom_slots(node)) far.push_back(static_cast<int>(basis.index_of(s)));
        }
        for (std::size_t i = 0; i < samples; ++i) {
            const double t = t_end * static_cast<double>(i) / static_cast<double>(samples - 1);
            Eigen::VectorXcd phase(eig.energies.size());
            for (Eigen::Index m = 0; m < phase.size(); ++m) phase[m] = c[m] * std::polar(1.0, -eig.energies[m] * t);
            double p = 0.0;
            for (int e : far) p += std::norm(eig.vectors.row(e).dot(phase));
            worst = std::max(worst, p);
        }
    }
    return worst;
}

TwoExcitationResult two_excitation_leakage(int atom_count, RadPerSec g, RadPerSec delta, std::size_t samples) {
    const QCSpec spec = gate_pair_spec(atom_count, g, delta);
    BasisOptions opts;
    opts.include_waveguide = false;
    const SectorBasis basis(spec, Sector::Two, opts);
    auto controls = initial_controls(spec);
    controls.gamma1 = 0.0;
    const auto eig = diagonalize(build_hamiltonian(spec, basis, controls));
    Eigen::VectorXd v11 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
    for (int a : basis.atom_slots(1)) {
        for (int b : basis.atom_slots(2)) v11[basis.index_of(a, b)] = 1.0 / static_cast<double>(atom_count);
    }
    const Eigen::VectorXd c = eig.vectors.transpose() * v11;
    const auto cal = gate_times(atom_count, g, delta);
    auto leak = [&](double t) { return 1.0 - std::norm(amplitude(c, c, eig.energies, t)); };
    TwoExcitationResult r;
    for (std::size_t i = 0; i < samples; ++i) {
        r.max_leakage = std::max(r.max_leakage, leak(cal.t_iswap * static_cast<double>(i) / static_cast<double>(samples - 1)));
    }
    r.leakage_at_sqrt = leak(cal.t_sqrt_iswap);
    r.leakage_at_iswap = leak(cal.t_iswap);
    return r;
}

TransferResult transfer_qm_to_node(const QCSpec &spec, const TransferPlan &plan) {
    check_spec(spec);
    const NodeSpec &mem = memory_node(spec);
    const double gamma = ensemble_coupling(mem).value();
    const int m = plan.stored_modes;
    for (const auto &r : plan.retrievals) {
        if (r.mode < 1 || r.mode > m) fail(ErrorCode::Addressing, "mode index " + std::to_string(r.mode) + " out of range");
    }
    if (m < 1) fail(ErrorCode::InvalidParameter, "at least one stored mode is required");
    if (plan.retrievals.empty()) fail(ErrorCode::InvalidParameter, "no retrievals requested");
    const MemoryLayout layout = self_mode_layout(spec, m, plan.mode_duration, plan.mode_gap);
    const double dur = layout.mode_duration;
    std::vector<double> couplings;
    for (int k = 1; k <= m; ++k) {
        int target = plan.retrievals.front().target;
        for (const auto &r : plan.retrievals) {
            if (r.mode == k) target = r.target;
        }
        couplings.push_back(collective_coupling(node_by_id(spec, target)).value());
    }
    LoadedMemory loaded = load_self_modes(spec, layout, couplings, plan.grid_step);
    StorageRun &run = loaded.run;
    const double t_prime = layout.t_prime;
    const std::vector<double> &markers = layout.markers;

    TransferResult result;
    result.t_prime = t_prime;
    result.stored_total = node_population(run.sim.state(), mem.id);
    // Per-mode stored populations, from storing each mode alone.
    std::vector<double> stored(static_cast<std::size_t>(m), result.stored_total);
    if (m > 1) {
        StorageOptions sopts;
        sopts.end_time = t_prime;
        for (const auto &n : spec.nodes) sopts.basis.nodes.push_back(n.id);
        for (const auto &r : plan.retrievals) {
            const auto k = static_cast<std::size_t>(r.mode - 1);
            auto alone = simulate_storage(spec, loaded.mode_inputs[k], sopts);
            stored[k] = loaded.mode_weights[k] * node_population(alone.sim.state(), mem.id);
        }
    }

    RetrievalOptions ropts;
    ropts.t_prime = t_prime;
    auto events = retrieval_schedule(plan.retrievals, markers, spec, ropts);
    if (!plan.equalize) {
        if (plan.strict) {
            fail(ErrorCode::Sequencing, "target node " + std::to_string(plan.retrievals.front().target) +
                                            " is still detuned at its equalization time");
        }
        std::erase_if(events, [&](const ControlEvent &e) {
            const auto *s = std::get_if<SetNodeDetuning>(&e.action);
            return s != nullptr && s->node != mem.id && s->detuning == 0.0;
        });
    }
    result.events = events;

    // Sample plan: the bus field before the first rephasing, then every 2t_k.
    const auto &first = plan.retrievals.front();
    const double first_rephase = 2.0 * markers[static_cast<std::size_t>(first.mode - 1)];
    const UniformGrid field_grid{first_rephase - dur, dur / static_cast<double>(plan.field_samples),
                                 plan.field_samples};
    std::vector<double> samples;
    for (std::size_t i = 0; i < field_grid.count; ++i) samples.push_back(field_grid.at(i));
    for (const auto &r : plan.retrievals) samples.push_back(2.0 * markers[static_cast<std::size_t>(r.mode - 1)]);
    std::sort(samples.begin(), samples.end());

    Eigen::VectorXcd field = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(field_grid.count));
    std::vector<TransferOutcome> outcomes;
    for (const auto &r : plan.retrievals) {
        TransferOutcome o;
        o.mode = r.mode;
        o.target = r.target;
        o.marker = markers[static_cast<std::size_t>(r.mode - 1)];
        o.stored_population = stored[static_cast<std::size_t>(r.mode - 1)];
        outcomes.push_back(o);
    }
    std::size_t field_index = 0;
    const long cavity = run.sim.basis().index_of(run.sim.basis().cavity_slot());
    run.sim.run(events, samples, [&](const SectorState &s) {
        for (auto &o : outcomes) {
            if (s.time == 2.0 * o.marker) o.target_population = std::norm(symmetric_amplitude(s, o.target));
        }
        if (field_index < field_grid.count && s.time == field_grid.at(field_index)) {
            field[static_cast<Eigen::Index>(field_index++)] = s.amplitudes[cavity];
        }
    });

    const NodeSpec &first_target = node_by_id(spec, first.target);
    result.self_mode = self_mode_waveform(first_target.atom_count, first_target.coupling_g, RadPerSec(gamma),
                                          markers[static_cast<std::size_t>(first.mode - 1)], field_grid);
    result.cavity_field.grid = field_grid;
    result.cavity_field.envelope = field;
    for (auto &o : outcomes) {
        o.fidelity = o.stored_population > 0.0 ? o.target_population / o.stored_population : 0.0;
    }
    if (field.norm() > 0.0) outcomes.front().self_mode_overlap = Waveform::overlap(result.cavity_field, result.self_mode);
    result.outcomes = std::move(outcomes);
    result.norm = norm_accounting(run.sim.trajectory());
    return result;
}

TransferResult transfer_qm_to_node(const QCSpec &spec, int target_node, int mode, int stored_modes) {
    TransferPlan plan;
    plan.stored_modes = stored_modes;
    plan.retrievals = {{mode, target_node}};
    return transfer_qm_to_node(spec, plan);
}

}  // namespace wirecircuit
