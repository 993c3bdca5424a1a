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

#include <cmath>
#include <sstream>

#include "support.hpp"
#include "wirecircuit/errors.hpp"
#include "wirecircuit/memory.hpp"
#include "wirecircuit/waveform.hpp"

using namespace wirecircuit;
using cd = std::complex<double>;

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

double eta(double G, double g1, double g2) { return storage_efficiency(RadPerSec(G), RadPerSec(g1), RadPerSec(g2)); }

double spectral(double dw, double G = 1.0, double g1 = 1.0, double g2 = 0.0, double din = 1.0) {
    return spectral_efficiency(RadPerSec(dw), RadPerSec(G), RadPerSec(g1), RadPerSec(g2), RadPerSec(din));
}

// Gaussian pulse of spectral half-width dw, centered at 0.
Waveform gaussian_input(double dw, double step = 0.05) {
    const double w = std::sqrt(std::log(2.0)) / dw;
    const UniformGrid grid{-6.0 * w, step, static_cast<std::size_t>(12.0 * w / step) + 1};
    return make_input_waveform(1, ModeShape::Gaussian, 0.0, w, grid);
}

Waveform gaussian_width(double width, double step = 0.05) {
    const UniformGrid grid{-5.0 * width, step, static_cast<std::size_t>(10.0 * width / step) + 1};
    return make_input_waveform(1, ModeShape::Gaussian, 0.0, width, grid);
}

}  // namespace

TEST(StorageEfficiency, Examples) {
    EXPECT_DOUBLE_EQ(eta(1.0, 1.0, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(eta(0.0, 1.0, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(eta(3.0, 1.0, 0.0), 0.75);
    EXPECT_DOUBLE_EQ(eta(4.0, 1.0, 0.0), 0.64);
    EXPECT_EQ(code_of([] { eta(1.0, 0.0, 0.0); }), ErrorCode::InvalidParameter);
    EXPECT_EQ(code_of([] { eta(-1.0, 1.0, 0.0); }), ErrorCode::InvalidParameter);
}

TEST(StorageEfficiency, PeaksAtTotalCavityDecay) {
    for (double g2 : {0.0, 0.3, 2.0}) {
        const double g1 = 1.0;
        double best = -1.0;
        double arg = 0.0;
        for (int i = 0; i <= 4000; ++i) {
            const double G = 0.001 * i;
            if (eta(G, g1, g2) > best) {
                best = eta(G, g1, g2);
                arg = G;
            }
        }
        EXPECT_NEAR(arg, g1 + g2, 1e-3);
        EXPECT_NEAR(best, g1 / (g1 + g2), 1e-12);
    }
}

TEST(StorageEfficiency, BoundedByBranchingRatio) {
    for (double G : {0.1, 1.0, 7.0}) {
        for (double g2 : {0.0, 0.5, 3.0}) EXPECT_LE(eta(G, 1.0, g2), 1.0 / (1.0 + g2) + 1e-15);
    }
}

TEST(SpectralEfficiency, NarrowbandLimitRecoversStorageEfficiency) {
    for (double G : {0.5, 1.0, 2.0}) {
        for (double g2 : {0.0, 0.5}) EXPECT_NEAR(spectral(1e-4, G, 1.0, g2, 3.0), eta(G, 1.0, g2), 0.01);
    }
}

TEST(SpectralEfficiency, FallsWithPulseBandwidth) {
    EXPECT_GT(spectral(0.2), 0.9);
    EXPECT_LT(spectral(5.0), 0.5);
    EXPECT_GT(spectral(0.05), spectral(0.2));
    EXPECT_GT(spectral(0.2), spectral(1.0));
    EXPECT_EQ(code_of([] {
                  spectral_efficiency(RadPerSec(2.0), RadPerSec(1), RadPerSec(1), RadPerSec(0), RadPerSec(1),
                                      RadPerSec(1.0));
              }),
              ErrorCode::Bandwidth);
    EXPECT_EQ(code_of([] { spectral(0.0); }), ErrorCode::InvalidParameter);
}

// The time-domain model absorbs a one-sided exponential pulse (Lorentzian
// power spectrum) close to the frequency-domain prediction.
TEST(SpectralEfficiency, AgreesWithDynamics) {
    const double dw = 0.2;
    const QCSpec s = fixtures::memory_spec(200, 1.0, 1.0, 0.0, 1.0, 8.0, 400);
    const double len = 12.0 / dw;
    const double step = 0.05;
    Waveform in;
    in.grid = {-1.0, step, static_cast<std::size_t>((len + 1.0) / step) + 1};
    in.envelope = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(in.grid.count));
    for (std::size_t i = 0; i < in.grid.count; ++i) {
        const double t = in.grid.at(i);
        if (t >= 0.0) in.envelope[static_cast<Eigen::Index>(i)] = std::exp(-dw * t);
    }
    in.normalize();
    const auto run = simulate_storage(s, in);
    EXPECT_NEAR(run.result.stored_fraction, spectral(dw), 0.08);
    EXPECT_LT(run.result.norm_deviation, 1e-9);
}

TEST(InputWaveform, SingleModeIsNormalized) {
    const UniformGrid grid{-30.0, 0.05, 1201};
    for (ModeShape shape : {ModeShape::Gaussian, ModeShape::Exponential}) {
        const auto w = make_input_waveform(1, shape, 0.0, 3.0, grid);
        EXPECT_NEAR(w.probability(), 1.0, 1e-12);
        ASSERT_EQ(w.mode_markers.size(), 1u);
    }
}

TEST(InputWaveform, SeparatedModesAreOrthogonal) {
    const UniformGrid grid{-20.0, 0.05, 2401};
    const auto all = make_input_waveform(3, ModeShape::Gaussian, 30.0, 2.0, grid, -10.0);
    EXPECT_NEAR(all.probability(), 1.0, 1e-12);
    ASSERT_EQ(all.mode_markers.size(), 3u);
    std::vector<Waveform> parts;
    for (int m = 0; m < 3; ++m) parts.push_back(make_input_waveform(1, ModeShape::Gaussian, 0.0, 2.0, grid, -10.0 + 30.0 * m));
    for (int a = 0; a < 3; ++a) {
        for (int b = a + 1; b < 3; ++b) EXPECT_LT(std::pow(Waveform::overlap(parts[a], parts[b]), 2), kModeOverlapLimit);
    }
}

TEST(InputWaveform, Errors) {
    const UniformGrid grid{-20.0, 0.05, 801};
    EXPECT_EQ(code_of([&] { make_input_waveform(0, ModeShape::Gaussian, 1.0, 1.0, grid); }), ErrorCode::InvalidParameter);
    EXPECT_EQ(code_of([&] { make_input_waveform(2, ModeShape::Gaussian, 1.0, 2.0, grid); }), ErrorCode::TemporalCrowding);
    EXPECT_EQ(code_of([&] { make_input_waveform(1, ModeShape::Gaussian, 0.0, 2.0, grid, 19.0); }),
              ErrorCode::InvalidParameter);
    EXPECT_EQ(code_of([] { parse_mode_shape("square"); }), ErrorCode::InvalidParameter);
    EXPECT_EQ(parse_mode_shape(mode_shape_name(ModeShape::SelfMode)), ModeShape::SelfMode);
}

TEST(Waveform, CsvRoundTrip) {
    auto w = gaussian_width(2.0, 0.1);
    w.carrier = 0.25;
    std::stringstream ss;
    write_waveform_csv(ss, w);
    const auto r = read_waveform_csv(ss);
    ASSERT_EQ(r.envelope.size(), w.envelope.size());
    EXPECT_DOUBLE_EQ(r.carrier, 0.25);
    EXPECT_EQ(r.mode_markers, w.mode_markers);
    EXPECT_NEAR(r.grid.origin, w.grid.origin, 1e-12);
    EXPECT_NEAR(r.grid.step, w.grid.step, 1e-12);
    EXPECT_LT((r.envelope - w.envelope).norm(), 1e-12);
    std::stringstream bad("time_s,re,im\n0,1,0\n1,1,0\n3,1,0\n");
    EXPECT_EQ(code_of([&] { read_waveform_csv(bad); }), ErrorCode::Config);
}

TEST(Waveform, ModeTransformRoundTrip) {
    WaveguidePort port;
    port.gamma1 = RadPerSec(1.0);
    port.bandwidth = RadPerSec(8.0);
    port.mode_count = 128;
    const auto c = make_continuum(port, 1.0);
    const UniformGrid grid = waveguide_time_grid(port, -40.0);
    Waveform w;
    w.grid = grid;
    w.envelope.resize(static_cast<Eigen::Index>(grid.count));
    for (std::size_t i = 0; i < grid.count; ++i) {
        const double t = grid.at(i);
        w.envelope[static_cast<Eigen::Index>(i)] = std::exp(-t * t / 50.0) * std::polar(1.0, 0.3 * t);
    }
    const auto modes = mode_amplitudes(w, c);
    EXPECT_NEAR(modes.squaredNorm(), w.probability(), 1e-10);
    const auto back = from_mode_amplitudes(modes, c, -40.0);
    EXPECT_LT((back.envelope - w.envelope).norm(), 1e-10);
    EXPECT_NEAR(spectral_centroid(modes, c), -0.3, 1e-3);
}

class StorageVsFormula : public ::testing::TestWithParam<double> {};

TEST_P(StorageVsFormula, NarrowbandAbsorptionMatches) {
    const double Gamma = GetParam();
    const QCSpec s = fixtures::memory_spec(200, Gamma, 1.0, 0.0, 1.0, 8.0, 400);
    const auto run = simulate_storage(s, gaussian_input(0.05));
    EXPECT_NEAR(run.result.stored_fraction, eta(Gamma, 1.0, 0.0), 0.01);
    EXPECT_LT(run.result.norm_deviation, 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Gamma, StorageVsFormula, ::testing::Values(1.0, 4.0));

TEST(Storage, MatchedMemoryAbsorbsNearlyEverything) {
    const QCSpec s = fixtures::memory_spec(200, 1.0, 1.0, 0.0, 1.0, 8.0, 400);
    EXPECT_GE(simulate_storage(s, gaussian_input(0.05)).result.stored_fraction, 0.99);
}

TEST(Storage, DetunedMemoryAbsorbsNothing) {
    QCSpec s = fixtures::memory_spec(100, 1.0, 1.0, 0.0, 1.0, 8.0, 200);
    s.nodes[0].center_frequency = RadPerSec(1.0 + 1e3);
    const auto run = simulate_storage(s, gaussian_width(4.0));
    EXPECT_LT(run.result.stored_fraction, 1e-3);
    bool flagged = false;
    for (const auto &d : run.diagnostics) flagged = flagged || d.code == "memory_detuned";
    EXPECT_TRUE(flagged);
}

TEST(Storage, InputLongerThanRecurrenceIsRejected) {
    const QCSpec s = fixtures::memory_spec(50, 1.0, 1.0, 0.0, 1.0, 8.0, 40);
    EXPECT_EQ(code_of([&] { simulate_storage(s, gaussian_width(4.0)); }), ErrorCode::InvalidParameter);
}

namespace {

QCSpec echo_spec(double gamma2 = 0.0) { return fixtures::memory_spec(400, 1.0, 1.0, gamma2, 5.0, 8.0, 400); }

}  // namespace

TEST(Echo, RecallsTimeReversedPulse) {
    const QCSpec s = echo_spec();
    Waveform in = gaussian_width(6.0);
    for (std::size_t i = 0; i < in.grid.count; ++i) in.envelope[static_cast<Eigen::Index>(i)] *= std::polar(1.0, -0.1 * in.grid.at(i));
    auto run = simulate_storage(s, in);
    const double tp = run.sim.state().time;
    const auto r = simulate_echo(std::move(run), s, tp);
    EXPECT_GE(r.echo_efficiency, 0.98);
    EXPECT_GE(r.echo_fidelity, 0.98);
    EXPECT_NEAR(r.echo_peak_time, 2.0 * tp, r.input_width);
    EXPECT_NEAR(r.input_centroid, 0.1, 0.01);
    EXPECT_NEAR(r.output_centroid, -r.input_centroid, 0.01);
    EXPECT_LT(r.norm_deviation, 1e-9);
    EXPECT_NEAR(r.echo_field.probability(), r.echo_efficiency, 1e-12);
}

TEST(Echo, ReversalBeforeStorageEndsIsRejected) {
    const QCSpec s = fixtures::memory_spec(100, 1.0, 1.0, 0.0, 5.0, 8.0, 200);
    auto run = simulate_storage(s, gaussian_width(4.0));
    const double early = run.sim.state().time - 1.0;
    EXPECT_EQ(code_of([&] { simulate_echo(std::move(run), s, early); }), ErrorCode::Sequencing);
}

TEST(Echo, CavityLossSuppressesRecall) {
    double prev = 1.0;
    for (double g2 : {0.0, 0.3, 1.0}) {
        const QCSpec s = fixtures::memory_spec(100, 1.0, 1.0, g2, 5.0, 8.0, 160);
        auto run = simulate_storage(s, gaussian_width(4.0));
        const double tp = run.sim.state().time;
        const auto r = simulate_echo(std::move(run), s, tp);
        EXPECT_LT(r.echo_efficiency, prev);
        EXPECT_LT(r.norm_deviation, 1e-9);
        prev = r.echo_efficiency;
    }
    EXPECT_LT(prev, 0.5);
}

// The stored state and its echo are linear in the input field.
TEST(Echo, StateIsLinearInTheInput) {
    const QCSpec s = fixtures::memory_spec(60, 1.0, 1.0, 0.0, 5.0, 8.0, 200);
    const UniformGrid grid{-20.0, 0.05, 801};
    const auto a = make_input_waveform(1, ModeShape::Gaussian, 0.0, 2.0, grid, -8.0);
    auto b = make_input_waveform(1, ModeShape::Exponential, 0.0, 1.5, grid, 2.0);
    b.envelope *= cd(0.3, 0.8);
    Waveform sum = a;
    sum.envelope = a.envelope + b.envelope;
    const auto c = make_continuum(s.port, 1.0);
    StorageOptions opts;
    opts.end_time = 40.0;
    auto final_state = [&](const Waveform &w) {
        auto run = simulate_storage(s, w, opts);
        run.sim.apply({40.0, ReverseQMDetunings{1}});
        run.sim.advance_to(70.0);
        return Eigen::VectorXcd(run.sim.state().amplitudes * mode_amplitudes(w, c).norm());
    };
    const auto pa = final_state(a);
    const auto pb = final_state(b);
    const auto ps = final_state(sum);
    EXPECT_LT((ps - pa - pb).norm() / ps.norm(), 1e-8);
}

TEST(Markers, MirrorAboutReversal) {
    EXPECT_EQ(echo_markers({0.0, 12.0}, 30.0), (std::vector<double>{24.0, 30.0}));
    const QCSpec s = fixtures::processor_spec();
    const auto l = self_mode_layout(s, 2);
    ASSERT_EQ(l.starts.size(), 2u);
    EXPECT_DOUBLE_EQ(l.mode_duration, 10.0);
    EXPECT_DOUBLE_EQ(l.mode_gap, 2.0);
    EXPECT_DOUBLE_EQ(l.starts[1], 12.0);
    EXPECT_DOUBLE_EQ(l.t_prime, 22.0 + settle_time(s));
    // The later-stored mode rephases first.
    EXPECT_DOUBLE_EQ(2.0 * l.markers[0], 2.0 * l.t_prime - l.starts[1]);
}

TEST(RetrievalSchedule, SingleModeSequence) {
    const QCSpec s = fixtures::processor_spec();
    const std::vector<double> markers{24.0, 30.0};
    RetrievalOptions o;
    o.t_prime = 30.0;
    const auto ev = retrieval_schedule({{1, 2}, {2, 3}}, markers, s, o);
    auto find = [&](double t, int node, double value) {
        for (const auto &e : ev) {
            if (const auto *d = std::get_if<SetNodeDetuning>(&e.action)) {
                if (e.time == t && d->node == node && std::abs(d->detuning - value) < 1e-9) return true;
            }
        }
        return false;
    };
    const double mem_on = 0.0;
    const double mem_park = parking_detuning(s.nodes[0]);
    EXPECT_TRUE(find(38.0, 2, 0.0));
    EXPECT_TRUE(find(48.0, 2, parking_detuning(s.nodes[1])));
    EXPECT_TRUE(find(48.0, 1, mem_park));
    EXPECT_TRUE(find(54.0, 1, mem_on));
    EXPECT_TRUE(find(54.0, 3, 0.0));
    EXPECT_TRUE(find(60.0, 3, parking_detuning(s.nodes[2])));
    for (std::size_t i = 1; i < ev.size(); ++i) EXPECT_FALSE(event_before(ev[i], ev[i - 1]));
    EXPECT_TRUE(std::holds_alternative<SetWaveguideCoupling>(ev.front().action) ||
                std::holds_alternative<ReverseQMDetunings>(ev.front().action));
}

TEST(RetrievalSchedule, SelectiveLaterModeParksMemoryFirst) {
    const QCSpec s = fixtures::processor_spec();
    RetrievalOptions o;
    o.t_prime = 30.0;
    const auto ev = selective_retrieval_schedule(2, {24.0, 30.0}, s, 3, o);
    bool parked_at_reversal = false;
    for (const auto &e : ev) {
        if (const auto *d = std::get_if<SetNodeDetuning>(&e.action)) {
            parked_at_reversal = parked_at_reversal || (e.time == 30.0 && d->node == 1 && d->detuning != 0.0);
        }
    }
    EXPECT_TRUE(parked_at_reversal);
}

TEST(RetrievalSchedule, Errors) {
    const QCSpec s = fixtures::processor_spec();
    RetrievalOptions o;
    o.t_prime = 30.0;
    const std::vector<double> m{24.0, 30.0};
    EXPECT_EQ(code_of([&] { retrieval_schedule({{3, 2}}, m, s, o); }), ErrorCode::Addressing);
    EXPECT_EQ(code_of([&] { retrieval_schedule({{2, 2}, {1, 3}}, m, s, o); }), ErrorCode::Addressing);
    EXPECT_EQ(code_of([&] { retrieval_schedule({{1, 1}}, m, s, o); }), ErrorCode::Addressing);
    EXPECT_EQ(code_of([&] { retrieval_schedule({{1, 2}}, {}, s, o); }), ErrorCode::Addressing);
    EXPECT_EQ(code_of([&] { retrieval_schedule({{1, 2}}, {30.0, 24.0}, s, o); }), ErrorCode::Addressing);
    RetrievalOptions late;
    late.t_prime = 60.0;
    EXPECT_EQ(code_of([&] { retrieval_schedule({{1, 2}}, m, s, late); }), ErrorCode::Sequencing);
}

TEST(SelfMode, ShapeAndSupport) {
    const UniformGrid grid{0.0, 0.01, 3001};
    const auto w = self_mode_waveform(3, RadPerSec(0.8 / std::sqrt(3.0)), RadPerSec(1.0), 12.0, grid);
    EXPECT_NEAR(w.probability(), 1.0, 1e-12);
    for (std::size_t i = 0; i < grid.count; ++i) {
        if (grid.at(i) >= 24.0) EXPECT_EQ(w.envelope[static_cast<Eigen::Index>(i)], cd(0.0, 0.0));
    }
    EXPECT_EQ(code_of([&] { self_mode_waveform(1, RadPerSec(0.1), RadPerSec(1.0), 12.0, grid); }),
              ErrorCode::OverdampedRegime);
    EXPECT_EQ(code_of([&] { self_mode_waveform(0, RadPerSec(1.0), RadPerSec(1.0), 12.0, grid); }),
              ErrorCode::InvalidParameter);
}
