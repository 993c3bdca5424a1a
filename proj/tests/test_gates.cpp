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
#include <numbers>

#include "support.hpp"
#include "wirecircuit/errors.hpp"
#include "wirecircuit/gates.hpp"

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

double omega(std::int64_t n, double g, double delta) { return 2.0 * static_cast<double>(n) * g * g / delta; }

}  // namespace

TEST(EffectiveMatrix, LiteralEntries) {
    const auto m = effective_matrix(3, RadPerSec(0.5), RadPerSec(2.0));
    const double s = 3 * 0.25 / 2.0;
    Eigen::Matrix4d expect = Eigen::Matrix4d::Zero();
    expect(k10, k10) = expect(k10, k01) = expect(k01, k10) = expect(k01, k01) = s;
    expect(k11, k11) = 2.0 * s;
    EXPECT_EQ(m, expect);
}

TEST(EffectiveMatrix, ScalesLinearlyWithAtomNumber) {
    const auto one = effective_matrix(1, RadPerSec(0.3), RadPerSec(5.0));
    for (std::int64_t n : {1, 7, 100}) {
        const auto m = effective_matrix(n, RadPerSec(0.3), RadPerSec(5.0));
        EXPECT_LT((m - static_cast<double>(n) * one).cwiseAbs().maxCoeff(), 1e-15);
    }
    EXPECT_EQ(effective_matrix(5, RadPerSec(0.0), RadPerSec(1.0)), Eigen::Matrix4d::Zero());
    EXPECT_EQ(code_of([] { effective_matrix(5, RadPerSec(1.0), RadPerSec(0.0)); }), ErrorCode::ResonantRegime);
    EXPECT_EQ(code_of([] { effective_matrix(0, RadPerSec(1.0), RadPerSec(1.0)); }), ErrorCode::InvalidParameter);
}

TEST(CollectiveEvolution, SwapAndHalfSwap) {
    const auto m = effective_matrix(4, RadPerSec(0.5), RadPerSec(10.0));
    const double wc = omega(4, 0.5, 10.0);
    EXPECT_LT((collective_evolution(m, 0.0) - Eigen::Matrix4cd::Identity()).norm(), 1e-14);
    const auto full = collective_evolution(m, std::numbers::pi / wc);
    EXPECT_NEAR(std::norm(full(k01, k10)), 1.0, 1e-12);
    EXPECT_NEAR(std::norm(full(k10, k10)), 0.0, 1e-12);
    const auto half = collective_evolution(m, std::numbers::pi / (2.0 * wc));
    EXPECT_NEAR(std::norm(half(k01, k10)), 0.5, 1e-12);
    EXPECT_NEAR(std::norm(half(k10, k10)), 0.5, 1e-12);
    const auto u = collective_evolution(m, 3.7);
    EXPECT_LT((u * collective_evolution(m, -3.7) - Eigen::Matrix4cd::Identity()).norm(), 1e-12);
    EXPECT_LT((u.adjoint() * u - Eigen::Matrix4cd::Identity()).norm(), 1e-12);
}

TEST(GateTimes, FormulaAndQuotedValues) {
    const double delta = 1e8;
    const double g = std::sqrt(3.768e6 * delta / 2.0);
    const auto cal = gate_times(1, RadPerSec(g), RadPerSec(delta));
    EXPECT_NEAR(cal.omega_c / 3.768e6, 1.0, 1e-12);
    EXPECT_NEAR(cal.t_iswap_quoted, 2.654e-7, 1e-10);
    EXPECT_NEAR(cal.t_iswap, 8.337e-7, 1e-10);
    EXPECT_DOUBLE_EQ(cal.t_sqrt_iswap, 0.5 * cal.t_iswap);
    EXPECT_DOUBLE_EQ(cal.t_sqrt_iswap_quoted, 0.5 * cal.t_iswap_quoted);
    // Doubling N at fixed g and Δ halves the gate time.
    const auto twice = gate_times(2, RadPerSec(g), RadPerSec(delta));
    EXPECT_NEAR(twice.t_iswap / cal.t_iswap, 0.5, 1e-12);
    EXPECT_NEAR(cal.leakage_estimate, 4.0 * g * g / (delta * delta), 1e-15);
}

TEST(GateFidelity, TargetsAndContract) {
    EXPECT_NEAR(gate_fidelity(target_unitary(TargetGate::ISwap), TargetGate::ISwap), 1.0, 1e-12);
    EXPECT_NEAR(gate_fidelity(target_unitary(TargetGate::SqrtISwap), TargetGate::SqrtISwap), 1.0, 1e-12);
    EXPECT_NEAR(gate_fidelity(Eigen::Matrix4cd::Identity(), TargetGate::ISwap), 0.25, 1e-9);
    Eigen::Matrix4cd bad = Eigen::Matrix4cd::Identity();
    bad(0, 0) = 2.0;
    EXPECT_EQ(code_of([&] { gate_fidelity(bad, TargetGate::ISwap); }), ErrorCode::Contract);
}

TEST(GateFidelity, EffectiveModelReachesTargets) {
    for (double sign : {1.0, -1.0}) {
        const auto m = effective_matrix(3, RadPerSec(1.0), RadPerSec(7.0 * sign));
        const auto cal = gate_times(3, RadPerSec(1.0), RadPerSec(7.0 * sign));
        EXPECT_GE(gate_fidelity(collective_evolution(m, cal.t_iswap), TargetGate::ISwap), 1.0 - 1e-9);
        EXPECT_GE(gate_fidelity(collective_evolution(m, cal.t_sqrt_iswap), TargetGate::SqrtISwap), 1.0 - 1e-9);
    }
}

TEST(FullModel, OscillationMatchesDispersiveFormula) {
    for (int n : {1, 3}) {
        const double delta = 50.0 * std::sqrt(static_cast<double>(n));
        const auto r = full_model_oscillation(n, RadPerSec(1.0), RadPerSec(delta));
        EXPECT_NEAR(r.omega_measured / r.omega_formula, 1.0, 0.05);
        EXPECT_NEAR(r.omega_formula, omega(n, 1.0, delta), 1e-12);
        EXPECT_LE(r.max_leakage, r.leakage_bound);
        EXPECT_FALSE(r.times.empty());
        EXPECT_EQ(r.times.size(), r.p_target.size());
    }
    EXPECT_EQ(code_of([] { full_model_oscillation(7, RadPerSec(1.0), RadPerSec(100.0)); }), ErrorCode::InvalidParameter);
}

TEST(FullModel, SlopeInAtomNumberAtFixedDetuning) {
    const double delta = 100.0;
    const auto a = full_model_oscillation(1, RadPerSec(1.0), RadPerSec(delta));
    const auto b = full_model_oscillation(4, RadPerSec(1.0), RadPerSec(delta));
    EXPECT_NEAR((b.omega_measured - a.omega_measured) / 3.0 / (2.0 / delta), 1.0, 0.05);
}

// Bus ripple around the lobe threshold must not split an exchange maximum.
TEST(FullModel, RippleDoesNotSplitLobes) {
    const double delta = 50.0 * std::sqrt(5.0);
    for (int n = 1; n <= 5; ++n) {
        const auto r = full_model_oscillation(n, RadPerSec(1.0), RadPerSec(delta));
        EXPECT_NEAR(r.omega_measured / r.omega_formula, 1.0, 0.01) << "N=" << n;
    }
}

TEST(ParallelPairs, SeparatedDetuningsDoNotCrossTalk) {
    const double d = 50.0 * std::sqrt(2.0);
    const double wc = omega(2, 1.0, d);
    EXPECT_LT(parallel_pair_crosstalk(2, RadPerSec(1.0), RadPerSec(d), RadPerSec(d + 100.0 * wc)), 1e-3);
}

TEST(TwoExcitation, LeakageIsReported) {
    const auto one = two_excitation_leakage(1, RadPerSec(1.0), RadPerSec(50.0));
    EXPECT_TRUE(std::isfinite(one.max_leakage));
    EXPECT_GE(one.max_leakage, one.leakage_at_sqrt);
    EXPECT_GE(one.max_leakage, 0.0);
    EXPECT_LE(one.max_leakage, 1.0);
    // Hard-core atoms: for N ≥ 2 the doubly excited collective state is not
    // an eigenstate and population leaves |11⟩.
    const auto two = two_excitation_leakage(2, RadPerSec(1.0), RadPerSec(50.0 * std::sqrt(2.0)));
    EXPECT_GT(two.max_leakage, 0.1);
}

namespace {

QCSpec transfer_spec() { return fixtures::processor_spec(2, 3, 0.8, 300, 4.0, 20.0, 200); }

}  // namespace

TEST(Transfer, SingleModeReachesTarget) {
    const auto r = transfer_qm_to_node(transfer_spec(), 2);
    ASSERT_EQ(r.outcomes.size(), 1u);
    EXPECT_GE(r.outcomes[0].fidelity, 0.95);
    EXPECT_GE(r.outcomes[0].self_mode_overlap, 0.9);
    EXPECT_GT(r.stored_total, 0.5);
    EXPECT_LT(r.norm.max_deviation, 1e-9);
}

TEST(Transfer, ParkedTargetReceivesNothing) {
    TransferPlan plan;
    plan.retrievals = {{1, 2}};
    plan.equalize = false;
    EXPECT_EQ(code_of([&] { transfer_qm_to_node(transfer_spec(), plan); }), ErrorCode::Sequencing);
    plan.strict = false;
    const auto r = transfer_qm_to_node(transfer_spec(), plan);
    EXPECT_LT(r.outcomes[0].fidelity, 1e-3);
}

TEST(Transfer, TwoModesToTwoNodes) {
    TransferPlan plan;
    plan.stored_modes = 2;
    plan.retrievals = {{1, 2}, {2, 3}};
    const auto r = transfer_qm_to_node(transfer_spec(), plan);
    ASSERT_EQ(r.outcomes.size(), 2u);
    EXPECT_GE(r.outcomes[0].fidelity, 0.9);
    EXPECT_GE(r.outcomes[1].fidelity, 0.9);
    EXPECT_NEAR(r.outcomes[0].fidelity, r.outcomes[1].fidelity, 0.02);
    EXPECT_LT(r.outcomes[0].marker, r.outcomes[1].marker);
    EXPECT_LT(r.norm.max_deviation, 1e-9);
}

TEST(Transfer, Errors) {
    TransferPlan plan;
    plan.retrievals = {{2, 2}};
    EXPECT_EQ(code_of([&] { transfer_qm_to_node(transfer_spec(), plan); }), ErrorCode::Addressing);
    plan.retrievals.clear();
    EXPECT_EQ(code_of([&] { transfer_qm_to_node(transfer_spec(), plan); }), ErrorCode::InvalidParameter);
}
