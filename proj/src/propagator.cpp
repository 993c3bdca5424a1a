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

#include "wirecircuit/propagator.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "wirecircuit/errors.hpp"

namespace wirecircuit {

using cd = std::complex<double>;

SegmentPropagator::SegmentPropagator(const SparseMatrix &h, const Eigen::VectorXd &loss_rates)
    : dim_(h.rows()), loss_rates_(loss_rates) {
    if (h.rows() != h.cols() || loss_rates.size() != h.rows()) {
        fail(ErrorCode::InvalidParameter, "hamiltonian and loss vector dimensions disagree");
    }
    lossless_ = loss_rates.cwiseAbs().maxCoeff() == 0.0;
    const Eigen::MatrixXd dense = Eigen::MatrixXd(h);
    if (lossless_) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
        if (es.info() != Eigen::Success) fail(ErrorCode::InternalConsistency, "eigendecomposition failed");
        vectors_ = es.eigenvectors();
        energies_ = es.eigenvalues();
        return;
    }
    for (Eigen::Index i = 0; i < dim_; ++i) {
        if (loss_rates[i] != 0.0) lossy_elements_.push_back(i);
    }
    Eigen::MatrixXcd heff = dense.cast<cd>();
    for (Eigen::Index i : lossy_elements_) heff(i, i) -= cd(0.0, loss_rates[i]);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(heff);
    if (es.info() != Eigen::Success) fail(ErrorCode::InternalConsistency, "eigendecomposition failed");
    cvectors_ = es.eigenvectors();
    cenergies_ = es.eigenvalues();
    cinverse_ = cvectors_.partialPivLu().inverse();
}

Eigen::VectorXcd SegmentPropagator::evolve(const Eigen::VectorXcd &psi, double t) const {
    if (lossless_) {
        Eigen::VectorXcd c = vectors_.transpose() * psi;
        for (Eigen::Index m = 0; m < dim_; ++m) c[m] *= std::exp(cd(0.0, -energies_[m] * t));
        return vectors_ * c;
    }
    Eigen::VectorXcd c = cinverse_ * psi;
    for (Eigen::Index m = 0; m < dim_; ++m) c[m] *= std::exp(cd(0.0, -1.0) * cenergies_[m] * t);
    return cvectors_ * c;
}

double SegmentPropagator::loss_integral(const Eigen::VectorXcd &psi, double t) const {
    if (lossless_ || t == 0.0) return 0.0;
    const Eigen::VectorXcd c = cinverse_ * psi;
    // μ_m = −i E_m; ∫₀ᵗ e^{(μ̄_m + μ_m') s} ds in closed form.
    Eigen::VectorXcd mu = cd(0.0, -1.0) * cenergies_;
    double total = 0.0;
    for (Eigen::Index b : lossy_elements_) {
        Eigen::VectorXcd w = cvectors_.row(b).transpose().cwiseProduct(c);
        cd acc = 0.0;
        for (Eigen::Index m = 0; m < dim_; ++m) {
            const cd wm = std::conj(w[m]);
            const cd mum = std::conj(mu[m]);
            for (Eigen::Index k = 0; k < dim_; ++k) {
                const cd z = mum + mu[k];
                cd integral;
                if (std::abs(z) * t < 1e-8) {
                    integral = t * (1.0 + 0.5 * z * t);
                } else {
                    integral = (std::exp(z * t) - 1.0) / z;
                }
                acc += wm * w[k] * integral;
            }
        }
        total += 2.0 * loss_rates_[b] * acc.real();
    }
    return total;
}

void SegmentPropagator::advance(SectorState &state, double duration) const {
    if (duration < 0.0) fail(ErrorCode::InvalidParameter, "negative propagation duration");
    if (state.amplitudes.size() != dim_) fail(ErrorCode::InvalidParameter, "state dimension mismatch");
    if (duration == 0.0) return;
    const double before = state.norm_squared() + state.accumulated_loss;
    const double lost = loss_integral(state.amplitudes, duration);
    state.amplitudes = evolve(state.amplitudes, duration);
    state.accumulated_loss += lost;
    state.time += duration;
    const double after = state.norm_squared() + state.accumulated_loss;
    if (std::abs(after - before) > kNormTolerance) {
        std::ostringstream os;
        os << "norm bookkeeping drifted by " << (after - before) << " over a segment of " << duration << " s";
        fail(ErrorCode::InternalConsistency, os.str());
    }
}

SectorState propagate(const SectorState &state, const SparseMatrix &h, double duration, double gamma2) {
    SegmentPropagator prop(h, cavity_loss_rates(*state.basis, gamma2));
    SectorState out = state;
    prop.advance(out, duration);
    return out;
}

Eigen::VectorXcd taylor_expmv(const SparseMatrix &h, const Eigen::VectorXd &loss_rates, const Eigen::VectorXcd &v,
                              double t) {
    if (t == 0.0) return v;
    Eigen::SparseMatrix<cd> a = h.cast<cd>() * cd(0.0, -1.0);
    for (Eigen::Index i = 0; i < loss_rates.size(); ++i) {
        if (loss_rates[i] != 0.0) a.coeffRef(i, i) -= loss_rates[i];
    }
    double norm1 = 0.0;
    for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
        double col = 0.0;
        for (Eigen::SparseMatrix<cd>::InnerIterator it(a, k); it; ++it) col += std::abs(it.value());
        norm1 = std::max(norm1, col);
    }
    const int steps = std::max(1, static_cast<int>(std::ceil(norm1 * std::abs(t) / 0.5)));
    const double dt = t / steps;
    Eigen::VectorXcd out = v;
    for (int s = 0; s < steps; ++s) {
        Eigen::VectorXcd term = out;
        Eigen::VectorXcd sum = out;
        const double scale = out.norm();
        for (int k = 1; k < 60; ++k) {
            term = (a * term) * (dt / k);
            sum += term;
            if (term.norm() <= 1e-18 * scale) break;
        }
        out = sum;
    }
    return out;
}

}  // namespace wirecircuit
