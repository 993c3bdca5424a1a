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

#include "wirecircuit/waveform.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "wirecircuit/csv.hpp"
#include "wirecircuit/errors.hpp"

namespace wirecircuit {

using cd = std::complex<double>;

double Waveform::probability() const { return envelope.squaredNorm() * grid.step; }

void Waveform::normalize() {
    const double p = probability();
    if (!(p > 0.0)) fail(ErrorCode::InvalidParameter, "cannot normalize an empty waveform");
    envelope /= std::sqrt(p);
}

double Waveform::overlap(const Waveform &a, const Waveform &b) {
    if (a.envelope.size() != b.envelope.size()) fail(ErrorCode::InvalidParameter, "waveform grids differ");
    const double na = a.envelope.norm();
    const double nb = b.envelope.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::abs(a.envelope.dot(b.envelope)) / (na * nb);
}

const char *mode_shape_name(ModeShape shape) {
    switch (shape) {
        case ModeShape::Gaussian: return "gaussian";
        case ModeShape::Exponential: return "exponential";
        case ModeShape::SelfMode: return "self-mode";
    }
    return "?";
}

ModeShape parse_mode_shape(const std::string &name) {
    if (name == "gaussian") return ModeShape::Gaussian;
    if (name == "exponential") return ModeShape::Exponential;
    if (name == "self-mode") return ModeShape::SelfMode;
    fail(ErrorCode::InvalidParameter, "unknown mode shape '" + name + "'");
}

cd mode_profile(ModeShape shape, double t, double center, double width) {
    const double tau = t - center;
    switch (shape) {
        case ModeShape::Gaussian: return std::exp(-tau * tau / (2.0 * width * width));
        case ModeShape::Exponential: return std::exp(-std::abs(tau) / width);
        case ModeShape::SelfMode:
            if (tau >= 0.0) return 0.0;
            return std::exp(tau / (2.0 * width)) * std::sin(-tau / width);
    }
    return 0.0;
}

namespace {

// ∫|profile|² dt in closed form.
double analytic_weight(ModeShape shape, double width) {
    switch (shape) {
        case ModeShape::Gaussian: return width * std::sqrt(std::numbers::pi);
        case ModeShape::Exponential: return width;
        case ModeShape::SelfMode: return 0.4 * width;
    }
    return 0.0;
}

}  // namespace

Waveform make_input_waveform(int modes, ModeShape shape, double spacing, double width, const UniformGrid &grid,
                             double first_center) {
    if (modes < 1) fail(ErrorCode::InvalidParameter, "at least one mode is required");
    if (!(width > 0.0)) fail(ErrorCode::InvalidParameter, "mode width must be positive");
    if (modes > 1 && !(spacing > 0.0)) fail(ErrorCode::InvalidParameter, "mode spacing must be positive");
    if (grid.count < 2 || !(grid.step > 0.0)) fail(ErrorCode::InvalidParameter, "grid needs at least two samples");

    const auto n = static_cast<Eigen::Index>(grid.count);
    std::vector<Eigen::VectorXcd> parts;
    Waveform w;
    w.grid = grid;
    w.envelope = Eigen::VectorXcd::Zero(n);
    for (int m = 0; m < modes; ++m) {
        const double center = first_center + m * spacing;
        Eigen::VectorXcd part(n);
        for (Eigen::Index i = 0; i < n; ++i) part[i] = mode_profile(shape, grid.at(static_cast<std::size_t>(i)), center, width);
        const double captured = part.squaredNorm() * grid.step / analytic_weight(shape, width);
        if (captured < 1.0 - 1e-3) {
            std::ostringstream os;
            os << "mode " << m + 1 << " at t=" << center << " does not fit in the grid (captured " << captured << ")";
            fail(ErrorCode::InvalidParameter, os.str());
        }
        part /= part.norm();
        if (!parts.empty()) {
            const double ov = std::norm(parts.back().dot(part));
            if (ov >= kModeOverlapLimit) {
                std::ostringstream os;
                os << "modes " << m << " and " << m + 1 << " overlap with probability " << ov;
                fail(ErrorCode::TemporalCrowding, os.str());
            }
        }
        w.envelope += part;
        parts.push_back(std::move(part));
        w.mode_markers.push_back(center);
    }
    w.normalize();
    return w;
}

UniformGrid waveguide_time_grid(const WaveguidePort &port, double origin) {
    return {origin, 2.0 * std::numbers::pi / port.bandwidth.value(), static_cast<std::size_t>(port.mode_count)};
}

Eigen::VectorXcd mode_amplitudes(const Waveform &wave, const DiscretizedContinuum &continuum) {
    if (wave.domain != WaveformDomain::Time) fail(ErrorCode::InvalidParameter, "mode amplitudes need a time waveform");
    const auto k = static_cast<Eigen::Index>(continuum.mode_frequencies.size());
    const double scale = std::sqrt(continuum.spacing / (2.0 * std::numbers::pi)) * wave.grid.step;
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(k);
    for (Eigen::Index q = 0; q < k; ++q) {
        const double d = continuum.mode_frequencies[static_cast<std::size_t>(q)];
        cd acc = 0.0;
        for (Eigen::Index n = 0; n < wave.envelope.size(); ++n) {
            acc += wave.envelope[n] * std::polar(1.0, d * wave.grid.at(static_cast<std::size_t>(n)));
        }
        b[q] = scale * acc;
    }
    return b;
}

Waveform from_mode_amplitudes(const Eigen::VectorXcd &modes, const DiscretizedContinuum &continuum, double origin) {
    const auto k = static_cast<Eigen::Index>(continuum.mode_frequencies.size());
    if (modes.size() != k) fail(ErrorCode::InvalidParameter, "mode vector length differs from K");
    Waveform w;
    w.grid = {origin, 2.0 * std::numbers::pi / (continuum.spacing * static_cast<double>(k)), static_cast<std::size_t>(k)};
    w.envelope = Eigen::VectorXcd::Zero(k);
    const double scale = std::sqrt(continuum.spacing / (2.0 * std::numbers::pi));
    for (Eigen::Index n = 0; n < k; ++n) {
        const double t = w.grid.at(static_cast<std::size_t>(n));
        cd acc = 0.0;
        for (Eigen::Index q = 0; q < k; ++q) {
            acc += modes[q] * std::polar(1.0, -continuum.mode_frequencies[static_cast<std::size_t>(q)] * t);
        }
        w.envelope[n] = scale * acc;
    }
    return w;
}

Waveform spectrum(const Waveform &wave, const DiscretizedContinuum &continuum) {
    Waveform s;
    s.domain = WaveformDomain::Frequency;
    s.carrier = wave.carrier;
    s.grid = {continuum.mode_frequencies.front(), continuum.spacing, continuum.mode_frequencies.size()};
    // |b̃_k|² sums to the probability; rescale so Σ|S|²·δω matches.
    s.envelope = mode_amplitudes(wave, continuum) / std::sqrt(continuum.spacing);
    return s;
}

double spectral_centroid(const Eigen::VectorXcd &modes, const DiscretizedContinuum &continuum) {
    double num = 0.0;
    double den = 0.0;
    for (Eigen::Index q = 0; q < modes.size(); ++q) {
        const double p = std::norm(modes[q]);
        num += p * continuum.mode_frequencies[static_cast<std::size_t>(q)];
        den += p;
    }
    if (den == 0.0) fail(ErrorCode::InvalidParameter, "centroid of an empty spectrum");
    return num / den;
}

void write_waveform_csv(std::ostream &os, const Waveform &wave) {
    os << "# carrier_rad_s=" << format_number(wave.carrier) << '\n';
    if (!wave.mode_markers.empty()) {
        os << "# mode_markers_s=";
        for (std::size_t i = 0; i < wave.mode_markers.size(); ++i) {
            os << (i ? ";" : "") << format_number(wave.mode_markers[i]);
        }
        os << '\n';
    }
    os << (wave.domain == WaveformDomain::Time ? "time_s" : "omega_rad_s") << ",re,im\n";
    for (Eigen::Index i = 0; i < wave.envelope.size(); ++i) {
        os << format_number(wave.grid.at(static_cast<std::size_t>(i))) << ',' << format_number(wave.envelope[i].real())
           << ',' << format_number(wave.envelope[i].imag()) << '\n';
    }
}

Waveform read_waveform_csv(std::istream &is) {
    Waveform w;
    std::vector<double> x;
    std::vector<cd> y;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string key = "# carrier_rad_s=";
            if (line.rfind(key, 0) == 0) w.carrier = parse_number(line.substr(key.size()));
            const std::string mk = "# mode_markers_s=";
            if (line.rfind(mk, 0) == 0) {
                std::stringstream ss(line.substr(mk.size()));
                std::string tok;
                while (std::getline(ss, tok, ';')) w.mode_markers.push_back(parse_number(tok));
            }
            continue;
        }
        if (!header) {
            if (line.rfind("time_s,re,im", 0) == 0) {
                w.domain = WaveformDomain::Time;
            } else if (line.rfind("omega_rad_s,re,im", 0) == 0) {
                w.domain = WaveformDomain::Frequency;
            } else {
                fail(ErrorCode::Config, "waveform CSV header must be 'time_s,re,im' or 'omega_rad_s,re,im'");
            }
            header = true;
            continue;
        }
        const auto cells = split_csv_line(line);
        if (cells.size() != 3) fail(ErrorCode::Config, "waveform CSV rows need three columns");
        x.push_back(parse_number(cells[0]));
        y.emplace_back(parse_number(cells[1]), parse_number(cells[2]));
    }
    if (x.size() < 2) fail(ErrorCode::Config, "waveform CSV needs at least two samples");
    const double step = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (std::abs(x[i] - (x.front() + static_cast<double>(i) * step)) > 1e-9 * std::max(1.0, std::abs(step) * x.size())) {
            fail(ErrorCode::Config, "waveform CSV grid must be uniform");
        }
    }
    if (!(step > 0.0)) fail(ErrorCode::Config, "waveform CSV grid must be increasing");
    w.grid = {x.front(), step, x.size()};
    w.envelope = Eigen::Map<Eigen::VectorXcd>(y.data(), static_cast<Eigen::Index>(y.size()));
    return w;
}

}  // namespace wirecircuit
