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

#include <cmath>
#include <compare>
#include <numbers>

namespace wirecircuit {

/// A double tagged with its physical dimension. All rates and frequencies
/// are angular (rad/s); conversion from Hz happens only at the config boundary.
template <class Tag>
class Quantity {
   public:
    constexpr Quantity() = default;
    constexpr explicit Quantity(double v) : v_(v) {}

    constexpr double value() const { return v_; }

    constexpr Quantity operator-() const { return Quantity(-v_); }
    constexpr Quantity &operator+=(Quantity o) {
        v_ += o.v_;
        return *this;
    }
    constexpr Quantity &operator-=(Quantity o) {
        v_ -= o.v_;
        return *this;
    }
    friend constexpr Quantity operator+(Quantity a, Quantity b) { return Quantity(a.v_ + b.v_); }
    friend constexpr Quantity operator-(Quantity a, Quantity b) { return Quantity(a.v_ - b.v_); }
    friend constexpr Quantity operator*(Quantity a, double s) { return Quantity(a.v_ * s); }
    friend constexpr Quantity operator*(double s, Quantity a) { return Quantity(a.v_ * s); }
    friend constexpr Quantity operator/(Quantity a, double s) { return Quantity(a.v_ / s); }
    friend constexpr double operator/(Quantity a, Quantity b) { return a.v_ / b.v_; }
    friend constexpr auto operator<=>(Quantity, Quantity) = default;

   private:
    double v_ = 0.0;
};

struct RadPerSecTag;
struct SecondsTag;
struct HenryTag;
struct FaradTag;
struct OhmTag;
struct MetersTag;

using RadPerSec = Quantity<RadPerSecTag>;
using Seconds = Quantity<SecondsTag>;
using Henry = Quantity<HenryTag>;
using Farad = Quantity<FaradTag>;
using Ohm = Quantity<OhmTag>;
using Meters = Quantity<MetersTag>;

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

inline constexpr RadPerSec from_hertz(double hz) { return RadPerSec(2.0 * std::numbers::pi * hz); }
inline constexpr double to_hertz(RadPerSec w) { return w.value() / (2.0 * std::numbers::pi); }

}  // namespace wirecircuit
