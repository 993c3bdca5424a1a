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

#include <stdexcept>
#include <string>

namespace wirecircuit {

enum class ErrorCode {
    InvalidParameter,
    WrongProfile,
    InfeasibleMatching,
    ResonantRegime,
    UnsupportedConfiguration,
    Addressing,
    Sequencing,
    InternalConsistency,
    TemporalCrowding,
    OverdampedRegime,
    Bandwidth,
    Regime,
    Reachability,
    Scheduling,
    Contract,
    Config,
};

const char *error_code_name(ErrorCode code);

class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

   private:
    ErrorCode code_;
};

inline const char *error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidParameter: return "invalid parameter";
        case ErrorCode::WrongProfile: return "wrong detuning profile";
        case ErrorCode::InfeasibleMatching: return "infeasible matching";
        case ErrorCode::ResonantRegime: return "resonant regime";
        case ErrorCode::UnsupportedConfiguration: return "unsupported configuration";
        case ErrorCode::Addressing: return "addressing error";
        case ErrorCode::Sequencing: return "sequencing error";
        case ErrorCode::InternalConsistency: return "internal consistency";
        case ErrorCode::TemporalCrowding: return "temporal crowding";
        case ErrorCode::OverdampedRegime: return "overdamped regime";
        case ErrorCode::Bandwidth: return "bandwidth error";
        case ErrorCode::Regime: return "regime error";
        case ErrorCode::Reachability: return "reachability error";
        case ErrorCode::Scheduling: return "scheduling error";
        case ErrorCode::Contract: return "contract violation";
        case ErrorCode::Config: return "config error";
    }
    return "error";
}

[[noreturn]] inline void fail(ErrorCode code, const std::string &what) { throw Error(code, what); }

}  // namespace wirecircuit
