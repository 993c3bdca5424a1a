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

#include <string>
#include <vector>

namespace wirecircuit {

/// Locale-independent decimal with 17 significant digits.
std::string format_number(double value);
/// Locale-independent parse; throws Config on malformed input.
double parse_number(const std::string &text);

std::vector<std::string> split_csv_line(const std::string &line);

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string &data);

}  // namespace wirecircuit
