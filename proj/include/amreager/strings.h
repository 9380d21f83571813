// Copyright 2026 The AmrEager Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AMREAGER_STRINGS_H_
#define AMREAGER_STRINGS_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace amreager {

std::string Lowercase(std::string_view s);

// Parses the whole string as a decimal number ("4", "4.0", "-2.5").
std::optional<double> ParseNumber(std::string_view s);

// Shortest round-trip spelling of a number, so "4" and "4.0" agree.
// Non-numeric input is returned unchanged.
std::string CanonicalNumber(std::string_view s);

std::vector<std::string> Split(std::string_view s, char separator);

// 64-bit FNV-1a.
unsigned long long Fingerprint(std::string_view data);

}  // namespace amreager

#endif  // AMREAGER_STRINGS_H_
