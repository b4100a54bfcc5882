// Copyright 2026 The Airfed Authors
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

#ifndef AIRFED_CSV_HPP_
#define AIRFED_CSV_HPP_

#include <cstdio>
#include <string>

namespace airfed::csv {

// Doubles in CSV output use %.17g: 17 significant digits round-trip every
// double exactly and, unlike shortest-representation formatting, render
// identically across C libraries — the determinism contract asks for
// byte-identical files, not merely equal values.
inline std::string number(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

inline std::string number(long value) { return std::to_string(value); }
inline std::string number(int value) { return std::to_string(value); }

}  // namespace airfed::csv

#endif  // AIRFED_CSV_HPP_
