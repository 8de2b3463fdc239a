// Copyright 2026 The maqcy authors
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

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace maqcy {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

enum class Species { A, B };

enum class AtomKind { Single, Superatom };

inline const char *to_string(Species s) { return s == Species::A ? "A" : "B"; }

inline const char *to_string(AtomKind k) {
  return k == AtomKind::Single ? "single" : "superatom";
}

/** Error thrown on violated protocol preconditions (blockade, kinds,
 * displacement of entangled atoms, ...). */
class ProtocolError : public std::runtime_error {
 public:
  explicit ProtocolError(const std::string &msg) : std::runtime_error(msg) {}
};

/** Error thrown on malformed input files (circuits, registries, params). */
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string &msg)
      : std::runtime_error("parse error: line " + std::to_string(line) + ": " +
                           msg),
        line_number(line) {}
  std::size_t line_number;
};

/** Canonicalize an angle to [0, 2*pi). */
inline double canonical_phase(double phi) {
  double r = std::fmod(phi, 2 * pi);
  if (r < 0) r += 2 * pi;
  return r;
}

}  // namespace maqcy
