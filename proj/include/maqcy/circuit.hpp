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

/**
 * Logical circuit representation and its line-oriented text format.
 *
 * One gate per line, zero-based qubit indices, `#` comments:
 *
 *   H 0
 *   X 1
 *   P 0 phi=1.5707963267948966
 *   CZ 0 1
 *   CX 0 1
 *   CP 1 2 q=2          # phi = 2*pi / 2^q
 *   CP 1 2 phi=0.785398
 *   SWAP 0 1
 */

#pragma once

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "core.hpp"

namespace maqcy {

struct Gate {
  enum class Type { H, X, P, CZ, CX, CP, SWAP };
  Type type = Type::H;
  int q1 = 0;
  int q2 = -1;     // second operand for two-qubit gates
  double phi = 0;  // P / CP angle

  bool two_qubit() const {
    return type == Type::CZ || type == Type::CX || type == Type::CP ||
           type == Type::SWAP;
  }
};

inline const char *to_string(Gate::Type t) {
  switch (t) {
    case Gate::Type::H: return "H";
    case Gate::Type::X: return "X";
    case Gate::Type::P: return "P";
    case Gate::Type::CZ: return "CZ";
    case Gate::Type::CX: return "CX";
    case Gate::Type::CP: return "CP";
    case Gate::Type::SWAP: return "SWAP";
  }
  return "?";
}

struct LogicalCircuit {
  int qubit_count = 0;
  std::vector<Gate> gates;
};

namespace detail {

inline double parse_angle_field(const std::string &tok, std::size_t lineno) {
  if (tok.rfind("phi=", 0) == 0) {
    try {
      return std::stod(tok.substr(4));
    } catch (...) {
      throw ParseError(lineno, "bad angle: " + tok);
    }
  }
  if (tok.rfind("q=", 0) == 0) {
    int q = 0;
    try {
      q = std::stoi(tok.substr(2));
    } catch (...) {
      throw ParseError(lineno, "bad phase index: " + tok);
    }
    if (q < 0 || q > 62) throw ParseError(lineno, "phase index out of range");
    return 2 * pi / double(std::uint64_t(1) << q);
  }
  throw ParseError(lineno, "expected phi=<radians> or q=<integer>, got " + tok);
}

}  // namespace detail

inline LogicalCircuit parse_circuit(std::istream &in, int qubit_count = -1) {
  LogicalCircuit circuit;
  int max_qubit = -1;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string op;
    if (!(ls >> op)) continue;
    Gate g;
    auto read_qubit = [&](int &dst) {
      if (!(ls >> dst) || dst < 0)
        throw ParseError(lineno, "expected qubit index");
    };
    if (op == "H" || op == "X") {
      g.type = op == "H" ? Gate::Type::H : Gate::Type::X;
      read_qubit(g.q1);
    } else if (op == "P") {
      g.type = Gate::Type::P;
      read_qubit(g.q1);
      std::string tok;
      if (!(ls >> tok)) throw ParseError(lineno, "P needs an angle");
      g.phi = detail::parse_angle_field(tok, lineno);
    } else if (op == "CZ" || op == "CX" || op == "SWAP") {
      g.type = op == "CZ"   ? Gate::Type::CZ
               : op == "CX" ? Gate::Type::CX
                            : Gate::Type::SWAP;
      read_qubit(g.q1);
      read_qubit(g.q2);
    } else if (op == "CP") {
      g.type = Gate::Type::CP;
      read_qubit(g.q1);
      read_qubit(g.q2);
      std::string tok;
      if (!(ls >> tok)) throw ParseError(lineno, "CP needs an angle");
      g.phi = detail::parse_angle_field(tok, lineno);
    } else {
      throw ParseError(lineno, "unknown gate: " + op);
    }
    if (g.two_qubit() && g.q1 == g.q2)
      throw ParseError(lineno, "gate targets the same qubit twice");
    std::string extra;
    if (ls >> extra) throw ParseError(lineno, "trailing token: " + extra);
    max_qubit = std::max({max_qubit, g.q1, g.q2});
    circuit.gates.push_back(g);
  }
  circuit.qubit_count = qubit_count >= 0 ? qubit_count : max_qubit + 1;
  if (max_qubit >= circuit.qubit_count)
    throw ParseError(lineno, "qubit index out of range");
  return circuit;
}

}  // namespace maqcy
