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
 * Dense gate-level simulator used as ground truth: no pulses, no blockade,
 * just standard matrix action on 2^N amplitudes. Qubit 0 is the least
 * significant bit of the basis index.
 */

#pragma once

#include <Eigen/Dense>

#include "circuit.hpp"

namespace maqcy {

using DenseState = Eigen::VectorXcd;

inline DenseState basis_state(int qubits, std::size_t index) {
  DenseState s = DenseState::Zero(std::size_t(1) << qubits);
  s(index) = 1.0;
  return s;
}

namespace oracle {

inline Eigen::Matrix2cd gate_matrix_1q(const Gate &g) {
  Eigen::Matrix2cd m;
  switch (g.type) {
    case Gate::Type::H:
      m << 1, 1, 1, -1;
      m /= std::sqrt(2.0);
      break;
    case Gate::Type::X:
      m << 0, 1, 1, 0;
      break;
    case Gate::Type::P:
      m << 1, 0, 0, std::exp(cplx(0, g.phi));
      break;
    default:
      throw ProtocolError("not a one-qubit gate");
  }
  return m;
}

}  // namespace oracle

inline DenseState apply_gate(const DenseState &state, const Gate &g) {
  std::size_t dim = state.size();
  int n = 0;
  while ((std::size_t(1) << n) < dim) ++n;
  auto check = [&](int q) {
    if (q < 0 || q >= n) throw ProtocolError("qubit index out of range");
  };
  check(g.q1);
  if (g.two_qubit()) check(g.q2);
  DenseState out = state;
  if (!g.two_qubit()) {
    Eigen::Matrix2cd m = oracle::gate_matrix_1q(g);
    std::size_t mask = std::size_t(1) << g.q1;
    for (std::size_t i = 0; i < dim; ++i) {
      if (i & mask) continue;
      std::size_t j = i | mask;
      cplx a = state(i), b = state(j);
      out(i) = m(0, 0) * a + m(0, 1) * b;
      out(j) = m(1, 0) * a + m(1, 1) * b;
    }
    return out;
  }
  std::size_t m1 = std::size_t(1) << g.q1;
  std::size_t m2 = std::size_t(1) << g.q2;
  switch (g.type) {
    case Gate::Type::CZ:
      for (std::size_t i = 0; i < dim; ++i)
        if ((i & m1) && (i & m2)) out(i) = -state(i);
      break;
    case Gate::Type::CP:
      for (std::size_t i = 0; i < dim; ++i)
        if ((i & m1) && (i & m2)) out(i) = std::exp(cplx(0, g.phi)) * state(i);
      break;
    case Gate::Type::CX:
      for (std::size_t i = 0; i < dim; ++i)
        if (i & m1) out(i ^ m2) = state(i);
      break;
    case Gate::Type::SWAP:
      for (std::size_t i = 0; i < dim; ++i) {
        bool b1 = i & m1, b2 = i & m2;
        if (b1 != b2) out(i ^ m1 ^ m2) = state(i);
      }
      break;
    default:
      break;
  }
  return out;
}

inline DenseState apply_circuit(const LogicalCircuit &circuit,
                                const DenseState &state) {
  DenseState out = state;
  for (const Gate &g : circuit.gates) out = apply_gate(out, g);
  return out;
}

/** Full unitary of the circuit by column-wise application. */
inline Eigen::MatrixXcd circuit_unitary(const LogicalCircuit &circuit) {
  std::size_t dim = std::size_t(1) << circuit.qubit_count;
  Eigen::MatrixXcd u(dim, dim);
  for (std::size_t c = 0; c < dim; ++c)
    u.col(c) = apply_circuit(circuit, basis_state(circuit.qubit_count, c));
  return u;
}

/** DFT matrix: entries (1/sqrt(2^n)) exp(2*pi*i*j*k / 2^n). */
inline Eigen::MatrixXcd qft_matrix(int n) {
  if (n < 1 || n > 10) throw ProtocolError("qft_matrix supports 1 <= n <= 10");
  std::size_t dim = std::size_t(1) << n;
  Eigen::MatrixXcd u(dim, dim);
  double norm = 1.0 / std::sqrt(double(dim));
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t k = 0; k < dim; ++k)
      u(j, k) = norm * std::exp(cplx(0, 2 * pi * double(j * k % dim) / double(dim)));
  return u;
}

inline double fidelity_up_to_phase(const DenseState &a, const DenseState &b) {
  if (a.size() != b.size()) throw ProtocolError("dimension mismatch");
  return std::norm(a.dot(b));
}

}  // namespace maqcy
