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
 * Exact SU(2) pulse algebra on the {g, r} two-level space of a data qubit.
 *
 * A resonant pulse of area theta and phase phi rotates the Bloch vector as
 *
 *   U(theta, phi) = cos(theta/2) I - i sin(theta/2) (cos(phi) X + sin(phi) Y)
 *
 * with basis order (|g>, |r>). Superatoms of size M = 4 see the doubled area
 * theta_bar = 2 theta under the same pulse (collective sqrt(M) enhancement).
 * Composite sequences are stored with the first-applied pulse first; the
 * written operator product reads right-to-left.
 */

#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "core.hpp"

namespace maqcy {

using Unitary2 = Eigen::Matrix2cd;

inline bool is_unitary(const Unitary2 &u, double tol = 1e-12) {
  return (u.adjoint() * u - Unitary2::Identity()).cwiseAbs().maxCoeff() <= tol;
}

struct PulseSpec {
  Species species = Species::A;
  double area_theta = 0.0;  // single-atom pulse area, radians (>= 0)
  double phase_phi = 0.0;   // drive phase, canonicalized to [0, 2*pi)
  bool inverse = false;

  PulseSpec() = default;
  PulseSpec(Species sp, double theta, double phi, bool inv = false)
      : species(sp),
        area_theta(theta),
        phase_phi(canonical_phase(phi)),
        inverse(inv) {
    if (theta < 0) throw ProtocolError("pulse area must be non-negative");
  }
};

/** Corrective phase gate appended to a composite sequence: the operator
 * prefactor * diag(1, e^{i angle}). The prefactor is a global phase and is
 * physically irrelevant; it is tracked so that composed matrices reproduce
 * the published identities exactly. */
struct CorrectivePhase {
  cplx prefactor{1.0, 0.0};
  double angle = 0.0;
};

struct CompositeSequence {
  std::vector<PulseSpec> pulses;  // pulses[0] is applied first
  std::optional<CorrectivePhase> corrective_single;
  std::optional<CorrectivePhase> corrective_superatom;

  const std::optional<CorrectivePhase> &corrective(AtomKind kind) const {
    return kind == AtomKind::Single ? corrective_single : corrective_superatom;
  }
};

/** Rotation by an explicit effective area (no kind doubling applied). */
inline Unitary2 axis_rotation(double theta_eff, double phi,
                              bool inverse = false) {
  Unitary2 x, y;
  x << 0, 1, 1, 0;
  y << 0, cplx(0, -1), cplx(0, 1), 0;
  Unitary2 u = std::cos(theta_eff / 2) * Unitary2::Identity() -
               cplx(0, 1) * std::sin(theta_eff / 2) *
                   (std::cos(phi) * x + std::sin(phi) * y);
  return inverse ? Unitary2(u.adjoint()) : u;
}

inline Unitary2 rotation(const PulseSpec &spec, AtomKind kind) {
  double theta_eff =
      kind == AtomKind::Superatom ? 2 * spec.area_theta : spec.area_theta;
  return axis_rotation(theta_eff, spec.phase_phi, spec.inverse);
}

inline Unitary2 phase_gate(double phi) {
  Unitary2 p;
  p << 1, 0, 0, std::exp(cplx(0, phi));
  return p;
}

/** Product of the sequence's pulses without the corrective phase. */
inline Unitary2 compose_raw(const CompositeSequence &seq, AtomKind kind) {
  if (seq.pulses.empty()) throw ProtocolError("empty composite sequence");
  Unitary2 u = Unitary2::Identity();
  for (const PulseSpec &p : seq.pulses) u = rotation(p, kind) * u;
  return u;
}

inline Unitary2 compose(const CompositeSequence &seq, AtomKind kind) {
  Unitary2 u = compose_raw(seq, kind);
  if (const auto &c = seq.corrective(kind)) {
    u = c->prefactor * phase_gate(c->angle) * u;
  }
  return u;
}

/** Global bit-flip composite: three pulses yielding X on single atoms and
 * X_bar on superatoms after kind-specific correctives. */
inline CompositeSequence global_bitflip_sequence(Species sp = Species::A) {
  CompositeSequence seq;
  seq.pulses = {PulseSpec(sp, pi / 4, 0), PulseSpec(sp, pi, pi / 2),
                PulseSpec(sp, pi / 4, 0)};
  seq.corrective_single = CorrectivePhase{cplx(-1, 0), pi};
  seq.corrective_superatom = CorrectivePhase{cplx(0, -1), 0};
  return seq;
}

/** Superatom-selective bit-flip: identity (up to global phase) on single
 * atoms, X_bar on superatoms. */
inline CompositeSequence superatom_only_bitflip_sequence(
    Species sp = Species::A) {
  CompositeSequence seq;
  seq.pulses = {PulseSpec(sp, pi / 2, 0), PulseSpec(sp, pi / 2, pi / 2),
                PulseSpec(sp, pi / 2, 0, true)};
  // Raw single-atom product is diag(e^{i pi/4}, e^{-i pi/4}).
  seq.corrective_single = CorrectivePhase{std::exp(cplx(0, -pi / 4)), pi / 2};
  seq.corrective_superatom = CorrectivePhase{cplx(1, 0), -pi};
  return seq;
}

/** Superatom-selective Hadamard: identity on single atoms, H on superatoms. */
inline CompositeSequence superatom_only_hadamard_sequence(
    Species sp = Species::A) {
  CompositeSequence seq;
  seq.pulses = {PulseSpec(sp, pi / 2, 0), PulseSpec(sp, pi / 4, pi / 2),
                PulseSpec(sp, pi / 2, 0, true)};
  seq.corrective_single = CorrectivePhase{std::exp(cplx(0, -pi / 8)), pi / 4};
  seq.corrective_superatom = CorrectivePhase{cplx(1, 0), pi};
  return seq;
}

/** Five-pulse species-B mediator sequence: -I for both kinds on unblocked
 * atoms; blockaded atoms are frozen, which selects the CZ phase pattern. */
inline CompositeSequence cz_mediator_composite(Species sp = Species::B) {
  CompositeSequence seq;
  seq.pulses = {PulseSpec(sp, pi / 4, pi / 2), PulseSpec(sp, pi, 0),
                PulseSpec(sp, pi / 2, pi / 2), PulseSpec(sp, pi, 0),
                PulseSpec(sp, pi / 4, pi / 2)};
  return seq;
}

inline Unitary2 global_bitflip(AtomKind kind) {
  return compose(global_bitflip_sequence(), kind);
}

inline Unitary2 superatom_only_bitflip(AtomKind kind) {
  return compose(superatom_only_bitflip_sequence(), kind);
}

inline Unitary2 superatom_only_hadamard(AtomKind kind) {
  return compose(superatom_only_hadamard_sequence(), kind);
}

inline Unitary2 cz_mediator_sequence(AtomKind kind) {
  return compose(cz_mediator_composite(), kind);
}

inline bool equal_up_to_global_phase(const Eigen::MatrixXcd &u,
                                     const Eigen::MatrixXcd &v, double tol) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) return false;
  // Align on the largest entry of v to find the relative phase.
  Eigen::Index r = 0, c = 0;
  v.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(v(r, c)) == 0.0) return u.cwiseAbs().maxCoeff() <= tol;
  cplx lambda = u(r, c) / v(r, c);
  double mag = std::abs(lambda);
  if (mag == 0.0) return false;
  lambda /= mag;
  return (u - lambda * v).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace maqcy
