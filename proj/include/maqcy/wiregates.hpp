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
 * Protocol-level operators over Q-Pairs: temporal mode translations,
 * single-qubit wire-gates, mediated CZ, CNOT, C-Phase and SWAP wire-gates.
 *
 * A ProtocolContext owns the atom registry, the quantum state and the event
 * trace. Every operation is expressed as a stream of mode-stamped events
 * (global pulses, phase gates, atom moves); the same context can run in
 * trace-only mode (no quantum state) for compilation, or replay an event
 * stream through the blockade engine for simulation.
 *
 * Phase-gate events carry a kind selector because the protocol realizes
 * P-hat (single) and P-bar (superatom) corrections through the relative
 * phases of composite pulses; they are diagonal and blockade-independent.
 *
 * Two deliberate refinements over a naive transcription of the published
 * operator strings, both forced by multi-pair phase consistency:
 *
 *  1. The global data bit-flip used inside translations is sandwiched
 *     between two superatom-selective P(pi/2) phase gates. With the
 *     published correctives alone, the blocked/unblocked phase ratio of the
 *     composite differs between single atoms (-1) and superatoms (-i), which
 *     breaks the mixed-kind translations T2/T3/T4. The sandwich equalizes
 *     both ratios to -1; every translation then teleports exactly (global
 *     phase +1).
 *
 *  2. During the mediated CZ, the global species-B drive also loops every
 *     idle pair's auxiliary atom, imprinting diag(-1,1) on each data qubit.
 *     Running the CZ with both participating data qubits as superatoms and
 *     following the drive with a single-atom-selective P(pi) makes idle
 *     pairs exact identity while the participants receive exactly -CZ.
 *     A bare two-pair CZ (no idle pairs) also works with single-atom
 *     participants and no correction; both forms are supported.
 */

#pragma once

#include <functional>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>
#include <variant>

#include "blockade_sim.hpp"

namespace maqcy {

enum class PhaseSelector { All, SingleOnly, SuperatomOnly };

struct InitEvent {
  AtomSpec atom;
};
struct MoveInEvent {
  AtomSpec atom;
};
struct MoveOutEvent {
  std::string id;
};
struct PulseEvent {
  PulseSpec pulse;
};
struct PhaseEvent {
  Species species = Species::A;
  double angle = 0;
  PhaseSelector selector = PhaseSelector::All;
};
struct PosEvent {
  std::string id;
  Eigen::Vector2d pos{0, 0};
};
struct RelabelEvent {
  int slot_a = 0, slot_b = 0;
};
struct MeasureEvent {};

using EventBody = std::variant<InitEvent, MoveInEvent, MoveOutEvent,
                               PulseEvent, PhaseEvent, PosEvent, RelabelEvent,
                               MeasureEvent>;

struct Event {
  int mode = 0;
  EventBody body;
};

namespace detail {

inline std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline std::string atom_fields(const AtomSpec &a) {
  std::ostringstream os;
  os << "id=" << a.id << " species=" << to_string(a.species)
     << " kind=" << to_string(a.kind) << " M=" << a.ensemble_size
     << " x=" << fmt_double(a.position.x()) << " y=" << fmt_double(a.position.y());
  return os.str();
}

}  // namespace detail

inline std::string serialize_event(const Event &ev) {
  std::ostringstream os;
  os << "mode=" << ev.mode << " ";
  std::visit(
      [&](const auto &e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, InitEvent>) {
          os << "init " << detail::atom_fields(e.atom);
        } else if constexpr (std::is_same_v<T, MoveInEvent>) {
          os << "in " << detail::atom_fields(e.atom);
        } else if constexpr (std::is_same_v<T, MoveOutEvent>) {
          os << "out id=" << e.id;
        } else if constexpr (std::is_same_v<T, PulseEvent>) {
          os << "pulse species=" << to_string(e.pulse.species)
             << " theta=" << detail::fmt_double(e.pulse.area_theta)
             << " phi=" << detail::fmt_double(e.pulse.phase_phi)
             << " dagger=" << (e.pulse.inverse ? 1 : 0);
        } else if constexpr (std::is_same_v<T, PhaseEvent>) {
          const char *sel = e.selector == PhaseSelector::All ? "all"
                            : e.selector == PhaseSelector::SingleOnly
                                ? "single"
                                : "superatom";
          os << "phase species=" << to_string(e.species)
             << " angle=" << detail::fmt_double(e.angle) << " select=" << sel;
        } else if constexpr (std::is_same_v<T, PosEvent>) {
          os << "pos id=" << e.id << " x=" << detail::fmt_double(e.pos.x())
             << " y=" << detail::fmt_double(e.pos.y());
        } else if constexpr (std::is_same_v<T, RelabelEvent>) {
          os << "relabel a=" << e.slot_a << " b=" << e.slot_b;
        } else if constexpr (std::is_same_v<T, MeasureEvent>) {
          os << "measure";
        }
      },
      ev.body);
  return os.str();
}

struct HybridMode {
  int t = 0;  // temporal mode index
  int s = 1;  // spatial slot index (1-based)
};

struct QPairHandle {
  HybridMode mode;
  std::string data_id;
  std::string aux_id;
  AtomKind data_kind = AtomKind::Single;
};

struct Geometry {
  double pair_spacing = 15.0;  // micrometers between adjacent data qubits
  double aux_offset = 3.0;     // perpendicular data-aux separation
  BlockadeRadii radii{5.0, 5.0, 8.0};

  Eigen::Vector2d data_pos(int slot) const {
    return {pair_spacing * (slot - 1), 0.0};
  }
  Eigen::Vector2d aux_pos(int slot) const {
    return {pair_spacing * (slot - 1), aux_offset};
  }
  Eigen::Vector2d mediator_pos(int slot_a, int slot_b) const {
    return 0.5 * (data_pos(slot_a) + data_pos(slot_b));
  }
};

struct ContextOptions {
  int slots = 1;
  std::vector<AtomKind> initial_kinds;  // per slot; default all single
  bool simulate = true;
  EvolveMethod method = EvolveMethod::DerivedUnitary;
  bool replace_aux = true;  // refresh the auxiliary atom at every translation
  int superatom_m = 4;
  Geometry geometry;
};

class ProtocolContext {
 public:
  explicit ProtocolContext(const ContextOptions &opt)
      : opt_(opt), state_(QuantumState::ground(0)) {
    if (opt.slots < 1) throw ProtocolError("need at least one slot");
    for (int s = 1; s <= opt.slots; ++s) {
      AtomKind kind = AtomKind::Single;
      if (int(opt.initial_kinds.size()) >= s) kind = opt.initial_kinds[s - 1];
      QPairHandle pair;
      pair.mode = {0, s};
      pair.data_kind = kind;
      pair.data_id = next_data_id(s);
      pair.aux_id = next_aux_id(s);
      register_atom(make_data_spec(pair.data_id, s, kind), /*initial=*/true);
      register_atom(make_aux_spec(pair.aux_id, s), /*initial=*/true);
      pairs_.push_back(pair);
      record_plan(0, s, kind);
    }
  }

  int slot_count() const { return int(pairs_.size()); }
  int current_mode() const { return mode_; }
  const std::vector<Event> &trace() const { return trace_; }
  const std::vector<QPairHandle> &pairs() const { return pairs_; }
  const QPairHandle &pair(int slot) const { return pairs_.at(slot - 1); }
  const AtomRegistry &registry() const { return registry_; }
  const QuantumState &state() const { return state_; }
  bool simulating() const { return opt_.simulate; }
  const std::map<std::pair<int, int>, AtomKind> &superatom_plan() const {
    return superatom_plan_;
  }

  // ---- low-level events ----

  void pulse(const PulseSpec &p) {
    push({mode_, PulseEvent{p}});
    if (opt_.simulate)
      state_ = apply_global_pulse(state_, GlobalPulseEvent(p), registry_,
                                  graph_, opt_.method);
  }

  void phase(Species sp, double angle, PhaseSelector sel) {
    push({mode_, PhaseEvent{sp, angle, sel}});
    if (opt_.simulate) apply_phase_event(PhaseEvent{sp, angle, sel});
  }

  void composite(const CompositeSequence &seq) {
    Species sp = seq.pulses.front().species;
    for (const PulseSpec &p : seq.pulses) pulse(p);
    if (seq.corrective_single && seq.corrective_single->angle != 0.0)
      phase(sp, seq.corrective_single->angle, PhaseSelector::SingleOnly);
    if (seq.corrective_superatom && seq.corrective_superatom->angle != 0.0)
      phase(sp, seq.corrective_superatom->angle, PhaseSelector::SuperatomOnly);
  }

  void displacement_in(const AtomSpec &atom) {
    push({mode_, MoveInEvent{atom}});
    register_atom(atom, /*initial=*/false);
  }

  void displacement_out(const std::string &id) {
    push({mode_, MoveOutEvent{id}});
    unregister_atom(id);
  }

  void measure_terminator() { push({mode_, MeasureEvent{}}); }

  // ---- protocol pulse blocks ----

  /** Auxiliary bit-flip X_B: bit-flip composite on species B. */
  void aux_flip_block() { composite(global_bitflip_sequence(Species::B)); }

  /** Data bit-flip with the superatom-selective P(pi/2) sandwich; acts as
   * -X on every unblocked data qubit of either kind. */
  void data_flip_block() {
    phase(Species::A, pi / 2, PhaseSelector::SuperatomOnly);
    composite(global_bitflip_sequence(Species::A));
    phase(Species::A, pi / 2, PhaseSelector::SuperatomOnly);
  }

  void conditional_bitflip() { composite(superatom_only_bitflip_sequence()); }
  void conditional_hadamard() { composite(superatom_only_hadamard_sequence()); }
  void conditional_phase(double phi) {
    phase(Species::A, phi, PhaseSelector::SuperatomOnly);
  }

  // ---- temporal mode translation ----

  /** Translates every Q-Pair to the next temporal mode. `targets` maps slot
   * to the new data-qubit kind; missing slots keep their kind. */
  void translate_all(const std::map<int, AtomKind> &targets = {}) {
    aux_flip_block();
    data_flip_block();
    for (QPairHandle &pr : pairs_) {
      AtomKind target = pr.data_kind;
      if (auto it = targets.find(pr.mode.s); it != targets.end())
        target = it->second;
      std::string fresh = next_data_id(pr.mode.s);
      displacement_out(pr.data_id);
      displacement_in(make_data_spec(fresh, pr.mode.s, target));
      pr.data_id = fresh;
      pr.data_kind = target;
    }
    data_flip_block();
    aux_flip_block();
    if (opt_.replace_aux) {
      for (QPairHandle &pr : pairs_) {
        std::string fresh = next_aux_id(pr.mode.s);
        displacement_out(pr.aux_id);
        displacement_in(make_aux_spec(fresh, pr.mode.s));
        pr.aux_id = fresh;
      }
    }
    advance_mode();
  }

  /** Single-pair entry point matching the published T_nu operators. */
  void temporal_translation(int nu, int slot) {
    check_slot(slot);
    AtomKind source = (nu == 1 || nu == 2) ? AtomKind::Single : AtomKind::Superatom;
    AtomKind target = (nu == 1 || nu == 3) ? AtomKind::Single : AtomKind::Superatom;
    if (nu < 1 || nu > 4) throw ProtocolError("translation index must be 1..4");
    if (pair(slot).data_kind != source)
      throw ProtocolError("data kind does not match translation source kind");
    translate_all({{slot, target}});
  }

  // ---- wire-gates ----

  enum class WireGateKind { Identity, BitFlip, Hadamard, Phase };

  /** Single-qubit wire-gate: superatom-selective gate followed by a global
   * translation. Acts on the data qubit at `slot` iff it is a superatom. */
  void single_qubit_wiregate(int slot, WireGateKind gate, double phi,
                             AtomKind exit_kind,
                             const std::map<int, AtomKind> &other_targets = {}) {
    check_slot(slot);
    switch (gate) {
      case WireGateKind::Identity:
        break;
      case WireGateKind::BitFlip:
        conditional_bitflip();
        break;
      case WireGateKind::Hadamard:
        conditional_hadamard();
        break;
      case WireGateKind::Phase:
        conditional_phase(phi);
        break;
    }
    std::map<int, AtomKind> targets = other_targets;
    targets[slot] = exit_kind;
    translate_all(targets);
  }

  /** Mediated CZ on the data qubits of two adjacent slots (no translation).
   *
   * With both participants superatoms, a single-atom-selective P(pi)
   * correction leaves idle pairs untouched; with single-atom participants the
   * bare sequence is exact only when no other pairs are present.
   */
  void cz_layer(const std::vector<std::pair<int, int>> &links) {
    if (links.empty()) throw ProtocolError("empty CZ layer");
    bool super_mode = true;
    std::set<int> participants;
    for (auto [a, b] : links) {
      check_slot(a);
      check_slot(b);
      if (std::abs(a - b) != 1)
        throw ProtocolError("CZ requires spatially adjacent slots");
      if (pair(a).mode.t != pair(b).mode.t)
        throw ProtocolError("CZ requires equal temporal modes");
      AtomKind ka = pair(a).data_kind, kb = pair(b).data_kind;
      if (ka != kb) throw ProtocolError("CZ participants must share a kind");
      if (ka == AtomKind::Single) super_mode = false;
      participants.insert(a);
      participants.insert(b);
    }
    if (!super_mode) {
      if (links.size() != 1 || slot_count() != 2)
        throw ProtocolError(
            "single-atom CZ participants require a bare two-pair context");
    } else {
      for (const QPairHandle &pr : pairs_) {
        if (!participants.count(pr.mode.s) &&
            pr.data_kind == AtomKind::Superatom)
          throw ProtocolError("idle pairs must be single atoms during CZ");
      }
    }
    std::vector<std::string> mediators;
    for (auto [a, b] : links) {
      AtomSpec med;
      med.id = "m" + std::to_string(mediator_serial_++);
      med.species = Species::B;
      med.kind = AtomKind::Superatom;
      med.ensemble_size = opt_.superatom_m;
      med.position = opt_.geometry.mediator_pos(a, b);
      displacement_in(med);
      mediators.push_back(med.id);
    }
    composite(cz_mediator_composite(Species::B));
    if (super_mode) phase(Species::A, pi, PhaseSelector::SingleOnly);
    for (const std::string &id : mediators) displacement_out(id);
  }

  /** CZ wire-gate: mediated CZ followed by a global translation. */
  void cz_wiregate(int slot_a, int slot_b,
                   const std::map<int, AtomKind> &targets = {}) {
    cz_layer({{slot_a, slot_b}});
    translate_all(targets);
  }

  /** CNOT wire-gate (three modes): H on target, CZ, H on target. Entry kinds:
   * control single, target superatom. Exits per the target map. */
  void cnot_wiregate(int control, int target, AtomKind control_exit,
                     AtomKind target_exit) {
    check_slot(control);
    check_slot(target);
    if (std::abs(control - target) != 1)
      throw ProtocolError("CNOT requires spatially adjacent slots");
    if (pair(control).data_kind != AtomKind::Single)
      throw ProtocolError("CNOT control must enter as a single atom");
    if (pair(target).data_kind != AtomKind::Superatom)
      throw ProtocolError("CNOT target must enter as a superatom");
    conditional_hadamard();
    translate_all({{control, AtomKind::Superatom}, {target, AtomKind::Superatom}});
    cz_wiregate(control, target,
                {{control, AtomKind::Single}, {target, AtomKind::Superatom}});
    conditional_hadamard();
    translate_all({{control, control_exit}, {target, target_exit}});
  }

  /** C-Phase wire-gate (eight modes): CX, P(-phi/2), CX, P(phi/2) with the
   * kind bookkeeping needed to keep each phase gate on its intended pairs.
   * Entry kinds: control single, target superatom; exits single. */
  void cphase_wiregate(int control, int target, double phi) {
    cnot_wiregate(control, target, AtomKind::Single, AtomKind::Superatom);
    conditional_phase(-phi / 2);
    translate_all({{control, AtomKind::Single}, {target, AtomKind::Superatom}});
    cnot_wiregate(control, target, AtomKind::Superatom, AtomKind::Superatom);
    conditional_phase(phi / 2);
    translate_all({{control, AtomKind::Single}, {target, AtomKind::Single}});
  }

  /** Exchanges the spatial labels (and atom positions) of two pairs without
   * pulses and without advancing the mode. */
  void exchange_slots(int slot_a, int slot_b) {
    check_slot(slot_a);
    check_slot(slot_b);
    if (slot_a == slot_b) throw ProtocolError("cannot swap a slot with itself");
    if (pair(slot_a).mode.t != pair(slot_b).mode.t)
      throw ProtocolError("SWAP requires equal temporal modes");
    push({mode_, RelabelEvent{slot_a, slot_b}});
    QPairHandle &pa = pairs_[slot_a - 1];
    QPairHandle &pb = pairs_[slot_b - 1];
    std::swap(pa, pb);
    pa.mode.s = slot_a;
    pb.mode.s = slot_b;
    reposition(pa.data_id, opt_.geometry.data_pos(slot_a));
    reposition(pa.aux_id, opt_.geometry.aux_pos(slot_a));
    reposition(pb.data_id, opt_.geometry.data_pos(slot_b));
    reposition(pb.aux_id, opt_.geometry.aux_pos(slot_b));
    rebuild_graph();
  }

  /** SWAP wire-gate: exchange of the two pairs' spatial labels by atom
   * movement (no pulses), then a global translation. */
  void swap_wiregate(int slot_a, int slot_b,
                     const std::map<int, AtomKind> &targets = {}) {
    exchange_slots(slot_a, slot_b);
    translate_all(targets);
  }

  // ---- state access helpers (simulation mode) ----

  /** Overwrites the (ground-state) data qubit of `slot` with alpha|g>+beta|r>. */
  void set_data_state(int slot, cplx alpha, cplx beta) {
    require_sim();
    int unit = registry_.index_of(pair(slot).data_id);
    Unitary2 u;
    u << alpha, -std::conj(beta), beta, std::conj(alpha);
    state_.apply_controlled_single(unit, u, {});
  }

  /** Reduced 2x2 density matrix of the data qubit at `slot`. */
  Eigen::Matrix2cd data_reduced_density(int slot) const {
    require_sim();
    int unit = registry_.index_of(pair(slot).data_id);
    const Eigen::VectorXcd &psi = state_.statevector();
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    std::size_t mask = std::size_t(1) << unit;
    for (std::size_t i = 0; i < state_.dim(); ++i) {
      std::size_t j = i | mask;
      if (i & mask) continue;
      rho(0, 0) += std::norm(psi(i));
      rho(1, 1) += std::norm(psi(j));
      rho(0, 1) += psi(i) * std::conj(psi(j));
    }
    rho(1, 0) = std::conj(rho(0, 1));
    return rho;
  }

  /** Joint amplitudes of the data qubits in slot order (slot 1 = bit 0),
   * with every auxiliary atom projected onto |g> (they are in |g> exactly at
   * mode boundaries). */
  Eigen::VectorXcd data_amplitudes() const {
    require_sim();
    std::vector<int> data_units;
    for (const QPairHandle &pr : pairs_)
      data_units.push_back(registry_.index_of(pr.data_id));
    const Eigen::VectorXcd &psi = state_.statevector();
    std::size_t n = data_units.size();
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(std::size_t(1) << n);
    for (std::size_t j = 0; j < amps.size(); ++j) {
      std::size_t idx = 0;
      for (std::size_t k = 0; k < n; ++k)
        if ((j >> k) & 1) idx |= std::size_t(1) << data_units[k];
      amps(j) = psi(idx);
    }
    return amps;
  }

 private:
  void require_sim() const {
    if (!opt_.simulate)
      throw ProtocolError("operation requires simulation mode");
  }

  void check_slot(int slot) const {
    if (slot < 1 || slot > slot_count())
      throw ProtocolError("slot index out of range");
  }

  AtomSpec make_data_spec(const std::string &id, int slot, AtomKind kind) const {
    AtomSpec a;
    a.id = id;
    a.species = Species::A;
    a.kind = kind;
    a.ensemble_size = kind == AtomKind::Superatom ? opt_.superatom_m : 1;
    a.position = opt_.geometry.data_pos(slot);
    return a;
  }

  AtomSpec make_aux_spec(const std::string &id, int slot) const {
    AtomSpec a;
    a.id = id;
    a.species = Species::B;
    a.kind = AtomKind::Single;
    a.ensemble_size = 1;
    a.position = opt_.geometry.aux_pos(slot);
    return a;
  }

  std::string next_data_id(int slot) {
    return "d" + std::to_string(slot) + "." + std::to_string(data_serial_[slot]++);
  }
  std::string next_aux_id(int slot) {
    return "a" + std::to_string(slot) + "." + std::to_string(aux_serial_[slot]++);
  }

  void register_atom(const AtomSpec &atom, bool initial) {
    if (initial)
      push({mode_, InitEvent{atom}});
    registry_.add(atom);
    rebuild_graph();
    if (opt_.simulate) state_.append_unit();
  }

  void unregister_atom(const std::string &id) {
    int idx = registry_.index_of(id);
    if (opt_.simulate) state_.remove_unit(idx);
    registry_.remove(id);
    rebuild_graph();
  }

  void reposition(const std::string &id, const Eigen::Vector2d &pos) {
    registry_.get(id).position = pos;
    push({mode_, PosEvent{id, pos}});
  }

  void rebuild_graph() {
    graph_ = build_blockade_graph(registry_, opt_.geometry.radii);
  }

  void apply_phase_event(const PhaseEvent &ev) {
    for (int i = 0; i < registry_.size(); ++i) {
      const AtomSpec &a = registry_.at(i);
      if (a.species != ev.species || a.parked) continue;
      if (ev.selector == PhaseSelector::SingleOnly && a.kind != AtomKind::Single)
        continue;
      if (ev.selector == PhaseSelector::SuperatomOnly &&
          a.kind != AtomKind::Superatom)
        continue;
      state_.apply_phase(i, ev.angle);
    }
  }

  void advance_mode() {
    mode_ += 1;
    for (QPairHandle &pr : pairs_) {
      pr.mode.t += 1;
      record_plan(mode_, pr.mode.s, pr.data_kind);
    }
  }

  void record_plan(int mode, int slot, AtomKind kind) {
    superatom_plan_[{mode, slot}] = kind;
  }

  void push(const Event &ev) {
    // events in move_in are registered after the push so the trace reflects
    // causal order even when registration throws
    trace_.push_back(ev);
  }

  ContextOptions opt_;
  AtomRegistry registry_;
  BlockadeGraph graph_;
  QuantumState state_;
  std::vector<QPairHandle> pairs_;
  std::vector<Event> trace_;
  std::map<std::pair<int, int>, AtomKind> superatom_plan_;
  std::map<int, int> data_serial_, aux_serial_;
  int mediator_serial_ = 0;
  int mode_ = 0;
};

}  // namespace maqcy
