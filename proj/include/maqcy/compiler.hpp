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
 * Logical-circuit to pulse-schedule compiler.
 *
 * Pipeline:
 *  1. Placement: logical qubit q starts at spatial slot q+1 on a line.
 *  2. Routing: two-qubit gates between non-adjacent slots get nearest-
 *     neighbor bubble SWAPs inserted (the second operand is moved toward the
 *     first); explicit SWAP gates are realized as relabelings, free of pulses.
 *  3. Layering: greedy ASAP grouping of slot-level operations into
 *     homogeneous layers (same gate type and angle, disjoint slots), so that
 *     parallel gates share one global pulse block and one translation.
 *  4. Emission: each layer becomes one wire-gate block over a trace-only
 *     ProtocolContext; data qubits are promoted to superatoms exactly one
 *     mode before a layer needs them and demoted immediately after.
 *
 * Schedules are replayed through the blockade engine by simulate_schedule
 * and checked structurally (plus optional replay) by validate_schedule.
 */

#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "noise_engine.hpp"
#include "reference_oracle.hpp"
#include "wiregates.hpp"

namespace maqcy {

enum class LayoutPolicy { Line };

struct Schedule {
  int qubit_count = 0;
  int slot_count = 0;
  int mode_count = 0;     // physical temporal modes (translation count)
  int logical_steps = 0;  // abstract steps: gate layers + measurement
  std::vector<Event> events;
  std::vector<int> initial_slot_of_qubit;  // logical qubit -> slot (1-based)
  std::vector<int> final_slot_of_qubit;
  std::map<std::pair<int, int>, AtomKind> superatom_plan;  // (mode, slot)
  Geometry geometry;

  std::string serialize() const {
    std::ostringstream os;
    os << "# maqcy schedule qubits=" << qubit_count << " slots=" << slot_count
       << " modes=" << mode_count << " steps=" << logical_steps << "\n";
    auto slot_list = [&](const std::vector<int> &v) {
      std::ostringstream ls;
      for (std::size_t i = 0; i < v.size(); ++i)
        ls << (i ? "," : "") << v[i];
      return ls.str();
    };
    os << "# initial_slots=" << slot_list(initial_slot_of_qubit) << "\n";
    os << "# final_slots=" << slot_list(final_slot_of_qubit) << "\n";
    for (const Event &ev : events) os << serialize_event(ev) << "\n";
    return os.str();
  }
};

namespace detail {

struct SlotOp {
  Gate::Type type = Gate::Type::H;
  double phi = 0;
  int s1 = 0;   // 1-based slot; control slot for CX/CP
  int s2 = -1;  // target slot for two-slot ops
};

struct Layer {
  Gate::Type type = Gate::Type::H;
  double phi = 0;
  std::vector<SlotOp> ops;
};

inline std::vector<int> op_slots(const SlotOp &op) {
  if (op.s2 < 0) return {op.s1};
  return {op.s1, op.s2};
}

/** Routing pass: expands gates to slot-level ops with bubble SWAPs; returns
 * the final qubit->slot map through `slot_of`. */
inline std::vector<SlotOp> route(const LogicalCircuit &circuit,
                                 std::vector<int> &slot_of) {
  int n = circuit.qubit_count;
  slot_of.resize(n);
  std::vector<int> qubit_at(n + 1, -1);  // slot -> qubit
  for (int q = 0; q < n; ++q) {
    slot_of[q] = q + 1;
    qubit_at[q + 1] = q;
  }
  auto swap_slots = [&](int a, int b) {
    std::swap(qubit_at[a], qubit_at[b]);
    if (qubit_at[a] >= 0) slot_of[qubit_at[a]] = a;
    if (qubit_at[b] >= 0) slot_of[qubit_at[b]] = b;
  };
  std::vector<SlotOp> ops;
  for (const Gate &g : circuit.gates) {
    if (!g.two_qubit()) {
      ops.push_back({g.type, g.phi, slot_of[g.q1], -1});
      continue;
    }
    int s1 = slot_of[g.q1];
    int s2 = slot_of[g.q2];
    if (g.type == Gate::Type::SWAP) {
      // Explicit SWAP: the atoms exchange slots while each logical wire keeps
      // its slot, so the wires' contents are exchanged. (Routing SWAPs below
      // instead carry the wires along with their atoms.)
      ops.push_back({Gate::Type::SWAP, 0, std::min(s1, s2), std::max(s1, s2)});
      continue;
    }
    int dir = s1 > s2 ? 1 : -1;  // move the second operand toward the first
    while (std::abs(s1 - s2) > 1) {
      int next = s2 + dir;
      ops.push_back({Gate::Type::SWAP, 0, std::min(s2, next), std::max(s2, next)});
      swap_slots(s2, next);
      s2 = next;
    }
    ops.push_back({g.type, g.phi, s1, s2});
  }
  return ops;
}

/** Greedy ASAP layering into homogeneous layers. An op may join the first
 * compatible layer at or after its dependency frontier; all skipped layers
 * touch disjoint slots, so the reordering commutes. */
inline std::vector<Layer> layerize(const std::vector<SlotOp> &ops,
                                   int slot_count) {
  std::vector<Layer> layers;
  std::vector<int> last_layer(slot_count + 1, -1);
  for (const SlotOp &op : ops) {
    std::vector<int> slots = op_slots(op);
    int cand = 0;
    for (int s : slots) cand = std::max(cand, last_layer[s] + 1);
    int chosen = -1;
    for (int l = cand; l < int(layers.size()); ++l) {
      if (layers[l].type != op.type) continue;
      if ((op.type == Gate::Type::P || op.type == Gate::Type::CP) &&
          layers[l].phi != op.phi)
        continue;
      bool overlap = false;
      for (const SlotOp &other : layers[l].ops)
        for (int s : slots)
          if (s == other.s1 || s == other.s2) overlap = true;
      if (overlap) continue;
      chosen = l;
      break;
    }
    if (chosen < 0) {
      chosen = int(layers.size());
      layers.push_back({op.type, op.phi, {}});
    }
    layers[chosen].ops.push_back(op);
    for (int s : slots) last_layer[s] = chosen;
  }
  return layers;
}

/** Data-qubit kind a slot must hold at the entry of `layer`, if involved. */
inline std::optional<AtomKind> entry_need(const Layer &layer, int slot) {
  for (const SlotOp &op : layer.ops) {
    switch (layer.type) {
      case Gate::Type::H:
      case Gate::Type::X:
      case Gate::Type::P:
        if (op.s1 == slot) return AtomKind::Superatom;
        break;
      case Gate::Type::CZ:
        if (op.s1 == slot || op.s2 == slot) return AtomKind::Superatom;
        break;
      case Gate::Type::CX:
      case Gate::Type::CP:
        if (op.s1 == slot) return AtomKind::Single;
        if (op.s2 == slot) return AtomKind::Superatom;
        break;
      case Gate::Type::SWAP:
        if (op.s1 == slot || op.s2 == slot) return AtomKind::Single;
        break;
    }
  }
  return std::nullopt;
}

/** Exit-kind map after `index`: promote for the next layer, demote otherwise. */
inline std::map<int, AtomKind> exit_targets(const std::vector<Layer> &layers,
                                            std::size_t index, int slot_count) {
  std::map<int, AtomKind> targets;
  for (int s = 1; s <= slot_count; ++s) {
    AtomKind k = AtomKind::Single;
    if (index + 1 < layers.size())
      if (auto need = entry_need(layers[index + 1], s)) k = *need;
    targets[s] = k;
  }
  return targets;
}

inline void emit_cx_block(ProtocolContext &ctx, const Layer &layer,
                          const std::map<int, AtomKind> &exits) {
  std::map<int, AtomKind> both_super, control_single;
  std::vector<std::pair<int, int>> links;
  for (const SlotOp &op : layer.ops) {
    both_super[op.s1] = AtomKind::Superatom;
    both_super[op.s2] = AtomKind::Superatom;
    control_single[op.s1] = AtomKind::Single;
    control_single[op.s2] = AtomKind::Superatom;
    links.push_back({op.s1, op.s2});
  }
  ctx.conditional_hadamard();
  ctx.translate_all(both_super);
  ctx.cz_layer(links);
  ctx.translate_all(control_single);
  ctx.conditional_hadamard();
  ctx.translate_all(exits);
}

inline void emit_layer(ProtocolContext &ctx, const Layer &layer,
                       const std::map<int, AtomKind> &exits) {
  switch (layer.type) {
    case Gate::Type::H:
      ctx.conditional_hadamard();
      ctx.translate_all(exits);
      break;
    case Gate::Type::X:
      ctx.conditional_bitflip();
      ctx.translate_all(exits);
      break;
    case Gate::Type::P:
      ctx.conditional_phase(layer.phi);
      ctx.translate_all(exits);
      break;
    case Gate::Type::SWAP:
      for (const SlotOp &op : layer.ops) ctx.exchange_slots(op.s1, op.s2);
      ctx.translate_all(exits);
      break;
    case Gate::Type::CZ: {
      std::vector<std::pair<int, int>> links;
      for (const SlotOp &op : layer.ops) links.push_back({op.s1, op.s2});
      ctx.cz_layer(links);
      ctx.translate_all(exits);
      break;
    }
    case Gate::Type::CX:
      emit_cx_block(ctx, layer, exits);
      break;
    case Gate::Type::CP: {
      // CP(c,t,phi) = (P_c(phi/2) (x) P_t(phi/2)) CX (I (x) P_t(-phi/2)) CX
      Layer cx = layer;
      cx.type = Gate::Type::CX;
      std::map<int, AtomKind> control_single, both_super;
      for (const SlotOp &op : layer.ops) {
        control_single[op.s1] = AtomKind::Single;
        control_single[op.s2] = AtomKind::Superatom;
        both_super[op.s1] = AtomKind::Superatom;
        both_super[op.s2] = AtomKind::Superatom;
      }
      emit_cx_block(ctx, cx, control_single);
      ctx.conditional_phase(-layer.phi / 2);  // hits targets (superatoms)
      ctx.translate_all(control_single);
      emit_cx_block(ctx, cx, both_super);
      ctx.conditional_phase(layer.phi / 2);  // hits controls and targets
      ctx.translate_all(exits);
      break;
    }
  }
}

}  // namespace detail

inline Schedule compile(const LogicalCircuit &circuit,
                        LayoutPolicy policy = LayoutPolicy::Line) {
  (void)policy;
  if (circuit.qubit_count < 1)
    throw ProtocolError("circuit needs at least one qubit");
  int n = circuit.qubit_count;
  Schedule sched;
  sched.qubit_count = n;
  sched.slot_count = n;
  sched.initial_slot_of_qubit.resize(n);
  for (int q = 0; q < n; ++q) sched.initial_slot_of_qubit[q] = q + 1;
  if (circuit.gates.empty()) {
    sched.final_slot_of_qubit = sched.initial_slot_of_qubit;
    return sched;
  }
  std::vector<int> final_slot;
  std::vector<detail::SlotOp> ops = detail::route(circuit, final_slot);
  std::vector<detail::Layer> layers = detail::layerize(ops, n);

  ContextOptions opt;
  opt.slots = n;
  opt.simulate = false;
  opt.initial_kinds.assign(n, AtomKind::Single);
  for (int s = 1; s <= n; ++s)
    if (auto need = detail::entry_need(layers.front(), s))
      opt.initial_kinds[s - 1] = *need;
  ProtocolContext ctx(opt);
  for (std::size_t l = 0; l < layers.size(); ++l)
    detail::emit_layer(ctx, layers[l], detail::exit_targets(layers, l, n));
  ctx.measure_terminator();

  sched.mode_count = ctx.current_mode();
  sched.logical_steps = int(layers.size()) + 1;  // + measurement step
  sched.events = ctx.trace();
  sched.superatom_plan = ctx.superatom_plan();
  sched.final_slot_of_qubit = final_slot;
  sched.geometry = opt.geometry;
  return sched;
}

/** The three-qubit discrete Fourier transform circuit (qubit 0 = least
 * significant bit of the basis index; qubit 2 occupies the top wire). */
inline LogicalCircuit qft3_circuit() {
  LogicalCircuit c;
  c.qubit_count = 3;
  c.gates = {
      {Gate::Type::H, 2},
      {Gate::Type::CP, 2, 1, pi / 2},
      {Gate::Type::CP, 2, 0, pi / 4},
      {Gate::Type::H, 1},
      {Gate::Type::CP, 1, 0, pi / 2},
      {Gate::Type::H, 0},
  };
  return c;
}

inline Schedule qft3_reference_schedule() { return compile(qft3_circuit()); }

namespace detail {

inline void replay_phase_event(QuantumState &state, const AtomRegistry &reg,
                               const PhaseEvent &ev) {
  for (int i = 0; i < reg.size(); ++i) {
    const AtomSpec &a = reg.at(i);
    if (a.species != ev.species || a.parked) continue;
    if (ev.selector == PhaseSelector::SingleOnly && a.kind != AtomKind::Single)
      continue;
    if (ev.selector == PhaseSelector::SuperatomOnly &&
        a.kind != AtomKind::Superatom)
      continue;
    state.apply_phase(i, ev.angle);
  }
}

inline int data_unit_at_slot(const AtomRegistry &reg, const Geometry &geo,
                             int slot) {
  Eigen::Vector2d pos = geo.data_pos(slot);
  for (int i = 0; i < reg.size(); ++i) {
    const AtomSpec &a = reg.at(i);
    if (a.species == Species::A && (a.position - pos).norm() < 1e-6) return i;
  }
  throw ProtocolError("no data atom at slot " + std::to_string(slot));
}

}  // namespace detail

/** Replays a schedule through the blockade engine on the computational basis
 * input `basis_input` (bit q of the index = logical qubit q) and returns the
 * final data-qubit amplitudes in logical-qubit order. */
inline DenseState simulate_schedule(const Schedule &sched,
                                    std::size_t basis_input,
                                    EvolveMethod method = EvolveMethod::DerivedUnitary) {
  if (sched.qubit_count < 1) throw ProtocolError("empty schedule");
  std::size_t dim = std::size_t(1) << sched.qubit_count;
  if (basis_input >= dim) throw ProtocolError("basis input out of range");
  if (sched.events.empty()) return basis_state(sched.qubit_count, basis_input);

  AtomRegistry reg;
  QuantumState state = QuantumState::ground(0);
  BlockadeGraph graph;
  auto rebuild = [&] { graph = build_blockade_graph(reg, sched.geometry.radii); };
  bool prepared = false;
  auto prepare_input = [&] {
    prepared = true;
    Unitary2 flip;
    flip << 0, 1, 1, 0;
    for (int q = 0; q < sched.qubit_count; ++q) {
      if (!((basis_input >> q) & 1)) continue;
      int unit = detail::data_unit_at_slot(reg, sched.geometry,
                                           sched.initial_slot_of_qubit[q]);
      state.apply_controlled_single(unit, flip, {});
    }
  };
  auto extract = [&]() -> DenseState {
    const Eigen::VectorXcd &psi = state.statevector();
    DenseState out = DenseState::Zero(dim);
    std::vector<int> unit_of(sched.qubit_count);
    for (int q = 0; q < sched.qubit_count; ++q)
      unit_of[q] = detail::data_unit_at_slot(reg, sched.geometry,
                                             sched.final_slot_of_qubit[q]);
    for (std::size_t j = 0; j < dim; ++j) {
      std::size_t idx = 0;
      for (int q = 0; q < sched.qubit_count; ++q)
        if ((j >> q) & 1) idx |= std::size_t(1) << unit_of[q];
      out(j) = psi(idx);
    }
    return out;
  };

  for (const Event &ev : sched.events) {
    if (!prepared && !std::holds_alternative<InitEvent>(ev.body))
      prepare_input();
    std::visit(
        [&](const auto &e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, InitEvent> ||
                        std::is_same_v<T, MoveInEvent>) {
            reg.add(e.atom);
            rebuild();
            state.append_unit();
          } else if constexpr (std::is_same_v<T, MoveOutEvent>) {
            int idx = reg.index_of(e.id);
            state.remove_unit(idx);
            reg.remove(e.id);
            rebuild();
          } else if constexpr (std::is_same_v<T, PulseEvent>) {
            state = apply_global_pulse(state, GlobalPulseEvent(e.pulse), reg,
                                       graph, method);
          } else if constexpr (std::is_same_v<T, PhaseEvent>) {
            detail::replay_phase_event(state, reg, e);
          } else if constexpr (std::is_same_v<T, PosEvent>) {
            reg.get(e.id).position = e.pos;
            rebuild();
          }
          // RelabelEvent: bookkeeping only; MeasureEvent: terminator.
        },
        ev.body);
  }
  if (!prepared) prepare_input();
  return extract();
}

/** Structural (and optionally quantum) schedule validation. Returns a list
 * of violations; empty means valid. */
inline std::vector<std::string> validate_schedule(const Schedule &sched,
                                                  bool check_quantum = true) {
  std::vector<std::string> diags;
  int last_mode = 0;
  AtomRegistry reg;
  std::size_t max_units = 0;
  bool measured = false;
  for (const Event &ev : sched.events) {
    if (ev.mode < last_mode)
      diags.push_back("event mode decreases at mode " + std::to_string(ev.mode));
    last_mode = ev.mode;
    if (measured) {
      diags.push_back("event after measurement terminator");
      break;
    }
    try {
      std::visit(
          [&](const auto &e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, InitEvent> ||
                          std::is_same_v<T, MoveInEvent>) {
              reg.add(e.atom);
              // Mediator insertions (species-B superatoms) must blockade
              // exactly the two participating data atoms and no other
              // species-B atom.
              if (e.atom.species == Species::B &&
                  e.atom.kind == AtomKind::Superatom) {
                int data_links = 0, aux_links = 0;
                for (int i = 0; i < reg.size(); ++i) {
                  const AtomSpec &o = reg.at(i);
                  if (o.id == e.atom.id) continue;
                  double r = sched.geometry.radii.radius(e.atom.species, o.species);
                  if ((o.position - e.atom.position).norm() < r)
                    (o.species == Species::A ? data_links : aux_links) += 1;
                }
                if (data_links != 2 || aux_links != 0)
                  diags.push_back("mediator " + e.atom.id +
                                  " violates the CZ blockade pattern (" +
                                  std::to_string(data_links) + " data, " +
                                  std::to_string(aux_links) + " aux links)");
              }
            } else if constexpr (std::is_same_v<T, MoveOutEvent>) {
              reg.remove(e.id);
            } else if constexpr (std::is_same_v<T, PosEvent>) {
              reg.get(e.id).position = e.pos;
            } else if constexpr (std::is_same_v<T, MeasureEvent>) {
              measured = true;
            }
          },
          ev.body);
    } catch (const ProtocolError &err) {
      diags.push_back(std::string("registry violation: ") + err.what());
      return diags;
    }
    max_units = std::max(max_units, std::size_t(reg.size()));
  }
  for (auto &[key, kind] : sched.superatom_plan) {
    (void)kind;
    if (key.first < 0 || key.first > sched.mode_count ||
        key.second < 1 || key.second > sched.slot_count)
      diags.push_back("superatom plan entry out of range");
  }
  if (check_quantum && !sched.events.empty() && max_units <= 14) {
    // Replay on the all-ground input: any atom displaced out while still
    // excited or entangled raises a residual-excitation error.
    try {
      DenseState out = simulate_schedule(sched, 0);
      if (std::abs(out.norm() - 1.0) > 1e-6)
        diags.push_back("auxiliary atoms not in the ground state at readout");
    } catch (const ProtocolError &err) {
      diags.push_back(std::string("replay violation: ") + err.what());
    }
  }
  return diags;
}

struct ResourceReport {
  double atom_count = 0;        // N': max concurrently trapped atoms
  int depth = 0;                // temporal modes
  double total_time = 0;        // tau, seconds
  double bitflip_proxy = 0;     // P_d = N' * Gamma * tau
  double translation_fidelity = 0;  // F_T from the factor formula
  double fidelity_estimate = 0;     // per-schedule product
  std::size_t pulse_count = 0;
  std::size_t displacement_count = 0;
};

inline ResourceReport estimate_resources(const Schedule &sched,
                                         const NoiseParams &params) {
  if (params.gamma <= 0 || params.t_g <= 0 || params.move_time < 0)
    throw ProtocolError("physical parameters must be positive");
  ResourceReport rep;
  rep.depth = sched.mode_count;
  std::map<std::string, int> atoms;  // id -> physical atom count
  double current = 0;
  for (const Event &ev : sched.events) {
    std::visit(
        [&](const auto &e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, InitEvent> ||
                        std::is_same_v<T, MoveInEvent>) {
            atoms[e.atom.id] = e.atom.ensemble_size;
            current += e.atom.ensemble_size;
            rep.atom_count = std::max(rep.atom_count, current);
            if constexpr (std::is_same_v<T, MoveInEvent>)
              rep.displacement_count += 1;
          } else if constexpr (std::is_same_v<T, MoveOutEvent>) {
            current -= atoms[e.id];
            atoms.erase(e.id);
          } else if constexpr (std::is_same_v<T, PulseEvent>) {
            rep.pulse_count += 1;
          }
        },
        ev.body);
  }
  rep.total_time = params.t_g * double(rep.pulse_count) +
                   params.move_time * double(rep.displacement_count);
  rep.bitflip_proxy = rep.atom_count * params.gamma * rep.total_time;
  rep.translation_fidelity = params.translation_fidelity();
  rep.fidelity_estimate =
      std::pow(params.f_x, double(rep.pulse_count)) *
      std::pow(params.f_d_gamma * params.f_d_mov, double(rep.displacement_count));
  return rep;
}

}  // namespace maqcy
