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

#include <random>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "maqcy/compiler.hpp"

using namespace maqcy;

namespace {

LogicalCircuit circuit_from(const std::string &text, int qubits = -1) {
  std::istringstream in(text);
  return parse_circuit(in, qubits);
}

/** Compares the compiled schedule against the dense oracle on every
 * computational basis input; returns the worst infidelity. */
double worst_infidelity(const LogicalCircuit &circuit, const Schedule &sched) {
  double worst = 0;
  std::size_t dim = std::size_t(1) << circuit.qubit_count;
  for (std::size_t j = 0; j < dim; ++j) {
    DenseState expect = apply_circuit(circuit, basis_state(circuit.qubit_count, j));
    DenseState got = simulate_schedule(sched, j);
    worst = std::max(worst, 1.0 - fidelity_up_to_phase(expect, got));
  }
  return worst;
}

}  // namespace

TEST_CASE("single-qubit gate schedules", "[compiler]") {
  LogicalCircuit c = circuit_from("H 0\n");
  Schedule sched = compile(c);
  REQUIRE(sched.qubit_count == 1);
  REQUIRE(sched.slot_count == 1);
  REQUIRE(sched.mode_count == 1);
  REQUIRE(sched.logical_steps == 2);  // one gate layer + measurement
  REQUIRE(sched.initial_slot_of_qubit == std::vector<int>{1});
  REQUIRE(sched.final_slot_of_qubit == std::vector<int>{1});
  // the qubit enters as a superatom and is demoted at the exit
  REQUIRE(sched.superatom_plan.at({0, 1}) == AtomKind::Superatom);
  REQUIRE(sched.superatom_plan.at({1, 1}) == AtomKind::Single);
  REQUIRE(worst_infidelity(c, sched) < 1e-12);
  REQUIRE(validate_schedule(sched).empty());

  for (const char *text : {"X 0\n", "P 0 phi=0.7853981633974483\n"}) {
    LogicalCircuit c1 = circuit_from(text);
    Schedule s1 = compile(c1);
    REQUIRE(s1.mode_count == 1);
    REQUIRE(worst_infidelity(c1, s1) < 1e-12);
  }
}

TEST_CASE("two-qubit gate schedules", "[compiler]") {
  struct Case {
    const char *text;
    int modes;
  };
  for (const Case &cs : {Case{"CZ 0 1\n", 1}, Case{"CX 0 1\n", 3},
                         Case{"CP 0 1 q=2\n", 8}, Case{"SWAP 0 1\n", 1}}) {
    LogicalCircuit c = circuit_from(cs.text);
    Schedule sched = compile(c);
    REQUIRE(sched.mode_count == cs.modes);
    REQUIRE(worst_infidelity(c, sched) < 1e-12);
    REQUIRE(validate_schedule(sched).empty());
  }
  // explicit SWAP keeps the wire-to-slot map (the contents move, not the wires)
  Schedule sw = compile(circuit_from("SWAP 0 1\n"));
  REQUIRE(sw.final_slot_of_qubit == std::vector<int>{1, 2});
}

TEST_CASE("routing inserts bubble swaps for distant operands", "[compiler]") {
  LogicalCircuit c = circuit_from("CZ 0 2\n", 3);
  Schedule sched = compile(c);
  // qubit 2 is carried from slot 3 to slot 2; qubit 1 is displaced to slot 3
  REQUIRE(sched.final_slot_of_qubit == std::vector<int>{1, 3, 2});
  REQUIRE(sched.mode_count == 2);  // routing swap layer + CZ layer
  REQUIRE(worst_infidelity(c, sched) < 1e-12);
  REQUIRE(validate_schedule(sched).empty());
}

TEST_CASE("parallel gates share a layer", "[compiler]") {
  // H 0 and H 1 commute onto one global pulse block
  Schedule sched = compile(circuit_from("H 0\nH 1\n"));
  REQUIRE(sched.mode_count == 1);
  REQUIRE(sched.logical_steps == 2);
  // same-type but different-angle phase gates cannot share a layer
  Schedule split = compile(circuit_from("P 0 phi=0.5\nP 1 phi=0.25\n"));
  REQUIRE(split.mode_count == 2);
  REQUIRE(split.logical_steps == 3);
}

TEST_CASE("empty circuit compiles to an empty schedule", "[compiler]") {
  LogicalCircuit c;
  c.qubit_count = 2;
  Schedule sched = compile(c);
  REQUIRE(sched.events.empty());
  REQUIRE(sched.mode_count == 0);
  REQUIRE(sched.final_slot_of_qubit == sched.initial_slot_of_qubit);
  DenseState out = simulate_schedule(sched, 2);
  REQUIRE(std::abs(out(2) - cplx(1)) < 1e-15);
  ResourceReport rep = estimate_resources(sched, NoiseParams{});
  REQUIRE(rep.atom_count == 0);
  REQUIRE(rep.total_time == 0);
  REQUIRE(rep.pulse_count == 0);
  REQUIRE_THROWS_AS(compile(LogicalCircuit{}), ProtocolError);
}

TEST_CASE("three-qubit Fourier schedule structure", "[compiler]") {
  Schedule sched = qft3_reference_schedule();
  REQUIRE(sched.qubit_count == 3);
  REQUIRE(sched.slot_count == 3);
  REQUIRE(sched.logical_steps == 8);  // 7 layers + measurement
  REQUIRE(sched.mode_count == 28);
  REQUIRE(sched.events.size() == 1037);
  REQUIRE(sched.final_slot_of_qubit == std::vector<int>{2, 1, 3});
  // only the top wire (slot 3) starts as a superatom
  REQUIRE(sched.superatom_plan.at({0, 1}) == AtomKind::Single);
  REQUIRE(sched.superatom_plan.at({0, 2}) == AtomKind::Single);
  REQUIRE(sched.superatom_plan.at({0, 3}) == AtomKind::Superatom);
  REQUIRE(validate_schedule(sched).empty());

  // deterministic, byte-stable serialization
  std::string text = sched.serialize();
  REQUIRE(text == qft3_reference_schedule().serialize());
  REQUIRE(text.rfind("# maqcy schedule qubits=3 slots=3 modes=28 steps=8", 0) ==
          0);
  REQUIRE(text.find("# initial_slots=1,2,3\n") != std::string::npos);
  REQUIRE(text.find("# final_slots=2,1,3\n") != std::string::npos);
}

TEST_CASE("three-qubit Fourier schedule amplitudes", "[compiler]") {
  Schedule sched = qft3_reference_schedule();
  LogicalCircuit c = qft3_circuit();
  REQUIRE(worst_infidelity(c, sched) < 1e-12);

  // |000> input: uniform moduli 1/sqrt(8)
  DenseState flat = simulate_schedule(sched, 0);
  for (int j = 0; j < 8; ++j)
    REQUIRE(std::abs(flat(j)) == Catch::Approx(1 / std::sqrt(8.0)).margin(1e-10));

  // The gate sequence realizes the Fourier matrix up to the standard output
  // bit reversal (no terminal swap layer is emitted).
  auto reversed = [](std::size_t j) {
    return ((j & 1) << 2) | (j & 2) | ((j >> 2) & 1);
  };
  Eigen::MatrixXcd f = qft_matrix(3);
  for (std::size_t in = 0; in < 8; ++in) {
    DenseState got = simulate_schedule(sched, in);
    DenseState expect(8);
    for (std::size_t j = 0; j < 8; ++j) expect(j) = f(reversed(j), in);
    REQUIRE(1.0 - fidelity_up_to_phase(expect, got) < 1e-12);
  }
}

TEST_CASE("compiled schedules match the oracle", "[compiler][property]") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> nq(2, 3), ngates(1, 5), gate(0, 6);
  std::uniform_int_distribution<int> angle(1, 3);
  for (int rep = 0; rep < 10; ++rep) {
    LogicalCircuit c;
    c.qubit_count = nq(rng);
    int count = ngates(rng);
    for (int k = 0; k < count; ++k) {
      Gate g;
      g.type = static_cast<Gate::Type>(gate(rng));
      std::uniform_int_distribution<int> qd(0, c.qubit_count - 1);
      g.q1 = qd(rng);
      if (g.two_qubit()) {
        do g.q2 = qd(rng); while (g.q2 == g.q1);
      }
      if (g.type == Gate::Type::P || g.type == Gate::Type::CP)
        g.phi = pi / double(1 << angle(rng));
      c.gates.push_back(g);
    }
    Schedule sched = compile(c);
    INFO("rep " << rep << ", " << count << " gates on " << c.qubit_count
                << " qubits");
    REQUIRE(worst_infidelity(c, sched) < 1e-8);
    REQUIRE(validate_schedule(sched).empty());
  }
}

TEST_CASE("schedule validation detects violations", "[compiler]") {
  Schedule good = compile(circuit_from("CZ 0 1\n"));
  REQUIRE(validate_schedule(good).empty());

  SECTION("event after the measurement terminator") {
    Schedule bad = good;
    bad.events.push_back({bad.mode_count, PulseEvent{PulseSpec(Species::A, pi, 0)}});
    auto diags = validate_schedule(bad, false);
    REQUIRE_FALSE(diags.empty());
    REQUIRE(diags.front().find("after measurement") != std::string::npos);
  }

  SECTION("decreasing mode stamps") {
    Schedule bad = good;
    REQUIRE(bad.events.size() > 2);
    std::swap(bad.events.front(), bad.events.back());
    auto diags = validate_schedule(bad, false);
    REQUIRE_FALSE(diags.empty());
  }

  SECTION("mediator blockading the wrong atoms") {
    Schedule bad = good;
    AtomSpec rogue;
    rogue.id = "rogue";
    rogue.species = Species::B;
    rogue.kind = AtomKind::Superatom;
    rogue.ensemble_size = 4;
    rogue.position = Eigen::Vector2d(200, 0);  // blockades nothing
    bad.events.insert(bad.events.begin() + 4, {0, MoveInEvent{rogue}});
    bad.events.push_back({bad.mode_count, MoveOutEvent{"rogue"}});
    auto diags = validate_schedule(bad, false);
    REQUIRE_FALSE(diags.empty());
    REQUIRE(diags.front().find("blockade pattern") != std::string::npos);
  }

  SECTION("displacing an excited atom fails the quantum replay") {
    Schedule bad;
    bad.qubit_count = 1;
    bad.slot_count = 1;
    bad.initial_slot_of_qubit = {1};
    bad.final_slot_of_qubit = {1};
    AtomSpec d;
    d.id = "d1.0";
    d.species = Species::A;
    d.position = bad.geometry.data_pos(1);
    AtomSpec d2 = d;
    d2.id = "d1.1";
    d2.position = bad.geometry.data_pos(2);
    bad.events = {{0, InitEvent{d}},
                  {0, InitEvent{d2}},
                  {0, PulseEvent{PulseSpec(Species::A, pi / 2, 0)}},
                  {0, MoveOutEvent{"d1.1"}},
                  {0, MeasureEvent{}}};
    auto diags = validate_schedule(bad, true);
    REQUIRE_FALSE(diags.empty());
    REQUIRE(diags.front().find("replay violation") != std::string::npos);
  }
}

TEST_CASE("resource estimation", "[compiler]") {
  NoiseParams params;
  Schedule sched = qft3_reference_schedule();
  ResourceReport rep = estimate_resources(sched, params);
  REQUIRE(rep.depth == 28);
  // peak concurrency during a mediated CZ: two M=4 data superatoms, one idle
  // single, three auxiliaries, one M=4 mediator
  REQUIRE(rep.atom_count == 16.0);
  REQUIRE(rep.total_time ==
          params.t_g * double(rep.pulse_count) +
              params.move_time * double(rep.displacement_count));
  REQUIRE(rep.bitflip_proxy ==
          rep.atom_count * params.gamma * rep.total_time);
  REQUIRE(rep.total_time == Catch::Approx(0.0870206).epsilon(1e-3));
  REQUIRE(rep.translation_fidelity == Catch::Approx(params.translation_fidelity()));
  REQUIRE(rep.fidelity_estimate ==
          Catch::Approx(std::pow(params.f_x, double(rep.pulse_count)) *
                        std::pow(params.f_d_gamma * params.f_d_mov,
                                 double(rep.displacement_count))));

  // a superatom-entry single-gate schedule: M=4 data + 1 auxiliary
  ResourceReport h = estimate_resources(compile(circuit_from("H 0\n")), params);
  REQUIRE(h.atom_count == 5.0);

  NoiseParams badp;
  badp.t_g = 0;
  REQUIRE_THROWS_AS(estimate_resources(sched, badp), ProtocolError);
}
