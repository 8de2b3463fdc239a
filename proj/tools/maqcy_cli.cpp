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
 * maqcy command-line front end.
 *
 * Commands:
 *   compile    circuit -> pulse schedule (event trace)
 *   simulate   noiseless schedule replay, or noisy translation statistics
 *   verify     composite-identity, CZ, teleportation and noise checks
 *   estimate   resource report (N', tau, P_d, F_T) for a compiled circuit
 *   qft3-demo  compile and replay the reference three-qubit Fourier schedule
 *
 * Output is tab-separated text with a one-line header. Exit codes:
 *   0 success, 1 verification failure, 2 input error.
 */

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "maqcy/compiler.hpp"

using namespace maqcy;

namespace {

struct RunConfig {
  std::string circuit_path;
  std::string params_path;
  std::string output_path;
  std::uint64_t seed = 1;
  bool noise = false;
  int samples = 10000;
  std::string p_sweep;  // lo:hi:steps
  std::size_t basis_input = 0;
  bool inject_failure = false;  // verify-only test hook
};

std::string fmtg(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

LogicalCircuit load_circuit(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ProtocolError("cannot open circuit file: " + path);
  return parse_circuit(in);
}

NoiseParams load_params(const std::string &path) {
  if (path.empty()) return NoiseParams{};
  std::ifstream in(path);
  if (!in) throw ProtocolError("cannot open params file: " + path);
  return load_noise_params(in);
}

/** Opens the requested output file, or falls back to stdout. */
class Output {
 public:
  explicit Output(const std::string &path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ProtocolError("cannot open output file: " + path);
    }
  }
  std::ostream &stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<double> sweep_values(const std::string &spec, double fallback) {
  if (spec.empty()) return {fallback};
  double lo = 0, hi = 0;
  int steps = 0;
  char colon1 = 0, colon2 = 0;
  std::istringstream in(spec);
  if (!(in >> lo >> colon1 >> hi >> colon2 >> steps) || colon1 != ':' ||
      colon2 != ':' || steps < 1 || lo <= 0 || hi < lo)
    throw ProtocolError("bad --p-sweep, expected lo:hi:steps with 0 < lo <= hi");
  std::vector<double> values;
  for (int k = 0; k < steps; ++k) {
    double t = steps == 1 ? 0.0 : double(k) / double(steps - 1);
    values.push_back(lo * std::pow(hi / lo, t));  // geometric spacing
  }
  return values;
}

int cmd_compile(const RunConfig &cfg) {
  Schedule sched = compile(load_circuit(cfg.circuit_path));
  auto diags = validate_schedule(sched, sched.qubit_count <= 3);
  for (const std::string &d : diags)
    std::cerr << "schedule validation: " << d << "\n";
  if (!diags.empty()) return 1;
  Output out(cfg.output_path);
  out.stream() << sched.serialize();
  return 0;
}

int cmd_simulate(const RunConfig &cfg) {
  Output out(cfg.output_path);
  if (cfg.noise) {
    if (cfg.samples < 1) throw ProtocolError("--samples must be >= 1");
    NoiseParams params = load_params(cfg.params_path);
    std::vector<double> sweep = sweep_values(cfg.p_sweep, params.p);
    out.stream() << "p\tmean_F\tstderr\texact_F\n";
    for (double p : sweep) {
      HaarStats stats =
          haar_average_fidelity(NoiseProtocol::QPair, p, cfg.samples, cfg.seed);
      out.stream() << fmtg(p) << "\t" << fmtg(stats.mean) << "\t"
                   << fmtg(stats.stderr_of_mean) << "\t"
                   << fmtg(haar_exact_mean_fidelity(NoiseProtocol::QPair, p))
                   << "\n";
    }
    return 0;
  }
  LogicalCircuit circuit = load_circuit(cfg.circuit_path);
  Schedule sched = compile(circuit);
  DenseState amps = simulate_schedule(sched, cfg.basis_input);
  out.stream() << "basis\tre\tim\tprobability\n";
  for (Eigen::Index j = 0; j < amps.size(); ++j)
    out.stream() << j << "\t" << fmtg(amps(j).real()) << "\t"
                 << fmtg(amps(j).imag()) << "\t" << fmtg(std::norm(amps(j)))
                 << "\n";
  return 0;
}

int cmd_estimate(const RunConfig &cfg) {
  NoiseParams params = load_params(cfg.params_path);
  Schedule sched = compile(load_circuit(cfg.circuit_path));
  ResourceReport rep = estimate_resources(sched, params);
  Output out(cfg.output_path);
  out.stream() << "atoms\tdepth\ttau\tP_d\tp\tF_T\tfidelity\tpulses\tmoves\n"
               << fmtg(rep.atom_count) << "\t" << rep.depth << "\t"
               << fmtg(rep.total_time) << "\t" << fmtg(rep.bitflip_proxy)
               << "\t" << fmtg(params.p) << "\t"
               << fmtg(rep.translation_fidelity) << "\t"
               << fmtg(rep.fidelity_estimate) << "\t" << rep.pulse_count
               << "\t" << rep.displacement_count << "\n";
  return 0;
}

int cmd_verify(const RunConfig &cfg) {
  Output out(cfg.output_path);
  std::ostream &os = out.stream();
  os << "check\tmax_error\tstatus\n";
  bool all_ok = true;
  auto line = [&](const std::string &name, double err, double tol) {
    bool ok = err < tol;
    all_ok = all_ok && ok;
    os << name << "\t" << fmtg(err) << "\t" << (ok ? "ok" : "FAIL") << "\n";
  };
  auto phase_error = [](const Eigen::MatrixXcd &u, const Eigen::MatrixXcd &v) {
    Eigen::Index r = 0, c = 0;
    v.cwiseAbs().maxCoeff(&r, &c);
    cplx lambda = u(r, c) / v(r, c);
    lambda /= std::abs(lambda);
    return (u - lambda * v).cwiseAbs().maxCoeff();
  };

  Unitary2 x, h, id;
  x << 0, 1, 1, 0;
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  id.setIdentity();
  line("global_bitflip_single", phase_error(global_bitflip(AtomKind::Single), x),
       1e-10);
  line("global_bitflip_superatom",
       phase_error(global_bitflip(AtomKind::Superatom), x), 1e-10);
  line("superatom_bitflip_single",
       phase_error(superatom_only_bitflip(AtomKind::Single), id), 1e-10);
  line("superatom_bitflip_superatom",
       phase_error(superatom_only_bitflip(AtomKind::Superatom), x), 1e-10);
  line("superatom_hadamard_single",
       phase_error(superatom_only_hadamard(AtomKind::Single), id), 1e-10);
  line("superatom_hadamard_superatom",
       phase_error(superatom_only_hadamard(AtomKind::Superatom), h), 1e-10);
  line("cz_mediator_single",
       (compose_raw(cz_mediator_composite(), AtomKind::Single) +
        Eigen::Matrix2cd::Identity())
           .cwiseAbs()
           .maxCoeff(),
       1e-10);
  line("cz_mediator_superatom",
       (compose_raw(cz_mediator_composite(), AtomKind::Superatom) +
        Eigen::Matrix2cd::Identity())
           .cwiseAbs()
           .maxCoeff(),
       1e-10);

  // teleportation of a fixed probe state through each translation
  for (int nu = 1; nu <= 4; ++nu) {
    AtomKind source =
        (nu == 1 || nu == 2) ? AtomKind::Single : AtomKind::Superatom;
    ContextOptions opt;
    opt.slots = 1;
    opt.initial_kinds = {source};
    ProtocolContext ctx(opt);
    cplx alpha(0.6, 0.0), beta(0.48, 0.64);
    ctx.set_data_state(1, alpha, beta);
    ctx.temporal_translation(nu, 1);
    Eigen::VectorXcd amps = ctx.data_amplitudes();
    cplx overlap = std::conj(alpha) * amps(0) + std::conj(beta) * amps(1);
    line("teleportation_T" + std::to_string(nu), 1.0 - std::norm(overlap),
         1e-10);
  }

  // noise closed form vs the composed channel route
  double noise_err = 0;
  cplx alpha(0.6, 0.0), beta(0.48, 0.64);
  for (double p : {1e-4, 1e-3, 1e-2, 0.1})
    noise_err = std::max(noise_err, (noisy_translation(alpha, beta, p) -
                                     noisy_translation_composed(alpha, beta, p))
                                        .cwiseAbs()
                                        .maxCoeff());
  line("noisy_translation_closed_form", noise_err, 1e-12);

  if (cfg.inject_failure) line("injected_failure", 1.0, 1e-10);

  NoiseParams params;
  os << "# F_T preset: " << fmtg(params.translation_fidelity())
     << " (~0.99)\n";
  return all_ok ? 0 : 1;
}

int cmd_qft3_demo(const RunConfig &cfg) {
  Schedule sched = qft3_reference_schedule();
  Output out(cfg.output_path);
  std::ostream &os = out.stream();
  os << "# qubits=3 modes=" << sched.mode_count
     << " steps=" << sched.logical_steps << " events=" << sched.events.size()
     << "\n";
  DenseState amps = simulate_schedule(sched, cfg.basis_input);
  os << "basis\tre\tim\tmodulus\n";
  for (Eigen::Index j = 0; j < amps.size(); ++j)
    os << j << "\t" << fmtg(amps(j).real()) << "\t" << fmtg(amps(j).imag())
       << "\t" << fmtg(std::abs(amps(j))) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"maqcy: pulse-level compiler and simulator for blockaded "
               "neutral-atom temporal-mode circuits"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App *sub, bool needs_circuit) {
    auto *c = sub->add_option("--circuit", cfg.circuit_path,
                              "circuit file (one gate per line)");
    if (needs_circuit) c->required();
    sub->add_option("--params", cfg.params_path,
                    "noise parameter file (key=value lines)");
    sub->add_option("--out", cfg.output_path, "output file (default stdout)");
  };

  CLI::App *comp = app.add_subcommand("compile", "compile a circuit");
  add_common(comp, true);

  CLI::App *sim = app.add_subcommand("simulate", "replay or noise statistics");
  add_common(sim, false);
  sim->add_option("--seed", cfg.seed, "random seed");
  sim->add_flag("--noise", cfg.noise, "noisy translation statistics");
  sim->add_option("--samples", cfg.samples, "Monte-Carlo samples per point");
  sim->add_option("--p-sweep", cfg.p_sweep,
                  "lo:hi:steps geometric sweep of the decay probability");
  sim->add_option("--input", cfg.basis_input, "computational basis input");

  CLI::App *ver = app.add_subcommand("verify", "run the identity checks");
  ver->add_option("--out", cfg.output_path, "output file (default stdout)");
  ver->add_flag("--inject-failure", cfg.inject_failure,
                "force one failing check (self-test hook)");

  CLI::App *est = app.add_subcommand("estimate", "resource report");
  add_common(est, true);

  CLI::App *demo = app.add_subcommand("qft3-demo",
                                      "reference Fourier schedule demo");
  demo->add_option("--out", cfg.output_path, "output file (default stdout)");
  demo->add_option("--input", cfg.basis_input, "computational basis input");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (comp->parsed()) return cmd_compile(cfg);
    if (sim->parsed()) return cmd_simulate(cfg);
    if (ver->parsed()) return cmd_verify(cfg);
    if (est->parsed()) return cmd_estimate(cfg);
    if (demo->parsed()) return cmd_qft3_demo(cfg);
  } catch (const ParseError &e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const ProtocolError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
