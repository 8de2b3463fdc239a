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
 * PXP-constrained state engine.
 *
 * Atoms (and superatoms, treated as effective two-level units with a
 * sqrt(M)-enhanced Rabi frequency) are registered with positions; blockade is
 * a binary predicate on pairwise distance. A global species-selective pulse
 * drives every active atom of that species, with each drive term projected
 * onto all blockade neighbors being in |g>. Basis convention: unit i of the
 * registry is bit i of the basis index (little-endian), bit value 1 = |r>.
 */

#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "pulse_algebra.hpp"

namespace maqcy {

struct AtomSpec {
  std::string id;
  Species species = Species::A;
  AtomKind kind = AtomKind::Single;
  int ensemble_size = 1;  // M; 1 for single atoms, >= 2 for superatoms
  Eigen::Vector2d position{0, 0};
  bool parked = false;  // population offloaded to metastable g' for transport

  double rabi_factor() const {
    return kind == AtomKind::Superatom ? std::sqrt(double(ensemble_size))
                                       : 1.0;
  }
};

struct BlockadeRadii {
  double aa = 5.0;  // micrometers
  double bb = 5.0;
  double ab = 8.0;

  double radius(Species s1, Species s2) const {
    if (s1 == s2) return s1 == Species::A ? aa : bb;
    return ab;
  }
};

class AtomRegistry {
 public:
  static constexpr double min_separation = 1e-9;

  void add(const AtomSpec &atom) {
    if (atom.id.empty()) throw ProtocolError("atom id must be non-empty");
    if (find(atom.id) >= 0)
      throw ProtocolError("duplicate atom id: " + atom.id);
    if (atom.kind == AtomKind::Superatom && atom.ensemble_size < 2)
      throw ProtocolError("superatom requires M >= 2: " + atom.id);
    if (atom.kind == AtomKind::Single && atom.ensemble_size != 1)
      throw ProtocolError("single atom requires M = 1: " + atom.id);
    for (const AtomSpec &other : atoms_) {
      if ((other.position - atom.position).norm() < min_separation)
        throw ProtocolError("coincident positions: " + atom.id + " and " +
                            other.id);
    }
    atoms_.push_back(atom);
  }

  /** Removes the atom and returns its former index. */
  int remove(const std::string &id) {
    int idx = find(id);
    if (idx < 0) throw ProtocolError("unknown atom id: " + id);
    atoms_.erase(atoms_.begin() + idx);
    return idx;
  }

  int find(const std::string &id) const {
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      if (atoms_[i].id == id) return int(i);
    return -1;
  }

  int index_of(const std::string &id) const {
    int idx = find(id);
    if (idx < 0) throw ProtocolError("unknown atom id: " + id);
    return idx;
  }

  const AtomSpec &at(int i) const { return atoms_.at(i); }
  AtomSpec &at(int i) { return atoms_.at(i); }
  const AtomSpec &get(const std::string &id) const { return atoms_.at(index_of(id)); }
  AtomSpec &get(const std::string &id) { return atoms_.at(index_of(id)); }
  int size() const { return int(atoms_.size()); }
  const std::vector<AtomSpec> &atoms() const { return atoms_; }

 private:
  std::vector<AtomSpec> atoms_;
};

class BlockadeGraph {
 public:
  bool adjacent(const std::string &a, const std::string &b) const {
    return edges_.count(key(a, b)) > 0;
  }

  std::size_t edge_count() const { return edges_.size(); }

  void add_edge(const std::string &a, const std::string &b) {
    if (a == b) throw ProtocolError("self blockade edge: " + a);
    edges_.insert(key(a, b));
  }

 private:
  static std::pair<std::string, std::string> key(const std::string &a,
                                                 const std::string &b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  }
  std::set<std::pair<std::string, std::string>> edges_;
};

inline BlockadeGraph build_blockade_graph(const AtomRegistry &registry,
                                          const BlockadeRadii &radii) {
  BlockadeGraph graph;
  for (int i = 0; i < registry.size(); ++i) {
    for (int j = i + 1; j < registry.size(); ++j) {
      const AtomSpec &a = registry.at(i);
      const AtomSpec &b = registry.at(j);
      double d = (a.position - b.position).norm();
      if (d < radii.radius(a.species, b.species)) graph.add_edge(a.id, b.id);
    }
  }
  return graph;
}

enum class StateRep { Statevector, Density };
enum class EvolveMethod { ExactExponential, DerivedUnitary };

class QuantumState {
 public:
  static QuantumState ground(int units, StateRep rep = StateRep::Statevector) {
    QuantumState s;
    s.rep_ = rep;
    s.n_ = units;
    std::size_t dim = std::size_t(1) << units;
    if (rep == StateRep::Statevector) {
      s.psi_ = Eigen::VectorXcd::Zero(dim);
      s.psi_(0) = 1.0;
    } else {
      s.rho_ = Eigen::MatrixXcd::Zero(dim, dim);
      s.rho_(0, 0) = 1.0;
    }
    return s;
  }

  StateRep rep() const { return rep_; }
  int unit_count() const { return n_; }
  std::size_t dim() const { return std::size_t(1) << n_; }
  const Eigen::VectorXcd &statevector() const { return psi_; }
  Eigen::VectorXcd &statevector() { return psi_; }
  const Eigen::MatrixXcd &density() const { return rho_; }

  double norm() const {
    return rep_ == StateRep::Statevector ? psi_.norm()
                                         : std::abs(rho_.trace());
  }

  void apply_matrix(const Eigen::MatrixXcd &u) {
    if (u.rows() != Eigen::Index(dim()))
      throw ProtocolError("dimension mismatch between state and operator");
    if (rep_ == StateRep::Statevector)
      psi_ = u * psi_;
    else
      rho_ = u * rho_ * u.adjoint();
  }

  /** Applies a 2x2 unitary to one unit, restricted to basis states where all
   * listed control units are in |g>; other components are untouched. */
  void apply_controlled_single(int unit, const Unitary2 &u,
                               const std::vector<int> &controls_in_g) {
    check_unit(unit);
    std::size_t mask = std::size_t(1) << unit;
    std::size_t cmask = 0;
    for (int c : controls_in_g) {
      check_unit(c);
      if (c == unit) throw ProtocolError("unit cannot control itself");
      cmask |= std::size_t(1) << c;
    }
    if (rep_ == StateRep::Statevector) {
      for (std::size_t i = 0; i < dim(); ++i) {
        if ((i & mask) || (i & cmask)) continue;
        std::size_t j = i | mask;
        cplx a = psi_(i), b = psi_(j);
        psi_(i) = u(0, 0) * a + u(0, 1) * b;
        psi_(j) = u(1, 0) * a + u(1, 1) * b;
      }
    } else {
      Eigen::MatrixXcd full = embed_controlled(unit, u, cmask);
      rho_ = full * rho_ * full.adjoint();
    }
  }

  /** Multiplies the amplitude of every basis state with the unit in |r> by
   * e^{i angle} (a diagonal, blockade-independent phase gate). */
  void apply_phase(int unit, double angle) {
    check_unit(unit);
    std::size_t mask = std::size_t(1) << unit;
    cplx ph = std::exp(cplx(0, angle));
    if (rep_ == StateRep::Statevector) {
      for (std::size_t i = 0; i < dim(); ++i)
        if (i & mask) psi_(i) *= ph;
    } else {
      Eigen::VectorXcd d(dim());
      for (std::size_t i = 0; i < dim(); ++i) d(i) = (i & mask) ? ph : 1.0;
      rho_ = d.asDiagonal() * rho_ * d.conjugate().asDiagonal();
    }
  }

  double excited_population(int unit) const {
    check_unit(unit);
    std::size_t mask = std::size_t(1) << unit;
    double pop = 0;
    for (std::size_t i = 0; i < dim(); ++i) {
      if (!(i & mask)) continue;
      pop += rep_ == StateRep::Statevector ? std::norm(psi_(i))
                                           : std::real(rho_(i, i));
    }
    return pop;
  }

  /** Appends a fresh unit in |g> as the new highest bit. */
  void append_unit() {
    std::size_t d = dim();
    n_ += 1;
    if (rep_ == StateRep::Statevector) {
      Eigen::VectorXcd grown = Eigen::VectorXcd::Zero(2 * d);
      grown.head(d) = psi_;
      psi_ = std::move(grown);
    } else {
      Eigen::MatrixXcd grown = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
      grown.topLeftCorner(d, d) = rho_;
      rho_ = std::move(grown);
    }
  }

  /** Removes a unit that is in |g> (r-population below tol); the retained
   * units' state is unchanged. Higher bits shift down by one. */
  void remove_unit(int unit, double tol = 1e-10) {
    check_unit(unit);
    double rpop = excited_population(unit);
    if (rpop > tol)
      throw ProtocolError("cannot displace atom with residual r-population " +
                          std::to_string(rpop));
    std::size_t lowmask = (std::size_t(1) << unit) - 1;
    std::size_t d = dim() / 2;
    auto src = [&](std::size_t i) {
      return (i & lowmask) | ((i & ~lowmask) << 1);
    };
    if (rep_ == StateRep::Statevector) {
      Eigen::VectorXcd shrunk(d);
      for (std::size_t i = 0; i < d; ++i) shrunk(i) = psi_(src(i));
      psi_ = std::move(shrunk);
      psi_.normalize();
    } else {
      Eigen::MatrixXcd shrunk(d, d);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) shrunk(i, j) = rho_(src(i), src(j));
      double tr = std::real(shrunk.trace());
      rho_ = shrunk / tr;
    }
    n_ -= 1;
  }

  /** Born-rule probabilities for each {g,r}-string over the listed units
   * (string position 0 = first listed unit). */
  std::map<std::string, double> probabilities(
      const std::vector<int> &units) const {
    for (int u : units) check_unit(u);
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < dim(); ++i) {
      double pr = rep_ == StateRep::Statevector ? std::norm(psi_(i))
                                                : std::real(rho_(i, i));
      if (pr <= 0) continue;
      std::string key;
      key.reserve(units.size());
      for (int u : units)
        key.push_back((i >> u) & 1 ? 'r' : 'g');
      out[key] += pr;
    }
    return out;
  }

 private:
  void check_unit(int unit) const {
    if (unit < 0 || unit >= n_)
      throw ProtocolError("unit index out of range");
  }

  Eigen::MatrixXcd embed_controlled(int unit, const Unitary2 &u,
                                    std::size_t cmask) const {
    std::size_t d = dim();
    std::size_t mask = std::size_t(1) << unit;
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Identity(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      if ((i & mask) || (i & cmask)) continue;
      std::size_t j = i | mask;
      full(i, i) = u(0, 0);
      full(i, j) = u(0, 1);
      full(j, i) = u(1, 0);
      full(j, j) = u(1, 1);
    }
    return full;
  }

  StateRep rep_ = StateRep::Statevector;
  int n_ = 0;
  Eigen::VectorXcd psi_;
  Eigen::MatrixXcd rho_;
};

struct GlobalPulseEvent {
  PulseSpec pulse;
  Species target_species = Species::A;

  explicit GlobalPulseEvent(const PulseSpec &p)
      : pulse(p), target_species(p.species) {}
  GlobalPulseEvent() = default;
};

namespace detail {

inline std::vector<int> blockade_controls(const AtomRegistry &registry,
                                          const BlockadeGraph &graph, int i) {
  std::vector<int> controls;
  for (int j = 0; j < registry.size(); ++j) {
    if (j == i || registry.at(j).parked) continue;
    if (graph.adjacent(registry.at(i).id, registry.at(j).id))
      controls.push_back(j);
  }
  return controls;
}

}  // namespace detail

/** Evolves the state under one global species-selective pulse.
 *
 * exact_exponential builds the full PXP Hamiltonian and exponentiates it
 * (active subspace limited to 2^14); derived_unitary applies per-atom
 * blockade-controlled rotations, exact whenever simultaneously driven atoms
 * have disjoint drive supports (always true in this protocol since driven
 * same-species atoms are never mutually blockaded).
 */
inline QuantumState apply_global_pulse(
    const QuantumState &state, const GlobalPulseEvent &event,
    const AtomRegistry &registry, const BlockadeGraph &graph,
    EvolveMethod method = EvolveMethod::ExactExponential) {
  if (registry.size() != state.unit_count())
    throw ProtocolError("dimension mismatch between state and atom registry");
  QuantumState out = state;
  std::vector<int> driven;
  for (int i = 0; i < registry.size(); ++i) {
    const AtomSpec &a = registry.at(i);
    if (a.species == event.target_species && !a.parked) driven.push_back(i);
  }
  if (driven.empty()) return out;

  const PulseSpec &pulse = event.pulse;
  double tau = pulse.inverse ? -pulse.area_theta : pulse.area_theta;

  if (method == EvolveMethod::DerivedUnitary) {
    for (int i : driven) {
      double theta = registry.at(i).rabi_factor() * tau;
      Unitary2 u = axis_rotation(theta, pulse.phase_phi);
      out.apply_controlled_single(i, u,
                                  detail::blockade_controls(registry, graph, i));
    }
    return out;
  }

  if (state.unit_count() > 14)
    throw ProtocolError("exact_exponential limited to 14 units");
  std::size_t dim = state.dim();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  cplx offdiag = 0.5 * cplx(std::cos(pulse.phase_phi), std::sin(pulse.phase_phi));
  for (int i : driven) {
    double omega = registry.at(i).rabi_factor();
    std::size_t mask = std::size_t(1) << i;
    std::size_t cmask = 0;
    for (int c : detail::blockade_controls(registry, graph, i))
      cmask |= std::size_t(1) << c;
    for (std::size_t b = 0; b < dim; ++b) {
      if ((b & mask) || (b & cmask)) continue;
      std::size_t e = b | mask;
      // drive term (omega/2)(cos(phi) X + sin(phi) Y) on atom i
      h(e, b) += omega * offdiag;
      h(b, e) += omega * std::conj(offdiag);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  Eigen::VectorXcd phases(dim);
  for (std::size_t k = 0; k < dim; ++k)
    phases(k) = std::exp(cplx(0, -solver.eigenvalues()(k) * tau));
  Eigen::MatrixXcd u = solver.eigenvectors() *
                       phases.asDiagonal() *
                       solver.eigenvectors().adjoint();
  out.apply_matrix(u);
  return out;
}

/** Simulates M mutually blockaded atoms in the full 2^M product space under
 * a global drive of Rabi frequency omega, and fits the ground-population
 * oscillation frequency on the supplied time grid. */
inline double collective_rabi_frequency(int m, double omega,
                                        const std::vector<double> &grid) {
  if (m < 1 || m > 6) throw ProtocolError("M outside supported range [1, 6]");
  if (grid.size() < 8) throw ProtocolError("time grid too short for a fit");
  std::size_t dim = std::size_t(1) << m;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < m; ++i) {
    std::size_t mask = std::size_t(1) << i;
    std::size_t cmask = (dim - 1) & ~mask;  // all-to-all blockade
    for (std::size_t b = 0; b < dim; ++b) {
      if ((b & mask) || (b & cmask)) continue;
      h(b | mask, b) += omega / 2;
      h(b, b | mask) += omega / 2;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  Eigen::VectorXcd c0 = solver.eigenvectors().adjoint().col(0);

  std::vector<double> y(grid.size());  // 2 P_ground(t) - 1
  for (std::size_t k = 0; k < grid.size(); ++k) {
    cplx amp = 0;
    for (std::size_t e = 0; e < dim; ++e)
      amp += solver.eigenvectors()(0, e) *
             std::exp(cplx(0, -solver.eigenvalues()(e) * grid[k])) * c0(e);
    y[k] = 2 * std::norm(amp) - 1;
  }

  // Initial frequency estimate from the first zero crossing of y(t).
  double w_est = 0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (y[k - 1] > 0 && y[k] <= 0) {
      double t0 = grid[k - 1] + (grid[k] - grid[k - 1]) * y[k - 1] /
                                    (y[k - 1] - y[k]);
      w_est = pi / (2 * t0);
      break;
    }
  }
  if (w_est == 0) throw ProtocolError("no oscillation observed on grid");

  auto loss = [&](double w) {
    double s = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      double d = y[k] - std::cos(w * grid[k]);
      s += d * d;
    }
    return s;
  };
  // Golden-section refinement of the least-squares frequency.
  double lo = 0.7 * w_est, hi = 1.4 * w_est;
  const double gr = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = loss(x1), f2 = loss(x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = loss(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = loss(x2);
    }
  }
  return (lo + hi) / 2;
}

/** Born-rule outcome distribution over {g,r} strings for the listed atoms. */
inline std::map<std::string, double> measure(const QuantumState &state,
                                             const std::vector<std::string> &ids,
                                             const AtomRegistry &registry) {
  std::vector<int> units;
  units.reserve(ids.size());
  for (const std::string &id : ids) units.push_back(registry.index_of(id));
  return state.probabilities(units);
}

/** Samples outcome strings with a seeded generator. */
inline std::map<std::string, int> sample_measure(
    const QuantumState &state, const std::vector<std::string> &ids,
    const AtomRegistry &registry, int shots, std::mt19937_64 &rng) {
  auto dist = measure(state, ids, registry);
  std::vector<std::string> keys;
  std::vector<double> weights;
  for (const auto &[k, p] : dist) {
    keys.push_back(k);
    weights.push_back(p);
  }
  std::discrete_distribution<int> dd(weights.begin(), weights.end());
  std::map<std::string, int> counts;
  for (int s = 0; s < shots; ++s) counts[keys[dd(rng)]] += 1;
  return counts;
}

/** Loads a registry from text: one atom per line `id species kind M x y`,
 * `#` starts a comment. */
inline AtomRegistry load_registry(std::istream &in) {
  AtomRegistry reg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string id, species, kind;
    if (!(ls >> id)) continue;
    AtomSpec atom;
    atom.id = id;
    double x = 0, y = 0;
    int m = 0;
    if (!(ls >> species >> kind >> m >> x >> y))
      throw ParseError(lineno, "expected `id species kind M x y`");
    if (species == "A")
      atom.species = Species::A;
    else if (species == "B")
      atom.species = Species::B;
    else
      throw ParseError(lineno, "unknown species: " + species);
    if (kind == "single")
      atom.kind = AtomKind::Single;
    else if (kind == "superatom")
      atom.kind = AtomKind::Superatom;
    else
      throw ParseError(lineno, "unknown kind: " + kind);
    atom.ensemble_size = m;
    atom.position = Eigen::Vector2d(x, y);
    try {
      reg.add(atom);
    } catch (const ProtocolError &e) {
      throw ParseError(lineno, e.what());
    }
  }
  return reg;
}

}  // namespace maqcy
