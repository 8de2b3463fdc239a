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
 * Amplitude-damping noise model of the temporal mode translation.
 *
 * The Q-Pair density matrix lives in the PXP-allowed three-level basis
 *   index 0: |g_A g_B>,  index 1: |g_A r_B>,  index 2: |r_A g_B>
 * (|r_A r_B> is excluded by blockade). Amplitude damping with per-gate decay
 * probability p = Gamma t_g / 2 acts on both atoms after each gate; erasure
 * projects out the data-atom Rydberg component and renormalizes.
 */

#pragma once

#include <istream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "core.hpp"

namespace maqcy {

struct NoiseParams {
  double gamma = 1.0 / 60e-6;  // Rydberg decay rate, 1/s
  double t_g = 5e-8;           // single-qubit gate time, s
  double p = 4e-4;             // per-gate decay probability (preset value)
  double move_time = 5e-4;     // displacement duration, s
  double f_x = 0.9997;         // bit-flip gate fidelity
  double f_d_gamma = 0.99997;  // displacement decay fidelity
  double f_d_mov = 0.995;      // displacement transport fidelity

  double derived_p() const { return gamma * t_g / 2; }

  /** Overall translation fidelity F_T = F_X^8 (F_D,Gamma F_D,mov)^2. */
  double translation_fidelity() const {
    return std::pow(f_x, 8) * std::pow(f_d_gamma * f_d_mov, 2);
  }
};

/** key=value lines: gamma, t_g, p, move_time, f_x, f_d_gamma, f_d_mov. */
inline NoiseParams load_noise_params(std::istream &in) {
  NoiseParams params;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string trimmed;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) trimmed.push_back(c);
    if (trimmed.empty()) continue;
    auto eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw ParseError(lineno, "expected key=value");
    std::string key = trimmed.substr(0, eq);
    double value = 0;
    try {
      value = std::stod(trimmed.substr(eq + 1));
    } catch (...) {
      throw ParseError(lineno, "bad value for " + key);
    }
    if (key == "gamma")
      params.gamma = value;
    else if (key == "t_g")
      params.t_g = value;
    else if (key == "p")
      params.p = value;
    else if (key == "move_time")
      params.move_time = value;
    else if (key == "f_x")
      params.f_x = value;
    else if (key == "f_d_gamma")
      params.f_d_gamma = value;
    else if (key == "f_d_mov")
      params.f_d_mov = value;
    else
      throw ParseError(lineno, "unknown key: " + key);
  }
  if (params.p < 0 || params.p >= 1)
    throw ParseError(0, "p must be in [0, 1)");
  return params;
}

class KrausChannel {
 public:
  explicit KrausChannel(std::vector<Eigen::MatrixXcd> ops)
      : operators_(std::move(ops)) {
    if (operators_.empty()) throw ProtocolError("empty Kraus channel");
  }

  static KrausChannel amplitude_damping(double p) {
    if (p < 0 || p > 1) throw ProtocolError("p must be in [0, 1]");
    Eigen::Matrix2cd k0 = Eigen::Matrix2cd::Zero();
    Eigen::Matrix2cd k1 = Eigen::Matrix2cd::Zero();
    k0(0, 0) = 1;
    k0(1, 1) = std::sqrt(1 - p);
    k1(0, 1) = std::sqrt(p);
    return KrausChannel({k0, k1});
  }

  const std::vector<Eigen::MatrixXcd> &operators() const { return operators_; }

  bool complete(double tol = 1e-12) const {
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(operators_[0].cols(),
                                                  operators_[0].cols());
    for (const auto &k : operators_) sum += k.adjoint() * k;
    return (sum - Eigen::MatrixXcd::Identity(sum.rows(), sum.cols()))
               .cwiseAbs()
               .maxCoeff() <= tol;
  }

  Eigen::MatrixXcd apply(const Eigen::MatrixXcd &rho) const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
    for (const auto &k : operators_) out += k * rho * k.adjoint();
    return out;
  }

 private:
  std::vector<Eigen::MatrixXcd> operators_;
};

using QPairDensity = Eigen::Matrix3cd;

/** Blockade-limited X on the auxiliary atom: swaps |g_A g_B> and |g_A r_B>;
 * |r_A g_B> is frozen. */
inline QPairDensity qpair_xb_matrix() {
  QPairDensity m = QPairDensity::Zero();
  m(0, 1) = m(1, 0) = m(2, 2) = 1;
  return m;
}

/** Blockade-limited X on the data atom: swaps |g_A g_B> and |r_A g_B>;
 * |g_A r_B> is frozen. */
inline QPairDensity qpair_xa_matrix() {
  QPairDensity m = QPairDensity::Zero();
  m(0, 2) = m(2, 0) = m(1, 1) = 1;
  return m;
}

/** One amplitude-damping step on both atoms of the Q-Pair in the
 * three-level basis: Kraus operators (K_i^A (x) K_j^B) restricted to the
 * blockade-allowed subspace. */
inline QPairDensity apply_qpair_channel(const QPairDensity &rho, double p) {
  if (p < 0 || p > 1) throw ProtocolError("p must be in [0, 1]");
  double s = std::sqrt(1 - p), q = std::sqrt(p);
  QPairDensity k00 = QPairDensity::Zero();
  k00(0, 0) = 1;
  k00(1, 1) = s;
  k00(2, 2) = s;
  QPairDensity k01 = QPairDensity::Zero();
  k01(0, 1) = q;  // aux decay r_B -> g_B
  QPairDensity k10 = QPairDensity::Zero();
  k10(0, 2) = q;  // data decay r_A -> g_A
  return k00 * rho * k00.adjoint() + k01 * rho * k01.adjoint() +
         k10 * rho * k10.adjoint();
}

/** Erasure: projects out the data-atom Rydberg component (basis index 2) and
 * renormalizes. Returns the renormalized density and the discarded
 * probability. Throws on total erasure. */
inline std::pair<QPairDensity, double> erase_rydberg(const QPairDensity &rho) {
  double discarded = std::real(rho(2, 2));
  double kept = std::real(rho(0, 0)) + std::real(rho(1, 1));
  if (kept <= 0) throw ProtocolError("total erasure: no population retained");
  QPairDensity out = rho;
  out.row(2).setZero();
  out.col(2).setZero();
  out /= kept;
  return {out, discarded};
}

namespace detail {

/** Half-translation map in closed form: transfers a 2x2 density (basis
 * {g, r}) through the damped gate pair with erasure; the transferred state
 * swaps g and r roles. */
inline Eigen::Matrix2cd half_translation(const Eigen::Matrix2cd &rho,
                                         double p) {
  double d = 1 - p + p * p;
  double x = std::real(rho(0, 0));
  double y = std::real(rho(1, 1));
  cplx c = rho(0, 1);  // <g|rho|r>
  Eigen::Matrix2cd out;
  out(0, 0) = (p + (1 - p) * (1 - p) * y) / d;
  out(1, 1) = x * (1 - p) * (1 - p) / d;
  out(0, 1) = std::conj(c) * std::pow(1 - p, 1.5) / d;
  out(1, 0) = std::conj(out(0, 1));
  return out;
}

}  // namespace detail

/** Final data-qubit density after one noisy translation of the pure state
 * alpha|g> + beta|r>, in closed form. */
inline Eigen::Matrix2cd noisy_translation(cplx alpha, cplx beta, double p) {
  double norm = std::norm(alpha) + std::norm(beta);
  if (std::abs(norm - 1) > 1e-9)
    throw ProtocolError("input amplitudes must be normalized");
  if (p < 0 || p >= 1) throw ProtocolError("p must be in [0, 1)");
  Eigen::Matrix2cd rho;
  rho(0, 0) = std::norm(alpha);
  rho(0, 1) = alpha * std::conj(beta);
  rho(1, 0) = std::conj(alpha) * beta;
  rho(1, 1) = std::norm(beta);
  return detail::half_translation(detail::half_translation(rho, p), p);
}

/** Same map built step-by-step from the three-level channel, the
 * blockade-limited gates and the erasure projection (cross-check route). */
inline Eigen::Matrix2cd noisy_translation_composed(cplx alpha, cplx beta,
                                                   double p) {
  Eigen::Matrix2cd qubit;
  qubit(0, 0) = std::norm(alpha);
  qubit(0, 1) = alpha * std::conj(beta);
  qubit(1, 0) = std::conj(alpha) * beta;
  qubit(1, 1) = std::norm(beta);
  for (int half = 0; half < 2; ++half) {
    // embed: carrier atom holds `qubit`, partner atom fresh in |g>.
    // First half: carrier = A (basis indices 0/2), gates X_B then X_A.
    // Second half: carrier = B (indices 0/1), gates X_A then X_B.
    QPairDensity rho = QPairDensity::Zero();
    int r_index = half == 0 ? 2 : 1;
    rho(0, 0) = qubit(0, 0);
    rho(0, r_index) = qubit(0, 1);
    rho(r_index, 0) = qubit(1, 0);
    rho(r_index, r_index) = qubit(1, 1);
    QPairDensity g1 = half == 0 ? qpair_xb_matrix() : qpair_xa_matrix();
    QPairDensity g2 = half == 0 ? qpair_xa_matrix() : qpair_xb_matrix();
    rho = apply_qpair_channel(QPairDensity(g1 * rho * g1.adjoint()), p);
    rho = apply_qpair_channel(QPairDensity(g2 * rho * g2.adjoint()), p);
    // erasure of the atom left behind (the one that held the state)
    int erased = r_index;
    double kept = std::real(rho(0, 0)) +
                  std::real(rho(erased == 2 ? 1 : 2, erased == 2 ? 1 : 2));
    if (kept <= 0) throw ProtocolError("total erasure");
    rho.row(erased).setZero();
    rho.col(erased).setZero();
    rho /= kept;
    int out_index = erased == 2 ? 1 : 2;
    qubit(0, 0) = rho(0, 0);
    qubit(0, 1) = rho(0, out_index);
    qubit(1, 0) = rho(out_index, 0);
    qubit(1, 1) = rho(out_index, out_index);
  }
  return qubit;
}

/** Reference: unprotected single atom decaying over 4 t_g. */
inline Eigen::Matrix2cd single_atom_decay_reference(cplx alpha, cplx beta,
                                                    double p) {
  if (4 * p >= 1) throw ProtocolError("single-atom reference requires 4p < 1");
  Eigen::Matrix2cd rho;
  rho(0, 0) = std::norm(alpha) + 4 * p * std::norm(beta);
  rho(0, 1) = alpha * std::conj(beta) * std::sqrt(1 - 4 * p);
  rho(1, 0) = std::conj(alpha) * beta * std::sqrt(1 - 4 * p);
  rho(1, 1) = (1 - 4 * p) * std::norm(beta);
  return rho;
}

enum class NoiseProtocol { SingleAtom, QPair };

inline double state_fidelity(cplx alpha, cplx beta,
                             const Eigen::Matrix2cd &rho) {
  Eigen::Vector2cd psi(alpha, beta);
  return std::real(psi.dot(rho * psi));  // <psi|rho|psi>
}

struct HaarStats {
  double mean = 0;
  double stderr_of_mean = 0;
};

/** Monte-Carlo Haar average of the translation fidelity. Sampling:
 * alpha = cos(chi/2), beta = e^{i phi} sin(chi/2), cos(chi) uniform on
 * [-1, 1], phi uniform on [0, 2 pi). */
inline HaarStats haar_average_fidelity(NoiseProtocol protocol, double p,
                                       std::size_t samples,
                                       std::uint64_t seed) {
  if (samples < 1) throw ProtocolError("need at least one sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double sum = 0, sumsq = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    double cos_chi = 2 * u01(rng) - 1;
    double phi = 2 * pi * u01(rng);
    double chi = std::acos(cos_chi);
    cplx alpha = std::cos(chi / 2);
    cplx beta = std::exp(cplx(0, phi)) * std::sin(chi / 2);
    Eigen::Matrix2cd rho = protocol == NoiseProtocol::QPair
                               ? noisy_translation(alpha, beta, p)
                               : single_atom_decay_reference(alpha, beta, p);
    double f = state_fidelity(alpha, beta, rho);
    sum += f;
    sumsq += f * f;
  }
  double n = double(samples);
  double mean = sum / n;
  double var = std::max(0.0, sumsq / n - mean * mean);
  return {mean, std::sqrt(var / n)};
}

/** Exact Haar mean via the analytic x = |alpha|^2 integral (the fidelity is
 * a polynomial in x, so the Haar average is the closed-form integral over
 * x ~ Uniform[0, 1]). Used for the scaling-slope fits, where the O(p^2)
 * signal is far below Monte-Carlo resolution. */
inline double haar_exact_mean_fidelity(NoiseProtocol protocol, double p) {
  if (protocol == NoiseProtocol::SingleAtom) {
    if (4 * p >= 1) throw ProtocolError("requires 4p < 1");
    // integral of x(x + 4p(1-x)) + 2x(1-x)sqrt(1-4p) + (1-4p)(1-x)^2 over x
    return 1.0 / 3 + 4 * p / 6 + std::sqrt(1 - 4 * p) / 3 + (1 - 4 * p) / 3;
  }
  double d = 1 - p + p * p;
  double w = 1 - p;
  // F(x) = [x(pd + x w^4) + (1-x)w^2(p + w^2(1-x)) + 2x(1-x)w^3] / d^2
  double num = p * d / 2 + p * w * w / 2 + (2.0 / 3) * w * w * w * w +
               (1.0 / 3) * w * w * w;
  return num / (d * d);
}

}  // namespace maqcy
