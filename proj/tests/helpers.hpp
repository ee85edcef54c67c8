/*
 * Copyright 2026 The mcmelim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Shared test utilities: seeded RNG, random states and circuits, and dense
// reference computations that deliberately take a different code path than
// the modules they check.

#ifndef MCM_TESTS_HELPERS_HPP
#define MCM_TESTS_HELPERS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <doctest.h>

#include "analysis.hpp"
#include "circuit.hpp"
#include "simulate.hpp"
#include "sparse_state.hpp"

namespace mcmtest {

inline std::mt19937_64 test_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline mcm::cplx random_amp(std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  return {d(rng), d(rng)};
}

/// Random normalized single-qubit amplitudes (Haar-like via Gaussians).
inline mcm::QubitAmplitudes random_qubit_state(std::mt19937_64& rng) {
  mcm::cplx a = random_amp(rng);
  mcm::cplx b = random_amp(rng);
  double n = std::sqrt(std::norm(a) + std::norm(b));
  return {a / n, b / n};
}

/// Sparse state over qubits 0..n-1 with exactly k random basis entries.
/// k is clamped to the 2^n distinct keys that exist.
inline mcm::SparseState random_sparse_state(std::mt19937_64& rng, std::uint32_t n,
                                            std::size_t k) {
  if (n < 64) k = std::min(k, std::size_t(1) << n);
  std::vector<mcm::Qubit> qubits;
  for (std::uint32_t q = 0; q < n; ++q) qubits.push_back({q});
  std::set<std::string> keys;
  std::uniform_int_distribution<int> bit(0, 1);
  while (keys.size() < k) {
    std::string key(n, '0');
    for (auto& ch : key) ch = bit(rng) ? '1' : '0';
    keys.insert(key);
  }
  mcm::SparseState s;
  s.qubits = qubits;
  for (const auto& key : keys) s.amps[key] = random_amp(rng);
  s.renormalize();
  return s;
}

/// Product of n independent single-qubit states (2^n entries).
inline mcm::SparseState random_product_state(std::mt19937_64& rng, std::uint32_t n) {
  mcm::SparseState s = mcm::make_zero_state({});
  for (std::uint32_t q = 0; q < n; ++q) {
    mcm::QubitAmplitudes psi = random_qubit_state(rng);
    mcm::SparseState one;
    one.qubits = {mcm::Qubit{q}};
    if (std::abs(psi.alpha) > 0) one.amps["0"] = psi.alpha;
    if (std::abs(psi.beta) > 0) one.amps["1"] = psi.beta;
    s = mcm::tensor(s, one);
  }
  return s;
}

/// Dense expansion of a sparse state covering qubits 0..n-1.
inline mcm::StateVec dense_of_sparse(const mcm::SparseState& s, std::uint32_t n) {
  mcm::StateVec v;
  v.n_qubits = n;
  v.amps.assign(std::size_t(1) << n, 0.0);
  for (const auto& [key, amp] : s.amps) {
    std::size_t index = 0;
    for (std::size_t i = 0; i < key.size(); ++i) {
      if (key[i] == '1') index |= std::size_t(1) << (n - 1 - s.qubits[i].index);
    }
    v.amps[index] += amp;
  }
  return v;
}

/// Dense expansion of an analysis state in which every group is known.
/// Fails the calling test if any group has lost exact tracking.
inline mcm::StateVec dense_of_analysis(const mcm::AnalysisState& st) {
  mcm::SparseState all = mcm::make_zero_state({});
  for (const auto& [gid, rec] : st.groups) {
    REQUIRE(rec.tag == mcm::Lattice::known);
    all = mcm::tensor(all, *rec.state);
  }
  return dense_of_sparse(all, static_cast<std::uint32_t>(st.group_of.size()));
}

inline double max_amp_diff(const mcm::StateVec& a, const mcm::StateVec& b) {
  REQUIRE(a.amps.size() == b.amps.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.amps.size(); ++i) {
    m = std::max(m, std::abs(a.amps[i] - b.amps[i]));
  }
  return m;
}

/// Purity of the reduced single-qubit density matrix, computed by brute-force
/// partial trace over the dense state.
inline double reduced_purity(const mcm::StateVec& v, std::uint32_t q) {
  const std::size_t mask = std::size_t(1) << (v.n_qubits - 1 - q);
  double r00 = 0.0;
  double r11 = 0.0;
  mcm::cplx r01 = 0.0;
  for (std::size_t i = 0; i < v.amps.size(); ++i) {
    if (i & mask) continue;
    const std::size_t j = i | mask;
    r00 += std::norm(v.amps[i]);
    r11 += std::norm(v.amps[j]);
    r01 += v.amps[i] * std::conj(v.amps[j]);
  }
  return r00 * r00 + r11 * r11 + 2.0 * std::norm(r01);
}

struct RandomCircuitOpts {
  std::uint32_t n_qubits = 4;
  std::uint32_t n_clbits = 2;
  std::size_t n_instructions = 15;
  std::size_t max_measure = 0;
  std::size_t max_prob = 0;
  bool allow_if = true;
  std::size_t max_controls = 2;
  bool declare_outputs = false;
};

/// Random valid circuit -- conditions only read bits that were measured
/// earlier, and index ranges always hold.
inline mcm::Circuit random_circuit(std::mt19937_64& rng, const RandomCircuitOpts& o) {
  using namespace mcm;
  Circuit c;
  c.n_qubits = o.n_qubits;
  c.n_clbits = o.n_clbits;

  std::uniform_real_distribution<double> angle(-3.1, 3.1);
  std::uniform_real_distribution<double> prob(0.05, 0.95);
  std::uniform_int_distribution<int> coin(0, 1);
  auto pick_qubit = [&] {
    return Qubit{std::uniform_int_distribution<std::uint32_t>(0, o.n_qubits - 1)(rng)};
  };

  const GateKind pool[] = {GateKind::h,  GateKind::x,   GateKind::y,  GateKind::z,
                           GateKind::s,  GateKind::sdg, GateKind::t,  GateKind::tdg,
                           GateKind::rx, GateKind::ry,  GateKind::rz, GateKind::u};
  auto random_gate = [&]() -> Gate {
    GateKind k = pool[std::uniform_int_distribution<std::size_t>(0, std::size(pool) - 1)(rng)];
    Gate g;
    g.kind = k;
    for (std::size_t p = 0; p < gate_num_params(k); ++p) g.params.push_back(angle(rng));
    g.targets.push_back(pick_qubit());
    return g;
  };
  auto random_base = [&]() -> BaseOp {
    bool use_swap = o.n_qubits >= 2 && std::uniform_int_distribution<int>(0, 7)(rng) == 0;
    Gate base;
    if (use_swap) {
      base.kind = GateKind::swap;
      Qubit a = pick_qubit();
      Qubit b = pick_qubit();
      while (b == a) b = pick_qubit();
      base.targets = {a, b};
    } else {
      base = random_gate();
    }
    std::size_t room = o.n_qubits - base.targets.size();
    std::size_t want =
        std::uniform_int_distribution<std::size_t>(0, std::min(o.max_controls, room))(rng);
    if (want == 0) return base;
    Controlled ctl;
    ctl.base = base;
    std::set<std::uint32_t> used;
    for (Qubit t : base.targets) used.insert(t.index);
    while (ctl.pos_controls.size() + ctl.neg_controls.size() < want) {
      Qubit q = pick_qubit();
      if (used.count(q.index)) continue;
      used.insert(q.index);
      (coin(rng) ? ctl.pos_controls : ctl.neg_controls).push_back(q);
    }
    if (ctl.pos_controls.empty() && ctl.neg_controls.empty()) return base;
    return ctl;
  };

  std::size_t measures = 0;
  std::size_t probs = 0;
  std::vector<std::uint32_t> written;
  for (std::size_t i = 0; i < o.n_instructions; ++i) {
    int die = std::uniform_int_distribution<int>(0, 9)(rng);
    if (die == 0 && measures < o.max_measure && o.n_clbits > 0) {
      std::uint32_t b =
          std::uniform_int_distribution<std::uint32_t>(0, o.n_clbits - 1)(rng);
      c.instructions.push_back(Measure{pick_qubit(), Clbit{b}});
      written.push_back(b);
      ++measures;
    } else if (die == 1 && probs < o.max_prob) {
      c.instructions.push_back(Prob{prob(rng), random_base()});
      ++probs;
    } else if (die == 2 && o.allow_if && !written.empty()) {
      std::uint32_t b = written[std::uniform_int_distribution<std::size_t>(
          0, written.size() - 1)(rng)];
      c.instructions.push_back(IfGate{Clbit{b}, coin(rng), random_base()});
    } else if (die == 3) {
      c.instructions.push_back(Barrier{});
    } else {
      c.instructions.push_back(to_instruction(random_base()));
    }
  }
  if (o.declare_outputs && !written.empty()) {
    std::set<std::uint32_t> outs(written.begin(), written.end());
    for (std::uint32_t b : outs) {
      if (coin(rng)) c.outputs.push_back(Clbit{b});
    }
  }
  return c;
}

}  // namespace mcmtest

#endif  // MCM_TESTS_HELPERS_HPP
