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

#include "simulate.hpp"

#include <cmath>

namespace mcm {

namespace {

constexpr double kBranchTol = 1e-12;
constexpr std::size_t kMaxBranches = std::size_t{1} << 20;

std::uint64_t qubit_mask(const StateVec& v, Qubit q) {
  return std::uint64_t{1} << (v.n_qubits - 1 - q.index);
}

bool controls_match(std::uint64_t index, std::uint64_t pos_mask, std::uint64_t neg_mask) {
  return (index & pos_mask) == pos_mask && (index & neg_mask) == 0;
}

void apply_gate_dense(StateVec& v, const Gate& g, std::uint64_t pos_mask,
                      std::uint64_t neg_mask) {
  const std::uint64_t size = v.amps.size();
  if (g.kind == GateKind::swap) {
    const std::uint64_t ma = qubit_mask(v, g.targets[0]);
    const std::uint64_t mb = qubit_mask(v, g.targets[1]);
    for (std::uint64_t i = 0; i < size; ++i) {
      if ((i & ma) != 0 || (i & mb) == 0) {
        continue;  // visit each pair once, from the (a=0, b=1) side
      }
      const std::uint64_t j = (i | ma) & ~mb;
      // Controls never sit on the swapped qubits, so i and j agree on them.
      if (!controls_match(i, pos_mask, neg_mask)) {
        continue;
      }
      std::swap(v.amps[i], v.amps[j]);
    }
    return;
  }
  const Mat2 m = gate_matrix2(g.kind, g.params);
  const std::uint64_t mt = qubit_mask(v, g.targets[0]);
  for (std::uint64_t i = 0; i < size; ++i) {
    // Visit the target=0 side of each pair; controls never include the
    // target qubit, so testing them on i covers j as well.
    if ((i & mt) != 0 || !controls_match(i, pos_mask, neg_mask)) {
      continue;
    }
    const std::uint64_t j = i | mt;
    const cplx a0 = v.amps[i];
    const cplx a1 = v.amps[j];
    v.amps[i] = m(0, 0) * a0 + m(0, 1) * a1;
    v.amps[j] = m(1, 0) * a0 + m(1, 1) * a1;
  }
}

}  // namespace

StateVec make_basis(std::uint32_t n_qubits) {
  StateVec v;
  v.n_qubits = n_qubits;
  v.amps.assign(std::uint64_t{1} << n_qubits, cplx(0.0, 0.0));
  v.amps[0] = cplx(1.0, 0.0);
  return v;
}

void apply_dense(StateVec& v, const BaseOp& op) {
  if (const auto* g = std::get_if<Gate>(&op)) {
    apply_gate_dense(v, *g, 0, 0);
    return;
  }
  const auto& c = std::get<Controlled>(op);
  std::uint64_t pos_mask = 0, neg_mask = 0;
  for (Qubit q : c.pos_controls) {
    pos_mask |= qubit_mask(v, q);
  }
  for (Qubit q : c.neg_controls) {
    neg_mask |= qubit_mask(v, q);
  }
  apply_gate_dense(v, c.base, pos_mask, neg_mask);
}

StateVec simulate_static(const Circuit& c) {
  if (!is_static(c)) {
    throw std::invalid_argument("circuit is not static");
  }
  if (c.n_qubits > 14) {
    throw LimitError("static simulation capped at 14 qubits");
  }
  StateVec v = make_basis(c.n_qubits);
  for (const auto& ins : c.instructions) {
    if (const auto* g = std::get_if<Gate>(&ins)) {
      apply_dense(v, BaseOp(*g));
    } else if (const auto* ct = std::get_if<Controlled>(&ins)) {
      apply_dense(v, BaseOp(*ct));
    }
  }
  return v;
}

OutputEnsemble simulate_dynamic(const Circuit& c) {
  if (c.n_qubits > 12) {
    throw LimitError("dynamic simulation capped at 12 qubits");
  }
  std::size_t n_prob = 0;
  for (const auto& ins : c.instructions) {
    n_prob += std::holds_alternative<Prob>(ins) ? 1 : 0;
  }
  if (n_prob > 20) {
    throw LimitError("dynamic simulation capped at 20 probabilistic gates");
  }

  OutputEnsemble out;
  out.n_qubits = c.n_qubits;
  out.n_clbits = c.n_clbits;
  out.outputs = c.outputs;

  std::vector<Branch> live;
  live.push_back({1.0, make_basis(c.n_qubits), std::vector<int>(c.n_clbits, 0)});

  for (const auto& ins : c.instructions) {
    if (std::holds_alternative<Barrier>(ins)) {
      continue;
    }
    if (const auto* g = std::get_if<Gate>(&ins)) {
      for (auto& br : live) {
        apply_dense(br.state, BaseOp(*g));
      }
      continue;
    }
    if (const auto* ct = std::get_if<Controlled>(&ins)) {
      for (auto& br : live) {
        apply_dense(br.state, BaseOp(*ct));
      }
      continue;
    }
    if (const auto* f = std::get_if<IfGate>(&ins)) {
      for (auto& br : live) {
        if (br.bits[f->bit.index] == f->value) {
          apply_dense(br.state, f->base);
        }
      }
      continue;
    }
    if (const auto* p = std::get_if<Prob>(&ins)) {
      std::vector<Branch> next;
      next.reserve(live.size() * 2);
      for (auto& br : live) {
        const double p_fire = br.probability * p->p;
        const double p_skip = br.probability * (1.0 - p->p);
        if (p_fire > kBranchTol) {
          Branch fired = br;
          fired.probability = p_fire;
          apply_dense(fired.state, p->base);
          next.push_back(std::move(fired));
        }
        if (p_skip > kBranchTol) {
          br.probability = p_skip;
          next.push_back(std::move(br));
        }
      }
      live = std::move(next);
      if (live.size() > kMaxBranches) {
        throw LimitError("dynamic simulation branch limit exceeded");
      }
      continue;
    }
    const auto& m = std::get<Measure>(ins);
    std::vector<Branch> next;
    next.reserve(live.size() * 2);
    for (auto& br : live) {
      const std::uint64_t mask = qubit_mask(br.state, m.qubit);
      double p1 = 0.0;
      for (std::uint64_t i = 0; i < br.state.amps.size(); ++i) {
        if (i & mask) {
          p1 += std::norm(br.state.amps[i]);
        }
      }
      const double p0 = 1.0 - p1;
      for (int outcome = 0; outcome < 2; ++outcome) {
        const double pw = outcome ? p1 : p0;
        const double total = br.probability * pw;
        if (total <= kBranchTol) {
          continue;
        }
        Branch nb;
        nb.probability = total;
        nb.bits = br.bits;
        nb.bits[m.bit.index] = outcome;
        nb.state.n_qubits = br.state.n_qubits;
        nb.state.amps.assign(br.state.amps.size(), cplx(0.0, 0.0));
        const double scale = 1.0 / std::sqrt(pw);
        for (std::uint64_t i = 0; i < br.state.amps.size(); ++i) {
          if (((i & mask) != 0) == (outcome == 1)) {
            nb.state.amps[i] = br.state.amps[i] * scale;
          }
        }
        next.push_back(std::move(nb));
      }
    }
    live = std::move(next);
    if (live.size() > kMaxBranches) {
      throw LimitError("dynamic simulation branch limit exceeded");
    }
  }
  out.branches = std::move(live);
  return out;
}

}  // namespace mcm
