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

#include "ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "parser.hpp"
#include "simulate.hpp"

namespace mcm {

namespace {

constexpr double kPathTol = 1e-12;
constexpr std::size_t kMaxLivePaths = std::size_t{1} << 20;

bool is_identity(const Instruction& ins) {
  if (const auto* g = std::get_if<Gate>(&ins)) {
    return g->kind == GateKind::id;
  }
  if (const auto* c = std::get_if<Controlled>(&ins)) {
    return c->base.kind == GateKind::id;
  }
  return false;
}

struct Path {
  double weight = 1.0;
  StateVec state;             // tracked only when the circuit measures
  std::vector<int> bits;
  std::vector<Instruction> realized;
};

void remap(Qubit& q, std::uint32_t dq) { q.index += dq; }
void remap(Clbit& b, std::uint32_t db) { b.index += db; }

void remap_base(BaseOp& op, std::uint32_t dq) {
  if (auto* g = std::get_if<Gate>(&op)) {
    for (Qubit& q : g->targets) {
      remap(q, dq);
    }
    return;
  }
  auto& c = std::get<Controlled>(op);
  for (Qubit& q : c.pos_controls) {
    remap(q, dq);
  }
  for (Qubit& q : c.neg_controls) {
    remap(q, dq);
  }
  for (Qubit& q : c.base.targets) {
    remap(q, dq);
  }
}

Instruction shift_instruction(Instruction ins, std::uint32_t dq, std::uint32_t db) {
  if (auto* g = std::get_if<Gate>(&ins)) {
    for (Qubit& q : g->targets) {
      remap(q, dq);
    }
  } else if (auto* c = std::get_if<Controlled>(&ins)) {
    BaseOp op = std::move(*c);
    remap_base(op, dq);
    ins = to_instruction(op);
  } else if (auto* m = std::get_if<Measure>(&ins)) {
    remap(m->qubit, dq);
    remap(m->bit, db);
  } else if (auto* f = std::get_if<IfGate>(&ins)) {
    remap(f->bit, db);
    remap_base(f->base, dq);
  } else if (auto* p = std::get_if<Prob>(&ins)) {
    remap_base(p->base, dq);
  }
  return ins;
}

}  // namespace

Circuit normalize_circuit(const Circuit& c) {
  Circuit out;
  out.n_qubits = c.n_qubits;
  out.n_clbits = c.n_clbits;
  out.outputs = c.outputs;
  for (const auto& ins : c.instructions) {
    if (!is_identity(ins)) {
      out.instructions.push_back(ins);
    }
  }
  return out;
}

double shot_draw(std::uint64_t seed, std::uint64_t instruction_index) {
  std::uint64_t z = seed + (instruction_index + 1) * 0x9e3779b97f4a7c15ULL;
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

Circuit compile_shot(const Circuit& c, std::uint64_t seed) {
  Circuit out;
  out.n_qubits = c.n_qubits;
  out.n_clbits = c.n_clbits;
  out.outputs = c.outputs;
  for (std::size_t k = 0; k < c.instructions.size(); ++k) {
    if (const auto* p = std::get_if<Prob>(&c.instructions[k])) {
      if (shot_draw(seed, k) < p->p) {
        out.instructions.push_back(to_instruction(p->base));
      }
      continue;
    }
    out.instructions.push_back(c.instructions[k]);
  }
  return out;
}

Ensemble enumerate_ensemble(const Circuit& c, std::size_t max_entries) {
  std::size_t n_prob = 0;
  for (const auto& ins : c.instructions) {
    n_prob += std::holds_alternative<Prob>(ins) ? 1 : 0;
  }
  if (n_prob > 20) {
    throw LimitError("ensemble enumeration capped at 20 probabilistic gates");
  }
  const bool needs_state = count_measurements(c) > 0;
  if (needs_state && c.n_qubits > 12) {
    throw LimitError("ensemble enumeration with measurements capped at 12 qubits");
  }

  std::vector<Path> live(1);
  if (needs_state) {
    live[0].state = make_basis(c.n_qubits);
  }
  live[0].bits.assign(c.n_clbits, 0);

  for (const auto& ins : c.instructions) {
    if (const auto* p = std::get_if<Prob>(&ins)) {
      std::vector<Path> next;
      next.reserve(live.size() * 2);
      for (auto& path : live) {
        const double w_fire = path.weight * p->p;
        const double w_skip = path.weight * (1.0 - p->p);
        if (w_fire > kPathTol) {
          Path fired = path;
          fired.weight = w_fire;
          if (needs_state) {
            apply_dense(fired.state, p->base);
          }
          fired.realized.push_back(to_instruction(p->base));
          next.push_back(std::move(fired));
        }
        if (w_skip > kPathTol) {
          path.weight = w_skip;
          next.push_back(std::move(path));
        }
      }
      live = std::move(next);
    } else if (const auto* m = std::get_if<Measure>(&ins)) {
      std::vector<Path> next;
      next.reserve(live.size() * 2);
      for (auto& path : live) {
        const std::uint64_t mask = std::uint64_t{1}
                                   << (path.state.n_qubits - 1 - m->qubit.index);
        double p1 = 0.0;
        for (std::uint64_t i = 0; i < path.state.amps.size(); ++i) {
          if (i & mask) {
            p1 += std::norm(path.state.amps[i]);
          }
        }
        for (int outcome = 0; outcome < 2; ++outcome) {
          const double pw = outcome ? p1 : 1.0 - p1;
          const double total = path.weight * pw;
          if (total <= kPathTol) {
            continue;
          }
          Path nb = path;
          nb.weight = total;
          nb.bits[m->bit.index] = outcome;
          const double scale = 1.0 / std::sqrt(pw);
          for (std::uint64_t i = 0; i < nb.state.amps.size(); ++i) {
            if (((i & mask) != 0) == (outcome == 1)) {
              nb.state.amps[i] *= scale;
            } else {
              nb.state.amps[i] = cplx(0.0, 0.0);
            }
          }
          next.push_back(std::move(nb));
        }
      }
      live = std::move(next);
    } else if (const auto* f = std::get_if<IfGate>(&ins)) {
      for (auto& path : live) {
        if (path.bits[f->bit.index] == f->value) {
          if (needs_state) {
            apply_dense(path.state, f->base);
          }
          path.realized.push_back(to_instruction(f->base));
        }
      }
    } else {
      for (auto& path : live) {
        if (needs_state) {
          if (const auto* g = std::get_if<Gate>(&ins)) {
            apply_dense(path.state, BaseOp(*g));
          } else if (const auto* ct = std::get_if<Controlled>(&ins)) {
            apply_dense(path.state, BaseOp(*ct));
          }
        }
        path.realized.push_back(ins);
      }
    }
    if (live.size() > kMaxLivePaths) {
      throw LimitError("ensemble enumeration path limit exceeded");
    }
  }

  std::map<std::string, WeightedCircuit> merged;
  for (auto& path : live) {
    Circuit realized;
    realized.n_qubits = c.n_qubits;
    realized.n_clbits = c.n_clbits;
    realized.outputs = c.outputs;
    realized.instructions = std::move(path.realized);
    realized = normalize_circuit(realized);
    std::string key = serialize(realized);
    auto it = merged.find(key);
    if (it == merged.end()) {
      if (merged.size() == max_entries) {
        throw LimitError("ensemble enumeration entry limit exceeded");
      }
      merged.emplace(std::move(key), WeightedCircuit{path.weight, std::move(realized)});
    } else {
      it->second.probability += path.weight;
    }
  }

  Ensemble out;
  for (auto& [key, wc] : merged) {
    out.entries.push_back(std::move(wc));
  }
  std::stable_sort(out.entries.begin(), out.entries.end(),
                   [](const WeightedCircuit& x, const WeightedCircuit& y) {
                     if (x.probability != y.probability) {
                       return x.probability > y.probability;
                     }
                     return serialize(x.circuit) < serialize(y.circuit);
                   });
  return out;
}

Circuit compose_seq(const Circuit& a, const Circuit& b) {
  if (a.n_qubits != b.n_qubits || a.n_clbits != b.n_clbits) {
    throw std::invalid_argument("sequential composition needs matching registers");
  }
  Circuit out = a;
  out.instructions.insert(out.instructions.end(), b.instructions.begin(),
                          b.instructions.end());
  out.outputs.insert(out.outputs.end(), b.outputs.begin(), b.outputs.end());
  std::sort(out.outputs.begin(), out.outputs.end());
  out.outputs.erase(std::unique(out.outputs.begin(), out.outputs.end()), out.outputs.end());
  return out;
}

Circuit compose_par(const Circuit& a, const Circuit& b) {
  Circuit out;
  out.n_qubits = a.n_qubits + b.n_qubits;
  out.n_clbits = a.n_clbits + b.n_clbits;
  out.outputs = a.outputs;
  out.instructions = a.instructions;
  for (const auto& ins : b.instructions) {
    out.instructions.push_back(shift_instruction(ins, a.n_qubits, a.n_clbits));
  }
  for (Clbit bit : b.outputs) {
    out.outputs.push_back(Clbit{bit.index + a.n_clbits});
  }
  std::sort(out.outputs.begin(), out.outputs.end());
  return out;
}

bool ensembles_match(const Ensemble& a, const Ensemble& b, double tol) {
  std::map<std::string, double> ma, mb;
  for (const auto& wc : a.entries) {
    ma[serialize(normalize_circuit(wc.circuit))] += wc.probability;
  }
  for (const auto& wc : b.entries) {
    mb[serialize(normalize_circuit(wc.circuit))] += wc.probability;
  }
  if (ma.size() != mb.size()) {
    return false;
  }
  for (const auto& [key, pa] : ma) {
    const auto it = mb.find(key);
    if (it == mb.end() || std::abs(pa - it->second) > tol) {
      return false;
    }
  }
  return true;
}

}  // namespace mcm
