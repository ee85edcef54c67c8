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

#include "circuit.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace mcm {

namespace {

void append_base_qubits(const BaseOp& op, std::vector<Qubit>& out) {
  if (const auto* g = std::get_if<Gate>(&op)) {
    out.insert(out.end(), g->targets.begin(), g->targets.end());
  } else {
    const auto& c = std::get<Controlled>(op);
    out.insert(out.end(), c.pos_controls.begin(), c.pos_controls.end());
    out.insert(out.end(), c.neg_controls.begin(), c.neg_controls.end());
    out.insert(out.end(), c.base.targets.begin(), c.base.targets.end());
  }
}

void check_gate(const Gate& g, std::uint32_t n_qubits, std::size_t index,
                std::vector<Violation>& out) {
  if (g.params.size() != gate_num_params(g.kind)) {
    out.push_back({index, "wrong parameter count"});
  }
  if (g.targets.size() != gate_num_targets(g.kind)) {
    out.push_back({index, "wrong target count"});
  }
  for (Qubit q : g.targets) {
    if (q.index >= n_qubits) {
      out.push_back({index, "qubit index out of range"});
    }
  }
  for (double p : g.params) {
    if (!std::isfinite(p)) {
      out.push_back({index, "non-finite gate parameter"});
    }
  }
}

void check_base(const BaseOp& op, std::uint32_t n_qubits, std::uint32_t max_controls,
                std::size_t index, std::vector<Violation>& out) {
  if (const auto* g = std::get_if<Gate>(&op)) {
    check_gate(*g, n_qubits, index, out);
  } else {
    const auto& c = std::get<Controlled>(op);
    check_gate(c.base, n_qubits, index, out);
    if (c.pos_controls.empty() && c.neg_controls.empty()) {
      out.push_back({index, "controlled instruction has no controls"});
    }
    if (c.pos_controls.size() + c.neg_controls.size() > max_controls) {
      out.push_back({index, "too many controls"});
    }
    for (Qubit q : c.pos_controls) {
      if (q.index >= n_qubits) {
        out.push_back({index, "qubit index out of range"});
      }
    }
    for (Qubit q : c.neg_controls) {
      if (q.index >= n_qubits) {
        out.push_back({index, "qubit index out of range"});
      }
    }
  }
  std::vector<Qubit> qs;
  append_base_qubits(op, qs);
  std::sort(qs.begin(), qs.end());
  if (std::adjacent_find(qs.begin(), qs.end()) != qs.end()) {
    out.push_back({index, "duplicate qubit within instruction"});
  }
}

}  // namespace

std::vector<Violation> validate(const Circuit& c, std::uint32_t max_controls) {
  std::vector<Violation> out;
  for (Clbit b : c.outputs) {
    if (b.index >= c.n_clbits) {
      out.push_back({Violation::npos, "output bit out of range"});
    }
  }
  std::set<Clbit> written;
  for (std::size_t i = 0; i < c.instructions.size(); ++i) {
    const Instruction& ins = c.instructions[i];
    if (const auto* g = std::get_if<Gate>(&ins)) {
      check_gate(*g, c.n_qubits, i, out);
    } else if (std::holds_alternative<Controlled>(ins)) {
      check_base(BaseOp(std::get<Controlled>(ins)), c.n_qubits, max_controls, i, out);
    } else if (const auto* m = std::get_if<Measure>(&ins)) {
      if (m->qubit.index >= c.n_qubits) {
        out.push_back({i, "qubit index out of range"});
      }
      if (m->bit.index >= c.n_clbits) {
        out.push_back({i, "clbit index out of range"});
      }
      written.insert(m->bit);
    } else if (const auto* f = std::get_if<IfGate>(&ins)) {
      if (f->bit.index >= c.n_clbits) {
        out.push_back({i, "clbit index out of range"});
      } else if (!written.count(f->bit)) {
        out.push_back({i, "conditioned on a bit with no preceding measurement"});
      }
      if (f->value != 0 && f->value != 1) {
        out.push_back({i, "condition value must be 0 or 1"});
      }
      check_base(f->base, c.n_qubits, max_controls, i, out);
    } else if (const auto* p = std::get_if<Prob>(&ins)) {
      if (!(p->p >= 0.0 && p->p <= 1.0)) {
        out.push_back({i, "probability outside [0, 1]"});
      }
      check_base(p->base, c.n_qubits, max_controls, i, out);
    }
  }
  return out;
}

std::size_t count_measurements(const Circuit& c) {
  std::size_t n = 0;
  for (const auto& ins : c.instructions) {
    n += std::holds_alternative<Measure>(ins) ? 1 : 0;
  }
  return n;
}

bool is_static(const Circuit& c) {
  for (const auto& ins : c.instructions) {
    if (std::holds_alternative<Measure>(ins) || std::holds_alternative<IfGate>(ins) ||
        std::holds_alternative<Prob>(ins)) {
      return false;
    }
  }
  return true;
}

std::size_t depth(const Circuit& c) {
  std::vector<std::size_t> qubit_depth(c.n_qubits, 0);
  std::vector<std::size_t> clbit_depth(c.n_clbits, 0);
  std::size_t total = 0;
  for (const auto& ins : c.instructions) {
    if (std::holds_alternative<Barrier>(ins)) {
      std::size_t level = 0;
      for (std::size_t d : qubit_depth) {
        level = std::max(level, d);
      }
      std::fill(qubit_depth.begin(), qubit_depth.end(), level);
      continue;
    }
    std::size_t level = 0;
    for (Qubit q : qubits_of(ins)) {
      level = std::max(level, qubit_depth[q.index]);
    }
    Clbit bit{};
    bool has_bit = false;
    if (const auto* m = std::get_if<Measure>(&ins)) {
      bit = m->bit;
      has_bit = true;
    } else if (const auto* f = std::get_if<IfGate>(&ins)) {
      bit = f->bit;
      has_bit = true;
    }
    if (has_bit && bit.index < c.n_clbits) {
      level = std::max(level, clbit_depth[bit.index]);
    }
    ++level;
    for (Qubit q : qubits_of(ins)) {
      qubit_depth[q.index] = level;
    }
    if (has_bit && bit.index < c.n_clbits) {
      clbit_depth[bit.index] = level;
    }
    total = std::max(total, level);
  }
  return total;
}

std::size_t count_gates(const Circuit& c) {
  std::size_t n = 0;
  for (const auto& ins : c.instructions) {
    n += std::holds_alternative<Barrier>(ins) ? 0 : 1;
  }
  return n;
}

std::vector<Qubit> qubits_of(const BaseOp& op) {
  std::vector<Qubit> out;
  append_base_qubits(op, out);
  return out;
}

std::vector<Qubit> qubits_of(const Instruction& ins) {
  std::vector<Qubit> out;
  if (const auto* g = std::get_if<Gate>(&ins)) {
    out = g->targets;
  } else if (const auto* c = std::get_if<Controlled>(&ins)) {
    append_base_qubits(BaseOp(*c), out);
  } else if (const auto* m = std::get_if<Measure>(&ins)) {
    out.push_back(m->qubit);
  } else if (const auto* f = std::get_if<IfGate>(&ins)) {
    append_base_qubits(f->base, out);
  } else if (const auto* p = std::get_if<Prob>(&ins)) {
    append_base_qubits(p->base, out);
  }
  return out;
}

bool touches_qubit(const BaseOp& op, Qubit q) {
  std::vector<Qubit> qs;
  append_base_qubits(op, qs);
  return std::find(qs.begin(), qs.end(), q) != qs.end();
}

bool touches_qubit(const Instruction& ins, Qubit q) {
  auto qs = qubits_of(ins);
  return std::find(qs.begin(), qs.end(), q) != qs.end();
}

bool is_output(const Circuit& c, Clbit b) {
  return std::find(c.outputs.begin(), c.outputs.end(), b) != c.outputs.end();
}

Instruction to_instruction(const BaseOp& op) {
  if (const auto* g = std::get_if<Gate>(&op)) {
    return *g;
  }
  return std::get<Controlled>(op);
}

}  // namespace mcm
