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

#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "gates.hpp"

namespace mcm {

struct Qubit {
  std::uint32_t index = 0;
  auto operator<=>(const Qubit&) const = default;
};

struct Clbit {
  std::uint32_t index = 0;
  auto operator<=>(const Clbit&) const = default;
};

struct Gate {
  GateKind kind = GateKind::id;
  std::vector<double> params;
  std::vector<Qubit> targets;
  bool operator==(const Gate&) const = default;
};

/// Quantum-controlled gate. Positive controls fire on |1>, negative on |0>.
struct Controlled {
  std::vector<Qubit> pos_controls;
  std::vector<Qubit> neg_controls;
  Gate base;
  bool operator==(const Controlled&) const = default;
};

/// Unitary payload of a classically-conditioned or probabilistic instruction.
using BaseOp = std::variant<Gate, Controlled>;

struct Measure {
  Qubit qubit;
  Clbit bit;
  bool operator==(const Measure&) const = default;
};

/// Applies `base` when the classical bit equals `value` (0 or 1).
struct IfGate {
  Clbit bit;
  int value = 1;
  BaseOp base;
  bool operator==(const IfGate&) const = default;
};

/// Compile-time coin flip: `base` is included with probability p, else dropped.
struct Prob {
  double p = 0.0;
  BaseOp base;
  bool operator==(const Prob&) const = default;
};

struct Barrier {
  bool operator==(const Barrier&) const = default;
};

using Instruction = std::variant<Gate, Controlled, Measure, IfGate, Prob, Barrier>;

struct Circuit {
  std::uint32_t n_qubits = 0;
  std::uint32_t n_clbits = 0;
  std::vector<Clbit> outputs;  // sorted, unique; subset of declared clbits
  std::vector<Instruction> instructions;
  bool operator==(const Circuit&) const = default;
};

struct Violation {
  std::size_t instruction;  // index into instructions, or npos for header issues
  std::string message;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  bool operator==(const Violation&) const = default;
};

/// Structural well-formedness check; returns every violation found.
std::vector<Violation> validate(const Circuit& c, std::uint32_t max_controls = 3);

std::size_t count_measurements(const Circuit& c);
/// True when the circuit has no Measure, IfGate, or Prob instructions.
bool is_static(const Circuit& c);
/// Wire-scheduling depth; barriers synchronize every qubit wire.
std::size_t depth(const Circuit& c);
/// Instructions excluding barriers.
std::size_t count_gates(const Circuit& c);

/// All qubits an instruction touches (targets and controls), unordered.
std::vector<Qubit> qubits_of(const Instruction& ins);
std::vector<Qubit> qubits_of(const BaseOp& op);
bool touches_qubit(const Instruction& ins, Qubit q);
bool touches_qubit(const BaseOp& op, Qubit q);
bool is_output(const Circuit& c, Clbit b);

Instruction to_instruction(const BaseOp& op);

}  // namespace mcm
