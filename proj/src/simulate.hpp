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

#ifndef MCM_SIMULATE_HPP
#define MCM_SIMULATE_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "circuit.hpp"
#include "gates.hpp"

namespace mcm {

/// Thrown when an exact simulation would exceed the configured size limits.
class LimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense statevector over all qubits.  Index convention: the bit of qubit q
/// inside an amplitude index i is (i >> (n_qubits - 1 - q)) & 1, so qubit 0
/// owns the most significant bit and |q0 q1 ... > reads left to right.
struct StateVec {
  std::uint32_t n_qubits = 0;
  std::vector<cplx> amps;
};

StateVec make_basis(std::uint32_t n_qubits);

/// Exact simulation of a measurement-free, unconditional circuit.
/// Throws LimitError beyond 14 qubits and std::invalid_argument if the
/// circuit contains measurements, conditions, or probabilistic gates.
StateVec simulate_static(const Circuit& c);

/// One stochastic execution path: its total probability, final state, and
/// the classical bits as written along the way (unwritten bits read 0).
struct Branch {
  double probability = 0.0;
  StateVec state;
  std::vector<int> bits;
};

/// Complete branch enumeration of a dynamic circuit.
struct OutputEnsemble {
  std::uint32_t n_qubits = 0;
  std::uint32_t n_clbits = 0;
  std::vector<Clbit> outputs;
  std::vector<Branch> branches;
};

/// Follow every measurement outcome and every probabilistic choice, pruning
/// paths below 1e-12 total probability.  Throws LimitError beyond 12 qubits,
/// 20 probabilistic gates, or 2^20 live branches.
OutputEnsemble simulate_dynamic(const Circuit& c);

/// In-place dense gate application helpers (shared with the verifier).
void apply_dense(StateVec& v, const BaseOp& op);

}  // namespace mcm

#endif  // MCM_SIMULATE_HPP
