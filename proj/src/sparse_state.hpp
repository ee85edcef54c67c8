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

#ifndef MCM_SPARSE_STATE_HPP
#define MCM_SPARSE_STATE_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "gates.hpp"

namespace mcm {

/// Pure state over an explicit subset of qubits, stored as a map from basis
/// bitstrings to amplitudes.  Key position i holds the bit of qubits[i]; the
/// qubit list is kept sorted by index.  Only nonzero entries are stored, so
/// cost scales with the number of entries rather than with 2^n.
struct SparseState {
  std::vector<Qubit> qubits;
  std::map<std::string, cplx> amps;

  std::size_t num_entries() const { return amps.size(); }

  /// Index of q within the key string, or nullopt if q is not covered.
  std::optional<std::size_t> position_of(Qubit q) const;

  double norm() const;

  /// Sum of |amp|^2 over entries whose bit at pos is 1.
  double prob_one(std::size_t pos) const;

  /// True when every entry agrees on the bit at pos; reports that bit.
  bool bit_definite(std::size_t pos, int* value) const;

  /// Drop entries with |amp| <= tol, then rescale to unit norm.
  void prune(double tol);
  void renormalize();
};

/// |0...0> over the given qubits (must be sorted, may be empty).
SparseState make_zero_state(std::vector<Qubit> qubits);

/// Tensor product; qubit sets must be disjoint.  Entry count multiplies.
SparseState tensor(const SparseState& a, const SparseState& b);

/// Apply a single-qubit matrix at key position pos.  The work counter, when
/// given, is incremented once per amplitude read so callers can assert cost
/// bounds that depend on entry count, not qubit count.
void apply_1q(SparseState& s, std::size_t pos, const Mat2& m, std::size_t* work = nullptr);

/// Exchange the bits at two key positions.
void apply_swap(SparseState& s, std::size_t pos_a, std::size_t pos_b, std::size_t* work = nullptr);

/// Control on the key bit at .first being equal to .second (0 or 1).
using ControlBit = std::pair<std::size_t, int>;

void apply_controlled_1q(SparseState& s, const std::vector<ControlBit>& controls, std::size_t pos,
                         const Mat2& m, std::size_t* work = nullptr);
void apply_controlled_swap(SparseState& s, const std::vector<ControlBit>& controls,
                           std::size_t pos_a, std::size_t pos_b, std::size_t* work = nullptr);

/// Project onto bit==outcome at pos, remove that key position and the qubit it
/// tracks, and renormalize.  Requires nonzero probability for the outcome.
void collapse(SparseState& s, std::size_t pos, int outcome);

/// Remove a key position whose bit is definite without conditioning (the
/// caller asserts definiteness); keys shrink by one character.
void drop_position(SparseState& s, std::size_t pos);

}  // namespace mcm

#endif  // MCM_SPARSE_STATE_HPP
