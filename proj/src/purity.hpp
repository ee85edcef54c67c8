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

#ifndef MCM_PURITY_HPP
#define MCM_PURITY_HPP

#include <cstddef>

#include "sparse_state.hpp"

namespace mcm {

/// Single-qubit state alpha|0> + beta|1>.
struct QubitAmplitudes {
  cplx alpha;
  cplx beta;
};

/// Result of splitting one qubit off a separable state: the state factors as
/// qubit_state (x) remainder up to reordering of key positions.
struct Factorization {
  QubitAmplitudes qubit_state;
  SparseState remainder;
};

/// Decide whether the qubit at key position pos is unentangled from the rest
/// of the state.  Splits the entries by that bit, pairs them through a hash of
/// the bit-deleted keys (each partner consumed once), and accepts exactly when
/// every paired amplitude ratio matches the first within 1e-9 relative
/// tolerance.  A bit that never varies is trivially separable.  The optional
/// counter reports how many pairing and ratio checks ran; it stays at most
/// quadratic in the entry count.
bool purity_test(const SparseState& s, std::size_t pos, std::size_t* comparisons = nullptr);

/// Factor the qubit at pos out of a separable state.  The remainder keeps the
/// other qubits with the same ordering and is normalized with its first entry
/// real and positive; the split-off amplitudes absorb the relative phase.
/// Throws std::invalid_argument if the state does not factor within 1e-9.
Factorization factor_qubit(const SparseState& s, std::size_t pos);

}  // namespace mcm

#endif  // MCM_PURITY_HPP
