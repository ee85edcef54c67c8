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

#ifndef MCM_ENSEMBLE_HPP
#define MCM_ENSEMBLE_HPP

#include <cstdint>
#include <vector>

#include "circuit.hpp"

namespace mcm {

struct WeightedCircuit {
  double probability = 0.0;
  Circuit circuit;
};

/// Distribution over realized static circuits, sorted by descending
/// probability and then by serialized text.
struct Ensemble {
  std::vector<WeightedCircuit> entries;
};

/// Drop identity gates; used before comparing realizations for syntactic
/// equality.
Circuit normalize_circuit(const Circuit& c);

/// Resolve every probabilistic gate with a counter-based PRNG keyed by
/// (seed, instruction index), keeping the wrapped gate when the draw lands
/// below its probability.  The same seed always yields the same circuit.
Circuit compile_shot(const Circuit& c, std::uint64_t seed);

/// The uniform draw compile_shot makes for one instruction; exposed so shot
/// statistics can be reproduced.
double shot_draw(std::uint64_t seed, std::uint64_t instruction_index);

/// Enumerate every probabilistic choice and, for circuits with measurements,
/// every outcome (weighted by the Born rule, simulated exactly).  Each path
/// realizes the static instruction trace it executed: chosen probabilistic
/// gates keep their payload, conditions resolve to their payload or vanish,
/// measurements vanish.  Identical realizations merge.  Paths below 1e-12
/// are dropped.  Throws LimitError past 20 probabilistic gates, past
/// max_entries distinct realizations, or (with measurements) past 12 qubits.
Ensemble enumerate_ensemble(const Circuit& c, std::size_t max_entries = 4096);

/// Run b after a; register counts must match.  Output declarations merge.
Circuit compose_seq(const Circuit& a, const Circuit& b);

/// Run a and b side by side; b's qubits and clbits are shifted past a's.
Circuit compose_par(const Circuit& a, const Circuit& b);

/// Same realizations with the same probabilities, up to tol.
bool ensembles_match(const Ensemble& a, const Ensemble& b, double tol = 1e-12);

}  // namespace mcm

#endif  // MCM_ENSEMBLE_HPP
