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

#ifndef MCM_EQUIVALENCE_HPP
#define MCM_EQUIVALENCE_HPP

#include <string>

#include "simulate.hpp"

namespace mcm {

struct EquivalenceReport {
  bool equivalent = false;
  double max_density_diff = 0.0;
  double max_distribution_diff = 0.0;
};

/// Compare two branch enumerations as observable ensembles: the distribution
/// over declared output bits must match, and for every output value the
/// probability-weighted density matrix of the surviving quantum state must
/// match entrywise.  Density matrices are compared row by row so memory stays
/// linear in the state size.  Mismatched qubit counts or output lists report
/// distance 1.
EquivalenceReport ensembles_equal(const OutputEnsemble& a, const OutputEnsemble& b,
                                  double tol = 1e-9);

struct OptimizationCheck {
  bool checked = false;  // false when the circuits exceed simulation limits
  bool equivalent = false;
  double max_density_diff = 0.0;
  double max_distribution_diff = 0.0;
  std::string limit_reason;
};

/// Simulate both circuits exhaustively and compare their ensembles.
OptimizationCheck check_optimization(const Circuit& before, const Circuit& after,
                                     double tol = 1e-9);

}  // namespace mcm

#endif  // MCM_EQUIVALENCE_HPP
