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

#ifndef MCM_STATS_HPP
#define MCM_STATS_HPP

#include <string>
#include <vector>

#include "circuit.hpp"
#include "rewrite.hpp"

namespace mcm {

/// JSON summary of one optimization run.  All fields except wall_time_ms are
/// deterministic functions of the input; pass a negative wall time to omit
/// the field.
std::string stats_json(const Circuit& before, const Circuit& after,
                       const RewriteReport& report, double wall_time_ms = -1.0);

/// JSON array of validation findings.
std::string violations_json(const std::vector<Violation>& vs);

}  // namespace mcm

#endif  // MCM_STATS_HPP
