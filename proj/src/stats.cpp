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

#include "stats.hpp"

#include <json.hpp>

namespace mcm {

using ordered_json = nlohmann::ordered_json;

std::string stats_json(const Circuit& before, const Circuit& after,
                       const RewriteReport& report, double wall_time_ms) {
  ordered_json j;
  j["qubits"] = before.n_qubits;
  j["clbits"] = before.n_clbits;
  j["gates_before"] = count_gates(before);
  j["gates_after"] = count_gates(after);
  j["measurements_before"] = count_measurements(before);
  j["measurements_after"] = count_measurements(after);
  j["prob_gates_added"] = report.prob_gates_added;
  j["ifgates_converted"] = report.ifgates_converted;
  j["depth_before"] = depth(before);
  j["depth_after"] = depth(after);

  ordered_json ms = ordered_json::array();
  for (const auto& m : report.measurements) {
    ordered_json e;
    e["index"] = m.index;
    e["qubit"] = m.qubit;
    e["bit"] = m.bit;
    e["decision"] = to_string(m.decision);
    if (m.decision == DecisionKind::skipped) {
      e["reason"] = to_string(m.reason);
    }
    e["uses_converted"] = m.uses_converted;
    e["p_one"] = m.p_one;
    ms.push_back(std::move(e));
  }
  j["measurements"] = std::move(ms);
  if (wall_time_ms >= 0.0) {
    j["wall_time_ms"] = wall_time_ms;
  }
  return j.dump(2);
}

std::string violations_json(const std::vector<Violation>& vs) {
  ordered_json arr = ordered_json::array();
  for (const auto& v : vs) {
    ordered_json e;
    if (v.instruction == Violation::npos) {
      e["instruction"] = nullptr;
    } else {
      e["instruction"] = v.instruction;
    }
    e["message"] = v.message;
    arr.push_back(std::move(e));
  }
  return arr.dump(2);
}

}  // namespace mcm
