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

#include "equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace mcm {

namespace {

std::string output_key(const Branch& br, const std::vector<Clbit>& outputs) {
  std::string key(outputs.size(), '0');
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    key[k] = br.bits[outputs[k].index] ? '1' : '0';
  }
  return key;
}

using BranchGroups = std::map<std::string, std::vector<const Branch*>>;

BranchGroups group_branches(const OutputEnsemble& e) {
  BranchGroups groups;
  for (const Branch& br : e.branches) {
    groups[output_key(br, e.outputs)].push_back(&br);
  }
  return groups;
}

/// Row r of the unnormalized Sum_b p_b |psi_b><psi_b| restricted to a group.
void density_row(const std::vector<const Branch*>& group, std::uint64_t r,
                 std::vector<cplx>& row) {
  std::fill(row.begin(), row.end(), cplx(0.0, 0.0));
  for (const Branch* br : group) {
    const cplx ar = br->state.amps[r];
    if (ar == cplx(0.0, 0.0)) {
      continue;
    }
    const cplx w = br->probability * ar;
    for (std::uint64_t c = 0; c < row.size(); ++c) {
      row[c] += w * std::conj(br->state.amps[c]);
    }
  }
}

}  // namespace

EquivalenceReport ensembles_equal(const OutputEnsemble& a, const OutputEnsemble& b,
                                  double tol) {
  EquivalenceReport rep;
  auto sorted = [](std::vector<Clbit> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  if (a.n_qubits != b.n_qubits || sorted(a.outputs) != sorted(b.outputs)) {
    rep.max_density_diff = 1.0;
    rep.max_distribution_diff = 1.0;
    return rep;
  }

  const BranchGroups ga = group_branches(a);
  const BranchGroups gb = group_branches(b);
  static const std::vector<const Branch*> kEmpty;

  std::vector<std::string> keys;
  for (const auto& [key, g] : ga) {
    keys.push_back(key);
  }
  for (const auto& [key, g] : gb) {
    if (!ga.count(key)) {
      keys.push_back(key);
    }
  }

  const std::uint64_t dim = std::uint64_t{1} << a.n_qubits;
  std::vector<cplx> row_a(dim), row_b(dim);
  for (const std::string& key : keys) {
    const auto ia = ga.find(key);
    const auto ib = gb.find(key);
    const auto& la = ia == ga.end() ? kEmpty : ia->second;
    const auto& lb = ib == gb.end() ? kEmpty : ib->second;

    double pa = 0.0, pb = 0.0;
    for (const Branch* br : la) {
      pa += br->probability;
    }
    for (const Branch* br : lb) {
      pb += br->probability;
    }
    rep.max_distribution_diff = std::max(rep.max_distribution_diff, std::abs(pa - pb));

    for (std::uint64_t r = 0; r < dim; ++r) {
      density_row(la, r, row_a);
      density_row(lb, r, row_b);
      for (std::uint64_t c = 0; c < dim; ++c) {
        rep.max_density_diff = std::max(rep.max_density_diff, std::abs(row_a[c] - row_b[c]));
      }
    }
  }
  rep.equivalent = rep.max_density_diff <= tol && rep.max_distribution_diff <= tol;
  return rep;
}

OptimizationCheck check_optimization(const Circuit& before, const Circuit& after, double tol) {
  OptimizationCheck out;
  try {
    const OutputEnsemble ea = simulate_dynamic(before);
    const OutputEnsemble eb = simulate_dynamic(after);
    const EquivalenceReport rep = ensembles_equal(ea, eb, tol);
    out.checked = true;
    out.equivalent = rep.equivalent;
    out.max_density_diff = rep.max_density_diff;
    out.max_distribution_diff = rep.max_distribution_diff;
  } catch (const LimitError& e) {
    out.limit_reason = e.what();
  }
  return out;
}

}  // namespace mcm
