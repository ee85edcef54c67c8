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

#include "purity.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace mcm {

namespace {

constexpr double kRatioTol = 1e-9;

std::string erase_at(const std::string& key, std::size_t pos) {
  std::string out = key;
  out.erase(pos, 1);
  return out;
}

bool close(cplx a, cplx b, double scale) {
  return std::abs(a - b) <= kRatioTol * std::max(1.0, scale);
}

}  // namespace

bool purity_test(const SparseState& s, std::size_t pos, std::size_t* comparisons) {
  std::size_t local = 0;
  std::size_t& count = comparisons ? *comparisons : local;
  count = 0;

  std::unordered_map<std::string, cplx> zero_side;
  std::size_t n_zero = 0, n_one = 0;
  for (const auto& [key, amp] : s.amps) {
    if (key[pos] == '0') {
      zero_side.emplace(erase_at(key, pos), amp);
      ++n_zero;
    } else {
      ++n_one;
    }
  }
  if (n_zero == 0 || n_one == 0) {
    return true;
  }
  if (n_zero != n_one) {
    return false;
  }

  bool have_ratio = false;
  cplx ratio;
  for (const auto& [key, amp] : s.amps) {
    if (key[pos] != '1') {
      continue;
    }
    ++count;
    auto it = zero_side.find(erase_at(key, pos));
    if (it == zero_side.end()) {
      return false;
    }
    const cplx r = amp / it->second;
    zero_side.erase(it);
    if (!have_ratio) {
      ratio = r;
      have_ratio = true;
    } else {
      ++count;
      if (!close(r, ratio, std::abs(ratio))) {
        return false;
      }
    }
  }
  return true;
}

Factorization factor_qubit(const SparseState& s, std::size_t pos) {
  if (pos >= s.qubits.size()) {
    throw std::invalid_argument("factor position out of range");
  }
  if (!purity_test(s, pos)) {
    throw std::invalid_argument("not separable");
  }

  std::vector<std::pair<std::string, cplx>> zero_side, one_side;
  for (const auto& [key, amp] : s.amps) {
    auto& side = key[pos] == '0' ? zero_side : one_side;
    side.emplace_back(erase_at(key, pos), amp);
  }

  Factorization out;
  out.remainder.qubits = s.qubits;
  out.remainder.qubits.erase(out.remainder.qubits.begin() + static_cast<std::ptrdiff_t>(pos));

  // Build the remainder from whichever side is populated, with the magnitude
  // of that side folded into the split-off amplitude and the first remainder
  // entry rotated to the positive real axis.
  const auto& primary = zero_side.empty() ? one_side : zero_side;
  double weight = 0.0;
  for (const auto& [key, amp] : primary) {
    weight += std::norm(amp);
  }
  const cplx first = primary.front().second;
  const cplx scale = std::polar(std::sqrt(weight), std::arg(first));
  for (const auto& [key, amp] : primary) {
    out.remainder.amps.emplace(key, amp / scale);
  }

  if (zero_side.empty()) {
    out.qubit_state = {cplx(0.0, 0.0), scale};
  } else if (one_side.empty()) {
    out.qubit_state = {scale, cplx(0.0, 0.0)};
  } else {
    const auto& probe = one_side.front();
    auto it = out.remainder.amps.find(probe.first);
    if (it == out.remainder.amps.end()) {
      throw std::invalid_argument("not separable");
    }
    out.qubit_state = {scale, probe.second / it->second};
  }

  // Cross-check the tensor reconstruction entry by entry.
  for (const auto& [key, amp] : s.amps) {
    const cplx factor = key[pos] == '0' ? out.qubit_state.alpha : out.qubit_state.beta;
    auto it = out.remainder.amps.find(erase_at(key, pos));
    if (it == out.remainder.amps.end() || !close(factor * it->second, amp, std::abs(amp))) {
      throw std::invalid_argument("not separable");
    }
  }
  return out;
}

}  // namespace mcm
