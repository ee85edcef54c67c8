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

#include "sparse_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mcm {

namespace {

constexpr double kZeroTol = 1e-14;

void bump(std::size_t* work, std::size_t n = 1) {
  if (work) {
    *work += n;
  }
}

bool controls_pass(const std::string& key, const std::vector<ControlBit>& controls) {
  for (const auto& [pos, want] : controls) {
    if ((key[pos] == '1' ? 1 : 0) != want) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::optional<std::size_t> SparseState::position_of(Qubit q) const {
  auto it = std::lower_bound(qubits.begin(), qubits.end(), q);
  if (it == qubits.end() || *it != q) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - qubits.begin());
}

double SparseState::norm() const {
  double total = 0.0;
  for (const auto& [key, amp] : amps) {
    total += std::norm(amp);
  }
  return std::sqrt(total);
}

double SparseState::prob_one(std::size_t pos) const {
  double total = 0.0;
  for (const auto& [key, amp] : amps) {
    if (key[pos] == '1') {
      total += std::norm(amp);
    }
  }
  return total;
}

bool SparseState::bit_definite(std::size_t pos, int* value) const {
  if (amps.empty()) {
    return false;
  }
  const char first = amps.begin()->first[pos];
  for (const auto& [key, amp] : amps) {
    if (key[pos] != first) {
      return false;
    }
  }
  if (value) {
    *value = first == '1' ? 1 : 0;
  }
  return true;
}

void SparseState::prune(double tol) {
  for (auto it = amps.begin(); it != amps.end();) {
    if (std::abs(it->second) <= tol) {
      it = amps.erase(it);
    } else {
      ++it;
    }
  }
  renormalize();
}

void SparseState::renormalize() {
  const double n = norm();
  if (n <= kZeroTol) {
    throw std::runtime_error("state norm vanished");
  }
  for (auto& [key, amp] : amps) {
    amp /= n;
  }
}

SparseState make_zero_state(std::vector<Qubit> qubits) {
  SparseState s;
  s.qubits = std::move(qubits);
  s.amps.emplace(std::string(s.qubits.size(), '0'), cplx(1.0, 0.0));
  return s;
}

SparseState tensor(const SparseState& a, const SparseState& b) {
  SparseState out;
  out.qubits.reserve(a.qubits.size() + b.qubits.size());
  // Merge the sorted qubit lists, remembering where each output position
  // reads from: (source, position in that source's key).
  std::vector<std::pair<int, std::size_t>> from;
  std::size_t i = 0, j = 0;
  while (i < a.qubits.size() || j < b.qubits.size()) {
    const bool take_a = j >= b.qubits.size() ||
                        (i < a.qubits.size() && a.qubits[i].index < b.qubits[j].index);
    if (take_a) {
      out.qubits.push_back(a.qubits[i]);
      from.emplace_back(0, i++);
    } else {
      out.qubits.push_back(b.qubits[j]);
      from.emplace_back(1, j++);
    }
  }
  for (std::size_t k = 1; k < out.qubits.size(); ++k) {
    if (out.qubits[k - 1] == out.qubits[k]) {
      throw std::invalid_argument("tensor of overlapping qubit sets");
    }
  }
  std::string key(out.qubits.size(), '0');
  for (const auto& [ka, va] : a.amps) {
    for (const auto& [kb, vb] : b.amps) {
      for (std::size_t k = 0; k < from.size(); ++k) {
        key[k] = from[k].first == 0 ? ka[from[k].second] : kb[from[k].second];
      }
      out.amps.emplace(key, va * vb);
    }
  }
  return out;
}

void apply_1q(SparseState& s, std::size_t pos, const Mat2& m, std::size_t* work) {
  std::map<std::string, cplx> next;
  for (const auto& [key, amp] : s.amps) {
    bump(work);
    const int bit = key[pos] == '1' ? 1 : 0;
    for (int out = 0; out < 2; ++out) {
      const cplx coeff = m(out, bit);
      if (std::abs(coeff) <= kZeroTol) {
        continue;
      }
      std::string nk = key;
      nk[pos] = out ? '1' : '0';
      auto [it, inserted] = next.emplace(std::move(nk), coeff * amp);
      if (!inserted) {
        it->second += coeff * amp;
      }
    }
  }
  for (auto it = next.begin(); it != next.end();) {
    if (std::abs(it->second) <= kZeroTol) {
      it = next.erase(it);
    } else {
      ++it;
    }
  }
  s.amps = std::move(next);
}

void apply_swap(SparseState& s, std::size_t pos_a, std::size_t pos_b, std::size_t* work) {
  std::map<std::string, cplx> next;
  for (const auto& [key, amp] : s.amps) {
    bump(work);
    std::string nk = key;
    std::swap(nk[pos_a], nk[pos_b]);
    next.emplace(std::move(nk), amp);
  }
  s.amps = std::move(next);
}

void apply_controlled_1q(SparseState& s, const std::vector<ControlBit>& controls, std::size_t pos,
                         const Mat2& m, std::size_t* work) {
  std::map<std::string, cplx> next;
  for (const auto& [key, amp] : s.amps) {
    bump(work);
    if (!controls_pass(key, controls)) {
      auto [it, inserted] = next.emplace(key, amp);
      if (!inserted) {
        it->second += amp;
      }
      continue;
    }
    const int bit = key[pos] == '1' ? 1 : 0;
    for (int out = 0; out < 2; ++out) {
      const cplx coeff = m(out, bit);
      if (std::abs(coeff) <= kZeroTol) {
        continue;
      }
      std::string nk = key;
      nk[pos] = out ? '1' : '0';
      auto [it, inserted] = next.emplace(std::move(nk), coeff * amp);
      if (!inserted) {
        it->second += coeff * amp;
      }
    }
  }
  for (auto it = next.begin(); it != next.end();) {
    if (std::abs(it->second) <= kZeroTol) {
      it = next.erase(it);
    } else {
      ++it;
    }
  }
  s.amps = std::move(next);
}

void apply_controlled_swap(SparseState& s, const std::vector<ControlBit>& controls,
                           std::size_t pos_a, std::size_t pos_b, std::size_t* work) {
  std::map<std::string, cplx> next;
  for (const auto& [key, amp] : s.amps) {
    bump(work);
    std::string nk = key;
    if (controls_pass(nk, controls)) {
      std::swap(nk[pos_a], nk[pos_b]);
    }
    auto [it, inserted] = next.emplace(std::move(nk), amp);
    if (!inserted) {
      it->second += amp;
    }
  }
  s.amps = std::move(next);
}

void collapse(SparseState& s, std::size_t pos, int outcome) {
  const char want = outcome ? '1' : '0';
  std::map<std::string, cplx> next;
  for (const auto& [key, amp] : s.amps) {
    if (key[pos] != want) {
      continue;
    }
    std::string nk = key;
    nk.erase(pos, 1);
    next.emplace(std::move(nk), amp);
  }
  if (next.empty()) {
    throw std::runtime_error("collapse onto zero-probability outcome");
  }
  s.amps = std::move(next);
  s.qubits.erase(s.qubits.begin() + static_cast<std::ptrdiff_t>(pos));
  s.renormalize();
}

void drop_position(SparseState& s, std::size_t pos) {
  std::map<std::string, cplx> next;
  for (const auto& [key, amp] : s.amps) {
    std::string nk = key;
    nk.erase(pos, 1);
    next.emplace(std::move(nk), amp);
  }
  s.amps = std::move(next);
  s.qubits.erase(s.qubits.begin() + static_cast<std::ptrdiff_t>(pos));
}

}  // namespace mcm
