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

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace mcm {

using cplx = std::complex<double>;

enum class GateKind : std::uint8_t {
  id,
  x,
  y,
  z,
  h,
  s,
  sdg,
  t,
  tdg,
  swap,
  rx,
  ry,
  rz,
  u,
};

std::size_t gate_num_params(GateKind kind);
std::size_t gate_num_targets(GateKind kind);
std::string_view gate_name(GateKind kind);
std::optional<GateKind> gate_kind_from_name(std::string_view name);

/// Diagonal in the computational basis (applies phases only).
bool gate_is_diagonal(GateKind kind);
/// Maps every computational basis state to a basis state, up to phase.
bool gate_permutes_basis(GateKind kind);

/// Column-major-free 2x2 complex matrix, indexed (row, column).
struct Mat2 {
  std::array<cplx, 4> m{};
  cplx operator()(int r, int c) const { return m[static_cast<std::size_t>(r * 2 + c)]; }
  cplx& operator()(int r, int c) { return m[static_cast<std::size_t>(r * 2 + c)]; }
};

/// Matrix of a non-swap gate kind. `params` must match gate_num_params.
Mat2 gate_matrix2(GateKind kind, const std::vector<double>& params);

}  // namespace mcm
