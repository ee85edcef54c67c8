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

#include "gates.hpp"

#include <cmath>
#include <stdexcept>

namespace mcm {

namespace {

struct KindInfo {
  GateKind kind;
  std::string_view name;
  std::size_t params;
  std::size_t targets;
};

constexpr KindInfo kKinds[] = {
    {GateKind::id, "id", 0, 1},  {GateKind::x, "x", 0, 1},      {GateKind::y, "y", 0, 1},
    {GateKind::z, "z", 0, 1},    {GateKind::h, "h", 0, 1},      {GateKind::s, "s", 0, 1},
    {GateKind::sdg, "sdg", 0, 1}, {GateKind::t, "t", 0, 1},     {GateKind::tdg, "tdg", 0, 1},
    {GateKind::swap, "swap", 0, 2}, {GateKind::rx, "rx", 1, 1}, {GateKind::ry, "ry", 1, 1},
    {GateKind::rz, "rz", 1, 1},  {GateKind::u, "u", 3, 1},
};

const KindInfo& info(GateKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) {
      return k;
    }
  }
  throw std::invalid_argument("unknown gate kind");
}

}  // namespace

std::size_t gate_num_params(GateKind kind) { return info(kind).params; }

std::size_t gate_num_targets(GateKind kind) { return info(kind).targets; }

std::string_view gate_name(GateKind kind) { return info(kind).name; }

std::optional<GateKind> gate_kind_from_name(std::string_view name) {
  for (const auto& k : kKinds) {
    if (k.name == name) {
      return k.kind;
    }
  }
  return std::nullopt;
}

bool gate_is_diagonal(GateKind kind) {
  switch (kind) {
    case GateKind::id:
    case GateKind::z:
    case GateKind::s:
    case GateKind::sdg:
    case GateKind::t:
    case GateKind::tdg:
    case GateKind::rz:
      return true;
    default:
      return false;
  }
}

bool gate_permutes_basis(GateKind kind) {
  return gate_is_diagonal(kind) || kind == GateKind::x || kind == GateKind::y;
}

Mat2 gate_matrix2(GateKind kind, const std::vector<double>& params) {
  if (params.size() != gate_num_params(kind)) {
    throw std::invalid_argument("wrong parameter count for gate");
  }
  const cplx i(0.0, 1.0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Mat2 g;
  switch (kind) {
    case GateKind::id:
      g.m = {1, 0, 0, 1};
      break;
    case GateKind::x:
      g.m = {0, 1, 1, 0};
      break;
    case GateKind::y:
      g.m = {0, -i, i, 0};
      break;
    case GateKind::z:
      g.m = {1, 0, 0, -1};
      break;
    case GateKind::h:
      g.m = {inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2};
      break;
    case GateKind::s:
      g.m = {1, 0, 0, i};
      break;
    case GateKind::sdg:
      g.m = {1, 0, 0, -i};
      break;
    case GateKind::t:
      g.m = {1, 0, 0, std::exp(i * (M_PI / 4.0))};
      break;
    case GateKind::tdg:
      g.m = {1, 0, 0, std::exp(-i * (M_PI / 4.0))};
      break;
    case GateKind::rx: {
      const double c = std::cos(params[0] / 2.0), s = std::sin(params[0] / 2.0);
      g.m = {c, -i * s, -i * s, c};
      break;
    }
    case GateKind::ry: {
      const double c = std::cos(params[0] / 2.0), s = std::sin(params[0] / 2.0);
      g.m = {c, -s, s, c};
      break;
    }
    case GateKind::rz: {
      g.m = {std::exp(-i * (params[0] / 2.0)), 0, 0, std::exp(i * (params[0] / 2.0))};
      break;
    }
    case GateKind::u: {
      const double theta = params[0], phi = params[1], lambda = params[2];
      const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
      g.m = {c, -std::exp(i * lambda) * s, std::exp(i * phi) * s,
             std::exp(i * (phi + lambda)) * c};
      break;
    }
    case GateKind::swap:
      throw std::invalid_argument("swap has no 2x2 matrix");
  }
  return g;
}

}  // namespace mcm
