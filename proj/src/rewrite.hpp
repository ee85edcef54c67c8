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

#ifndef MCM_REWRITE_HPP
#define MCM_REWRITE_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "analysis.hpp"
#include "circuit.hpp"

namespace mcm {

/// Angles for a u gate sending a given single-qubit state to |1>.
struct RotationSpec {
  double theta;
  double phi;
  double lambda;
};

/// theta = 2*atan2(|alpha|, |beta|), phi = -arg(alpha) - arg(beta),
/// lambda = arg(alpha) - arg(beta), with arg(0) taken as 0.  The resulting
/// u(theta, phi, lambda) maps alpha|0> + beta|1> to |1> up to global phase.
RotationSpec synthesize_rotation(const QubitAmplitudes& psi);

enum class DecisionKind : std::uint8_t {
  probabilistic,         // measure replaced by rotation + probabilistic flip,
                         // conditioned gates turned into quantum controls
  probabilistic_unused,  // same replacement, outcome had no readers
  deterministic,         // outcome certain: measure dropped, readers resolve
  basis_control,         // classical mixture: readers control on the qubit
  skipped
};

enum class SkipReason : std::uint8_t {
  none,
  output_bit,        // the target bit is part of the declared output
  bit_overwritten,   // a later measurement rewrites the bit before its last read
  use_touches_qubit, // a conditioned gate acts on the measured qubit itself
  qubit_disturbed,   // something touches the qubit between measure and last read
  not_pure,          // the qubit is entangled with the rest of its group
  no_static_info,    // propagation lost track of the qubit
  disabled           // the rewrite class is switched off
};

const char* to_string(DecisionKind k);
const char* to_string(SkipReason r);

/// Readers of a measurement's bit and whether they can be converted.
struct Eligibility {
  bool ok = false;
  SkipReason reason = SkipReason::none;
  std::vector<std::size_t> uses;  // indices into prog of conditioned gates
};

/// Scan forward from the measurement at meas_index: collect every conditioned
/// gate reading its bit and check the conversion conditions (bit not output,
/// bit not rewritten before its last read, no reader acting on the measured
/// qubit, nothing but barriers and the readers touching the qubit up to the
/// last read).
Eligibility eligible_uses(const std::vector<Instruction>& prog, std::size_t meas_index,
                          const std::vector<Clbit>& outputs);

/// Turn `if bit == v : base` into base quantum-controlled on q (positively
/// for v == 1, negatively for v == 0).
Instruction convert_use(const IfGate& f, Qubit q);

struct OptimizeOptions {
  QcpConfig qcp{};
  bool rewrite_unused = true;          // rewrite measurements nobody reads
  bool convert_basis_diagonal = true;  // rewrite measurements of basis mixtures
};

struct MeasurementRecord {
  std::size_t index;      // instruction index in the input circuit
  std::uint32_t qubit;
  std::uint32_t bit;
  DecisionKind decision;
  SkipReason reason;
  std::size_t uses_converted;
  double p_one;           // Born probability of outcome 1 when known
};

struct RewriteReport {
  std::vector<MeasurementRecord> measurements;
  std::size_t prob_gates_added = 0;
  std::size_t ifgates_converted = 0;
  PropagationStats propagation{};
};

struct OptimizeResult {
  Circuit circuit;
  RewriteReport report;
};

/// Propagate static state, simplify gates, and replace every measurement the
/// analysis proves removable.  Forward sweeps repeat until nothing changes,
/// since removing a dead gate can unblock an earlier measurement; the result
/// is a fixpoint of itself.  The input must be valid (see validate()).
OptimizeResult optimize(const Circuit& c, const OptimizeOptions& opt = {});

}  // namespace mcm

#endif  // MCM_REWRITE_HPP
