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

#ifndef MCM_ANALYSIS_HPP
#define MCM_ANALYSIS_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "circuit.hpp"
#include "purity.hpp"
#include "sparse_state.hpp"

namespace mcm {

/// Budgets for the forward state propagation.
struct QcpConfig {
  /// Cap on the number of nonzero amplitudes tracked per entanglement group.
  /// Any operation that would exceed this sends the touched groups to top.
  std::size_t n_max = 64;
  /// Maximum quantum controls a single instruction may carry (validation).
  std::size_t max_controls = 3;
  /// Amplitudes at or below this magnitude are discarded after each gate.
  double amplitude_tol = 1e-12;
  /// Measurement outcomes within this distance of 0 or 1 count as certain.
  double prob_tol = 1e-9;
};

/// Abstract value for one entanglement group, ordered by precision.
///   known:          exact pure state, tracked entry by entry
///   basis_diagonal: some classical mixture of computational basis states
///   top:            nothing known
enum class Lattice : std::uint8_t { known, basis_diagonal, top };

enum class ClbitValue : std::uint8_t { const0, const1, unknown };

struct GroupRecord {
  std::vector<Qubit> members;  // sorted
  Lattice tag = Lattice::known;
  std::shared_ptr<const SparseState> state;  // set exactly when tag == known
};

/// Full abstract machine state: a partition of the qubits into groups plus a
/// per-clbit constant lattice.  Copies are cheap; group states are shared.
struct AnalysisState {
  std::vector<std::uint64_t> group_of;  // qubit index -> group id
  std::map<std::uint64_t, GroupRecord> groups;
  std::vector<ClbitValue> clbits;
  std::uint64_t next_group = 0;
};

AnalysisState init_state(std::uint32_t n_qubits, std::uint32_t n_clbits = 0);

/// What the propagation concluded about one instruction.
struct SimplifyAction {
  enum class Kind : std::uint8_t { keep, remove, strip_controls, replace };
  Kind kind = Kind::keep;
  /// For strip_controls and replace: the instruction to emit instead.  The
  /// abstract state already reflects it; do not feed it back in.
  std::optional<Instruction> replacement;
};

struct MeasureClassification {
  enum class Kind : std::uint8_t {
    fixed0,           // outcome is 0 up to prob_tol
    fixed1,           // outcome is 1 up to prob_tol
    random,           // qubit pure and unentangled, outcome genuinely random
    basis_diagonal,   // qubit in a classical mixture of basis states
    entangled,        // state known but the qubit does not factor out
    opaque            // no static information
  };
  Kind kind = Kind::opaque;
  double p_one = 0.0;     // for fixed*/random
  QubitAmplitudes psi{};  // for random: the factored single-qubit state
};

struct PropagationStats {
  std::size_t work = 0;       // amplitude-level operations across all gates
  std::size_t removed = 0;    // instructions proven dead
  std::size_t stripped = 0;   // control lists proven always satisfied
  std::size_t replaced = 0;   // instructions swapped for simpler forms
};

/// Forward abstract interpreter.  Feed instructions in program order; each
/// call updates the abstract state and reports how the instruction may be
/// simplified without changing the circuit's observable behavior.
class Propagator {
 public:
  Propagator(std::uint32_t n_qubits, std::uint32_t n_clbits, QcpConfig cfg = {});
  Propagator(AnalysisState initial, QcpConfig cfg = {});

  const AnalysisState& state() const { return st_; }
  const PropagationStats& stats() const { return stats_; }
  const QcpConfig& config() const { return cfg_; }

  SimplifyAction apply(const Instruction& ins);

  /// Inspect a measurement against the current state without changing it.
  MeasureClassification classify_measure(const Measure& m) const;

  /// Record a measurement's effect.  Pass the classification computed against
  /// the same state.
  void apply_measure(const Measure& m, const MeasureClassification& cls);

  /// Project a known qubit onto |outcome> and give it a fresh group.
  void collapse_qubit(Qubit q, int outcome);

  /// Split a known qubit with a random outcome off its group: the qubit
  /// becomes a basis-diagonal singleton, the rest keeps its factored state.
  void split_random(Qubit q);

  void set_clbit(Clbit b, ClbitValue v);

 private:
  struct ControlResolution {
    bool never = false;      // some control group can never satisfy its bits
    bool changed = false;    // at least one always-satisfied control dropped
    Controlled simplified;   // remaining controls only
  };

  GroupRecord& rec(std::uint64_t gid) { return st_.groups.at(gid); }
  const GroupRecord& rec(std::uint64_t gid) const { return st_.groups.at(gid); }
  std::uint64_t gid_of(Qubit q) const { return st_.group_of[q.index]; }
  std::vector<std::uint64_t> spanned(const std::vector<Qubit>& qs) const;
  bool bd_compatible(std::uint64_t gid) const;
  void set_tag(std::uint64_t gid, Lattice tag);

  ControlResolution resolve_controls(const Controlled& c) const;
  SimplifyAction apply_base(const BaseOp& op);
  SimplifyAction apply_resolved(const Instruction& inner);
  bool try_exact_uncertain(const BaseOp& base);
  void apply_known_gate(const Gate& g, const std::vector<std::pair<Qubit, int>>& controls);
  std::uint64_t merge_known(const std::vector<std::uint64_t>& gids);
  void degrade(const BaseOp& op);

  AnalysisState st_;
  QcpConfig cfg_;
  PropagationStats stats_;
};

/// Result of running the propagation over a whole circuit: the simplified
/// circuit, a snapshot of the abstract state just before each surviving
/// instruction (aligned with circuit.instructions), and the final state.
struct RunResult {
  Circuit circuit;
  std::vector<AnalysisState> trace;
  AnalysisState final_state;
  PropagationStats stats;
};

RunResult run(const Circuit& c, const QcpConfig& cfg = {});

}  // namespace mcm

#endif  // MCM_ANALYSIS_HPP
