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

#include "rewrite.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace mcm {

RotationSpec synthesize_rotation(const QubitAmplitudes& psi) {
  const double aa = std::abs(psi.alpha);
  const double ab = std::abs(psi.beta);
  const double arg_a = aa == 0.0 ? 0.0 : std::arg(psi.alpha);
  const double arg_b = ab == 0.0 ? 0.0 : std::arg(psi.beta);
  return {2.0 * std::atan2(aa, ab), -arg_a - arg_b, arg_a - arg_b};
}

const char* to_string(DecisionKind k) {
  switch (k) {
    case DecisionKind::probabilistic: return "probabilistic";
    case DecisionKind::probabilistic_unused: return "probabilistic_unused";
    case DecisionKind::deterministic: return "deterministic";
    case DecisionKind::basis_control: return "basis_control";
    case DecisionKind::skipped: return "skipped";
  }
  return "?";
}

const char* to_string(SkipReason r) {
  switch (r) {
    case SkipReason::none: return "none";
    case SkipReason::output_bit: return "output_bit";
    case SkipReason::bit_overwritten: return "bit_overwritten";
    case SkipReason::use_touches_qubit: return "use_touches_qubit";
    case SkipReason::qubit_disturbed: return "qubit_disturbed";
    case SkipReason::not_pure: return "not_pure";
    case SkipReason::no_static_info: return "no_static_info";
    case SkipReason::disabled: return "disabled";
  }
  return "?";
}

Eligibility eligible_uses(const std::vector<Instruction>& prog, std::size_t meas_index,
                          const std::vector<Clbit>& outputs) {
  const auto& m = std::get<Measure>(prog[meas_index]);
  Eligibility el;
  if (std::find(outputs.begin(), outputs.end(), m.bit) != outputs.end()) {
    el.reason = SkipReason::output_bit;
    return el;
  }

  std::size_t first_write = prog.size();
  for (std::size_t j = meas_index + 1; j < prog.size(); ++j) {
    if (const auto* f = std::get_if<IfGate>(&prog[j])) {
      if (f->bit == m.bit) {
        el.uses.push_back(j);
      }
    } else if (const auto* w = std::get_if<Measure>(&prog[j])) {
      if (w->bit == m.bit && first_write == prog.size()) {
        first_write = j;
      }
    }
  }
  if (el.uses.empty()) {
    el.ok = true;
    return el;
  }

  const std::size_t last_use = el.uses.back();
  if (first_write < last_use) {
    el.uses.clear();
    el.reason = SkipReason::bit_overwritten;
    return el;
  }
  for (std::size_t j : el.uses) {
    if (touches_qubit(std::get<IfGate>(prog[j]).base, m.qubit)) {
      el.uses.clear();
      el.reason = SkipReason::use_touches_qubit;
      return el;
    }
  }
  for (std::size_t j = meas_index + 1; j < last_use; ++j) {
    if (std::binary_search(el.uses.begin(), el.uses.end(), j)) {
      continue;
    }
    if (std::holds_alternative<Barrier>(prog[j])) {
      continue;
    }
    if (touches_qubit(prog[j], m.qubit)) {
      el.uses.clear();
      el.reason = SkipReason::qubit_disturbed;
      return el;
    }
  }
  el.ok = true;
  return el;
}

Instruction convert_use(const IfGate& f, Qubit q) {
  Controlled c;
  if (const auto* g = std::get_if<Gate>(&f.base)) {
    c.base = *g;
  } else {
    c = std::get<Controlled>(f.base);
  }
  (f.value == 1 ? c.pos_controls : c.neg_controls).push_back(q);
  return c;
}

namespace {

ClbitValue const_of(int outcome) { return outcome ? ClbitValue::const1 : ClbitValue::const0; }

// One forward sweep.  `orig` maps each instruction to its index in the
// original circuit so decisions can be reported against the input even after
// instructions are erased or spliced in.
struct PassResult {
  std::vector<Instruction> prog;
  std::vector<std::size_t> orig;
  std::vector<MeasurementRecord> records;
  std::size_t prob_gates_added = 0;
  std::size_t ifgates_converted = 0;
  PropagationStats propagation;
  bool changed = false;
};

PassResult run_pass(const Circuit& c, std::vector<Instruction> prog,
                    std::vector<std::size_t> orig, const OptimizeOptions& opt) {
  PassResult out;
  Propagator prop(c.n_qubits, c.n_clbits, opt.qcp);
  auto& report = out;

  std::size_t i = 0;
  while (i < prog.size()) {
    if (const auto* mp = std::get_if<Measure>(&prog[i])) {
      const Measure m = *mp;
      const MeasureClassification cls = prop.classify_measure(m);
      MeasurementRecord mr{orig[i], m.qubit.index, m.bit.index, DecisionKind::skipped,
                           SkipReason::none,       0,           cls.p_one};

      const auto keep_measure = [&](SkipReason why) {
        mr.decision = DecisionKind::skipped;
        mr.reason = why;
        prop.apply_measure(m, cls);
        ++i;
      };

      switch (cls.kind) {
        case MeasureClassification::Kind::opaque:
          keep_measure(SkipReason::no_static_info);
          break;
        case MeasureClassification::Kind::entangled:
          keep_measure(SkipReason::not_pure);
          break;
        case MeasureClassification::Kind::fixed0:
        case MeasureClassification::Kind::fixed1: {
          const int outcome = cls.kind == MeasureClassification::Kind::fixed1 ? 1 : 0;
          if (is_output(c, m.bit)) {
            keep_measure(SkipReason::output_bit);
            break;
          }
          // Drop the measurement; the recorded constant resolves every later
          // read of this bit, so the bit itself is never consulted at runtime.
          mr.decision = DecisionKind::deterministic;
          prop.collapse_qubit(m.qubit, outcome);
          prop.set_clbit(m.bit, const_of(outcome));
          prog.erase(prog.begin() + static_cast<std::ptrdiff_t>(i));
          orig.erase(orig.begin() + static_cast<std::ptrdiff_t>(i));
          out.changed = true;
          break;
        }
        case MeasureClassification::Kind::random: {
          Eligibility el = eligible_uses(prog, i, c.outputs);
          if (!el.ok) {
            keep_measure(el.reason);
            break;
          }
          if (el.uses.empty() && !opt.rewrite_unused) {
            keep_measure(SkipReason::disabled);
            break;
          }
          const RotationSpec rs = synthesize_rotation(cls.psi);
          Gate rot{GateKind::u, {rs.theta, rs.phi, rs.lambda}, {m.qubit}};
          // The rotation parks the state on |1>; the flip then fires with the
          // weight the measurement would have put on outcome 0.
          Prob flip{1.0 - cls.p_one, BaseOp(Gate{GateKind::x, {}, {m.qubit}})};
          prog[i] = std::move(rot);
          prog.insert(prog.begin() + static_cast<std::ptrdiff_t>(i) + 1, std::move(flip));
          orig.insert(orig.begin() + static_cast<std::ptrdiff_t>(i) + 1, orig[i]);
          for (std::size_t j : el.uses) {
            const std::size_t pos = j + 1;  // shifted by the inserted flip
            prog[pos] = convert_use(std::get<IfGate>(prog[pos]), m.qubit);
          }
          prop.split_random(m.qubit);
          mr.decision = el.uses.empty() ? DecisionKind::probabilistic_unused
                                        : DecisionKind::probabilistic;
          mr.uses_converted = el.uses.size();
          report.prob_gates_added += 1;
          report.ifgates_converted += el.uses.size();
          out.changed = true;
          i += 2;  // the snippet is already reflected in the abstract state
          break;
        }
        case MeasureClassification::Kind::basis_diagonal: {
          if (!opt.convert_basis_diagonal) {
            keep_measure(SkipReason::disabled);
            break;
          }
          Eligibility el = eligible_uses(prog, i, c.outputs);
          if (!el.ok) {
            keep_measure(el.reason);
            break;
          }
          // Sampling a basis mixture is invisible; readers can watch the
          // qubit directly.
          for (std::size_t j : el.uses) {
            prog[j] = convert_use(std::get<IfGate>(prog[j]), m.qubit);
          }
          prog.erase(prog.begin() + static_cast<std::ptrdiff_t>(i));
          orig.erase(orig.begin() + static_cast<std::ptrdiff_t>(i));
          mr.decision = DecisionKind::basis_control;
          mr.uses_converted = el.uses.size();
          report.ifgates_converted += el.uses.size();
          out.changed = true;
          break;
        }
      }
      out.records.push_back(mr);
      continue;
    }

    SimplifyAction a = prop.apply(prog[i]);
    switch (a.kind) {
      case SimplifyAction::Kind::keep:
        ++i;
        break;
      case SimplifyAction::Kind::remove:
        prog.erase(prog.begin() + static_cast<std::ptrdiff_t>(i));
        orig.erase(orig.begin() + static_cast<std::ptrdiff_t>(i));
        out.changed = true;
        break;
      default:
        prog[i] = std::move(*a.replacement);
        out.changed = true;
        ++i;
        break;
    }
  }

  out.prog = std::move(prog);
  out.orig = std::move(orig);
  out.propagation = prop.stats();
  return out;
}

}  // namespace

OptimizeResult optimize(const Circuit& c, const OptimizeOptions& opt) {
  std::vector<Instruction> prog = c.instructions;
  std::vector<std::size_t> orig(prog.size());
  for (std::size_t k = 0; k < orig.size(); ++k) {
    orig[k] = k;
  }

  RewriteReport report;
  std::map<std::size_t, MeasurementRecord> records;

  // A sweep can unblock later sweeps: erasing a dead gate may clear the path
  // between an earlier measurement and its readers.  Iterate until nothing
  // changes; every changing sweep shrinks the program or removes a
  // measurement, so the loop terminates well inside the bound.
  const std::size_t max_passes = c.instructions.size() + 4;
  for (std::size_t pass = 0; pass < max_passes; ++pass) {
    PassResult r = run_pass(c, std::move(prog), std::move(orig), opt);
    for (const MeasurementRecord& mr : r.records) {
      records[mr.index] = mr;  // the latest sweep's verdict wins
    }
    report.prob_gates_added += r.prob_gates_added;
    report.ifgates_converted += r.ifgates_converted;
    report.propagation.work += r.propagation.work;
    report.propagation.removed += r.propagation.removed;
    report.propagation.stripped += r.propagation.stripped;
    report.propagation.replaced += r.propagation.replaced;
    prog = std::move(r.prog);
    orig = std::move(r.orig);
    if (!r.changed) {
      break;
    }
  }

  report.measurements.reserve(records.size());
  for (auto& [index, mr] : records) {
    report.measurements.push_back(mr);
  }

  OptimizeResult res;
  res.circuit.n_qubits = c.n_qubits;
  res.circuit.n_clbits = c.n_clbits;
  res.circuit.outputs = c.outputs;
  res.circuit.instructions = std::move(prog);
  res.report = std::move(report);
  return res;
}

}  // namespace mcm
