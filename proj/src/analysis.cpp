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

#include "analysis.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace mcm {

namespace {

/// (qubit, required bit) pairs for a controlled operation.
std::vector<std::pair<Qubit, int>> control_bits(const Controlled& c) {
  std::vector<std::pair<Qubit, int>> out;
  for (Qubit q : c.pos_controls) {
    out.emplace_back(q, 1);
  }
  for (Qubit q : c.neg_controls) {
    out.emplace_back(q, 0);
  }
  return out;
}

const Gate& base_gate(const BaseOp& op) {
  if (const auto* g = std::get_if<Gate>(&op)) {
    return *g;
  }
  return std::get<Controlled>(op).base;
}

std::vector<std::pair<Qubit, int>> controls_of(const BaseOp& op) {
  if (const auto* c = std::get_if<Controlled>(&op)) {
    return control_bits(*c);
  }
  return {};
}

bool has_controls(const BaseOp& op) {
  const auto* c = std::get_if<Controlled>(&op);
  return c && (!c->pos_controls.empty() || !c->neg_controls.empty());
}

}  // namespace

AnalysisState init_state(std::uint32_t n_qubits, std::uint32_t n_clbits) {
  if (n_qubits == 0) {
    throw std::invalid_argument("circuit needs at least one qubit");
  }
  AnalysisState st;
  st.group_of.resize(n_qubits);
  for (std::uint32_t i = 0; i < n_qubits; ++i) {
    st.group_of[i] = i;
    GroupRecord r;
    r.members = {Qubit{i}};
    r.tag = Lattice::known;
    r.state = std::make_shared<const SparseState>(make_zero_state({Qubit{i}}));
    st.groups.emplace(i, std::move(r));
  }
  st.clbits.assign(n_clbits, ClbitValue::const0);
  st.next_group = n_qubits;
  return st;
}

Propagator::Propagator(std::uint32_t n_qubits, std::uint32_t n_clbits, QcpConfig cfg)
    : st_(init_state(n_qubits, n_clbits)), cfg_(cfg) {}

Propagator::Propagator(AnalysisState initial, QcpConfig cfg)
    : st_(std::move(initial)), cfg_(cfg) {}

std::vector<std::uint64_t> Propagator::spanned(const std::vector<Qubit>& qs) const {
  std::vector<std::uint64_t> gids;
  for (Qubit q : qs) {
    gids.push_back(gid_of(q));
  }
  std::sort(gids.begin(), gids.end());
  gids.erase(std::unique(gids.begin(), gids.end()), gids.end());
  return gids;
}

bool Propagator::bd_compatible(std::uint64_t gid) const {
  const GroupRecord& r = rec(gid);
  if (r.tag == Lattice::basis_diagonal) {
    return true;
  }
  // A known group holding a single basis state has a diagonal density matrix.
  return r.tag == Lattice::known && r.state->num_entries() == 1;
}

void Propagator::set_tag(std::uint64_t gid, Lattice tag) {
  GroupRecord& r = rec(gid);
  if (static_cast<int>(tag) <= static_cast<int>(r.tag)) {
    return;  // never regain precision
  }
  r.tag = tag;
  r.state.reset();
}

Propagator::ControlResolution Propagator::resolve_controls(const Controlled& c) const {
  ControlResolution out;
  out.simplified.base = c.base;

  // Bucket controls by group, then judge each known group over its entries.
  std::map<std::uint64_t, std::vector<std::pair<Qubit, int>>> by_group;
  for (const auto& cb : control_bits(c)) {
    by_group[gid_of(cb.first)].push_back(cb);
  }
  for (const auto& [gid, bits] : by_group) {
    const GroupRecord& r = rec(gid);
    if (r.tag != Lattice::known) {
      for (const auto& [q, want] : bits) {
        (want ? out.simplified.pos_controls : out.simplified.neg_controls).push_back(q);
      }
      continue;
    }
    bool any_pass = false, all_pass = true;
    for (const auto& [key, amp] : r.state->amps) {
      bool pass = true;
      for (const auto& [q, want] : bits) {
        const auto pos = r.state->position_of(q);
        if ((key[*pos] == '1' ? 1 : 0) != want) {
          pass = false;
          break;
        }
      }
      any_pass = any_pass || pass;
      all_pass = all_pass && pass;
    }
    if (!any_pass) {
      out.never = true;
      return out;
    }
    if (all_pass) {
      out.changed = true;  // these controls always hold: drop them
      continue;
    }
    for (const auto& [q, want] : bits) {
      (want ? out.simplified.pos_controls : out.simplified.neg_controls).push_back(q);
    }
  }
  return out;
}

std::uint64_t Propagator::merge_known(const std::vector<std::uint64_t>& gids) {
  if (gids.size() == 1) {
    return gids[0];
  }
  SparseState merged = *rec(gids[0]).state;
  std::vector<Qubit> members = rec(gids[0]).members;
  for (std::size_t i = 1; i < gids.size(); ++i) {
    merged = tensor(merged, *rec(gids[i]).state);
    const auto& more = rec(gids[i]).members;
    members.insert(members.end(), more.begin(), more.end());
  }
  std::sort(members.begin(), members.end());
  const std::uint64_t keep = gids[0];
  for (std::size_t i = 1; i < gids.size(); ++i) {
    st_.groups.erase(gids[i]);
  }
  GroupRecord& r = rec(keep);
  r.members = std::move(members);
  r.state = std::make_shared<const SparseState>(std::move(merged));
  for (Qubit q : r.members) {
    st_.group_of[q.index] = keep;
  }
  return keep;
}

void Propagator::apply_known_gate(const Gate& g,
                                  const std::vector<std::pair<Qubit, int>>& controls) {
  const std::uint64_t gid = gid_of(g.targets[0]);
  GroupRecord& r = rec(gid);
  SparseState s = *r.state;
  std::vector<ControlBit> cb;
  for (const auto& [q, want] : controls) {
    cb.emplace_back(*s.position_of(q), want);
  }
  if (g.kind == GateKind::swap) {
    const auto pa = *s.position_of(g.targets[0]);
    const auto pb = *s.position_of(g.targets[1]);
    if (cb.empty()) {
      apply_swap(s, pa, pb, &stats_.work);
    } else {
      apply_controlled_swap(s, cb, pa, pb, &stats_.work);
    }
  } else {
    const Mat2 m = gate_matrix2(g.kind, g.params);
    const auto pos = *s.position_of(g.targets[0]);
    if (cb.empty()) {
      apply_1q(s, pos, m, &stats_.work);
    } else {
      apply_controlled_1q(s, cb, pos, m, &stats_.work);
    }
  }
  s.prune(cfg_.amplitude_tol);
  r.state = std::make_shared<const SparseState>(std::move(s));
  if (r.state->num_entries() > cfg_.n_max) {
    set_tag(gid, Lattice::top);
  }
}

void Propagator::degrade(const BaseOp& op) {
  const Gate& g = base_gate(op);
  const auto controls = controls_of(op);
  std::vector<Qubit> all = g.targets;
  for (const auto& [q, want] : controls) {
    all.push_back(q);
  }

  bool controls_classical = true;
  for (const auto& [q, want] : controls) {
    controls_classical = controls_classical && bd_compatible(gid_of(q));
  }
  const bool swap_cross =
      g.kind == GateKind::swap && gid_of(g.targets[0]) != gid_of(g.targets[1]);

  for (std::uint64_t gid : spanned(all)) {
    bool has_target = false;
    for (Qubit q : g.targets) {
      has_target = has_target || gid_of(q) == gid;
    }
    Lattice nt;
    if (!has_target) {
      // Controls are read, never written: a classical group stays classical.
      nt = bd_compatible(gid) ? Lattice::basis_diagonal : Lattice::top;
    } else {
      bool ok_gate;
      if (g.kind == GateKind::swap) {
        ok_gate = !swap_cross || (bd_compatible(gid_of(g.targets[0])) &&
                                  bd_compatible(gid_of(g.targets[1])));
      } else {
        ok_gate = gate_permutes_basis(g.kind);
      }
      nt = (bd_compatible(gid) && ok_gate && controls_classical) ? Lattice::basis_diagonal
                                                                 : Lattice::top;
    }
    set_tag(gid, nt);
  }
}

SimplifyAction Propagator::apply_base(const BaseOp& op) {
  if (const auto* g = std::get_if<Gate>(&op)) {
    const auto gids = spanned(g->targets);
    bool all_known = true;
    std::size_t product = 1;
    for (std::uint64_t gid : gids) {
      if (rec(gid).tag != Lattice::known) {
        all_known = false;
        break;
      }
      product *= rec(gid).state->num_entries();
    }
    if (all_known && product <= cfg_.n_max) {
      merge_known(gids);
      apply_known_gate(*g, {});
    } else {
      degrade(op);
    }
    return {};
  }

  const auto& c = std::get<Controlled>(op);
  auto rc = resolve_controls(c);
  if (rc.never) {
    ++stats_.removed;
    return {SimplifyAction::Kind::remove, std::nullopt};
  }
  if (rc.simplified.pos_controls.empty() && rc.simplified.neg_controls.empty()) {
    SimplifyAction inner = apply_base(BaseOp(rc.simplified.base));
    (void)inner;  // a bare gate is always kept
    ++stats_.stripped;
    return {SimplifyAction::Kind::strip_controls, to_instruction(BaseOp(rc.simplified.base))};
  }

  const auto cb = control_bits(rc.simplified);
  std::vector<Qubit> all = rc.simplified.base.targets;
  for (const auto& [q, want] : cb) {
    all.push_back(q);
  }
  const auto gids = spanned(all);
  bool all_known = true;
  std::size_t product = 1;
  for (std::uint64_t gid : gids) {
    if (rec(gid).tag != Lattice::known) {
      all_known = false;
      break;
    }
    product *= rec(gid).state->num_entries();
  }
  if (all_known && product <= cfg_.n_max) {
    merge_known(gids);
    apply_known_gate(rc.simplified.base, cb);
  } else {
    degrade(BaseOp(rc.simplified));
  }
  if (rc.changed) {
    ++stats_.replaced;
    return {SimplifyAction::Kind::replace, to_instruction(BaseOp(rc.simplified))};
  }
  return {};
}

SimplifyAction Propagator::apply_resolved(const Instruction& inner) {
  SimplifyAction a = apply(inner);
  switch (a.kind) {
    case SimplifyAction::Kind::remove:
      return a;
    case SimplifyAction::Kind::keep:
      ++stats_.replaced;
      return {SimplifyAction::Kind::replace, inner};
    default:
      return {SimplifyAction::Kind::replace, std::move(a.replacement)};
  }
}

bool Propagator::try_exact_uncertain(const BaseOp& base) {
  const auto* g = std::get_if<Gate>(&base);
  if (!g || g->targets.size() != 1) {
    return false;
  }
  const Qubit q = g->targets[0];
  const std::uint64_t gid = gid_of(q);
  GroupRecord& r = rec(gid);
  if (r.tag != Lattice::known) {
    return false;
  }
  const auto pos = *r.state->position_of(q);
  int bit = 0;
  if (!r.state->bit_definite(pos, &bit)) {
    return false;
  }
  if (gate_is_diagonal(g->kind)) {
    // Acts as at most a global phase on every branch: no observable change.
    return true;
  }
  if (g->kind != GateKind::x && g->kind != GateKind::y) {
    return false;
  }
  // The branches agree on everything but this qubit's definite bit, so the
  // qubit splits off exactly as a classical |bit>/|1-bit> mixture.
  if (r.members.size() == 1) {
    set_tag(gid, Lattice::basis_diagonal);
    return true;
  }
  SparseState s = *r.state;
  drop_position(s, pos);
  r.members.erase(std::find(r.members.begin(), r.members.end(), q));
  r.state = std::make_shared<const SparseState>(std::move(s));
  const std::uint64_t fresh = st_.next_group++;
  GroupRecord nq;
  nq.members = {q};
  nq.tag = Lattice::basis_diagonal;
  st_.groups.emplace(fresh, std::move(nq));
  st_.group_of[q.index] = fresh;
  return true;
}

SimplifyAction Propagator::apply(const Instruction& ins) {
  if (std::holds_alternative<Barrier>(ins)) {
    return {};
  }
  if (const auto* g = std::get_if<Gate>(&ins)) {
    return apply_base(BaseOp(*g));
  }
  if (const auto* c = std::get_if<Controlled>(&ins)) {
    return apply_base(BaseOp(*c));
  }
  if (const auto* m = std::get_if<Measure>(&ins)) {
    apply_measure(*m, classify_measure(*m));
    return {};
  }

  if (const auto* f = std::get_if<IfGate>(&ins)) {
    const ClbitValue v = st_.clbits[f->bit.index];
    if (v != ClbitValue::unknown) {
      const int held = v == ClbitValue::const1 ? 1 : 0;
      if (f->value != held) {
        ++stats_.removed;
        return {SimplifyAction::Kind::remove, std::nullopt};
      }
      return apply_resolved(to_instruction(f->base));
    }
    BaseOp base = f->base;
    bool changed = false;
    if (has_controls(base)) {
      auto rc = resolve_controls(std::get<Controlled>(base));
      if (rc.never) {
        ++stats_.removed;
        return {SimplifyAction::Kind::remove, std::nullopt};
      }
      changed = rc.changed;
      if (rc.simplified.pos_controls.empty() && rc.simplified.neg_controls.empty()) {
        base = BaseOp(rc.simplified.base);
      } else {
        base = BaseOp(rc.simplified);
      }
    }
    if (!try_exact_uncertain(base)) {
      degrade(base);
    }
    if (changed) {
      ++stats_.replaced;
      return {SimplifyAction::Kind::replace, Instruction(IfGate{f->bit, f->value, base})};
    }
    return {};
  }

  const auto& pr = std::get<Prob>(ins);
  if (pr.p == 0.0) {
    ++stats_.removed;
    return {SimplifyAction::Kind::remove, std::nullopt};
  }
  if (pr.p == 1.0) {
    return apply_resolved(to_instruction(pr.base));
  }
  BaseOp base = pr.base;
  bool changed = false;
  if (has_controls(base)) {
    auto rc = resolve_controls(std::get<Controlled>(base));
    if (rc.never) {
      ++stats_.removed;
      return {SimplifyAction::Kind::remove, std::nullopt};
    }
    changed = rc.changed;
    if (rc.simplified.pos_controls.empty() && rc.simplified.neg_controls.empty()) {
      base = BaseOp(rc.simplified.base);
    } else {
      base = BaseOp(rc.simplified);
    }
  }
  if (!try_exact_uncertain(base)) {
    degrade(base);
  }
  if (changed) {
    ++stats_.replaced;
    return {SimplifyAction::Kind::replace, Instruction(Prob{pr.p, base})};
  }
  return {};
}

MeasureClassification Propagator::classify_measure(const Measure& m) const {
  MeasureClassification cls;
  const GroupRecord& r = rec(gid_of(m.qubit));
  if (r.tag == Lattice::top) {
    cls.kind = MeasureClassification::Kind::opaque;
    return cls;
  }
  if (r.tag == Lattice::basis_diagonal) {
    cls.kind = MeasureClassification::Kind::basis_diagonal;
    return cls;
  }
  const auto pos = *r.state->position_of(m.qubit);
  const double p1 = r.state->prob_one(pos);
  cls.p_one = p1;
  if (p1 <= cfg_.prob_tol) {
    cls.kind = MeasureClassification::Kind::fixed0;
    return cls;
  }
  if (p1 >= 1.0 - cfg_.prob_tol) {
    cls.kind = MeasureClassification::Kind::fixed1;
    return cls;
  }
  if (!purity_test(*r.state, pos)) {
    cls.kind = MeasureClassification::Kind::entangled;
    return cls;
  }
  try {
    const Factorization f = factor_qubit(*r.state, pos);
    cls.kind = MeasureClassification::Kind::random;
    cls.psi = f.qubit_state;
  } catch (const std::invalid_argument&) {
    cls.kind = MeasureClassification::Kind::entangled;
  }
  return cls;
}

void Propagator::apply_measure(const Measure& m, const MeasureClassification& cls) {
  switch (cls.kind) {
    case MeasureClassification::Kind::fixed0:
      collapse_qubit(m.qubit, 0);
      set_clbit(m.bit, ClbitValue::const0);
      break;
    case MeasureClassification::Kind::fixed1:
      collapse_qubit(m.qubit, 1);
      set_clbit(m.bit, ClbitValue::const1);
      break;
    case MeasureClassification::Kind::random:
      split_random(m.qubit);
      set_clbit(m.bit, ClbitValue::unknown);
      break;
    case MeasureClassification::Kind::basis_diagonal:
      // The ensemble is already a basis mixture; sampling it changes nothing.
      set_clbit(m.bit, ClbitValue::unknown);
      break;
    case MeasureClassification::Kind::entangled:
      set_tag(gid_of(m.qubit), Lattice::top);
      set_clbit(m.bit, ClbitValue::unknown);
      break;
    case MeasureClassification::Kind::opaque:
      set_clbit(m.bit, ClbitValue::unknown);
      break;
  }
}

void Propagator::collapse_qubit(Qubit q, int outcome) {
  const std::uint64_t gid = gid_of(q);
  GroupRecord& r = rec(gid);
  assert(r.tag == Lattice::known);
  if (r.members.size() == 1) {
    SparseState s;
    s.qubits = {q};
    s.amps.emplace(outcome ? "1" : "0", cplx(1.0, 0.0));
    r.state = std::make_shared<const SparseState>(std::move(s));
    return;
  }
  const auto pos = *r.state->position_of(q);
  SparseState rest = *r.state;
  collapse(rest, pos, outcome);
  r.members.erase(std::find(r.members.begin(), r.members.end(), q));
  r.state = std::make_shared<const SparseState>(std::move(rest));

  SparseState s;
  s.qubits = {q};
  s.amps.emplace(outcome ? "1" : "0", cplx(1.0, 0.0));
  const std::uint64_t fresh = st_.next_group++;
  GroupRecord nr;
  nr.members = {q};
  nr.tag = Lattice::known;
  nr.state = std::make_shared<const SparseState>(std::move(s));
  st_.groups.emplace(fresh, std::move(nr));
  st_.group_of[q.index] = fresh;
}

void Propagator::split_random(Qubit q) {
  const std::uint64_t gid = gid_of(q);
  GroupRecord& r = rec(gid);
  assert(r.tag == Lattice::known);
  if (r.members.size() == 1) {
    set_tag(gid, Lattice::basis_diagonal);
    return;
  }
  const auto pos = *r.state->position_of(q);
  Factorization f = factor_qubit(*r.state, pos);
  r.members.erase(std::find(r.members.begin(), r.members.end(), q));
  r.state = std::make_shared<const SparseState>(std::move(f.remainder));

  const std::uint64_t fresh = st_.next_group++;
  GroupRecord nr;
  nr.members = {q};
  nr.tag = Lattice::basis_diagonal;
  st_.groups.emplace(fresh, std::move(nr));
  st_.group_of[q.index] = fresh;
}

void Propagator::set_clbit(Clbit b, ClbitValue v) { st_.clbits[b.index] = v; }

RunResult run(const Circuit& c, const QcpConfig& cfg) {
  Propagator prop(c.n_qubits, c.n_clbits, cfg);
  RunResult rr;
  rr.circuit.n_qubits = c.n_qubits;
  rr.circuit.n_clbits = c.n_clbits;
  rr.circuit.outputs = c.outputs;
  for (const auto& ins : c.instructions) {
    AnalysisState before = prop.state();
    SimplifyAction a = prop.apply(ins);
    switch (a.kind) {
      case SimplifyAction::Kind::keep:
        rr.circuit.instructions.push_back(ins);
        rr.trace.push_back(std::move(before));
        break;
      case SimplifyAction::Kind::remove:
        break;
      default:
        rr.circuit.instructions.push_back(std::move(*a.replacement));
        rr.trace.push_back(std::move(before));
        break;
    }
  }
  rr.final_state = prop.state();
  rr.stats = prop.stats();
  return rr;
}

}  // namespace mcm
