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

#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "analysis.hpp"
#include "helpers.hpp"
#include "parser.hpp"
#include "simulate.hpp"

using namespace mcm;

namespace {

const GroupRecord& group_rec(const AnalysisState& st, std::uint32_t q) {
  return st.groups.at(st.group_of[q]);
}

Circuit prefix_of(const Circuit& c, std::size_t n) {
  Circuit p;
  p.n_qubits = c.n_qubits;
  p.n_clbits = c.n_clbits;
  p.outputs = c.outputs;
  p.instructions.assign(c.instructions.begin(), c.instructions.begin() + n);
  return p;
}

}  // namespace

TEST_CASE("initial state is all-zero singletons") {
  AnalysisState st = init_state(3, 2);
  REQUIRE(st.group_of.size() == 3);
  REQUIRE(st.groups.size() == 3);
  for (std::uint32_t q = 0; q < 3; ++q) {
    const GroupRecord& r = group_rec(st, q);
    CHECK(r.tag == Lattice::known);
    CHECK(r.members == std::vector<Qubit>{Qubit{q}});
    REQUIRE(r.state);
    CHECK(r.state->num_entries() == 1);
    CHECK(r.state->amps.count("0") == 1);
  }
  CHECK(st.clbits == std::vector<ClbitValue>{ClbitValue::const0, ClbitValue::const0});
  CHECK_THROWS_AS(init_state(0, 0), std::invalid_argument);
}

TEST_CASE("propagation of static circuits reproduces the exact state") {
  auto rng = mcmtest::test_rng(314);
  for (int iter = 0; iter < 150; ++iter) {
    mcmtest::RandomCircuitOpts o;
    o.n_qubits = 1 + static_cast<std::uint32_t>(rng() % 4);
    o.n_clbits = 0;
    o.n_instructions = 4 + rng() % 20;
    o.allow_if = false;
    o.max_controls = std::min<std::size_t>(2, o.n_qubits - 1);
    Circuit c = mcmtest::random_circuit(rng, o);

    RunResult rr = run(c);
    StateVec expect = simulate_static(c);
    StateVec got = mcmtest::dense_of_analysis(rr.final_state);
    CHECK(mcmtest::max_amp_diff(got, expect) < 1e-9);

    // The simplified circuit must compute the same state as the original.
    StateVec simp = simulate_static(rr.circuit);
    CHECK(mcmtest::max_amp_diff(simp, expect) < 1e-9);
    CHECK(rr.circuit.instructions.size() <= c.instructions.size());
  }
}

TEST_CASE("trace snapshots replay every prefix of the simplified circuit") {
  auto rng = mcmtest::test_rng(141);
  for (int iter = 0; iter < 30; ++iter) {
    mcmtest::RandomCircuitOpts o;
    o.n_qubits = 1 + static_cast<std::uint32_t>(rng() % 3);
    o.n_clbits = 0;
    o.n_instructions = 10;
    o.allow_if = false;
    o.max_controls = std::min<std::size_t>(2, o.n_qubits - 1);
    Circuit c = mcmtest::random_circuit(rng, o);

    RunResult rr = run(c);
    REQUIRE(rr.trace.size() == rr.circuit.instructions.size());
    for (std::size_t i = 0; i < rr.trace.size(); ++i) {
      StateVec expect = simulate_static(prefix_of(rr.circuit, i));
      StateVec got = mcmtest::dense_of_analysis(rr.trace[i]);
      CHECK(mcmtest::max_amp_diff(got, expect) < 1e-9);
    }
    StateVec expect = simulate_static(rr.circuit);
    CHECK(mcmtest::max_amp_diff(mcmtest::dense_of_analysis(rr.final_state), expect) < 1e-9);
  }
}

TEST_CASE("sparse tracking follows entry count, not group width") {
  // A GHZ chain keeps two entries however many qubits join the group, so even
  // a tiny amplitude budget suffices.
  QcpConfig cfg;
  cfg.n_max = 2;
  Circuit c = parse("qubits 3\nclbits 0\nh q0\ncx q0 q1\ncx q1 q2\n");
  RunResult rr = run(c, cfg);
  const GroupRecord& r = group_rec(rr.final_state, 0);
  CHECK(r.tag == Lattice::known);
  CHECK(r.members.size() == 3);
  CHECK(r.state->num_entries() == 2);
}

TEST_CASE("wide entangled chains stay cheap") {
  Circuit c;
  c.n_qubits = 30;
  c.instructions.emplace_back(Gate{GateKind::h, {}, {Qubit{0}}});
  for (std::uint32_t q = 0; q + 1 < 30; ++q) {
    c.instructions.emplace_back(Controlled{{Qubit{q}}, {}, Gate{GateKind::x, {}, {Qubit{q + 1}}}});
  }
  RunResult rr = run(c);
  const GroupRecord& r = group_rec(rr.final_state, 0);
  CHECK(r.tag == Lattice::known);
  CHECK(r.members.size() == 30);
  CHECK(r.state->num_entries() == 2);
  CHECK(rr.stats.work < 1000);
}

TEST_CASE("exceeding the amplitude budget degrades to top") {
  Circuit c = parse("qubits 3\nclbits 0\nh q0\nh q1\nh q2\ncx q0 q1\ncx q1 q2\n");

  QcpConfig tight;
  tight.n_max = 4;
  RunResult a = run(c, tight);
  CHECK(group_rec(a.final_state, 1).tag == Lattice::top);
  CHECK(group_rec(a.final_state, 2).tag == Lattice::top);

  QcpConfig roomy;
  roomy.n_max = 8;
  RunResult b = run(c, roomy);
  const GroupRecord& r = group_rec(b.final_state, 0);
  CHECK(r.tag == Lattice::known);
  CHECK(r.state->num_entries() == 8);
}

TEST_CASE("controls resolve against the tracked state") {
  SUBCASE("never satisfied: instruction removed") {
    RunResult rr = run(parse("qubits 2\nclbits 0\nctrl q0 : x q1\n"));
    CHECK(rr.circuit.instructions.empty());
    CHECK(rr.stats.removed == 1);
    // q1 was never touched.
    CHECK(group_rec(rr.final_state, 1).state->amps.count("0") == 1);
  }
  SUBCASE("always satisfied: controls stripped") {
    RunResult rr = run(parse("qubits 2\nclbits 0\nx q0\nctrl q0 : x q1\n"));
    REQUIRE(rr.circuit.instructions.size() == 2);
    CHECK(rr.circuit.instructions[1] == Instruction(Gate{GateKind::x, {}, {Qubit{1}}}));
    CHECK(rr.stats.stripped == 1);
    CHECK(group_rec(rr.final_state, 1).state->amps.count("1") == 1);
  }
  SUBCASE("negative control on a zero qubit is stripped") {
    RunResult rr = run(parse("qubits 2\nclbits 0\nnctrl q0 : x q1\n"));
    REQUIRE(rr.circuit.instructions.size() == 1);
    CHECK(rr.circuit.instructions[0] == Instruction(Gate{GateKind::x, {}, {Qubit{1}}}));
  }
  SUBCASE("negative control on a one qubit removes the instruction") {
    RunResult rr = run(parse("qubits 2\nclbits 0\nx q0\nnctrl q0 : x q1\n"));
    REQUIRE(rr.circuit.instructions.size() == 1);
    CHECK(rr.stats.removed == 1);
  }
  SUBCASE("settled controls drop, undetermined ones stay") {
    RunResult rr = run(parse("qubits 3\nclbits 0\nx q0\nh q1\nccx q0 q1 q2\n"));
    REQUIRE(rr.circuit.instructions.size() == 3);
    Instruction expect{Controlled{{Qubit{1}}, {}, Gate{GateKind::x, {}, {Qubit{2}}}}};
    CHECK(rr.circuit.instructions[2] == expect);
    CHECK(rr.stats.replaced == 1);
  }
}

TEST_CASE("conditions on constant bits resolve statically") {
  SUBCASE("value mismatch removes the conditional") {
    RunResult rr = run(parse(
        "qubits 1\nclbits 1\n"
        "measure q0 -> c0\n"
        "if c0 == 1 : x q0\n"));
    REQUIRE(rr.circuit.instructions.size() == 1);
    CHECK(std::holds_alternative<Measure>(rr.circuit.instructions[0]));
  }
  SUBCASE("value match unwraps the payload") {
    RunResult rr = run(parse(
        "qubits 2\nclbits 1\n"
        "x q0\n"
        "measure q0 -> c0\n"
        "if c0 == 1 : x q1\n"));
    REQUIRE(rr.circuit.instructions.size() == 3);
    CHECK(rr.circuit.instructions[2] == Instruction(Gate{GateKind::x, {}, {Qubit{1}}}));
    CHECK(group_rec(rr.final_state, 1).state->amps.count("1") == 1);
  }
  SUBCASE("unknown bit with a never-firing quantum control is removed") {
    RunResult rr = run(parse(
        "qubits 3\nclbits 1\n"
        "h q0\n"
        "measure q0 -> c0\n"
        "if c0 == 1 : ctrl q1 : x q2\n"));
    REQUIRE(rr.circuit.instructions.size() == 2);
    CHECK(rr.stats.removed == 1);
  }
}

TEST_CASE("probabilistic gates with trivial probability resolve statically") {
  RunResult zero = run(parse("qubits 1\nclbits 0\nprob 0 x q0\n"));
  CHECK(zero.circuit.instructions.empty());
  CHECK(zero.stats.removed == 1);

  RunResult one = run(parse("qubits 1\nclbits 0\nprob 1 x q0\n"));
  REQUIRE(one.circuit.instructions.size() == 1);
  CHECK(one.circuit.instructions[0] == Instruction(Gate{GateKind::x, {}, {Qubit{0}}}));
  CHECK(group_rec(one.final_state, 0).state->amps.count("1") == 1);
}

TEST_CASE("uncertain branches stay exact when both agree") {
  SUBCASE("diagonal payload on a definite bit changes nothing") {
    Propagator p(1, 0);
    SimplifyAction a = p.apply(parse("qubits 1\nclbits 0\nprob 0.5 z q0\n").instructions[0]);
    CHECK(a.kind == SimplifyAction::Kind::keep);
    const GroupRecord& r = group_rec(p.state(), 0);
    CHECK(r.tag == Lattice::known);
    CHECK(p.classify_measure(Measure{Qubit{0}, Clbit{0}}).kind ==
          MeasureClassification::Kind::fixed0);
  }
  SUBCASE("bit flip on a definite bit yields a classical mixture") {
    Propagator p(1, 0);
    p.apply(parse("qubits 1\nclbits 0\nprob 0.5 x q0\n").instructions[0]);
    CHECK(group_rec(p.state(), 0).tag == Lattice::basis_diagonal);
    CHECK(p.classify_measure(Measure{Qubit{0}, Clbit{0}}).kind ==
          MeasureClassification::Kind::basis_diagonal);
  }
  SUBCASE("basis-changing payload loses the state") {
    Propagator p(1, 0);
    p.apply(parse("qubits 1\nclbits 0\nprob 0.5 h q0\n").instructions[0]);
    CHECK(group_rec(p.state(), 0).tag == Lattice::top);
    CHECK(p.classify_measure(Measure{Qubit{0}, Clbit{0}}).kind ==
          MeasureClassification::Kind::opaque);
  }
  SUBCASE("definite bit inside a wider group splits off exactly") {
    Propagator p(2, 0);
    Circuit setup = parse("qubits 2\nclbits 0\nh q0\nx q1\ncz q0 q1\n");
    for (const auto& ins : setup.instructions) {
      p.apply(ins);
    }
    REQUIRE(p.state().group_of[0] == p.state().group_of[1]);

    p.apply(parse("qubits 2\nclbits 0\nprob 0.5 x q1\n").instructions[0]);
    CHECK(p.state().group_of[0] != p.state().group_of[1]);
    CHECK(group_rec(p.state(), 1).tag == Lattice::basis_diagonal);

    const GroupRecord& rq0 = group_rec(p.state(), 0);
    REQUIRE(rq0.tag == Lattice::known);
    REQUIRE(rq0.state->num_entries() == 2);
    const double r = 1.0 / std::sqrt(2.0);
    // cz flipped the sign of the |1> branch while q1 sat at |1>.
    CHECK(std::abs(rq0.state->amps.at("0") - cplx{r, 0.0}) < 1e-12);
    CHECK(std::abs(rq0.state->amps.at("1") + cplx{r, 0.0}) < 1e-12);
  }
}

TEST_CASE("measurements classify by what the state supports") {
  QcpConfig cfg;

  SUBCASE("fresh qubit is fixed at zero") {
    Propagator p(1, 1, cfg);
    auto cls = p.classify_measure(Measure{Qubit{0}, Clbit{0}});
    CHECK(cls.kind == MeasureClassification::Kind::fixed0);
    CHECK(cls.p_one == doctest::Approx(0.0));
    p.apply_measure(Measure{Qubit{0}, Clbit{0}}, cls);
    CHECK(p.state().clbits[0] == ClbitValue::const0);
    CHECK(group_rec(p.state(), 0).tag == Lattice::known);
  }
  SUBCASE("flipped qubit is fixed at one") {
    Propagator p(1, 1, cfg);
    p.apply(Instruction(Gate{GateKind::x, {}, {Qubit{0}}}));
    auto cls = p.classify_measure(Measure{Qubit{0}, Clbit{0}});
    CHECK(cls.kind == MeasureClassification::Kind::fixed1);
    CHECK(cls.p_one == doctest::Approx(1.0));
    p.apply_measure(Measure{Qubit{0}, Clbit{0}}, cls);
    CHECK(p.state().clbits[0] == ClbitValue::const1);
  }
  SUBCASE("superposed qubit is random with its amplitudes reported") {
    Propagator p(1, 1, cfg);
    p.apply(Instruction(Gate{GateKind::h, {}, {Qubit{0}}}));
    auto cls = p.classify_measure(Measure{Qubit{0}, Clbit{0}});
    CHECK(cls.kind == MeasureClassification::Kind::random);
    CHECK(cls.p_one == doctest::Approx(0.5));
    CHECK(std::norm(cls.psi.alpha) == doctest::Approx(0.5));
    CHECK(std::norm(cls.psi.beta) == doctest::Approx(0.5));
    p.apply_measure(Measure{Qubit{0}, Clbit{0}}, cls);
    CHECK(p.state().clbits[0] == ClbitValue::unknown);
    CHECK(group_rec(p.state(), 0).tag == Lattice::basis_diagonal);
    // Measuring again sees the classical mixture.
    CHECK(p.classify_measure(Measure{Qubit{0}, Clbit{0}}).kind ==
          MeasureClassification::Kind::basis_diagonal);
  }
  SUBCASE("entangled qubit does not factor") {
    Propagator p(2, 1, cfg);
    p.apply(Instruction(Gate{GateKind::h, {}, {Qubit{0}}}));
    p.apply(Instruction(Controlled{{Qubit{0}}, {}, Gate{GateKind::x, {}, {Qubit{1}}}}));
    auto cls = p.classify_measure(Measure{Qubit{0}, Clbit{0}});
    CHECK(cls.kind == MeasureClassification::Kind::entangled);
    p.apply_measure(Measure{Qubit{0}, Clbit{0}}, cls);
    CHECK(group_rec(p.state(), 0).tag == Lattice::top);
    CHECK(p.state().clbits[0] == ClbitValue::unknown);
  }
  SUBCASE("top group gives no information") {
    QcpConfig tiny;
    tiny.n_max = 1;
    Propagator p(1, 1, tiny);
    p.apply(Instruction(Gate{GateKind::h, {}, {Qubit{0}}}));
    CHECK(group_rec(p.state(), 0).tag == Lattice::top);
    CHECK(p.classify_measure(Measure{Qubit{0}, Clbit{0}}).kind ==
          MeasureClassification::Kind::opaque);
  }
}

TEST_CASE("collapse splits a qubit out of its group") {
  Propagator p(2, 0);
  for (const auto& ins : parse("qubits 2\nclbits 0\nh q0\nx q1\ncz q0 q1\n").instructions) {
    p.apply(ins);
  }
  p.collapse_qubit(Qubit{0}, 1);
  CHECK(p.state().group_of[0] != p.state().group_of[1]);
  const GroupRecord& r0 = group_rec(p.state(), 0);
  REQUIRE(r0.tag == Lattice::known);
  REQUIRE(r0.state->num_entries() == 1);
  CHECK(r0.state->amps.count("1") == 1);
  const GroupRecord& r1 = group_rec(p.state(), 1);
  REQUIRE(r1.tag == Lattice::known);
  REQUIRE(r1.state->num_entries() == 1);
  CHECK(std::abs(std::abs(r1.state->amps.at("1")) - 1.0) < 1e-12);
}

TEST_CASE("clbit lattice responds to writes") {
  Propagator p(1, 2);
  p.set_clbit(Clbit{1}, ClbitValue::unknown);
  CHECK(p.state().clbits[0] == ClbitValue::const0);
  CHECK(p.state().clbits[1] == ClbitValue::unknown);
  p.set_clbit(Clbit{1}, ClbitValue::const1);
  CHECK(p.state().clbits[1] == ClbitValue::const1);
}

TEST_CASE("degraded groups never regain precision") {
  QcpConfig tiny;
  tiny.n_max = 1;
  Propagator p(1, 0, tiny);
  p.apply(Instruction(Gate{GateKind::h, {}, {Qubit{0}}}));
  REQUIRE(group_rec(p.state(), 0).tag == Lattice::top);
  p.apply(Instruction(Gate{GateKind::h, {}, {Qubit{0}}}));
  CHECK(group_rec(p.state(), 0).tag == Lattice::top);
  p.apply(Instruction(Gate{GateKind::x, {}, {Qubit{0}}}));
  CHECK(group_rec(p.state(), 0).tag == Lattice::top);
}

TEST_CASE("classical controls keep a permutation target classical") {
  Propagator p(2, 1);
  p.apply(Instruction(Gate{GateKind::h, {}, {Qubit{0}}}));
  auto cls = p.classify_measure(Measure{Qubit{0}, Clbit{0}});
  p.apply_measure(Measure{Qubit{0}, Clbit{0}}, cls);
  REQUIRE(group_rec(p.state(), 0).tag == Lattice::basis_diagonal);

  // A classical bit driving a basis permutation leaves the target classical.
  p.apply(Instruction(Controlled{{Qubit{0}}, {}, Gate{GateKind::x, {}, {Qubit{1}}}}));
  CHECK(group_rec(p.state(), 1).tag == Lattice::basis_diagonal);
  CHECK(p.classify_measure(Measure{Qubit{1}, Clbit{0}}).kind ==
        MeasureClassification::Kind::basis_diagonal);

  // Driving a basis-changing gate instead loses the target entirely.
  Propagator p2(2, 1);
  p2.apply(Instruction(Gate{GateKind::h, {}, {Qubit{0}}}));
  auto cls2 = p2.classify_measure(Measure{Qubit{0}, Clbit{0}});
  p2.apply_measure(Measure{Qubit{0}, Clbit{0}}, cls2);
  p2.apply(Instruction(Controlled{{Qubit{0}}, {}, Gate{GateKind::h, {}, {Qubit{1}}}}));
  CHECK(group_rec(p2.state(), 1).tag == Lattice::top);
}
