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
#include <complex>
#include <vector>

#include <doctest.h>

#include "helpers.hpp"
#include "parser.hpp"
#include "simulate.hpp"

using namespace mcm;

namespace {

double total_probability(const OutputEnsemble& e) {
  double sum = 0.0;
  for (const auto& b : e.branches) {
    sum += b.probability;
  }
  return sum;
}

}  // namespace

TEST_CASE("qubit 0 owns the most significant amplitude bit") {
  Circuit c = parse("qubits 2\nclbits 0\nx q0\n");
  StateVec v = simulate_static(c);
  REQUIRE(v.amps.size() == 4);
  CHECK(std::abs(v.amps[2] - cplx{1.0, 0.0}) < 1e-15);  // |10>

  Circuit c1 = parse("qubits 2\nclbits 0\nx q1\n");
  StateVec v1 = simulate_static(c1);
  CHECK(std::abs(v1.amps[1] - cplx{1.0, 0.0}) < 1e-15);  // |01>
}

TEST_CASE("static simulation applies gates, controls, and swaps") {
  Circuit c = parse(
      "qubits 3\nclbits 0\n"
      "h q0\n"
      "cx q0 q1\n"
      "swap q1 q2\n"
      "nctrl q0 : x q2\n");
  StateVec v = simulate_static(c);
  const double r = 1.0 / std::sqrt(2.0);
  // After H+CX: (|000>+|110>)/sqrt2.  Swap q1,q2: (|000>+|101>)/sqrt2.
  // nctrl q0 x q2 flips q2 on the |0..> part: (|001>+|101>)/sqrt2.
  REQUIRE(v.amps.size() == 8);
  CHECK(std::abs(v.amps[1] - cplx{r, 0.0}) < 1e-12);
  CHECK(std::abs(v.amps[5] - cplx{r, 0.0}) < 1e-12);
  for (std::size_t i : {0u, 2u, 3u, 4u, 6u, 7u}) {
    CHECK(std::abs(v.amps[i]) < 1e-12);
  }
}

TEST_CASE("static simulation rejects dynamics and oversized circuits") {
  CHECK_THROWS_AS(simulate_static(parse("qubits 1\nclbits 1\nmeasure q0 -> c0\n")),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_static(parse("qubits 1\nclbits 1\nprob 0.5 x q0\n")),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_static(parse("qubits 1\nclbits 1\nif c0 == 0 : x q0\n")),
                  std::invalid_argument);
  Circuit big;
  big.n_qubits = 15;
  CHECK_THROWS_AS(simulate_static(big), LimitError);
}

TEST_CASE("dynamic simulation branches on measurements") {
  Circuit c = parse(
      "qubits 2\nclbits 1\n"
      "h q0\n"
      "measure q0 -> c0\n"
      "if c0 == 1 : x q1\n");
  OutputEnsemble e = simulate_dynamic(c);
  REQUIRE(e.branches.size() == 2);
  CHECK(total_probability(e) == doctest::Approx(1.0));
  for (const auto& b : e.branches) {
    CHECK(b.probability == doctest::Approx(0.5));
    REQUIRE(b.bits.size() == 1);
    if (b.bits[0] == 0) {
      CHECK(std::abs(b.state.amps[0] - cplx{1.0, 0.0}) < 1e-12);  // |00>
    } else {
      CHECK(std::abs(b.state.amps[3] - cplx{1.0, 0.0}) < 1e-12);  // |11>
    }
  }
}

TEST_CASE("dynamic simulation branches on probabilistic gates") {
  Circuit c = parse("qubits 1\nclbits 0\nprob 0.3 x q0\n");
  OutputEnsemble e = simulate_dynamic(c);
  REQUIRE(e.branches.size() == 2);
  double p_one = 0.0;
  for (const auto& b : e.branches) {
    if (std::abs(b.state.amps[1]) > 0.5) {
      p_one += b.probability;
    }
  }
  CHECK(p_one == doctest::Approx(0.3));
  CHECK(total_probability(e) == doctest::Approx(1.0));
}

TEST_CASE("prob 0 and prob 1 do not branch") {
  Circuit c = parse("qubits 1\nclbits 0\nprob 0 x q0\nprob 1 x q0\n");
  OutputEnsemble e = simulate_dynamic(c);
  REQUIRE(e.branches.size() == 1);
  CHECK(e.branches[0].probability == doctest::Approx(1.0));
  CHECK(std::abs(e.branches[0].state.amps[1] - cplx{1.0, 0.0}) < 1e-12);
}

TEST_CASE("deterministic measurements keep one branch") {
  Circuit c = parse(
      "qubits 2\nclbits 2\n"
      "x q0\n"
      "measure q0 -> c0\n"
      "measure q1 -> c1\n"
      "if c0 == 1 : x q1\n");
  OutputEnsemble e = simulate_dynamic(c);
  REQUIRE(e.branches.size() == 1);
  const Branch& b = e.branches[0];
  CHECK(b.probability == doctest::Approx(1.0));
  CHECK(b.bits == std::vector<int>{1, 0});
  CHECK(std::abs(b.state.amps[3] - cplx{1.0, 0.0}) < 1e-12);  // |11>
}

TEST_CASE("measurement collapse matches the deferred-measurement dilation") {
  // h q0; measure q0 -> c0; if c0 == 1 : x q1  behaves on (q0, q1) like the
  // unitary h q0; cx q0 q2; cx q2 q1 behaves once the ancilla q2 is ignored.
  Circuit dyn = parse(
      "qubits 2\nclbits 1\n"
      "h q0\n"
      "ry(0.9) q1\n"
      "measure q0 -> c0\n"
      "if c0 == 1 : x q1\n");
  OutputEnsemble dyn_e = simulate_dynamic(dyn);

  Circuit dil = parse(
      "qubits 3\nclbits 0\n"
      "h q0\n"
      "ry(0.9) q1\n"
      "cx q0 q2\n"
      "cx q2 q1\n");
  StateVec dil_v = simulate_static(dil);

  // Sum |amp|^2 over the dilated state per (q0, q1) sector and compare with
  // the branch-weighted dynamic probabilities.
  std::vector<double> dil_probs(4, 0.0);
  for (std::size_t i = 0; i < dil_v.amps.size(); ++i) {
    dil_probs[i >> 1] += std::norm(dil_v.amps[i]);
  }
  std::vector<double> dyn_probs(4, 0.0);
  for (const auto& b : dyn_e.branches) {
    for (std::size_t i = 0; i < b.state.amps.size(); ++i) {
      dyn_probs[i] += b.probability * std::norm(b.state.amps[i]);
    }
  }
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(dyn_probs[i] == doctest::Approx(dil_probs[i]).epsilon(1e-9));
  }
}

TEST_CASE("near-zero branches are pruned") {
  // The rotation leaves amplitude ~1e-8 on |1>, so measuring gives a branch
  // with probability ~1e-16, which is below the pruning threshold.
  Circuit c = parse(
      "qubits 1\nclbits 1\n"
      "ry(2e-8) q0\n"
      "measure q0 -> c0\n");
  OutputEnsemble e = simulate_dynamic(c);
  REQUIRE(e.branches.size() == 1);
  CHECK(e.branches[0].bits == std::vector<int>{0});
  CHECK(e.branches[0].probability == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("dynamic limits are enforced") {
  Circuit wide;
  wide.n_qubits = 13;
  CHECK_THROWS_AS(simulate_dynamic(wide), LimitError);

  Circuit many = parse("qubits 1\nclbits 0\nh q0\n");
  for (int i = 0; i < 21; ++i) {
    many.instructions.emplace_back(Prob{0.5, Gate{GateKind::x, {}, {Qubit{0}}}});
  }
  CHECK_THROWS_AS(simulate_dynamic(many), LimitError);
}

TEST_CASE("outputs and clbit counts are carried through") {
  Circuit c = parse(
      "qubits 1\nclbits 3\noutput c2\n"
      "h q0\n"
      "measure q0 -> c2\n");
  OutputEnsemble e = simulate_dynamic(c);
  CHECK(e.n_qubits == 1);
  CHECK(e.n_clbits == 3);
  CHECK(e.outputs == std::vector<Clbit>{Clbit{2}});
  for (const auto& b : e.branches) {
    CHECK(b.bits.size() == 3);
    CHECK(b.bits[0] == 0);
    CHECK(b.bits[1] == 0);
  }
}

TEST_CASE("apply_dense matches simulate_static one gate at a time") {
  auto rng = mcmtest::test_rng(12);
  for (int iter = 0; iter < 30; ++iter) {
    mcmtest::RandomCircuitOpts o;
    o.n_qubits = 1 + static_cast<std::uint32_t>(rng() % 4);
    o.n_clbits = 0;
    o.n_instructions = 12;
    o.allow_if = false;
    o.max_controls = std::min<std::size_t>(2, o.n_qubits - 1);
    Circuit c = mcmtest::random_circuit(rng, o);

    StateVec v = make_basis(c.n_qubits);
    for (const auto& ins : c.instructions) {
      if (const auto* g = std::get_if<Gate>(&ins)) {
        apply_dense(v, BaseOp(*g));
      } else if (const auto* ct = std::get_if<Controlled>(&ins)) {
        apply_dense(v, BaseOp(*ct));
      }
    }
    StateVec w = simulate_static(c);
    CHECK(mcmtest::max_amp_diff(v, w) < 1e-10);
  }
}
