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

// Command line front end.  Talks to the optimizer exclusively through the
// public C interface.
//
// Exit codes: 0 success, 1 input or internal error, 2 verification found a
// mismatch, 3 exact processing exceeded size limits.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcmelim.h"

namespace {

struct CircuitPtr {
  mcm_circuit* p = nullptr;
  ~CircuitPtr() { mcm_circuit_free(p); }
  CircuitPtr() = default;
  CircuitPtr(const CircuitPtr&) = delete;
  CircuitPtr& operator=(const CircuitPtr&) = delete;
};

struct StringPtr {
  char* p = nullptr;
  ~StringPtr() { mcm_string_free(p); }
  StringPtr() = default;
  StringPtr(const StringPtr&) = delete;
  StringPtr& operator=(const StringPtr&) = delete;
};

struct EnsemblePtr {
  mcm_ensemble* p = nullptr;
  ~EnsemblePtr() { mcm_ensemble_free(p); }
  EnsemblePtr() = default;
  EnsemblePtr(const EnsemblePtr&) = delete;
  EnsemblePtr& operator=(const EnsemblePtr&) = delete;
};

bool read_text(const std::string& path, std::string& out) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    out = ss.str();
    return true;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

bool write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return static_cast<bool>(std::cout);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  out.flush();
  return static_cast<bool>(out);
}

int status_exit(mcm_status st) { return st == MCM_ERR_LIMIT ? 3 : 1; }

// Parse and validate one input file; returns 0 and fills `out` on success.
int load_circuit(const std::string& path, uint32_t max_controls, CircuitPtr& out) {
  std::string text;
  if (!read_text(path, text)) {
    std::cerr << "error: cannot read " << path << "\n";
    return 1;
  }
  mcm_status st = mcm_parse(text.c_str(), &out.p);
  if (st != MCM_OK) {
    std::cerr << "error: " << path << ": " << mcm_last_error() << "\n";
    return 1;
  }
  StringPtr report;
  st = mcm_validate(out.p, max_controls, &report.p);
  if (st != MCM_OK) {
    std::cerr << "error: " << path << ": " << mcm_last_error() << "\n";
    if (report.p != nullptr) std::cerr << report.p << "\n";
    return 1;
  }
  return 0;
}

struct OptimizeArgs {
  std::string input;
  std::string output = "-";
  std::string stats;
  std::size_t n_max = 64;
  std::uint32_t max_controls = 3;
  bool no_unused = false;
  bool no_basis = false;
  bool verify = false;
  double tol = 1e-9;
};

int run_optimize(const OptimizeArgs& a) {
  CircuitPtr input;
  if (int rc = load_circuit(a.input, a.max_controls, input)) return rc;

  mcm_optimize_options options;
  mcm_optimize_options_init(&options);
  options.n_max = a.n_max;
  options.max_controls = a.max_controls;
  options.rewrite_unused = a.no_unused ? 0 : 1;
  options.convert_basis_diagonal = a.no_basis ? 0 : 1;

  CircuitPtr optimized;
  StringPtr stats;
  auto start = std::chrono::steady_clock::now();
  mcm_status st = mcm_optimize(input.p, &options, &optimized.p,
                               a.stats.empty() ? nullptr : &stats.p);
  double elapsed = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  if (st != MCM_OK) {
    std::cerr << "error: " << mcm_last_error() << "\n";
    return status_exit(st);
  }

  if (a.verify) {
    int equivalent = 0;
    double distance = 0.0;
    st = mcm_check_equivalence(input.p, optimized.p, a.tol, &equivalent, &distance);
    if (st == MCM_ERR_LIMIT) {
      std::cerr << "error: verification needs exact simulation and this "
                   "circuit is too large: "
                << mcm_last_error() << "\n";
      return 3;
    }
    if (st != MCM_OK) {
      std::cerr << "error: " << mcm_last_error() << "\n";
      return 1;
    }
    if (!equivalent) {
      std::cerr << "error: optimized circuit is not equivalent to the input "
                   "(max deviation "
                << distance << ")\n";
      return 2;
    }
    std::cerr << "verified: output matches input within " << a.tol
              << " (max deviation " << distance << ")\n";
  }

  StringPtr text;
  st = mcm_serialize(optimized.p, &text.p);
  if (st != MCM_OK) {
    std::cerr << "error: " << mcm_last_error() << "\n";
    return 1;
  }
  if (!write_text(a.output, text.p)) {
    std::cerr << "error: cannot write " << a.output << "\n";
    return 1;
  }

  if (!a.stats.empty()) {
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(stats.p);
    j["wall_time_ms"] = elapsed;
    if (!write_text(a.stats, j.dump(2) + "\n")) {
      std::cerr << "error: cannot write " << a.stats << "\n";
      return 1;
    }
  }
  return 0;
}

struct VerifyArgs {
  std::string first;
  std::string second;
  double tol = 1e-9;
};

int run_verify(const VerifyArgs& a) {
  CircuitPtr ca;
  CircuitPtr cb;
  if (int rc = load_circuit(a.first, 3, ca)) return rc;
  if (int rc = load_circuit(a.second, 3, cb)) return rc;
  int equivalent = 0;
  double distance = 0.0;
  mcm_status st = mcm_check_equivalence(ca.p, cb.p, a.tol, &equivalent, &distance);
  if (st == MCM_ERR_LIMIT) {
    std::cerr << "error: circuits too large for exact comparison: "
              << mcm_last_error() << "\n";
    return 3;
  }
  if (st != MCM_OK) {
    std::cerr << "error: " << mcm_last_error() << "\n";
    return 1;
  }
  std::cout << (equivalent ? "equivalent" : "not equivalent")
            << " (max deviation " << distance << ")\n";
  return equivalent ? 0 : 2;
}

struct ShotsArgs {
  std::string input;
  std::uint64_t count = 1;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

int run_shots(const ShotsArgs& a) {
  CircuitPtr input;
  if (int rc = load_circuit(a.input, 3, input)) return rc;
  std::error_code ec;
  std::filesystem::create_directories(a.out_dir, ec);
  for (std::uint64_t k = 0; k < a.count; ++k) {
    std::uint64_t seed = a.seed + k;
    CircuitPtr shot;
    mcm_status st = mcm_compile_shot(input.p, seed, &shot.p);
    if (st != MCM_OK) {
      std::cerr << "error: " << mcm_last_error() << "\n";
      return status_exit(st);
    }
    StringPtr text;
    st = mcm_serialize(shot.p, &text.p);
    if (st != MCM_OK) {
      std::cerr << "error: " << mcm_last_error() << "\n";
      return 1;
    }
    std::filesystem::path file =
        std::filesystem::path(a.out_dir) / ("shot_" + std::to_string(seed) + ".qc");
    if (!write_text(file.string(), text.p)) {
      std::cerr << "error: cannot write " << file.string() << "\n";
      return 1;
    }
  }
  std::cout << "wrote " << a.count << " circuits to " << a.out_dir << "\n";
  return 0;
}

struct EnsembleArgs {
  std::string input;
  std::size_t max_entries = 4096;
};

int run_ensemble(const EnsembleArgs& a) {
  CircuitPtr input;
  if (int rc = load_circuit(a.input, 3, input)) return rc;
  EnsemblePtr ens;
  mcm_status st = mcm_enumerate(input.p, a.max_entries, &ens.p);
  if (st != MCM_OK) {
    std::cerr << "error: " << mcm_last_error() << "\n";
    return status_exit(st);
  }
  for (std::size_t i = 0; i < mcm_ensemble_size(ens.p); ++i) {
    StringPtr text;
    if (mcm_serialize(mcm_ensemble_circuit(ens.p, i), &text.p) != MCM_OK) {
      std::cerr << "error: " << mcm_last_error() << "\n";
      return 1;
    }
    // Drop the register header; list the gates on one line.
    std::string body;
    std::istringstream lines(text.p);
    std::string line;
    while (std::getline(lines, line)) {
      if (line.rfind("qubits ", 0) == 0 || line.rfind("clbits ", 0) == 0 ||
          line.rfind("output ", 0) == 0 || line.empty()) {
        continue;
      }
      if (!body.empty()) body += "; ";
      body += line;
    }
    char prob[64];
    std::snprintf(prob, sizeof prob, "%.12g", mcm_ensemble_probability(ens.p, i));
    std::cout << prob << "  " << (body.empty() ? "(empty)" : body) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Static optimizer for dynamic quantum circuits"};
  app.require_subcommand(1);

  OptimizeArgs oa;
  CLI::App* optimize = app.add_subcommand(
      "optimize", "Remove mid-circuit measurements where static analysis allows");
  optimize->add_option("input", oa.input, "circuit file, - for stdin")->required();
  optimize->add_option("-o,--output", oa.output, "output file, - for stdout");
  optimize->add_option("--stats", oa.stats, "write a JSON report, - for stdout");
  optimize->add_option("--n-max", oa.n_max, "amplitude budget per tracked group");
  optimize->add_option("--max-controls", oa.max_controls,
                       "largest accepted control count");
  optimize->add_flag("--no-unused-rewrite", oa.no_unused,
                     "keep measurements whose result is never read");
  optimize->add_flag("--no-basis-diagonal", oa.no_basis,
                     "keep measurements of classical basis mixtures");
  optimize->add_flag("--verify", oa.verify,
                     "check the result against exact simulation");
  optimize->add_option("--tol", oa.tol, "verification tolerance");

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand(
      "verify", "Compare the output distributions of two circuits exactly");
  verify->add_option("first", va.first, "circuit file")->required();
  verify->add_option("second", va.second, "circuit file")->required();
  verify->add_option("--tol", va.tol, "comparison tolerance");

  ShotsArgs sa;
  CLI::App* shots = app.add_subcommand(
      "shots", "Sample static circuits from the probabilistic gates");
  shots->add_option("input", sa.input, "circuit file, - for stdin")->required();
  shots->add_option("count", sa.count, "number of circuits to write")->required();
  shots->add_option("--seed", sa.seed, "seed of the first sample");
  shots->add_option("--out-dir", sa.out_dir, "directory for shot_<seed>.qc files");

  EnsembleArgs ea;
  CLI::App* ensemble = app.add_subcommand(
      "ensemble", "List every realization of the probabilistic gates");
  ensemble->add_option("input", ea.input, "circuit file, - for stdin")->required();
  ensemble->add_option("--max-entries", ea.max_entries,
                       "largest ensemble to enumerate");

  CLI11_PARSE(app, argc, argv);

  if (optimize->parsed()) return run_optimize(oa);
  if (verify->parsed()) return run_verify(va);
  if (shots->parsed()) return run_shots(sa);
  if (ensemble->parsed()) return run_ensemble(ea);
  return 1;
}
