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

#include "mcmelim.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "circuit.hpp"
#include "ensemble.hpp"
#include "equivalence.hpp"
#include "parser.hpp"
#include "rewrite.hpp"
#include "simulate.hpp"
#include "stats.hpp"

struct mcm_circuit {
  mcm::Circuit c;
};

struct mcm_ensemble {
  std::vector<double> probabilities;
  std::vector<mcm_circuit> circuits;
};

namespace {

thread_local std::string g_last_error;

void set_error(std::string msg) { g_last_error = std::move(msg); }

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(::operator new(s.size() + 1, std::nothrow));
  if (out == nullptr) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

/* Run the body, translating exceptions into status codes. */
template <typename Fn>
mcm_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const mcm::ParseError& e) {
    set_error(e.what());
    return MCM_ERR_PARSE;
  } catch (const mcm::LimitError& e) {
    set_error(e.what());
    return MCM_ERR_LIMIT;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return MCM_ERR_ARGUMENT;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return MCM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    set_error(e.what());
    return MCM_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return MCM_ERR_INTERNAL;
  }
}

mcm_status store_string(const std::string& s, char** out) {
  char* copy = copy_string(s);
  if (copy == nullptr) {
    set_error("out of memory");
    return MCM_ERR_INTERNAL;
  }
  *out = copy;
  return MCM_OK;
}

}  // namespace

extern "C" {

const char* mcm_status_name(mcm_status s) {
  switch (s) {
    case MCM_OK: return "ok";
    case MCM_ERR_ARGUMENT: return "argument";
    case MCM_ERR_PARSE: return "parse";
    case MCM_ERR_VALIDATE: return "validate";
    case MCM_ERR_LIMIT: return "limit";
    case MCM_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* mcm_last_error(void) { return g_last_error.c_str(); }

mcm_status mcm_parse(const char* text, mcm_circuit** out) {
  if (text == nullptr || out == nullptr) {
    set_error("null argument");
    return MCM_ERR_ARGUMENT;
  }
  return guarded([&] {
    auto* handle = new mcm_circuit{mcm::parse(text)};
    *out = handle;
    return MCM_OK;
  });
}

mcm_status mcm_circuit_clone(const mcm_circuit* c, mcm_circuit** out) {
  if (c == nullptr || out == nullptr) {
    set_error("null argument");
    return MCM_ERR_ARGUMENT;
  }
  return guarded([&] {
    *out = new mcm_circuit{c->c};
    return MCM_OK;
  });
}

void mcm_circuit_free(mcm_circuit* c) { delete c; }

mcm_status mcm_serialize(const mcm_circuit* c, char** out) {
  if (c == nullptr || out == nullptr) {
    set_error("null argument");
    return MCM_ERR_ARGUMENT;
  }
  return guarded([&] { return store_string(mcm::serialize(c->c), out); });
}

void mcm_string_free(char* s) { ::operator delete(s); }

uint32_t mcm_num_qubits(const mcm_circuit* c) { return c ? c->c.n_qubits : 0; }

uint32_t mcm_num_clbits(const mcm_circuit* c) { return c ? c->c.n_clbits : 0; }

size_t mcm_num_instructions(const mcm_circuit* c) {
  return c ? c->c.instructions.size() : 0;
}

size_t mcm_num_measurements(const mcm_circuit* c) {
  return c ? mcm::count_measurements(c->c) : 0;
}

size_t mcm_depth(const mcm_circuit* c) { return c ? mcm::depth(c->c) : 0; }

mcm_status mcm_validate(const mcm_circuit* c, uint32_t max_controls, char** report) {
  if (c == nullptr) {
    set_error("null argument");
    return MCM_ERR_ARGUMENT;
  }
  return guarded([&]() -> mcm_status {
    std::vector<mcm::Violation> violations = mcm::validate(c->c, max_controls);
    if (violations.empty()) return MCM_OK;
    set_error(violations.front().message);
    if (report != nullptr) {
      mcm_status st = store_string(mcm::violations_json(violations), report);
      if (st != MCM_OK) return st;
    }
    return MCM_ERR_VALIDATE;
  });
}

void mcm_optimize_options_init(mcm_optimize_options* opt) {
  if (opt == nullptr) return;
  mcm::OptimizeOptions defaults;
  opt->n_max = defaults.qcp.n_max;
  opt->max_controls = defaults.qcp.max_controls;
  opt->rewrite_unused = defaults.rewrite_unused ? 1 : 0;
  opt->convert_basis_diagonal = defaults.convert_basis_diagonal ? 1 : 0;
}

mcm_status mcm_optimize(const mcm_circuit* c, const mcm_optimize_options* opt,
                        mcm_circuit** out, char** stats_json) {
  if (c == nullptr || out == nullptr) {
    set_error("null argument");
    return MCM_ERR_ARGUMENT;
  }
  return guarded([&]() -> mcm_status {
    mcm::OptimizeOptions options;
    if (opt != nullptr) {
      options.qcp.n_max = opt->n_max;
      options.qcp.max_controls = opt->max_controls;
      options.rewrite_unused = opt->rewrite_unused != 0;
      options.convert_basis_diagonal = opt->convert_basis_diagonal != 0;
    }
    std::vector<mcm::Violation> violations =
        mcm::validate(c->c, options.qcp.max_controls);
    if (!violations.empty()) {
      set_error(violations.front().message);
      return MCM_ERR_VALIDATE;
    }
    mcm::OptimizeResult result = mcm::optimize(c->c, options);
    std::string stats;
    if (stats_json != nullptr) {
      stats = mcm::stats_json(c->c, result.circuit, result.report);
    }
    auto* handle = new mcm_circuit{std::move(result.circuit)};
    if (stats_json != nullptr) {
      mcm_status st = store_string(stats, stats_json);
      if (st != MCM_OK) {
        delete handle;
        return st;
      }
    }
    *out = handle;
    return MCM_OK;
  });
}

mcm_status mcm_check_equivalence(const mcm_circuit* a, const mcm_circuit* b,
                                 double tol, int* equivalent, double* distance) {
  if (a == nullptr || b == nullptr || equivalent == nullptr) {
    set_error("null argument");
    return MCM_ERR_ARGUMENT;
  }
  return guarded([&]() -> mcm_status {
    mcm::OptimizationCheck check = mcm::check_optimization(a->c, b->c, tol);
    if (!check.checked) {
      set_error(check.limit_reason);
      return MCM_ERR_LIMIT;
    }
    *equivalent = check.equivalent ? 1 : 0;
    if (distance != nullptr) {
      *distance = std::max(check.max_density_diff, check.max_distribution_diff);
    }
    return MCM_OK;
  });
}

mcm_status mcm_compile_shot(const mcm_circuit* c, uint64_t seed, mcm_circuit** out) {
  if (c == nullptr || out == nullptr) {
    set_error("null argument");
    return MCM_ERR_ARGUMENT;
  }
  return guarded([&] {
    *out = new mcm_circuit{mcm::compile_shot(c->c, seed)};
    return MCM_OK;
  });
}

mcm_status mcm_enumerate(const mcm_circuit* c, size_t max_entries, mcm_ensemble** out) {
  if (c == nullptr || out == nullptr || max_entries == 0) {
    set_error("null or zero argument");
    return MCM_ERR_ARGUMENT;
  }
  return guarded([&] {
    mcm::Ensemble ensemble = mcm::enumerate_ensemble(c->c, max_entries);
    auto* handle = new mcm_ensemble;
    handle->probabilities.reserve(ensemble.entries.size());
    handle->circuits.reserve(ensemble.entries.size());
    for (mcm::WeightedCircuit& entry : ensemble.entries) {
      handle->probabilities.push_back(entry.probability);
      handle->circuits.push_back(mcm_circuit{std::move(entry.circuit)});
    }
    *out = handle;
    return MCM_OK;
  });
}

size_t mcm_ensemble_size(const mcm_ensemble* e) {
  return e ? e->circuits.size() : 0;
}

double mcm_ensemble_probability(const mcm_ensemble* e, size_t index) {
  if (e == nullptr || index >= e->probabilities.size()) return 0.0;
  return e->probabilities[index];
}

const mcm_circuit* mcm_ensemble_circuit(const mcm_ensemble* e, size_t index) {
  if (e == nullptr || index >= e->circuits.size()) return nullptr;
  return &e->circuits[index];
}

void mcm_ensemble_free(mcm_ensemble* e) { delete e; }

}  // extern "C"
