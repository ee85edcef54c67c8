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

/*
 * C interface to the mcmelim optimizer.  All objects are opaque handles;
 * every function reports success through mcm_status and leaves output
 * parameters untouched on failure.  Strings returned through out-parameters
 * are heap copies owned by the caller (release with mcm_string_free);
 * mcm_last_error and mcm_status_name return borrowed storage.
 */

#ifndef MCMELIM_H
#define MCMELIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct mcm_circuit mcm_circuit;
typedef struct mcm_ensemble mcm_ensemble;

typedef enum mcm_status {
  MCM_OK = 0,
  MCM_ERR_ARGUMENT = 1, /* null or out-of-range argument */
  MCM_ERR_PARSE = 2,    /* malformed circuit text */
  MCM_ERR_VALIDATE = 3, /* well-formed text, ill-formed circuit */
  MCM_ERR_LIMIT = 4,    /* exact processing would exceed size limits */
  MCM_ERR_INTERNAL = 5
} mcm_status;

const char* mcm_status_name(mcm_status s);

/* Human-readable detail for the most recent failure on this thread. */
const char* mcm_last_error(void);

/* ---- circuits ---- */

mcm_status mcm_parse(const char* text, mcm_circuit** out);
mcm_status mcm_circuit_clone(const mcm_circuit* c, mcm_circuit** out);
void mcm_circuit_free(mcm_circuit* c);

mcm_status mcm_serialize(const mcm_circuit* c, char** out);
void mcm_string_free(char* s);

uint32_t mcm_num_qubits(const mcm_circuit* c);
uint32_t mcm_num_clbits(const mcm_circuit* c);
size_t mcm_num_instructions(const mcm_circuit* c);
size_t mcm_num_measurements(const mcm_circuit* c);
size_t mcm_depth(const mcm_circuit* c);

/* Structural checks beyond the grammar.  Returns MCM_OK or MCM_ERR_VALIDATE;
 * with a non-null report, stores a JSON array of findings on failure. */
mcm_status mcm_validate(const mcm_circuit* c, uint32_t max_controls, char** report);

/* ---- optimization ---- */

typedef struct mcm_optimize_options {
  size_t n_max;               /* amplitude budget per tracked group */
  uint32_t max_controls;      /* validation bound on quantum controls */
  int rewrite_unused;         /* rewrite measurements nobody reads */
  int convert_basis_diagonal; /* rewrite measurements of basis mixtures */
} mcm_optimize_options;

void mcm_optimize_options_init(mcm_optimize_options* opt);

/* Validates, then optimizes.  With a non-null stats_json, stores a JSON
 * summary of what was rewritten and why. */
mcm_status mcm_optimize(const mcm_circuit* c, const mcm_optimize_options* opt,
                        mcm_circuit** out, char** stats_json);

/* ---- verification ---- */

/* Exhaustive ensemble comparison.  On MCM_OK, *equivalent is 1 or 0 and
 * *distance the largest deviation found.  MCM_ERR_LIMIT when either circuit
 * is too large to simulate exactly. */
mcm_status mcm_check_equivalence(const mcm_circuit* a, const mcm_circuit* b,
                                 double tol, int* equivalent, double* distance);

/* ---- probabilistic compilation ---- */

/* Resolve probabilistic gates with a deterministic draw per (seed,
 * instruction index); the same seed always produces the same circuit. */
mcm_status mcm_compile_shot(const mcm_circuit* c, uint64_t seed, mcm_circuit** out);

/* Distribution over realized static circuits. */
mcm_status mcm_enumerate(const mcm_circuit* c, size_t max_entries, mcm_ensemble** out);
size_t mcm_ensemble_size(const mcm_ensemble* e);
double mcm_ensemble_probability(const mcm_ensemble* e, size_t index);
/* Borrowed handle, valid for the lifetime of the ensemble. */
const mcm_circuit* mcm_ensemble_circuit(const mcm_ensemble* e, size_t index);
void mcm_ensemble_free(mcm_ensemble* e);

#ifdef __cplusplus
}
#endif

#endif /* MCMELIM_H */
