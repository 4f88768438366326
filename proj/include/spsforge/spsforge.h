/*
 * C interface to the spsforge library. All handles are opaque. Every call
 * that can fail returns an spsf_status; on failure spsf_last_error() holds
 * a message for the calling thread. Strings returned through char** are
 * owned by the caller and released with spsf_string_free().
 */
#ifndef SPSFORGE_H
#define SPSFORGE_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(SPSFORGE_BUILDING)
#define SPSF_API __declspec(dllexport)
#else
#define SPSF_API __declspec(dllimport)
#endif
#else
#define SPSF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct spsf_diagram spsf_diagram;
typedef struct spsf_order spsf_order;

typedef enum spsf_status {
  SPSF_OK = 0,
  SPSF_E_INVALID_ARGUMENT = 1,
  SPSF_E_TOO_LARGE = 2,
  SPSF_E_UNKNOWN_ELEMENT = 3,
  SPSF_E_CYCLE_DETECTED = 4,
  SPSF_E_NOT_TRANSITIVELY_REDUCED = 5,
  SPSF_E_NO_BOUNDS = 6,
  SPSF_E_NOT_A_LATTICE = 7,
  SPSF_E_NOT_PLANAR = 8,
  SPSF_E_INCONSISTENT_ROTATION = 9,
  SPSF_E_CELL_NOT_FOUND = 10,
  SPSF_E_INTERNAL = 11,
  SPSF_E_NOT_SPS = 12,
  SPSF_E_INVALID_TARGET = 13,
  SPSF_E_PARSE = 14,
  SPSF_E_VALIDATION = 15,
  SPSF_E_IO = 16
} spsf_status;

SPSF_API const char* spsf_version(void);
SPSF_API const char* spsf_status_name(spsf_status status);
/* Message of the last failed call on this thread; never NULL. */
SPSF_API const char* spsf_last_error(void);
SPSF_API void spsf_string_free(char* s);

/* ---- Diagrams ------------------------------------------------------- */

/* Product of a (p+1)-chain and a (q+1)-chain, labelled "grid:PxQ". */
SPSF_API spsf_status spsf_grid(int p, int q, spsf_diagram** out);
/* A document without rotation orders loads as a lattice only; operations
 * that need the embedding then fail with SPSF_E_VALIDATION. */
SPSF_API spsf_status spsf_diagram_load(const char* path, spsf_diagram** out);
SPSF_API spsf_status spsf_diagram_from_json(const char* text, spsf_diagram** out);
SPSF_API spsf_status spsf_diagram_save(const spsf_diagram* d, const char* path);
SPSF_API spsf_status spsf_diagram_to_json(const spsf_diagram* d, char** out);
SPSF_API void spsf_diagram_free(spsf_diagram* d);

SPSF_API size_t spsf_diagram_size(const spsf_diagram* d);
SPSF_API int spsf_diagram_has_rotation(const spsf_diagram* d);
/* Number of forks recorded in the diagram's provenance. */
SPSF_API int spsf_diagram_fork_count(const spsf_diagram* d);
SPSF_API spsf_status spsf_diagram_canonical_key(const spsf_diagram* d, char** hex);

/* Inserts a fork into the 4-cell named by {bottom, left, right, top}. */
SPSF_API spsf_status spsf_fork(const spsf_diagram* d, const char* const cell[4],
                               spsf_diagram** out);

/* ---- Analysis ------------------------------------------------------- */

SPSF_API spsf_status spsf_congruence_report(const spsf_diagram* d, int ji_order, int colors,
                                            char** out);
/* prop is one of: semimodular, slim, planar, distributive, rectangular,
 * patch, cc1, cc2. */
SPSF_API spsf_status spsf_check(const spsf_diagram* d, const char* prop, int* holds);
SPSF_API spsf_status spsf_export_dot(const spsf_diagram* d, int colors, char** out);
/* JSON verification report: CC1, CC2 and the count-law replay. */
SPSF_API spsf_status spsf_verify(const spsf_diagram* d, char** report_json);

/* ---- Target orders -------------------------------------------------- */

SPSF_API spsf_status spsf_order_d8(spsf_order** out);
SPSF_API spsf_status spsf_order_load(const char* path, spsf_order** out);
SPSF_API spsf_status spsf_order_from_json(const char* text, spsf_order** out);
SPSF_API size_t spsf_order_size(const spsf_order* o);
SPSF_API void spsf_order_free(spsf_order* o);

/* ---- Enumeration and search ----------------------------------------- */

typedef struct spsf_enumerate_params {
  int max_forks;
  size_t max_elements; /* 0: library maximum */
  int threads;         /* 0: SPSFORGE_THREADS or hardware */
} spsf_enumerate_params;

/* Called once per emitted lattice in deterministic order. The handle is
 * only valid during the call. Return 0 to stop. */
typedef int (*spsf_visit_fn)(void* user, const spsf_diagram* lattice, size_t index);

SPSF_API spsf_status spsf_enumerate(const spsf_diagram* base, const spsf_enumerate_params* params,
                                    spsf_visit_fn visit, void* user, char** stats_json);

typedef struct spsf_search_params {
  int max_forks;       /* cap for grid(1,1) */
  int max_forks_large; /* cap for larger grids; negative: same as max_forks */
  size_t max_elements;
  int grid_max_p;
  int grid_max_q;
  int prune_on_ji_count;
  int threads;
  const char* checkpoint_path; /* NULL: no checkpoints */
  size_t checkpoint_every;
  int resume;
  int include_timing;
} spsf_search_params;

SPSF_API void spsf_search_params_init(spsf_search_params* params);
SPSF_API spsf_status spsf_search(const spsf_order* target, const spsf_search_params* params,
                                 char** report_json);

#ifdef __cplusplus
}
#endif

#endif
