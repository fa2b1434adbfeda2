/* C interface to the reptile library.
 *
 * Every function that can fail returns a reptile_status; on failure a
 * description is available from reptile_last_error() on the same thread.
 * Strings returned through char** out-parameters are heap allocated and must
 * be released with reptile_string_free().
 */
#ifndef REPTILE_REPTILE_H
#define REPTILE_REPTILE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(REPTILE_BUILDING_LIBRARY)
#    define REPTILE_API __declspec(dllexport)
#  else
#    define REPTILE_API __declspec(dllimport)
#  endif
#else
#  define REPTILE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum reptile_status {
    REPTILE_OK = 0,
    REPTILE_E_ARGUMENT = 1,
    REPTILE_E_PARSE = 2,
    REPTILE_E_VALIDATION = 3,
    REPTILE_E_DIMENSION = 4,
    REPTILE_E_INCONCLUSIVE = 5,
    REPTILE_E_NUMERICAL = 6,
    REPTILE_E_RESOURCE = 7,
    REPTILE_E_IO = 8,
    REPTILE_E_INTERNAL = 9
} reptile_status;

REPTILE_API const char* reptile_version(void);
/* Message of the last failed call on this thread; "" if none. */
REPTILE_API const char* reptile_last_error(void);
REPTILE_API const char* reptile_status_name(reptile_status status);
REPTILE_API void reptile_string_free(char* s);

/* ---- signed permutation matrices ---- */

/* 8 for dim 2, 48 for dim 3; 0 for any other dim. */
REPTILE_API int reptile_matrix_count(int dim);
/* perm and signs receive dim entries: column j is signs[j] * e_{perm[j]}. */
REPTILE_API reptile_status reptile_matrix_get(int dim, int index, int* perm, int* signs);

/* ---- systems ---- */

typedef struct reptile_system reptile_system;

/* Block documents are expanded to their eight maps on load. */
REPTILE_API reptile_status reptile_system_parse(const char* text, size_t length, reptile_system** out);
REPTILE_API reptile_status reptile_system_load(const char* path, reptile_system** out);
REPTILE_API void reptile_system_free(reptile_system* s);
REPTILE_API int reptile_system_dim(const reptile_system* s);
REPTILE_API int reptile_system_map_count(const reptile_system* s);
/* Canonical multi-line JSON of the (expanded) system. */
REPTILE_API reptile_status reptile_system_emit(const reptile_system* s, char** out);

/* ---- analysis ---- */

typedef enum reptile_verdict {
    REPTILE_VERDICT_REP_TILE = 0,
    REPTILE_VERDICT_NOT_REP_TILE = 1,
    REPTILE_VERDICT_INCONCLUSIVE = 2
} reptile_verdict;

typedef struct reptile_report {
    reptile_verdict verdict;
    size_t neighbor_count;
    double boundary_dimension;
    int boundary_converged;
    int connected;
    int node_budget_exceeded;
    size_t node_count;
} reptile_report;

typedef struct reptile_analysis reptile_analysis;

/* node_budget 0 selects the library default. */
REPTILE_API reptile_status reptile_analyze(const reptile_system* s, size_t node_budget, reptile_analysis** out);
REPTILE_API void reptile_analysis_free(reptile_analysis* a);
REPTILE_API reptile_status reptile_analysis_report(const reptile_analysis* a, reptile_report* out);
/* 1 iff pieces i and j touch; requires a rep-tile verdict. */
REPTILE_API int reptile_analysis_pieces_touch(const reptile_analysis* a, int i, int j);

typedef struct reptile_topology {
    size_t cells;
    size_t components;
    int64_t euler_characteristic;
    size_t cavities;
    int64_t handles;
    int64_t interior_euler;
    size_t interior_cavities;
    int64_t interior_handles;
} reptile_topology;

/* Topology of the voxel outer approximation at the given level. Handles and
 * interior fields are filled for dim 3 only. */
REPTILE_API reptile_status reptile_voxel_topology(const reptile_system* s, int level, reptile_topology* out);

/* ---- export ---- */

/* OBJ surface of the level-n voxel approximation (dim 3). */
REPTILE_API reptile_status reptile_export_mesh(const reptile_system* s, int voxel_level, char** out);
/* SVG of the level-n voxel approximation (dim 2); patch_level < 0 draws the
 * tile alone, otherwise every copy in the level-k supertile. */
REPTILE_API reptile_status reptile_export_svg(const reptile_system* s, int voxel_level, int patch_level, char** out);
/* One JSON line per placement of the level-k supertile patch. */
REPTILE_API reptile_status reptile_export_patch(const reptile_system* s, int level, char** out);

/* ---- search ---- */

typedef enum reptile_search_mode { REPTILE_MODE_FREE = 0, REPTILE_MODE_BLOCK = 1 } reptile_search_mode;

typedef struct reptile_search_config {
    int dim;
    reptile_search_mode mode;
    int translation_range;
    uint64_t seed;
    uint64_t trials;
    double time_limit_seconds; /* <= 0: none */
    size_t node_budget;
    unsigned workers; /* 0: available parallelism */
    int filter_connected;
    int has_boundary_dim;
    double boundary_dim;
    double boundary_dim_tolerance;
    int has_neighbors_min;
    size_t neighbors_min;
    int has_neighbors_max;
    size_t neighbors_max;
    int timestamps;
    int overlap_precheck; /* word length for the collision pre-check, 0 = off */
} reptile_search_config;

typedef struct reptile_search_summary {
    uint64_t trials;
    uint64_t not_rep_tile;
    uint64_t inconclusive;
    uint64_t rep_tiles;
    uint64_t filtered_out;
    uint64_t duplicates;
    uint64_t inserted;
    double elapsed_seconds;
    size_t store_size;
} reptile_search_summary;

/* Called with each newly stored record line (no trailing newline). */
typedef void (*reptile_record_fn)(const char* line, void* user);
/* Called with each warning raised while opening the store. */
typedef void (*reptile_warning_fn)(const char* message, void* user);

REPTILE_API void reptile_search_config_init(reptile_search_config* c);
/* store_path NULL keeps results in memory only. */
REPTILE_API reptile_status reptile_search_run(const reptile_search_config* c, const char* store_path,
                                              reptile_record_fn on_record, reptile_warning_fn on_warning,
                                              void* user, reptile_search_summary* out);

#ifdef __cplusplus
}
#endif

#endif /* REPTILE_REPTILE_H */
