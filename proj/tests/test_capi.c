/* Exercises libreptile through its C header only. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "reptile/reptile.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
    do {                                                               \
        if (!(cond)) {                                                 \
            fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                \
        }                                                              \
    } while (0)

static reptile_system* load_fixture(const char* name) {
    char path[1024];
    snprintf(path, sizeof path, "%s/%s", REPTILE_FIXTURES, name);
    reptile_system* s = NULL;
    EXPECT(reptile_system_load(path, &s) == REPTILE_OK);
    return s;
}

static int count_substr(const char* text, const char* needle) {
    int n = 0;
    for (const char* p = strstr(text, needle); p; p = strstr(p + 1, needle)) ++n;
    return n;
}

static void on_record(const char* line, void* user) {
    (void)line;
    ++*(int*)user;
}

static void test_matrices(void) {
    EXPECT(reptile_matrix_count(2) == 8);
    EXPECT(reptile_matrix_count(3) == 48);
    EXPECT(reptile_matrix_count(4) == 0);
    int perm[3], signs[3];
    EXPECT(reptile_matrix_get(2, 0, perm, signs) == REPTILE_OK);
    EXPECT(perm[0] == 0 && perm[1] == 1 && signs[0] == 1 && signs[1] == 1);
    EXPECT(reptile_matrix_get(2, 8, perm, signs) == REPTILE_E_VALIDATION);
    EXPECT(strlen(reptile_last_error()) > 0);
    EXPECT(reptile_matrix_get(4, 0, perm, signs) == REPTILE_E_DIMENSION);
}

static void test_analysis(void) {
    reptile_system* cube = load_fixture("cube.json");
    EXPECT(reptile_system_dim(cube) == 3);
    EXPECT(reptile_system_map_count(cube) == 8);
    reptile_analysis* a = NULL;
    reptile_report r;
    EXPECT(reptile_analyze(cube, 0, &a) == REPTILE_OK);
    EXPECT(reptile_analysis_report(a, &r) == REPTILE_OK);
    EXPECT(r.verdict == REPTILE_VERDICT_REP_TILE);
    EXPECT(r.neighbor_count == 26);
    EXPECT(fabs(r.boundary_dimension - 2.0) < 1e-6);
    EXPECT(r.connected);
    EXPECT(reptile_analysis_pieces_touch(a, 0, 7) == 1);
    EXPECT(reptile_analysis_pieces_touch(a, 0, 8) == 0);
    reptile_analysis_free(a);

    reptile_topology t;
    EXPECT(reptile_voxel_topology(cube, 2, &t) == REPTILE_OK);
    EXPECT(t.components == 1 && t.handles == 0);

    char* text = NULL;
    EXPECT(reptile_system_emit(cube, &text) == REPTILE_OK);
    reptile_system* back = NULL;
    EXPECT(reptile_system_parse(text, strlen(text), &back) == REPTILE_OK);
    EXPECT(reptile_system_map_count(back) == 8);
    reptile_string_free(text);
    reptile_system_free(back);

    char* mesh = NULL;
    EXPECT(reptile_export_mesh(cube, 1, &mesh) == REPTILE_OK);
    EXPECT(count_substr(mesh, "\nf ") == 54);
    reptile_string_free(mesh);
    reptile_system_free(cube);

    reptile_system* dup = load_fixture("duplicate_map.json");
    EXPECT(reptile_analyze(dup, 0, &a) == REPTILE_OK);
    EXPECT(reptile_analysis_report(a, &r) == REPTILE_OK);
    EXPECT(r.verdict == REPTILE_VERDICT_NOT_REP_TILE);
    reptile_analysis_free(a);
    reptile_system_free(dup);

    reptile_system* hole = load_fixture("hole_tile.json");
    EXPECT(reptile_analyze(hole, 50, &a) == REPTILE_OK);
    EXPECT(reptile_analysis_report(a, &r) == REPTILE_OK);
    EXPECT(r.verdict == REPTILE_VERDICT_INCONCLUSIVE);
    EXPECT(r.node_budget_exceeded);
    reptile_analysis_free(a);
    reptile_system_free(hole);

    reptile_system* sq = load_fixture("square.json");
    char* svg = NULL;
    EXPECT(reptile_export_svg(sq, 2, 2, &svg) == REPTILE_OK);
    EXPECT(count_substr(svg, "<path") == 16);
    reptile_string_free(svg);
    char* patch = NULL;
    EXPECT(reptile_export_patch(sq, 1, &patch) == REPTILE_OK);
    EXPECT(count_substr(patch, "\"index\"") == 4);
    reptile_string_free(patch);
    EXPECT(reptile_export_mesh(sq, 1, &mesh) == REPTILE_E_DIMENSION);
    reptile_system_free(sq);
}

static void test_errors(void) {
    reptile_system* s = NULL;
    const char* bad = "{\"kind\": \"system\", \"dim\": 2,,}";
    EXPECT(reptile_system_parse(bad, strlen(bad), &s) == REPTILE_E_PARSE);
    EXPECT(s == NULL);
    const char* seven = "{\"kind\":\"system\",\"dim\":2,\"maps\":[]}";
    EXPECT(reptile_system_parse(seven, strlen(seven), &s) == REPTILE_E_VALIDATION);
    EXPECT(strstr(reptile_last_error(), "maps") != NULL);
    EXPECT(reptile_system_load("/nonexistent/file.json", &s) == REPTILE_E_IO);
    EXPECT(reptile_analyze(NULL, 0, NULL) == REPTILE_E_ARGUMENT);
    EXPECT(strcmp(reptile_status_name(REPTILE_E_INCONCLUSIVE), "inconclusive") == 0);
    EXPECT(strlen(reptile_version()) > 0);
}

static void test_search(void) {
    reptile_search_config c;
    reptile_search_config_init(&c);
    c.dim = 2;
    c.translation_range = 1;
    c.seed = 1;
    c.trials = 500;
    c.workers = 1;
    c.timestamps = 0;
    reptile_search_summary sum;
    int records = 0;
    EXPECT(reptile_search_run(&c, NULL, on_record, NULL, &records, &sum) == REPTILE_OK);
    EXPECT(sum.trials == 500);
    EXPECT(sum.not_rep_tile + sum.inconclusive + sum.rep_tiles == sum.trials);
    EXPECT((int)sum.inserted == records);
    EXPECT(sum.store_size == sum.inserted);

    c.mode = REPTILE_MODE_BLOCK;
    EXPECT(reptile_search_run(&c, NULL, NULL, NULL, NULL, &sum) == REPTILE_E_ARGUMENT);
}

int main(void) {
    test_matrices();
    test_analysis();
    test_errors();
    test_search();
    if (failures) {
        fprintf(stderr, "%d check(s) failed\n", failures);
        return 1;
    }
    printf("capi: all checks passed\n");
    return 0;
}
