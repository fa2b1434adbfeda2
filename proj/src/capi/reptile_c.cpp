#include "reptile/reptile.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "reptile/error.hpp"
#include "reptile/export.hpp"
#include "reptile/ifs.hpp"
#include "reptile/neighbor_graph.hpp"
#include "reptile/search.hpp"
#include "reptile/topology.hpp"

struct reptile_system {
    reptile::RepTileSystem system;
};

struct reptile_analysis {
    reptile::AnalysisReport report;
};

namespace {

thread_local std::string g_last_error;

reptile_status fail(reptile_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

// Runs f, translating library exceptions into status codes.
template <class F>
reptile_status guarded(F&& f) {
    try {
        g_last_error.clear();
        f();
        return REPTILE_OK;
    } catch (const reptile::ParseError& e) {
        return fail(REPTILE_E_PARSE, e.what());
    } catch (const reptile::ValidationError& e) {
        return fail(REPTILE_E_VALIDATION, e.what());
    } catch (const reptile::DimensionError& e) {
        return fail(REPTILE_E_DIMENSION, e.what());
    } catch (const reptile::ArgumentError& e) {
        return fail(REPTILE_E_ARGUMENT, e.what());
    } catch (const reptile::InconclusiveError& e) {
        return fail(REPTILE_E_INCONCLUSIVE, e.what());
    } catch (const reptile::NumericalError& e) {
        return fail(REPTILE_E_NUMERICAL, e.what());
    } catch (const reptile::ResourceError& e) {
        return fail(REPTILE_E_RESOURCE, e.what());
    } catch (const reptile::IoError& e) {
        return fail(REPTILE_E_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(REPTILE_E_RESOURCE, "out of memory");
    } catch (const std::exception& e) {
        return fail(REPTILE_E_INTERNAL, e.what());
    } catch (...) {
        return fail(REPTILE_E_INTERNAL, "unknown error");
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(bool cond, const char* what) {
    if (!cond) throw reptile::ArgumentError(what);
}

}  // namespace

extern "C" {

const char* reptile_version(void) { return "1.0.0"; }

const char* reptile_last_error(void) { return g_last_error.c_str(); }

const char* reptile_status_name(reptile_status status) {
    switch (status) {
        case REPTILE_OK: return "ok";
        case REPTILE_E_ARGUMENT: return "argument error";
        case REPTILE_E_PARSE: return "parse error";
        case REPTILE_E_VALIDATION: return "validation error";
        case REPTILE_E_DIMENSION: return "dimension error";
        case REPTILE_E_INCONCLUSIVE: return "inconclusive";
        case REPTILE_E_NUMERICAL: return "numerical error";
        case REPTILE_E_RESOURCE: return "resource error";
        case REPTILE_E_IO: return "i/o error";
        case REPTILE_E_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void reptile_string_free(char* s) { std::free(s); }

int reptile_matrix_count(int dim) {
    if (dim != 2 && dim != 3) return 0;
    return static_cast<int>(reptile::enumerate_matrices(dim).size());
}

reptile_status reptile_matrix_get(int dim, int index, int* perm, int* signs) {
    return guarded([&] {
        require(perm && signs, "reptile_matrix_get: null output");
        const auto m = reptile::SignedPermMatrix::from_index(dim, index);
        for (int j = 0; j < dim; ++j) {
            perm[j] = m.perm(j);
            signs[j] = m.sign(j);
        }
    });
}

reptile_status reptile_system_parse(const char* text, size_t length, reptile_system** out) {
    return guarded([&] {
        require(out, "reptile_system_parse: null output");
        require(text || length == 0, "reptile_system_parse: null text");
        *out = nullptr;
        auto sys = reptile::load_system(std::string_view(text ? text : "", length));
        *out = new reptile_system{std::move(sys)};
    });
}

reptile_status reptile_system_load(const char* path, reptile_system** out) {
    return guarded([&] {
        require(path && out, "reptile_system_load: null argument");
        *out = nullptr;
        auto sys = reptile::load_system(reptile::read_file(path));
        *out = new reptile_system{std::move(sys)};
    });
}

void reptile_system_free(reptile_system* s) { delete s; }

int reptile_system_dim(const reptile_system* s) { return s ? s->system.dim() : 0; }

int reptile_system_map_count(const reptile_system* s) { return s ? s->system.size() : 0; }

reptile_status reptile_system_emit(const reptile_system* s, char** out) {
    return guarded([&] {
        require(s && out, "reptile_system_emit: null argument");
        *out = dup_string(reptile::emit_system(reptile::SystemDocument{s->system}));
    });
}

reptile_status reptile_analyze(const reptile_system* s, size_t node_budget, reptile_analysis** out) {
    return guarded([&] {
        require(s && out, "reptile_analyze: null argument");
        *out = nullptr;
        reptile::GraphOptions opt;
        if (node_budget > 0) opt.node_budget = node_budget;
        auto report = reptile::analyze(s->system, opt);
        *out = new reptile_analysis{std::move(report)};
    });
}

void reptile_analysis_free(reptile_analysis* a) { delete a; }

reptile_status reptile_analysis_report(const reptile_analysis* a, reptile_report* out) {
    return guarded([&] {
        require(a && out, "reptile_analysis_report: null argument");
        const auto& r = a->report;
        switch (r.verdict) {
            case reptile::Verdict::rep_tile: out->verdict = REPTILE_VERDICT_REP_TILE; break;
            case reptile::Verdict::not_rep_tile: out->verdict = REPTILE_VERDICT_NOT_REP_TILE; break;
            case reptile::Verdict::inconclusive: out->verdict = REPTILE_VERDICT_INCONCLUSIVE; break;
        }
        out->neighbor_count = r.neighbor_count;
        out->boundary_dimension = r.boundary_dimension;
        out->boundary_converged = r.boundary_converged;
        out->connected = r.connected;
        out->node_budget_exceeded = r.node_budget_exceeded;
        out->node_count = r.node_count;
    });
}

int reptile_analysis_pieces_touch(const reptile_analysis* a, int i, int j) {
    if (!a || i < 0 || j < 0) return 0;
    const auto& adj = a->report.piece_adjacency;
    if (static_cast<std::size_t>(i) >= adj.size() || static_cast<std::size_t>(j) >= adj[i].size()) return 0;
    return adj[i][j] ? 1 : 0;
}

reptile_status reptile_voxel_topology(const reptile_system* s, int level, reptile_topology* out) {
    return guarded([&] {
        require(s && out, "reptile_voxel_topology: null argument");
        const reptile::VoxelSet v = reptile::voxelize(s->system, level);
        *out = reptile_topology{};
        out->cells = v.size();
        if (v.dim() == 3) {
            const auto r = reptile::hole_report(v);
            out->components = r.components;
            out->euler_characteristic = r.euler_characteristic;
            out->cavities = r.cavities;
            out->handles = r.handles;
            out->interior_euler = r.interior_euler;
            out->interior_cavities = r.interior_cavities;
            out->interior_handles = r.interior_handles;
        } else {
            out->components = reptile::components(v);
            out->euler_characteristic = reptile::euler_characteristic(v);
            out->cavities = reptile::cavities(v);
        }
    });
}

reptile_status reptile_export_mesh(const reptile_system* s, int voxel_level, char** out) {
    return guarded([&] {
        require(s && out, "reptile_export_mesh: null argument");
        *out = dup_string(reptile::mesh_export(reptile::voxelize(s->system, voxel_level)));
    });
}

reptile_status reptile_export_svg(const reptile_system* s, int voxel_level, int patch_level, char** out) {
    return guarded([&] {
        require(s && out, "reptile_export_svg: null argument");
        const auto v = reptile::voxelize(s->system, voxel_level);
        std::optional<reptile::TilingPatch> patch;
        if (patch_level >= 0) patch = reptile::supertile_patch(s->system, patch_level);
        *out = dup_string(reptile::svg_export(v, patch));
    });
}

reptile_status reptile_export_patch(const reptile_system* s, int level, char** out) {
    return guarded([&] {
        require(s && out, "reptile_export_patch: null argument");
        *out = dup_string(reptile::patch_export(reptile::supertile_patch(s->system, level)));
    });
}

void reptile_search_config_init(reptile_search_config* c) {
    if (!c) return;
    const reptile::SearchConfig d;
    *c = reptile_search_config{};
    c->dim = d.dim;
    c->mode = REPTILE_MODE_FREE;
    c->translation_range = d.translation_range;
    c->seed = d.seed;
    c->trials = d.trials;
    c->time_limit_seconds = 0.0;
    c->node_budget = d.node_budget;
    c->workers = d.workers;
    c->boundary_dim_tolerance = d.filters.boundary_dim_tolerance;
    c->timestamps = 1;
    c->overlap_precheck = d.overlap_precheck;
}

reptile_status reptile_search_run(const reptile_search_config* c, const char* store_path, reptile_record_fn on_record,
                                  reptile_warning_fn on_warning, void* user, reptile_search_summary* out) {
    return guarded([&] {
        require(c && out, "reptile_search_run: null argument");
        reptile::SearchConfig cfg;
        cfg.dim = c->dim;
        cfg.mode = c->mode == REPTILE_MODE_BLOCK ? reptile::SearchMode::block : reptile::SearchMode::free;
        require(c->mode == REPTILE_MODE_FREE || c->mode == REPTILE_MODE_BLOCK, "search: unknown mode");
        cfg.translation_range = c->translation_range;
        cfg.seed = c->seed;
        cfg.trials = c->trials;
        if (c->time_limit_seconds > 0) cfg.time_limit_seconds = c->time_limit_seconds;
        cfg.node_budget = c->node_budget;
        cfg.workers = c->workers;
        cfg.filters.require_connected = c->filter_connected != 0;
        if (c->has_boundary_dim) cfg.filters.boundary_dim_target = c->boundary_dim;
        cfg.filters.boundary_dim_tolerance = c->boundary_dim_tolerance;
        if (c->has_neighbors_min) cfg.filters.neighbors_min = c->neighbors_min;
        if (c->has_neighbors_max) cfg.filters.neighbors_max = c->neighbors_max;
        cfg.timestamps = c->timestamps != 0;
        cfg.overlap_precheck = c->overlap_precheck;
        cfg.validate();

        std::optional<reptile::ResultStore> file_store;
        reptile::ResultStore memory_store;
        if (store_path) file_store.emplace(store_path);
        reptile::ResultStore& store = file_store ? *file_store : memory_store;
        if (on_warning) {
            for (const auto& w : store.warnings()) on_warning(w.c_str(), user);
        }
        reptile::RecordCallback cb;
        if (on_record) {
            cb = [&](const reptile::ResultRecord& r) { on_record(reptile::record_to_line(r).c_str(), user); };
        }
        const auto sum = reptile::run_search(cfg, store, cb);
        out->trials = sum.trials;
        out->not_rep_tile = sum.not_rep_tile;
        out->inconclusive = sum.inconclusive;
        out->rep_tiles = sum.rep_tiles;
        out->filtered_out = sum.filtered_out;
        out->duplicates = sum.duplicates;
        out->inserted = sum.inserted;
        out->elapsed_seconds = sum.elapsed_seconds;
        out->store_size = store.size();
    });
}

}  // extern "C"
