// Command-line front end. Uses only the C interface of libreptile.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "reptile/reptile.h"

namespace {

enum Exit { kOk = 0, kNotTile = 1, kInconclusive = 2, kUsage = 3, kInternal = 4 };

struct SystemDeleter {
    void operator()(reptile_system* s) const { reptile_system_free(s); }
};
struct AnalysisDeleter {
    void operator()(reptile_analysis* a) const { reptile_analysis_free(a); }
};
using SystemPtr = std::unique_ptr<reptile_system, SystemDeleter>;
using AnalysisPtr = std::unique_ptr<reptile_analysis, AnalysisDeleter>;

// Carries an exit code out of a command.
struct Failure {
    int code;
};

int exit_for(reptile_status st) {
    switch (st) {
        case REPTILE_OK: return kOk;
        case REPTILE_E_INCONCLUSIVE: return kInconclusive;
        case REPTILE_E_NUMERICAL:
        case REPTILE_E_INTERNAL: return kInternal;
        default: return kUsage;
    }
}

void check(reptile_status st) {
    if (st == REPTILE_OK) return;
    std::cerr << "reptile: " << reptile_status_name(st) << ": " << reptile_last_error() << '\n';
    throw Failure{exit_for(st)};
}

std::string take(char* s) {
    std::string out = s ? s : "";
    reptile_string_free(s);
    return out;
}

std::string fixed6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

const char* verdict_name(reptile_verdict v) {
    switch (v) {
        case REPTILE_VERDICT_REP_TILE: return "rep-tile";
        case REPTILE_VERDICT_NOT_REP_TILE: return "not-rep-tile";
        case REPTILE_VERDICT_INCONCLUSIVE: return "inconclusive";
    }
    return "unknown";
}

int verdict_exit(reptile_verdict v) {
    switch (v) {
        case REPTILE_VERDICT_REP_TILE: return kOk;
        case REPTILE_VERDICT_NOT_REP_TILE: return kNotTile;
        case REPTILE_VERDICT_INCONCLUSIVE: return kInconclusive;
    }
    return kInternal;
}

SystemPtr load(const std::string& path) {
    reptile_system* s = nullptr;
    if (path == "-") {
        const std::string text{std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
        check(reptile_system_parse(text.data(), text.size(), &s));
    } else {
        check(reptile_system_load(path.c_str(), &s));
    }
    return SystemPtr(s);
}

AnalysisPtr run_analysis(const reptile_system* s, std::size_t budget, reptile_report& report) {
    reptile_analysis* a = nullptr;
    check(reptile_analyze(s, budget, &a));
    AnalysisPtr owned(a);
    check(reptile_analysis_report(a, &report));
    return owned;
}

void write_output(const std::string& path, const std::string& data) {
    if (path.empty() || path == "-") {
        std::cout << data;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << data)) {
        std::cerr << "reptile: cannot write " << path << '\n';
        throw Failure{kUsage};
    }
}

nlohmann::ordered_json report_json(const reptile_report& r) {
    nlohmann::ordered_json j;
    j["verdict"] = verdict_name(r.verdict);
    j["is_rep_tile"] = r.verdict == REPTILE_VERDICT_REP_TILE;
    if (r.verdict == REPTILE_VERDICT_REP_TILE) {
        j["neighbor_count"] = r.neighbor_count;
        j["boundary_dimension"] = fixed6(r.boundary_dimension);
        j["boundary_converged"] = r.boundary_converged != 0;
        j["connected"] = r.connected != 0;
    }
    j["node_budget_exceeded"] = r.node_budget_exceeded != 0;
    j["node_count"] = r.node_count;
    return j;
}

void print_report_human(const reptile_report& r) {
    std::cout << "verdict: " << verdict_name(r.verdict) << '\n';
    std::cout << "is_rep_tile: " << (r.verdict == REPTILE_VERDICT_REP_TILE ? "true" : "false") << '\n';
    if (r.verdict == REPTILE_VERDICT_REP_TILE) {
        std::cout << "neighbor_count: " << r.neighbor_count << '\n';
        std::cout << "boundary_dimension: " << fixed6(r.boundary_dimension)
                  << (r.boundary_converged ? "" : " (not converged)") << '\n';
        std::cout << "connected: " << (r.connected ? "true" : "false") << '\n';
    }
    std::cout << "graph_nodes: " << r.node_count << (r.node_budget_exceeded ? " (budget exceeded)" : "") << '\n';
}

struct Common {
    std::string input;
    std::string output;
    std::string format = "human";
    std::size_t node_budget = 200000;
};

int cmd_verify(const Common& c) {
    const SystemPtr s = load(c.input);
    reptile_report r{};
    const AnalysisPtr a = run_analysis(s.get(), c.node_budget, r);
    if (c.format == "records") {
        nlohmann::ordered_json j;
        j["command"] = "verify";
        j["input"] = c.input;
        j.update(report_json(r));
        std::cout << j.dump() << '\n';
    } else {
        std::cout << "input: " << c.input << '\n';
        print_report_human(r);
    }
    return verdict_exit(r.verdict);
}

int cmd_analyze(const Common& c, int voxel_level) {
    const SystemPtr s = load(c.input);
    const int m = reptile_system_map_count(s.get());
    const int dim = reptile_system_dim(s.get());
    reptile_report r{};
    const AnalysisPtr a = run_analysis(s.get(), c.node_budget, r);
    const bool tile = r.verdict == REPTILE_VERDICT_REP_TILE;

    std::vector<int> degree(m, 0);
    if (tile) {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                if (i != j && reptile_analysis_pieces_touch(a.get(), i, j)) ++degree[i];
    }
    std::optional<reptile_topology> topo;
    if (voxel_level >= 0) {
        reptile_topology t{};
        check(reptile_voxel_topology(s.get(), voxel_level, &t));
        topo = t;
    }

    if (c.format == "records") {
        nlohmann::ordered_json j;
        j["command"] = "analyze";
        j["input"] = c.input;
        j["dim"] = dim;
        j["maps"] = m;
        j.update(report_json(r));
        if (tile) j["piece_degrees"] = degree;
        if (topo) {
            nlohmann::ordered_json t;
            t["level"] = voxel_level;
            t["cells"] = topo->cells;
            t["components"] = topo->components;
            t["euler_characteristic"] = topo->euler_characteristic;
            t["cavities"] = topo->cavities;
            if (dim == 3) {
                t["handles"] = topo->handles;
                // Voxel-resolution estimate of the tile interior.
                t["interior_estimate"] = {{"euler", topo->interior_euler},
                                          {"cavities", topo->interior_cavities},
                                          {"handles", topo->interior_handles}};
            }
            j["voxel_topology"] = t;
        }
        std::cout << j.dump() << '\n';
    } else {
        std::cout << "input: " << c.input << '\n' << "dim: " << dim << "  maps: " << m << '\n';
        print_report_human(r);
        if (tile) {
            std::cout << "piece_degrees:";
            for (int d : degree) std::cout << ' ' << d;
            std::cout << '\n';
        }
        if (topo) {
            std::cout << "voxel level " << voxel_level << ": " << topo->cells << " cells, " << topo->components
                      << " components, euler " << topo->euler_characteristic << ", cavities " << topo->cavities;
            if (dim == 3) {
                std::cout << ", handles " << topo->handles << " (interior estimate: euler " << topo->interior_euler
                          << ", handles " << topo->interior_handles << ")";
            }
            std::cout << '\n';
        }
    }
    return verdict_exit(r.verdict);
}

struct SearchFlags {
    int dim = 2;
    std::string mode = "free";
    int range = 1;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> trials;
    double time_limit = 0.0;
    std::optional<unsigned> workers;
    bool filter_connected = false;
    std::optional<double> filter_boundary;
    std::optional<std::size_t> neighbors_min;
    std::optional<std::size_t> neighbors_max;
    bool no_timestamps = false;
    std::optional<int> overlap_precheck;
};

void on_record(const char* line, void*) { std::cout << line << '\n'; }
void on_warning(const char* msg, void*) { std::cerr << "reptile: warning: " << msg << '\n'; }

int cmd_search(const Common& c, const SearchFlags& f, bool budget_given) {
    reptile_search_config cfg;
    reptile_search_config_init(&cfg);
    cfg.dim = f.dim;
    cfg.mode = f.mode == "block" ? REPTILE_MODE_BLOCK : REPTILE_MODE_FREE;
    cfg.translation_range = f.range;
    cfg.seed = f.seed;
    // A time limit alone runs until the clock stops it.
    cfg.trials = f.trials ? *f.trials : f.time_limit > 0 ? std::numeric_limits<std::uint64_t>::max() : 0;
    cfg.time_limit_seconds = f.time_limit;
    if (budget_given) cfg.node_budget = c.node_budget;
    if (f.workers) cfg.workers = *f.workers;
    cfg.filter_connected = f.filter_connected;
    if (f.filter_boundary) {
        cfg.has_boundary_dim = 1;
        cfg.boundary_dim = *f.filter_boundary;
    }
    if (f.neighbors_min) {
        cfg.has_neighbors_min = 1;
        cfg.neighbors_min = *f.neighbors_min;
    }
    if (f.neighbors_max) {
        cfg.has_neighbors_max = 1;
        cfg.neighbors_max = *f.neighbors_max;
    }
    cfg.timestamps = !f.no_timestamps;
    if (f.overlap_precheck) cfg.overlap_precheck = *f.overlap_precheck;

    const bool records = c.format == "records";
    reptile_search_summary sum{};
    check(reptile_search_run(&cfg, c.output.empty() ? nullptr : c.output.c_str(), records ? on_record : nullptr,
                             on_warning, nullptr, &sum));

    std::ostream& os = records ? std::cerr : std::cout;
    os << "trials: " << sum.trials << '\n'
       << "not_rep_tile: " << sum.not_rep_tile << '\n'
       << "inconclusive: " << sum.inconclusive << '\n'
       << "rep_tiles: " << sum.rep_tiles << '\n'
       << "filtered_out: " << sum.filtered_out << '\n'
       << "duplicates: " << sum.duplicates << '\n'
       << "inserted: " << sum.inserted << '\n'
       << "store_size: " << sum.store_size << '\n'
       << "elapsed_seconds: " << fixed6(sum.elapsed_seconds) << '\n';
    return kOk;
}

int cmd_export(const Common& c, const std::string& kind, int level, int voxel_level) {
    const SystemPtr s = load(c.input);
    char* out = nullptr;
    if (kind == "mesh") {
        check(reptile_export_mesh(s.get(), level, &out));
    } else {
        // Placements are only meaningful for a verified rep-tile.
        reptile_report r{};
        const AnalysisPtr a = run_analysis(s.get(), c.node_budget, r);
        if (r.verdict != REPTILE_VERDICT_REP_TILE) {
            std::cerr << "reptile: " << c.input << ": " << verdict_name(r.verdict) << ", no patch written\n";
            return verdict_exit(r.verdict);
        }
        if (kind == "svg") {
            check(reptile_export_svg(s.get(), voxel_level, level, &out));
        } else {
            check(reptile_export_patch(s.get(), level, &out));
        }
    }
    write_output(c.output, take(out));
    return kOk;
}

int cmd_enumerate(const Common& c, int dim) {
    const int n = reptile_matrix_count(dim);
    if (n == 0) {
        std::cerr << "reptile: enumerate: dimension must be 2 or 3, got " << dim << '\n';
        return kUsage;
    }
    int perm[3];
    int signs[3];
    for (int k = 0; k < n; ++k) {
        check(reptile_matrix_get(dim, k, perm, signs));
        if (c.format == "records") {
            nlohmann::ordered_json j;
            j["index"] = k;
            j["perm"] = std::vector<int>(perm, perm + dim);
            j["signs"] = std::vector<int>(signs, signs + dim);
            std::cout << j.dump() << '\n';
        } else {
            // Dense rows: entry (r, j) is signs[j] when perm[j] == r.
            std::cout << k << ':';
            for (int row = 0; row < dim; ++row) {
                std::cout << (row ? " ;" : "");
                for (int col = 0; col < dim; ++col) {
                    const int e = perm[col] == row ? signs[col] : 0;
                    std::cout << (e < 0 ? " -1" : e > 0 ? "  1" : "  0");
                }
            }
            std::cout << '\n';
        }
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rep-tile verification, analysis, search and export"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(reptile_version()));

    Common common;
    SearchFlags sf;
    std::string kind = "mesh";
    int level = 0;
    int voxel_level = -1;
    int enum_dim = 2;

    const std::vector<std::string> formats{"human", "records"};
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember(formats));
    };

    auto* verify = app.add_subcommand("verify", "Decide whether a system is a rep-tile");
    verify->add_option("--input", common.input, "System file ('-' for stdin)")->required();
    verify->add_option("--node-budget", common.node_budget, "Neighbor graph node limit")->check(CLI::PositiveNumber);
    add_format(verify);

    auto* analyze = app.add_subcommand("analyze", "Verify and report neighbor, boundary and topology data");
    analyze->add_option("--input", common.input, "System file ('-' for stdin)")->required();
    analyze->add_option("--node-budget", common.node_budget, "Neighbor graph node limit")->check(CLI::PositiveNumber);
    analyze->add_option("--voxel-level", voxel_level, "Also report topology of the voxel approximation")
        ->check(CLI::Range(0, 8));
    add_format(analyze);

    auto* search = app.add_subcommand("search", "Random search for rep-tiles");
    search->add_option("--dim", sf.dim, "Dimension (2 or 3)");
    search->add_option("--mode", sf.mode, "free or block")->check(CLI::IsMember({"free", "block"}));
    search->add_option("--range", sf.range, "Translation coordinates drawn from [-range, range]")
        ->check(CLI::NonNegativeNumber);
    search->add_option("--seed", sf.seed, "Random seed");
    search->add_option("--trials", sf.trials, "Number of trials (default: unbounded with --time-limit, else 0)");
    search->add_option("--time-limit", sf.time_limit, "Wall-clock limit in seconds")->check(CLI::NonNegativeNumber);
    auto* budget_opt =
        search->add_option("--node-budget", common.node_budget, "Neighbor graph node limit")->check(CLI::PositiveNumber);
    search->add_option("--workers", sf.workers, "Worker threads (default: available parallelism)");
    search->add_flag("--filter-connected", sf.filter_connected, "Keep connected tiles only");
    search->add_option("--filter-boundary-dim", sf.filter_boundary, "Keep tiles with this boundary dimension");
    search->add_option("--filter-neighbors-min", sf.neighbors_min, "Minimum neighbor count");
    search->add_option("--filter-neighbors-max", sf.neighbors_max, "Maximum neighbor count");
    search->add_option("--output", common.output, "Append-only result store");
    search->add_flag("--no-timestamps", sf.no_timestamps, "Omit discovery timestamps from records");
    search->add_option("--overlap-precheck", sf.overlap_precheck,
                       "Word length of the collision pre-check (0 disables, default 4)")
        ->check(CLI::Range(0, 6));
    add_format(search);

    auto* exp = app.add_subcommand("export", "Write a mesh, drawing or tiling patch");
    exp->add_option("--input", common.input, "System file ('-' for stdin)")->required();
    exp->add_option("--kind", kind, "mesh, svg or patch")->check(CLI::IsMember({"mesh", "svg", "patch"}));
    exp->add_option("--level", level, "Voxel level (mesh) or supertile level (svg, patch)")
        ->check(CLI::NonNegativeNumber);
    exp->add_option("--voxel-level", voxel_level, "Voxel level of each tile copy in svg output (default 4)")
        ->check(CLI::Range(0, 8));
    exp->add_option("--node-budget", common.node_budget, "Neighbor graph node limit")->check(CLI::PositiveNumber);
    exp->add_option("--output", common.output, "Output file (default: stdout)");

    auto* enumerate = app.add_subcommand("enumerate", "List signed permutation matrices in canonical order");
    enumerate->add_option("--dim", enum_dim, "Dimension")->required();
    add_format(enumerate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*verify) return cmd_verify(common);
        if (*analyze) return cmd_analyze(common, voxel_level);
        if (*search) return cmd_search(common, sf, budget_opt->count() > 0);
        if (*exp) return cmd_export(common, kind, level, voxel_level < 0 ? 4 : voxel_level);
        if (*enumerate) return cmd_enumerate(common, enum_dim);
    } catch (const Failure& f) {
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "reptile: internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kUsage;
}
