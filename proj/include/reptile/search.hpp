// Seeded random search over rep-tile data with invariant-based deduplication
// and an append-only line-delimited result store.
#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "reptile/ifs.hpp"
#include "reptile/neighbor_graph.hpp"

namespace reptile {

// splitmix64-seeded xoshiro256**. Integer draws use rejection sampling, so
// streams are identical on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);
    // Independent stream for one trial: state derived from (seed, trial).
    static Rng for_trial(std::uint64_t seed, std::uint64_t trial);

    std::uint64_t next();
    // Uniform on [0, n), n >= 1.
    std::uint64_t below(std::uint64_t n);
    // Uniform on [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi);

  private:
    std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state);

enum class SearchMode { free, block };

struct FilterSpec {
    bool require_connected = false;
    std::optional<double> boundary_dim_target;
    double boundary_dim_tolerance = 1e-6;
    std::optional<std::size_t> neighbors_min;
    std::optional<std::size_t> neighbors_max;

    void validate() const;
    bool accepts(const AnalysisReport& r) const;
};

struct SearchConfig {
    int dim = 2;
    SearchMode mode = SearchMode::free;
    int translation_range = 1;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    std::optional<double> time_limit_seconds;
    FilterSpec filters;
    std::size_t node_budget = 50000;
    unsigned workers = 0;  // 0 = available parallelism
    // Draw only identity matrices (pure translations).
    bool translations_only = false;
    bool timestamps = true;
    // Reject systems with coinciding word maps up to this length before the
    // graph is built (0 disables).
    int overlap_precheck = 4;

    void validate() const;
};

// Deterministic in (config.seed, trial).
RepTileSystem random_system(const SearchConfig& config, std::uint64_t trial);

struct Fingerprint {
    int dim = 0;
    int m = 0;
    std::size_t neighbor_count = 0;
    // Boundary dimension rounded to 1e-6, kept as an integer.
    std::int64_t boundary_dimension_e6 = 0;
    bool connected = false;
    std::vector<int> degree_sequence;

    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

// Invariants only; map order does not matter. Not a congruence test.
Fingerprint fingerprint(const AnalysisReport& report, const RepTileSystem& s);
std::string fingerprint_key(const Fingerprint& f);

struct ResultRecord {
    Fingerprint fp;
    RepTileSystem system;
    std::uint64_t seed = 0;
    std::uint64_t trial_index = 0;
    AnalysisReport report;
    std::string found_at;  // empty when timestamps are off
};

std::string record_to_line(const ResultRecord& r);
// Throws ParseError / ValidationError on malformed lines.
ResultRecord record_from_line(const std::string& line);

class ResultStore {
  public:
    // In-memory store.
    ResultStore() = default;
    // Opens (creating if needed) an append-only file and rebuilds the index by
    // scanning it. Corrupt lines are skipped and reported in warnings().
    explicit ResultStore(const std::string& path);

    bool contains(const Fingerprint& f) const;
    // Appends iff the fingerprint is new. Throws IoError on write failure.
    bool insert(const ResultRecord& r);

    std::size_t size() const noexcept { return keys_.size(); }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }
    const std::string& path() const noexcept { return path_; }

  private:
    std::string path_;
    std::ofstream out_;
    std::unordered_set<std::string> keys_;
    std::vector<std::string> warnings_;
};

std::vector<ResultRecord> read_store(const std::string& path);

struct SearchSummary {
    std::uint64_t trials = 0;
    std::uint64_t not_rep_tile = 0;
    std::uint64_t inconclusive = 0;
    std::uint64_t rep_tiles = 0;
    std::uint64_t filtered_out = 0;
    std::uint64_t duplicates = 0;
    std::uint64_t inserted = 0;
    double elapsed_seconds = 0.0;
};

using RecordCallback = std::function<void(const ResultRecord&)>;

// Trials run on a worker pool; results are committed in trial order so the
// accepted set does not depend on the worker count.
SearchSummary run_search(const SearchConfig& config, ResultStore& store, const RecordCallback& on_insert = {});

}  // namespace reptile
