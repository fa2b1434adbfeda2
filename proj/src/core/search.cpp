#include "reptile/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <json.hpp>
#include <mutex>
#include <sstream>
#include <thread>

#include "reptile/error.hpp"

namespace reptile {

// ---------------------------------------------------------------------------
// Rng

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) {
    for (auto& s : s_) s = splitmix64(seed);
}

Rng Rng::for_trial(std::uint64_t seed, std::uint64_t trial) {
    std::uint64_t st = trial;
    const std::uint64_t mixed = splitmix64(st);
    std::uint64_t st2 = seed ^ mixed;
    return Rng(splitmix64(st2));
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

std::uint64_t Rng::next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw ArgumentError("Rng::below: n must be >= 1");
    // Reject the top partial block so every residue is equally likely.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % n);
    std::uint64_t x;
    do {
        x = next();
    } while (x >= limit);
    return x % n;
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

// ---------------------------------------------------------------------------
// Config

void FilterSpec::validate() const {
    if (neighbors_min && neighbors_max && *neighbors_min > *neighbors_max) {
        throw ArgumentError("filter: neighbors min exceeds max");
    }
    if (boundary_dim_tolerance < 0) throw ArgumentError("filter: boundary tolerance must be >= 0");
}

bool FilterSpec::accepts(const AnalysisReport& r) const {
    if (!r.is_rep_tile) return false;
    if (require_connected && !r.connected) return false;
    if (boundary_dim_target && std::abs(r.boundary_dimension - *boundary_dim_target) > boundary_dim_tolerance) {
        return false;
    }
    if (neighbors_min && r.neighbor_count < *neighbors_min) return false;
    if (neighbors_max && r.neighbor_count > *neighbors_max) return false;
    return true;
}

void SearchConfig::validate() const {
    check_dim(dim);
    if (mode == SearchMode::block && dim != 3) throw ArgumentError("block mode requires dim 3");
    if (translation_range < 0) throw ArgumentError("translation range must be >= 0");
    if (node_budget < 1) throw ArgumentError("node budget must be >= 1");
    if (time_limit_seconds && *time_limit_seconds <= 0) throw ArgumentError("time limit must be positive");
    if (overlap_precheck < 0 || overlap_precheck > 6) throw ArgumentError("overlap precheck length must be in 0..6");
    filters.validate();
}

namespace {

LatticeIsometry random_map(Rng& rng, int dim, int range, bool translations_only) {
    const auto& mats = enumerate_matrices(dim);
    const SignedPermMatrix m = translations_only ? mats.front() : mats[rng.below(mats.size())];
    IntVector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = rng.between(-range, range);
    return {m, v};
}

}  // namespace

RepTileSystem random_system(const SearchConfig& config, std::uint64_t trial) {
    Rng rng = Rng::for_trial(config.seed, trial);
    const int range = config.translation_range;
    if (config.mode == SearchMode::block) {
        if (config.dim != 3) throw ArgumentError("block mode requires dim 3");
        LatticeIsometry f[4];
        for (auto& fk : f) fk = random_map(rng, 3, range, config.translations_only);
        return block_expand(BlockSystem(f[0], f[1], f[2], f[3]));
    }
    std::vector<LatticeIsometry> maps;
    for (int k = 0; k < map_count(config.dim); ++k) {
        maps.push_back(random_map(rng, config.dim, range, config.translations_only));
    }
    return RepTileSystem(config.dim, std::move(maps));
}

// ---------------------------------------------------------------------------
// Fingerprints and records

Fingerprint fingerprint(const AnalysisReport& report, const RepTileSystem& s) {
    Fingerprint f;
    f.dim = s.dim();
    f.m = s.size();
    f.neighbor_count = report.neighbor_count;
    f.boundary_dimension_e6 = std::llround(report.boundary_dimension * 1e6);
    f.connected = report.connected;
    for (const auto& row : report.piece_adjacency) {
        int deg = 0;
        for (std::size_t j = 0; j < row.size(); ++j) deg += row[j] ? 1 : 0;
        f.degree_sequence.push_back(deg - 1);
    }
    std::sort(f.degree_sequence.begin(), f.degree_sequence.end());
    return f;
}

namespace {

using ojson = nlohmann::ordered_json;

ojson fingerprint_json(const Fingerprint& f) {
    ojson j;
    j["dim"] = f.dim;
    j["m"] = f.m;
    j["neighbor_count"] = f.neighbor_count;
    j["boundary_dimension_e6"] = f.boundary_dimension_e6;
    j["connected"] = f.connected;
    j["degrees"] = f.degree_sequence;
    return j;
}

Fingerprint fingerprint_from_json(const nlohmann::json& j) {
    Fingerprint f;
    f.dim = j.at("dim").get<int>();
    f.m = j.at("m").get<int>();
    f.neighbor_count = j.at("neighbor_count").get<std::size_t>();
    f.boundary_dimension_e6 = j.at("boundary_dimension_e6").get<std::int64_t>();
    f.connected = j.at("connected").get<bool>();
    f.degree_sequence = j.at("degrees").get<std::vector<int>>();
    return f;
}

std::string format_fixed6(double x) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << x;
    return os.str();
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

}  // namespace

std::string fingerprint_key(const Fingerprint& f) { return fingerprint_json(f).dump(); }

std::string record_to_line(const ResultRecord& r) {
    ojson j;
    j["fingerprint"] = fingerprint_json(r.fp);
    j["system"] = ojson::parse(emit_system_compact(r.system));
    j["seed"] = r.seed;
    j["trial_index"] = r.trial_index;
    ojson rep;
    rep["is_rep_tile"] = r.report.is_rep_tile;
    rep["neighbor_count"] = r.report.neighbor_count;
    // Fixed-precision text keeps the line byte-stable.
    rep["boundary_dimension"] = format_fixed6(r.report.boundary_dimension);
    rep["boundary_converged"] = r.report.boundary_converged;
    rep["connected"] = r.report.connected;
    rep["node_count"] = r.report.node_count;
    j["report"] = rep;
    if (!r.found_at.empty()) j["found_at"] = r.found_at;
    return j.dump();
}

ResultRecord record_from_line(const std::string& line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed record: ") + e.what(), 1, static_cast<int>(e.byte));
    }
    try {
        ResultRecord r;
        r.fp = fingerprint_from_json(j.at("fingerprint"));
        r.system = load_system(j.at("system").dump());
        r.seed = j.at("seed").get<std::uint64_t>();
        r.trial_index = j.at("trial_index").get<std::uint64_t>();
        const auto& rep = j.at("report");
        r.report.is_rep_tile = rep.at("is_rep_tile").get<bool>();
        r.report.verdict = r.report.is_rep_tile ? Verdict::rep_tile : Verdict::not_rep_tile;
        r.report.neighbor_count = rep.at("neighbor_count").get<std::size_t>();
        r.report.boundary_dimension = std::stod(rep.at("boundary_dimension").get<std::string>());
        r.report.boundary_converged = rep.at("boundary_converged").get<bool>();
        r.report.connected = rep.at("connected").get<bool>();
        r.report.node_count = rep.at("node_count").get<std::size_t>();
        if (j.contains("found_at")) r.found_at = j.at("found_at").get<std::string>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("record: ") + e.what());
    } catch (const std::invalid_argument&) {
        throw ValidationError("record: bad boundary_dimension");
    }
}

ResultStore::ResultStore(const std::string& path) : path_(path) {
    {
        std::ifstream in(path);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            try {
                keys_.insert(fingerprint_key(record_from_line(line).fp));
            } catch (const std::exception& e) {
                warnings_.push_back(path + ":" + std::to_string(lineno) + ": skipped corrupt record (" + e.what() + ")");
            }
        }
    }
    out_.open(path, std::ios::app);
    if (!out_) throw IoError("cannot open result store " + path);
}

bool ResultStore::contains(const Fingerprint& f) const { return keys_.count(fingerprint_key(f)) != 0; }

bool ResultStore::insert(const ResultRecord& r) {
    const std::string key = fingerprint_key(r.fp);
    if (keys_.count(key)) return false;
    if (!path_.empty()) {
        // One write per line so a crash leaves whole lines only.
        const std::string line = record_to_line(r) + "\n";
        out_.write(line.data(), static_cast<std::streamsize>(line.size()));
        out_.flush();
        if (!out_) throw IoError("write failed for result store " + path_);
    }
    keys_.insert(key);
    return true;
}

std::vector<ResultRecord> read_store(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<ResultRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) out.push_back(record_from_line(line));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Search loop

namespace {

struct TrialOutcome {
    RepTileSystem system;
    AnalysisReport report;
};

TrialOutcome run_trial(const SearchConfig& config, std::uint64_t trial) {
    TrialOutcome out;
    out.system = random_system(config, trial);
    // Two equal word maps put two pieces on top of each other, which settles
    // the question far more cheaply than the graph for most non-tiles.
    if (config.overlap_precheck > 0 && overlap_oracle(out.system, config.overlap_precheck)) {
        out.report.verdict = Verdict::not_rep_tile;
        return out;
    }
    GraphOptions opts;
    opts.node_budget = config.node_budget;
    opts.stop_at_identity = true;
    out.report = analyze(out.system, opts);
    return out;
}

}  // namespace

SearchSummary run_search(const SearchConfig& config, ResultStore& store, const RecordCallback& on_insert) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

    unsigned workers = config.workers ? config.workers : std::max(1u, std::thread::hardware_concurrency());
    const std::uint64_t batch = std::max<std::uint64_t>(64, 16ull * workers);

    SearchSummary sum;
    std::vector<TrialOutcome> results;
    for (std::uint64_t base = 0; base < config.trials; base += batch) {
        if (config.time_limit_seconds && elapsed() >= *config.time_limit_seconds) break;
        const std::uint64_t count = std::min(batch, config.trials - base);
        results.assign(count, {});

        std::atomic<std::uint64_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mu;
        auto work = [&] {
            for (;;) {
                const std::uint64_t k = next.fetch_add(1);
                if (k >= count) return;
                try {
                    results[k] = run_trial(config, base + k);
                } catch (...) {
                    std::lock_guard lock(failure_mu);
                    if (!failure) failure = std::current_exception();
                }
            }
        };
        const unsigned n_threads = static_cast<unsigned>(std::min<std::uint64_t>(workers, count));
        if (n_threads <= 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
            for (auto& th : pool) th.join();
        }
        if (failure) std::rethrow_exception(failure);

        // Commit strictly in trial order.
        for (std::uint64_t k = 0; k < count; ++k) {
            const auto& res = results[k];
            ++sum.trials;
            switch (res.report.verdict) {
                case Verdict::not_rep_tile: ++sum.not_rep_tile; continue;
                case Verdict::inconclusive: ++sum.inconclusive; continue;
                case Verdict::rep_tile: ++sum.rep_tiles; break;
            }
            if (!config.filters.accepts(res.report)) {
                ++sum.filtered_out;
                continue;
            }
            ResultRecord rec;
            rec.fp = fingerprint(res.report, res.system);
            rec.system = res.system;
            rec.seed = config.seed;
            rec.trial_index = base + k;
            rec.report = res.report;
            if (config.timestamps) rec.found_at = utc_now();
            if (store.insert(rec)) {
                ++sum.inserted;
                if (on_insert) on_insert(rec);
            } else {
                ++sum.duplicates;
            }
        }
    }
    sum.elapsed_seconds = elapsed();
    return sum;
}

}  // namespace reptile
