#include "reptile/neighbor_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <tuple>
#include <unordered_set>

#include "matrix_table.hpp"
#include "reptile/error.hpp"

namespace reptile {

using detail::CompactIso;
using detail::MatrixTable;
using detail::Vec;

bool canonical_less(const LatticeIsometry& a, const LatticeIsometry& b) {
    const int ia = a.matrix().index();
    const int ib = b.matrix().index();
    if (ia != ib) return ia < ib;
    return a.translation() < b.translation();
}

namespace {

// Largest radius whose 2R ball still packs into the 64-bit node keys.
constexpr std::int64_t kMaxRadius = (detail::kPackOffset / 2) - 1;

struct PreparedSystem {
    int dim;
    int m;
    std::int64_t bound;
    const MatrixTable* table;
    std::vector<int> mat;
    std::vector<int> mat_t;
    std::vector<Vec> v;

    explicit PreparedSystem(const RepTileSystem& s)
        : dim(s.dim()), m(s.size()), bound(2 * bounding_radius(s)), table(&MatrixTable::get(s.dim())) {
        if (bounding_radius(s) > kMaxRadius) {
            throw ResourceError("translations too large for the neighbor graph (bounding radius " +
                                std::to_string(bounding_radius(s)) + ")");
        }
        for (const auto& h : s.maps()) {
            const CompactIso c = detail::to_compact(h);
            mat.push_back(c.mat);
            mat_t.push_back(table->transpose(c.mat));
            v.push_back(c.t);
        }
    }

    // h_i^-1 double(gamma) h_j. Returns false when the child leaves the ball.
    // Precomputed per j: A_j = M_g M_j, w_j = M_g v_j + 2 t_g.
    template <class Emit>
    void expand(const CompactIso& gamma, Emit&& emit) const {
        for (int j = 0; j < m; ++j) {
            const int a = table->mul(gamma.mat, mat[j]);
            Vec w = table->apply(gamma.mat, v[j]);
            for (int c = 0; c < dim; ++c) w[c] += 2 * gamma.t[c];
            for (int i = 0; i < m; ++i) {
                Vec d{};
                for (int c = 0; c < dim; ++c) d[c] = w[c] - v[i][c];
                CompactIso child;
                child.mat = table->mul(mat_t[i], a);
                child.t = table->apply(mat_t[i], d);
                emit(i, j, child, detail::sup_norm(d, dim) <= bound);
            }
        }
    }

    CompactIso root(int i, int j) const {
        // h_i^-1 h_j = M_i^T M_j x + M_i^T (v_j - v_i)
        Vec d{};
        for (int c = 0; c < dim; ++c) d[c] = v[j][c] - v[i][c];
        return {table->mul(mat_t[i], mat[j]), table->apply(mat_t[i], d)};
    }
};

}  // namespace

std::vector<LatticeIsometry> root_candidates(const RepTileSystem& s) {
    const PreparedSystem p(s);
    std::vector<std::uint64_t> keys;
    for (int i = 0; i < p.m; ++i) {
        for (int j = 0; j < p.m; ++j) {
            if (i == j) continue;
            const CompactIso r = p.root(i, j);
            if (detail::sup_norm(r.t, p.dim) <= p.bound) keys.push_back(detail::pack(r));
        }
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::vector<LatticeIsometry> out;
    for (auto k : keys) out.push_back(detail::from_compact(p.dim, detail::unpack(k)));
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

ChildSet children(const RepTileSystem& s, const LatticeIsometry& gamma) {
    if (gamma.dim() != s.dim()) throw DimensionError("children: dimension mismatch");
    const PreparedSystem p(s);
    std::vector<Child> all;
    std::vector<bool> kept_flags;
    p.expand(detail::to_compact(gamma), [&](int i, int j, const CompactIso& c, bool kept) {
        all.push_back({{i, j}, detail::from_compact(p.dim, c)});
        kept_flags.push_back(kept);
    });
    // expand() iterates j outer; report in (i, j) label order.
    std::vector<std::size_t> order(all.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return std::pair(all[x].label.i, all[x].label.j) < std::pair(all[y].label.i, all[y].label.j);
    });
    ChildSet out;
    for (auto k : order) (kept_flags[k] ? out.kept : out.pruned).push_back(all[k]);
    return out;
}

// ---------------------------------------------------------------------------
// NeighborGraph

LatticeIsometry NeighborGraph::node(std::size_t k) const {
    return detail::from_compact(dim_, detail::unpack(keys_.at(k)));
}

std::optional<std::size_t> NeighborGraph::find(const LatticeIsometry& h) const {
    if (h.dim() != dim_ || h.translation().sup_norm() > bound_) return std::nullopt;
    const std::uint64_t key = detail::pack(detail::to_compact(h));
    // Node lists are small enough for a scan in the query paths that use this.
    for (std::size_t k = 0; k < keys_.size(); ++k)
        if (keys_[k] == key) return k;
    return std::nullopt;
}

std::span<const NeighborGraph::Edge> NeighborGraph::edges(std::size_t k) const {
    if (k + 1 >= edge_begin_.size()) return {};
    return {edges_.data() + edge_begin_[k], edges_.data() + edge_begin_[k + 1]};
}

std::vector<LatticeIsometry> NeighborGraph::neighbor_maps() const {
    std::vector<LatticeIsometry> out;
    const std::uint64_t identity_key = detail::pack(CompactIso{});
    for (std::size_t k = 0; k < keys_.size(); ++k) {
        if (reachable_[k] && keys_[k] != identity_key) out.push_back(node(k));
    }
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

std::vector<LatticeIsometry> NeighborGraph::survivors() const {
    std::vector<LatticeIsometry> out;
    for (std::size_t k = 0; k < keys_.size(); ++k)
        if (survivor_[k]) out.push_back(node(k));
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

void NeighborGraph::trim_and_mark_reachable() {
    const std::size_t n = keys_.size();
    survivor_.assign(n, 1);
    reachable_.assign(n, 0);

    // Reverse adjacency (with multiplicity) for the peeling pass.
    std::vector<std::uint32_t> out_degree(n, 0);
    std::vector<std::uint32_t> rev_begin(n + 1, 0);
    for (std::size_t k = 0; k < n; ++k) {
        for (const auto& e : edges(k)) ++rev_begin[e.target + 1];
        out_degree[k] = static_cast<std::uint32_t>(edges(k).size());
    }
    for (std::size_t k = 0; k < n; ++k) rev_begin[k + 1] += rev_begin[k];
    std::vector<std::uint32_t> rev(edges_.size());
    {
        std::vector<std::uint32_t> fill(rev_begin.begin(), rev_begin.end() - 1);
        for (std::size_t k = 0; k < n; ++k)
            for (const auto& e : edges(k)) rev[fill[e.target]++] = static_cast<std::uint32_t>(k);
    }

    std::vector<std::uint32_t> queue;
    for (std::size_t k = 0; k < n; ++k) {
        if (out_degree[k] == 0) {
            survivor_[k] = 0;
            queue.push_back(static_cast<std::uint32_t>(k));
        }
    }
    for (std::size_t q = 0; q < queue.size(); ++q) {
        const std::uint32_t dead = queue[q];
        for (std::uint32_t r = rev_begin[dead]; r < rev_begin[dead + 1]; ++r) {
            const std::uint32_t pred = rev[r];
            if (survivor_[pred] && --out_degree[pred] == 0) {
                survivor_[pred] = 0;
                queue.push_back(pred);
            }
        }
    }

    std::vector<std::uint32_t> stack;
    for (auto r : roots_) {
        if (survivor_[r] && !reachable_[r]) {
            reachable_[r] = 1;
            stack.push_back(r);
        }
    }
    while (!stack.empty()) {
        const std::uint32_t k = stack.back();
        stack.pop_back();
        for (const auto& e : edges(k)) {
            if (survivor_[e.target] && !reachable_[e.target]) {
                reachable_[e.target] = 1;
                stack.push_back(e.target);
            }
        }
    }
}

NeighborGraph build_graph(const RepTileSystem& s, const GraphOptions& options) {
    if (options.node_budget < 1) throw ArgumentError("build_graph: node_budget must be >= 1");
    const PreparedSystem p(s);

    NeighborGraph g;
    g.dim_ = p.dim;
    g.m_ = p.m;
    g.bound_ = p.bound;

    std::unordered_map<std::uint64_t, std::uint32_t, detail::KeyHash> index;
    index.reserve(std::min<std::size_t>(options.node_budget, 1 << 16) * 2);
    const std::uint64_t identity_key = detail::pack(CompactIso{});

    // Returns the node id, or -1 when inserting would exceed the budget.
    auto intern = [&](std::uint64_t key) -> std::int64_t {
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        if (g.keys_.size() >= options.node_budget) return -1;
        const auto id = static_cast<std::uint32_t>(g.keys_.size());
        index.emplace(key, id);
        g.keys_.push_back(key);
        if (key == identity_key) g.identity_reached_ = true;
        return id;
    };

    for (const auto& r : root_candidates(s)) {
        const std::int64_t id = intern(detail::pack(detail::to_compact(r)));
        if (id < 0) {
            g.budget_exceeded_ = true;
            break;
        }
        g.roots_.push_back(static_cast<std::uint32_t>(id));
    }

    struct Pending {
        std::uint16_t label;
        std::uint64_t key;
    };
    std::vector<Pending> pending;
    pending.reserve(static_cast<std::size_t>(p.m) * p.m);

    g.edge_begin_.push_back(0);
    bool stop = g.budget_exceeded_ || (options.stop_at_identity && g.identity_reached_);
    for (std::size_t k = 0; k < g.keys_.size() && !stop; ++k) {
        pending.clear();
        p.expand(detail::unpack(g.keys_[k]), [&](int i, int j, const CompactIso& c, bool kept) {
            if (!kept) {
                ++g.pruned_count_;
                return;
            }
            pending.push_back({static_cast<std::uint16_t>(i * p.m + j), detail::pack(c)});
        });
        std::sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) { return a.label < b.label; });
        for (const auto& pe : pending) {
            const std::int64_t id = intern(pe.key);
            if (id < 0) {
                g.budget_exceeded_ = true;
                stop = true;
                break;
            }
            g.edges_.push_back({pe.label, static_cast<std::uint32_t>(id)});
        }
        g.edge_begin_.push_back(static_cast<std::uint32_t>(g.edges_.size()));
        if (options.stop_at_identity && g.identity_reached_) stop = true;
    }
    // Nodes never expanded get empty edge lists.
    while (g.edge_begin_.size() < g.keys_.size() + 1) g.edge_begin_.push_back(static_cast<std::uint32_t>(g.edges_.size()));

    g.complete_ = !stop;
    if (g.complete_) {
        g.trim_and_mark_reachable();
    } else {
        g.survivor_.assign(g.keys_.size(), 0);
        g.reachable_.assign(g.keys_.size(), 0);
        // Every node on a path to the identity survives, since the identity
        // has a self-loop; mark just the identity so queries stay truthful.
        if (g.identity_reached_) {
            const auto id = index.at(identity_key);
            g.survivor_[id] = 1;
            g.reachable_[id] = 1;
        }
    }
    return g;
}

bool decide_rep_tile(const NeighborGraph& g) {
    if (g.identity_reached()) return false;
    if (!g.complete()) throw InconclusiveError("node budget exceeded before the neighbor graph closed");
    return true;
}

std::size_t neighbor_count(const NeighborGraph& g) {
    decide_rep_tile(g);
    std::size_t n = 0;
    for (std::size_t k = 0; k < g.node_count(); ++k) n += g.is_reachable_survivor(k) ? 1 : 0;
    // The identity is only ever a reachable survivor for non-tiles.
    if (g.identity_reached()) --n;
    return n;
}

// ---------------------------------------------------------------------------
// Spectral radius

namespace {

// Tarjan's algorithm, iterative. Returns a component id per vertex.
std::vector<std::uint32_t> strongly_connected_components(
    std::span<const std::vector<std::pair<std::uint32_t, std::uint32_t>>> rows, std::uint32_t& count) {
    const std::uint32_t n = static_cast<std::uint32_t>(rows.size());
    constexpr std::uint32_t kUnset = ~std::uint32_t{0};
    std::vector<std::uint32_t> idx(n, kUnset), low(n, 0), comp(n, kUnset);
    std::vector<std::uint8_t> on_stack(n, 0);
    std::vector<std::uint32_t> stack;
    std::vector<std::pair<std::uint32_t, std::size_t>> call;
    std::uint32_t next = 0;
    count = 0;
    for (std::uint32_t root = 0; root < n; ++root) {
        if (idx[root] != kUnset) continue;
        call.push_back({root, 0});
        idx[root] = low[root] = next++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            auto& [v, pos] = call.back();
            if (pos < rows[v].size()) {
                const std::uint32_t w = rows[v][pos++].first;
                if (idx[w] == kUnset) {
                    idx[w] = low[w] = next++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], idx[w]);
                }
                continue;
            }
            if (low[v] == idx[v]) {
                std::uint32_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = count;
                } while (w != v);
                ++count;
            }
            const std::uint32_t finished = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[finished]);
        }
    }
    return comp;
}

}  // namespace

SpectralResult spectral_radius(std::span<const std::vector<std::pair<std::uint32_t, std::uint32_t>>> rows,
                               double rel_tol, int max_iterations) {
    std::uint32_t ncomp = 0;
    const auto comp = strongly_connected_components(rows, ncomp);
    std::vector<std::vector<std::uint32_t>> members(ncomp);
    for (std::uint32_t v = 0; v < rows.size(); ++v) members[comp[v]].push_back(v);

    SpectralResult best;
    std::vector<std::uint32_t> local(rows.size());
    for (std::uint32_t c = 0; c < ncomp; ++c) {
        const auto& mem = members[c];
        for (std::uint32_t k = 0; k < mem.size(); ++k) local[mem[k]] = k;
        // Internal edges only; blocks without any are nilpotent (radius 0).
        std::vector<std::vector<std::pair<std::uint32_t, double>>> block(mem.size());
        bool has_edge = false;
        for (std::uint32_t k = 0; k < mem.size(); ++k) {
            for (const auto& [col, w] : rows[mem[k]]) {
                if (comp[col] == c && w > 0) {
                    block[k].push_back({local[col], static_cast<double>(w)});
                    has_edge = true;
                }
            }
        }
        if (!has_edge) continue;

        // Power iteration on B + I: irreducible B makes B + I primitive, so
        // the iteration cannot oscillate, and rho(B + I) = rho(B) + 1.
        std::vector<double> x(mem.size(), 1.0), y(mem.size());
        double estimate = 0.0;
        bool converged = false;
        int it = 0;
        for (; it < max_iterations; ++it) {
            for (std::size_t k = 0; k < block.size(); ++k) {
                double acc = x[k];
                for (const auto& [col, w] : block[k]) acc += w * x[col];
                y[k] = acc;
            }
            double lo = INFINITY, hi = 0.0, norm = 0.0;
            for (std::size_t k = 0; k < y.size(); ++k) {
                const double ratio = y[k] / x[k];
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
                norm = std::max(norm, y[k]);
            }
            estimate = 0.5 * (lo + hi);
            for (std::size_t k = 0; k < y.size(); ++k) x[k] = y[k] / norm;
            if (hi - lo <= rel_tol * hi) {
                converged = true;
                ++it;
                break;
            }
        }
        if (!converged) {
            throw NumericalError("power iteration did not converge in " + std::to_string(max_iterations) +
                                     " iterations",
                                 std::max(best.radius, estimate - 1.0));
        }
        if (estimate - 1.0 > best.radius) best.radius = estimate - 1.0;
        best.iterations = std::max(best.iterations, it);
    }
    return best;
}

double boundary_dimension(const NeighborGraph& g, const RepTileSystem& s) {
    if (!decide_rep_tile(g)) throw ArgumentError("boundary_dimension: system is not a rep-tile");
    (void)s;
    std::vector<std::uint32_t> local(g.node_count(), 0);
    std::vector<std::uint32_t> members;
    for (std::size_t k = 0; k < g.node_count(); ++k) {
        if (g.is_reachable_survivor(k)) {
            local[k] = static_cast<std::uint32_t>(members.size());
            members.push_back(static_cast<std::uint32_t>(k));
        }
    }
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> rows(members.size());
    for (std::size_t r = 0; r < members.size(); ++r) {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> counts;
        for (const auto& e : g.edges(members[r])) {
            if (!g.is_reachable_survivor(e.target)) continue;
            counts.push_back({local[e.target], 1});
        }
        std::sort(counts.begin(), counts.end());
        for (const auto& c : counts) {
            if (!rows[r].empty() && rows[r].back().first == c.first) {
                ++rows[r].back().second;
            } else {
                rows[r].push_back(c);
            }
        }
    }
    const SpectralResult res = spectral_radius(rows);
    if (res.radius <= 0.0) return 0.0;
    return std::log2(res.radius);
}

Connectivity hata_connected(const NeighborGraph& g, const RepTileSystem& s) {
    const int m = s.size();
    Connectivity out;
    out.adjacency.assign(m, std::vector<bool>(m, false));
    std::unordered_set<std::uint64_t, detail::KeyHash> touching;
    for (std::size_t k = 0; k < g.node_count(); ++k) {
        if (g.is_reachable_survivor(k)) touching.insert(detail::pack(detail::to_compact(g.node(k))));
    }
    const PreparedSystem p(s);
    for (int i = 0; i < m; ++i) {
        out.adjacency[i][i] = true;
        for (int j = 0; j < m; ++j) {
            if (i != j && touching.count(detail::pack(p.root(i, j))) &&
                detail::sup_norm(p.root(i, j).t, p.dim) <= p.bound) {
                out.adjacency[i][j] = true;
            }
        }
    }
    std::vector<bool> seen(m, false);
    std::vector<int> stack{0};
    seen[0] = true;
    int visited = 1;
    while (!stack.empty()) {
        const int a = stack.back();
        stack.pop_back();
        for (int b = 0; b < m; ++b) {
            if (out.adjacency[a][b] && !seen[b]) {
                seen[b] = true;
                ++visited;
                stack.push_back(b);
            }
        }
    }
    out.connected = visited == m;
    return out;
}

bool overlap_oracle(const RepTileSystem& s, int max_len) {
    if (max_len < 1) throw ArgumentError("overlap_oracle: max_len must be >= 1");
    const int dim = s.dim();
    const auto& table = MatrixTable::get(dim);
    std::vector<CompactIso> hs;
    for (const auto& h : s.maps()) hs.push_back(detail::to_compact(h));

    // Level n + 1 maps are double(H_u) h_k. Equal maps at one level are
    // detected there, so each level only needs a distinctness check.
    std::vector<CompactIso> level{CompactIso{}};
    for (int n = 1; n <= max_len; ++n) {
        std::vector<CompactIso> next;
        next.reserve(level.size() * hs.size());
        for (const auto& u : level) {
            for (const auto& h : hs) {
                CompactIso c;
                c.mat = table.mul(u.mat, h.mat);
                c.t = table.apply(u.mat, h.t);
                for (int i = 0; i < dim; ++i) c.t[i] += 2 * u.t[i];
                next.push_back(c);
            }
        }
        // Sort and look for equal neighbours.
        std::vector<std::tuple<int, std::int64_t, std::int64_t, std::int64_t>> sorted;
        sorted.reserve(next.size());
        for (const auto& c : next) sorted.emplace_back(c.mat, c.t[0], c.t[1], c.t[2]);
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return true;
        level = std::move(next);
    }
    return false;
}

AnalysisReport analyze(const RepTileSystem& s, const GraphOptions& options) {
    AnalysisReport r;
    const NeighborGraph g = build_graph(s, options);
    r.node_count = g.node_count();
    r.node_budget_exceeded = g.budget_exceeded();
    if (g.identity_reached()) {
        r.verdict = Verdict::not_rep_tile;
        return r;
    }
    if (!g.complete()) {
        r.verdict = Verdict::inconclusive;
        return r;
    }
    r.verdict = Verdict::rep_tile;
    r.is_rep_tile = true;
    r.neighbor_count = neighbor_count(g);
    try {
        r.boundary_dimension = boundary_dimension(g, s);
    } catch (const NumericalError& e) {
        r.boundary_converged = false;
        r.boundary_dimension = e.last_estimate() > 0 ? std::log2(e.last_estimate()) : 0.0;
    }
    auto conn = hata_connected(g, s);
    r.connected = conn.connected;
    r.piece_adjacency = std::move(conn.adjacency);
    return r;
}

}  // namespace reptile
