// Neighbor maps of a lattice rep-tile system.
//
// A neighbor map is an isometry gamma with A n gamma(A) nonempty. Pieces i and
// j meet exactly when A meets (h_i^-1 h_j)(A), and
//
//   A n gamma(A) = U_{i,j} f_i( A n (h_i^-1 double(gamma) h_j)(A) ),
//
// where double(gamma) keeps the matrix and doubles the translation. Starting
// from the roots h_i^-1 h_j (i != j) and following these labeled edges gives a
// finite graph for integer data. A node is a real neighbor map iff an infinite
// path starts there, which is what trimming computes. The system is a rep-tile
// iff the identity is not a reachable survivor.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "reptile/ifs.hpp"

namespace reptile {

inline constexpr std::size_t kDefaultNodeBudget = 200000;

// Label (i, j) of an edge, both 0-based map indices.
struct EdgeLabel {
    int i = 0;
    int j = 0;
    friend bool operator==(const EdgeLabel&, const EdgeLabel&) = default;
};

struct Child {
    EdgeLabel label;
    LatticeIsometry map;
};

struct ChildSet {
    std::vector<Child> kept;
    // Children whose translation left the sup-norm ball of radius 2R.
    std::vector<Child> pruned;
};

// Total order used for every canonical listing: matrix index, then translation.
bool canonical_less(const LatticeIsometry& a, const LatticeIsometry& b);

// { h_i^-1 h_j : i != j } with |translation|_inf <= 2R, sorted canonically.
std::vector<LatticeIsometry> root_candidates(const RepTileSystem& s);

// All m^2 children h_i^-1 double(gamma) h_j in label order.
ChildSet children(const RepTileSystem& s, const LatticeIsometry& gamma);

struct GraphOptions {
    std::size_t node_budget = kDefaultNodeBudget;
    // Stop as soon as the identity is discovered. The answer is then
    // conclusively "not a rep-tile" but the graph is partial.
    bool stop_at_identity = false;
};

class NeighborGraph {
  public:
    struct Edge {
        std::uint16_t label;  // i * m + j
        std::uint32_t target;
    };

    int dim() const noexcept { return dim_; }
    int map_count() const noexcept { return m_; }
    std::int64_t bound() const noexcept { return bound_; }

    std::size_t node_count() const noexcept { return keys_.size(); }
    LatticeIsometry node(std::size_t k) const;
    std::optional<std::size_t> find(const LatticeIsometry& h) const;

    std::span<const Edge> edges(std::size_t k) const;
    EdgeLabel label(const Edge& e) const { return {e.label / m_, e.label % m_}; }

    std::span<const std::uint32_t> roots() const noexcept { return roots_; }
    bool is_survivor(std::size_t k) const { return survivor_.at(k) != 0; }
    bool is_reachable_survivor(std::size_t k) const { return reachable_.at(k) != 0; }

    bool budget_exceeded() const noexcept { return budget_exceeded_; }
    bool identity_reached() const noexcept { return identity_reached_; }
    // Complete means the closure finished and trimming ran.
    bool complete() const noexcept { return complete_; }
    std::size_t pruned_count() const noexcept { return pruned_count_; }

    // Reachable survivors without the identity, canonically sorted.
    std::vector<LatticeIsometry> neighbor_maps() const;
    std::vector<LatticeIsometry> survivors() const;

  private:
    friend NeighborGraph build_graph(const RepTileSystem&, const GraphOptions&);
    void trim_and_mark_reachable();

    int dim_ = 0;
    int m_ = 0;
    std::int64_t bound_ = 0;
    std::vector<std::uint64_t> keys_;
    std::vector<std::uint32_t> edge_begin_;
    std::vector<Edge> edges_;
    std::vector<std::uint32_t> roots_;
    std::vector<std::uint8_t> survivor_;
    std::vector<std::uint8_t> reachable_;
    std::size_t pruned_count_ = 0;
    bool budget_exceeded_ = false;
    bool identity_reached_ = false;
    bool complete_ = false;
};

// Breadth-first closure of the roots followed by trimming to the greatest set
// of nodes that each keep an outgoing edge inside the set.
NeighborGraph build_graph(const RepTileSystem& s, const GraphOptions& options = {});

// Throws InconclusiveError when the budget ran out before the identity was
// found; otherwise true iff the identity is not a reachable survivor.
bool decide_rep_tile(const NeighborGraph& g);

// Reachable survivors, identity excluded. Same error as decide_rep_tile.
std::size_t neighbor_count(const NeighborGraph& g);

struct SpectralResult {
    double radius = 0.0;
    int iterations = 0;
};

// Spectral radius of a nonnegative integer matrix given as row lists of
// (column, weight). Each strongly connected block is handled separately with
// power iteration on (B + I) and Collatz-Wielandt bounds for the stopping
// test. Throws NumericalError on non-convergence.
SpectralResult spectral_radius(std::span<const std::vector<std::pair<std::uint32_t, std::uint32_t>>> rows,
                               double rel_tol = 1e-9, int max_iterations = 10000);

// log2 of the spectral radius of the boundary substitution matrix on the
// reachable survivors. Requires a verified rep-tile.
double boundary_dimension(const NeighborGraph& g, const RepTileSystem& s);

struct Connectivity {
    bool connected = false;
    std::vector<std::vector<bool>> adjacency;
};

// Pieces i, j touch iff h_i^-1 h_j is a reachable survivor; the attractor is
// connected iff this piece graph is connected.
Connectivity hata_connected(const NeighborGraph& g, const RepTileSystem& s);

// One-sided check: true iff two distinct words of equal length <= max_len have
// the same word map (two level-n pieces coincide).
bool overlap_oracle(const RepTileSystem& s, int max_len);

enum class Verdict { rep_tile, not_rep_tile, inconclusive };

struct AnalysisReport {
    Verdict verdict = Verdict::inconclusive;
    bool is_rep_tile = false;
    std::size_t neighbor_count = 0;
    double boundary_dimension = 0.0;
    bool boundary_converged = true;
    bool connected = false;
    std::vector<std::vector<bool>> piece_adjacency;
    bool node_budget_exceeded = false;
    std::size_t node_count = 0;
};

// build_graph + decide_rep_tile, and for rep-tiles the remaining invariants.
// Never throws InconclusiveError; the verdict carries it instead.
AnalysisReport analyze(const RepTileSystem& s, const GraphOptions& options = {});

}  // namespace reptile
