// Voxel approximations of tiles and cubical-complex topology.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "reptile/ifs.hpp"

namespace reptile {

using Cell = std::array<std::int64_t, 3>;

// Finite set of unit cells [c, c+1]^d. At level n one cell has side 2^-n in
// tile coordinates. In 2D the third coordinate is always 0.
class VoxelSet {
  public:
    VoxelSet() = default;
    VoxelSet(int dim, int level, std::vector<Cell> cells);

    int dim() const noexcept { return dim_; }
    int level() const noexcept { return level_; }
    std::size_t size() const noexcept { return cells_.size(); }
    bool empty() const noexcept { return cells_.empty(); }
    // Sorted, unique.
    const std::vector<Cell>& cells() const noexcept { return cells_; }
    bool contains(const Cell& c) const;

    VoxelSet translated(const Cell& offset) const;

    friend bool operator==(const VoxelSet&, const VoxelSet&) = default;

  private:
    int dim_ = 3;
    int level_ = 0;
    std::vector<Cell> cells_;
};

inline constexpr int kMaxVoxelLevel = 8;

// Cells covered by the boxes H_w([-R, R]^d), |w| = level, at scale 2^level.
VoxelSet voxelize(const RepTileSystem& s, int level);

// Half-open integer box [lo, hi).
struct Box {
    IntVector lo;
    IntVector hi;
};

// Exact unit-cell decomposition of a union of interior-disjoint boxes.
VoxelSet voxel_from_boxes(const std::vector<Box>& boxes, int level = 0);

// Face-adjacent (2d-neighbour) components.
std::size_t components(const VoxelSet& v);

// V - E + F - C (or V - E + F in 2D) of the closed cubical complex.
std::int64_t euler_characteristic(const VoxelSet& v);

// Bounded face-connected components of the complement.
std::size_t cavities(const VoxelSet& v);

struct TopologyReport {
    std::size_t components = 0;
    std::int64_t euler_characteristic = 0;
    std::size_t cavities = 0;
    // components + cavities - euler_characteristic
    std::int64_t handles = 0;
    // Heuristic: components of the cells whose full 3x3x3 neighbourhood is
    // present. Not an exact statement about the interior.
    std::size_t interior_components_estimate = 0;

    // Exact Betti numbers of the open interior, from the complex on cell
    // centres (edges between face neighbours, squares and cubes for full 2x2
    // and 2x2x2 blocks) and the 26-connected complement. These agree with the
    // fields above whenever no two cells meet only in an edge or a corner.
    std::int64_t interior_euler = 0;
    std::size_t interior_cavities = 0;
    std::int64_t interior_handles = 0;
};

TopologyReport hole_report(const VoxelSet& v);

}  // namespace reptile
