// Tiling patches, OBJ surface meshes and SVG drawings.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "reptile/ifs.hpp"
#include "reptile/topology.hpp"

namespace reptile {

inline constexpr int kMaxPatchLevel = 6;

// Copies of the tile inside the level-n supertile g^n(A): one H_w per word of
// length n, words in lexicographic order.
struct TilingPatch {
    int dim = 0;
    int level = 0;
    std::vector<LatticeIsometry> placements;
};

TilingPatch supertile_patch(const RepTileSystem& s, int level);

// Wavefront OBJ with one quad per exposed cell face, shared vertices and
// 1-based indices. Cell coordinates are written as-is (voxel units).
std::string mesh_export(const VoxelSet& v);

struct MeshStats {
    std::size_t vertices = 0;
    std::size_t quads = 0;
};
MeshStats mesh_stats(const std::string& obj);

// SVG of a 2D voxel set. Without a patch every cell becomes a <rect>; with a
// patch every placement becomes one filled <path> holding the transformed
// cells, coloured from a fixed 16-colour cycle by placement index.
std::string svg_export(const VoxelSet& v, const std::optional<TilingPatch>& patch = std::nullopt);

// One JSON object per line: {"index", "word", "perm", "signs", "v"}.
std::string patch_export(const TilingPatch& patch);

}  // namespace reptile
