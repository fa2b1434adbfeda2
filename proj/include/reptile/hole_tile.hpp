// Plate tiles with a hole: four 4x2x1 plates T inside the 8x4x2 box
// B = [-4,4] x [-2,2] x [-1,1] such that T and a half-turn rho(T) fill B with
// disjoint interiors. Doubling a plate gives a copy of B, so 2T is covered by
// eight copies of T.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "reptile/ifs.hpp"
#include "reptile/topology.hpp"

namespace reptile {

struct Plate {
    IntVector lo;    // lower corner of the cell block
    IntVector size;  // a permutation of (4, 2, 1)
};

struct PlateTile {
    std::vector<Plate> plates;
    int rotation_axis = 2;   // rho is the half-turn about this axis
    std::uint64_t mask = 0;  // bit (x+4) + 8 (y+2) + 32 (z+1) per cell
    // Per plate, the reflection of B (bit a flips axis a) applied before
    // doubling; it selects which copies of T fill the doubled plate.
    std::array<unsigned, 4> flips{};
    std::optional<BlockSystem> block;
};

// Half-turn about a coordinate axis through the origin.
LatticeIsometry half_turn(int axis);

VoxelSet plate_voxels(const PlateTile& t);

// [s_1, s_1 rho, ..., s_4, s_4 rho] with s_k = sigma_k beta_k, where sigma_k
// carries B onto the doubled plate 2 P_k without reflection and beta_k is the
// reflection of B given by flips[k].
RepTileSystem plate_tile_system(const PlateTile& t);

// Block data 2T = C u f1(C), C = D u f2(D), D = f3(T) u f4(T) whose eight
// pieces are the pieces of plate_tile_system, if such data exists.
std::optional<BlockSystem> plate_block_form(const PlateTile& t);

struct HoleSearchStats {
    std::uint64_t placements = 0;
    std::uint64_t disjoint_quadruples = 0;
    std::uint64_t complementary = 0;  // rho(T) is the complement of T in B
    std::uint64_t with_hole = 0;      // one component, one handle
    std::uint64_t block_form = 0;     // admits block data for some flips
};

// Exhaustive search over plate placements. Tiles are deduplicated up to the
// eight reflections of B and returned in increasing canonical mask order.
std::vector<PlateTile> find_plate_tiles(HoleSearchStats* stats = nullptr);

}  // namespace reptile
