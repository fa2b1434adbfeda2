#include "reptile/hole_tile.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <unordered_map>
#include <optional>
#include <utility>

#include "reptile/error.hpp"

namespace reptile {

namespace {

constexpr std::array<std::int64_t, 3> kBoxLo{-4, -2, -1};
constexpr std::array<std::int64_t, 3> kBoxSize{8, 4, 2};
constexpr std::uint64_t kFull = ~std::uint64_t{0};

int bit_of(std::int64_t x, std::int64_t y, std::int64_t z) {
    return static_cast<int>((x + 4) + 8 * (y + 2) + 32 * (z + 1));
}

Cell cell_of(int bit) { return {bit % 8 - 4, (bit / 8) % 4 - 2, bit / 32 - 1}; }

// Image of a cell mask under the reflection flipping the axes in `flips`.
std::uint64_t reflect(std::uint64_t mask, unsigned flips) {
    std::uint64_t out = 0;
    for (; mask; mask &= mask - 1) {
        Cell c = cell_of(std::countr_zero(mask));
        for (int a = 0; a < 3; ++a) {
            if (flips & (1u << a)) c[a] = -c[a] - 1;
        }
        out |= std::uint64_t{1} << bit_of(c[0], c[1], c[2]);
    }
    return out;
}

// Half-turn about axis a flips the other two axes.
unsigned half_turn_flips(int axis) { return 7u & ~(1u << axis); }

std::uint64_t plate_mask(const Plate& p) {
    std::uint64_t m = 0;
    for (std::int64_t z = p.lo[2]; z < p.lo[2] + p.size[2]; ++z)
        for (std::int64_t y = p.lo[1]; y < p.lo[1] + p.size[1]; ++y)
            for (std::int64_t x = p.lo[0]; x < p.lo[0] + p.size[0]; ++x) m |= std::uint64_t{1} << bit_of(x, y, z);
    return m;
}

std::vector<Plate> all_placements() {
    std::array<std::int64_t, 3> dims{4, 2, 1};
    std::sort(dims.begin(), dims.end());
    std::vector<Plate> out;
    do {
        if (dims[0] > kBoxSize[0] || dims[1] > kBoxSize[1] || dims[2] > kBoxSize[2]) continue;
        for (std::int64_t z = kBoxLo[2]; z + dims[2] <= kBoxLo[2] + kBoxSize[2]; ++z)
            for (std::int64_t y = kBoxLo[1]; y + dims[1] <= kBoxLo[1] + kBoxSize[1]; ++y)
                for (std::int64_t x = kBoxLo[0]; x + dims[0] <= kBoxLo[0] + kBoxSize[0]; ++x)
                    out.push_back({IntVector{x, y, z}, IntVector{dims[0], dims[1], dims[2]}});
    } while (std::next_permutation(dims.begin(), dims.end()));
    return out;
}

std::vector<Cell> cells_of(const std::vector<Plate>& plates) {
    std::vector<Cell> cells;
    for (const auto& p : plates) {
        for (std::int64_t z = p.lo[2]; z < p.lo[2] + p.size[2]; ++z)
            for (std::int64_t y = p.lo[1]; y < p.lo[1] + p.size[1]; ++y)
                for (std::int64_t x = p.lo[0]; x < p.lo[0] + p.size[0]; ++x) cells.push_back({x, y, z});
    }
    std::sort(cells.begin(), cells.end());
    return cells;
}

// All lattice isometries x -> M x + t carrying the cell set `from` onto `to`.
// The unit cell at c goes to the unit cell at M c + shift(M) + t.
std::vector<LatticeIsometry> congruences(const std::vector<Cell>& from, const std::vector<Cell>& to) {
    std::vector<LatticeIsometry> out;
    if (from.size() != to.size() || from.empty()) return out;
    for (const auto& m : enumerate_matrices(3)) {
        Cell shift{0, 0, 0};
        for (int j = 0; j < 3; ++j) {
            if (m.sign(j) < 0) shift[m.perm(j)] = -1;
        }
        std::vector<Cell> image;
        image.reserve(from.size());
        for (const auto& c : from) {
            const IntVector mc = m.apply(IntVector{c[0], c[1], c[2]});
            image.push_back({mc[0] + shift[0], mc[1] + shift[1], mc[2] + shift[2]});
        }
        std::sort(image.begin(), image.end());
        const IntVector t{to[0][0] - image[0][0], to[0][1] - image[0][1], to[0][2] - image[0][2]};
        bool same = true;
        for (std::size_t k = 0; k < image.size() && same; ++k) {
            same = image[k][0] + t[0] == to[k][0] && image[k][1] + t[1] == to[k][1] && image[k][2] + t[2] == to[k][2];
        }
        if (same) out.emplace_back(m, t);
    }
    return out;
}

// sigma: B -> 2P without reflection. B is centred at the origin, so the
// translation is the centre of 2P.
LatticeIsometry plate_map(const Plate& p) {
    std::array<int, 3> perm{};
    const std::array<int, 3> signs{1, 1, 1};
    for (int j = 0; j < 3; ++j) {
        for (int i = 0; i < 3; ++i) {
            if (2 * p.size[i] == kBoxSize[j]) perm[j] = i;
        }
    }
    IntVector t(3);
    for (int i = 0; i < 3; ++i) t[i] = 2 * p.lo[i] + p.size[i];
    return LatticeIsometry(SignedPermMatrix::from_parts(perm, signs), t);
}

LatticeIsometry box_reflection(unsigned flips) {
    const std::array<int, 3> perm{0, 1, 2};
    std::array<int, 3> signs{};
    for (int a = 0; a < 3; ++a) signs[a] = (flips & (1u << a)) ? -1 : 1;
    return LatticeIsometry(SignedPermMatrix::from_parts(perm, signs), IntVector(3));
}

}  // namespace

LatticeIsometry half_turn(int axis) {
    if (axis < 0 || axis > 2) throw ArgumentError("half_turn: axis must be 0, 1 or 2");
    const std::array<int, 3> perm{0, 1, 2};
    std::array<int, 3> signs{-1, -1, -1};
    signs[axis] = 1;
    return LatticeIsometry(SignedPermMatrix::from_parts(perm, signs), IntVector(3));
}

VoxelSet plate_voxels(const PlateTile& t) { return VoxelSet(3, 0, cells_of(t.plates)); }

RepTileSystem plate_tile_system(const PlateTile& t) {
    if (t.plates.size() != 4) throw ValidationError("plate_tile_system: expected 4 plates");
    const LatticeIsometry rho = half_turn(t.rotation_axis);
    std::vector<LatticeIsometry> maps;
    for (std::size_t k = 0; k < 4; ++k) {
        const LatticeIsometry sigma = compose(plate_map(t.plates[k]), box_reflection(t.flips[k]));
        maps.push_back(sigma);
        maps.push_back(compose(sigma, rho));
    }
    return RepTileSystem(3, std::move(maps));
}

std::optional<BlockSystem> plate_block_form(const PlateTile& t) {
    const RepTileSystem pieces = plate_tile_system(t);
    const std::vector<Cell> cells = cells_of(t.plates);
    const std::vector<LatticeIsometry> symmetries = congruences(cells, cells);

    // Every map whose image of T is one of the eight pieces, with the piece.
    std::vector<LatticeIsometry> valid;
    std::unordered_map<LatticeIsometry, int, LatticeIsometryHash> piece_of;
    for (int k = 0; k < pieces.size(); ++k) {
        for (const auto& s : symmetries) {
            const LatticeIsometry h = compose(pieces.map(k), s);
            valid.push_back(h);
            piece_of.emplace(h, k);
        }
    }
    auto piece = [&](const LatticeIsometry& h) {
        const auto it = piece_of.find(h);
        return it == piece_of.end() ? -1 : it->second;
    };

    for (const auto& f3 : valid) {
        const int a = piece(f3);
        const LatticeIsometry f3_inv = inverse(f3);
        for (const auto& f4 : valid) {
            const int b = piece(f4);
            if (b == a) continue;
            for (const auto& v : valid) {
                const int c = piece(v);
                if (c == a || c == b) continue;
                const LatticeIsometry f2 = compose(v, f3_inv);
                const LatticeIsometry f2f4 = compose(f2, f4);
                const int d = piece(f2f4);
                if (d < 0 || d == a || d == b || d == c) continue;
                const unsigned used = (1u << a) | (1u << b) | (1u << c) | (1u << d);
                for (const auto& w : valid) {
                    if (used & (1u << piece(w))) continue;
                    const LatticeIsometry f1 = compose(w, f3_inv);
                    unsigned all = used | (1u << piece(w));
                    bool ok = true;
                    for (const auto& h : {compose(f1, f4), compose(f1, v), compose(f1, f2f4)}) {
                        const int e = piece(h);
                        if (e < 0 || (all & (1u << e))) {
                            ok = false;
                            break;
                        }
                        all |= 1u << e;
                    }
                    if (ok) return BlockSystem(f1, f2, f3, f4);
                }
            }
        }
    }
    return std::nullopt;
}

std::vector<PlateTile> find_plate_tiles(HoleSearchStats* stats) {
    HoleSearchStats st;
    const std::vector<Plate> placements = all_placements();
    st.placements = placements.size();
    std::vector<std::uint64_t> masks;
    masks.reserve(placements.size());
    for (const auto& p : placements) masks.push_back(plate_mask(p));

    std::vector<std::pair<std::uint64_t, PlateTile>> found;
    std::vector<std::uint64_t> seen;
    const std::size_t n = placements.size();
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (masks[a] & masks[b]) continue;
            const std::uint64_t ab = masks[a] | masks[b];
            for (std::size_t c = b + 1; c < n; ++c) {
                if (ab & masks[c]) continue;
                const std::uint64_t abc = ab | masks[c];
                for (std::size_t d = c + 1; d < n; ++d) {
                    if (abc & masks[d]) continue;
                    ++st.disjoint_quadruples;
                    const std::uint64_t mask = abc | masks[d];
                    int axis = -1;
                    for (int r = 0; r < 3 && axis < 0; ++r) {
                        if (reflect(mask, half_turn_flips(r)) == (kFull ^ mask)) axis = r;
                    }
                    if (axis < 0) continue;
                    ++st.complementary;

                    std::uint64_t canon = mask;
                    for (unsigned f = 1; f < 8; ++f) canon = std::min(canon, reflect(mask, f));
                    if (std::find(seen.begin(), seen.end(), canon) != seen.end()) continue;
                    seen.push_back(canon);

                    PlateTile tile;
                    tile.plates = {placements[a], placements[b], placements[c], placements[d]};
                    tile.rotation_axis = axis;
                    tile.mask = mask;
                    const TopologyReport topo = hole_report(plate_voxels(tile));
                    if (topo.components != 1 || topo.handles != 1 || topo.interior_handles != 1) continue;
                    ++st.with_hole;
                    for (unsigned code = 0; code < 8 * 8 * 8 * 8 && !tile.block; ++code) {
                        for (int k = 0; k < 4; ++k) tile.flips[k] = (code >> (3 * (3 - k))) & 7u;
                        tile.block = plate_block_form(tile);
                    }
                    if (tile.block) {
                        ++st.block_form;
                    } else {
                        tile.flips = {};
                    }
                    found.emplace_back(canon, std::move(tile));
                }
            }
        }
    }
    std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    if (stats) *stats = st;
    std::vector<PlateTile> out;
    out.reserve(found.size());
    for (auto& f : found) out.push_back(std::move(f.second));
    return out;
}

}  // namespace reptile
