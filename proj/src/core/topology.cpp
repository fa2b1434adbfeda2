#include "reptile/topology.hpp"

#include <algorithm>
#include <unordered_set>

#include "matrix_table.hpp"
#include "reptile/error.hpp"

namespace reptile {

VoxelSet::VoxelSet(int dim, int level, std::vector<Cell> cells) : dim_(dim), level_(level), cells_(std::move(cells)) {
    check_dim(dim);
    if (level < 0) throw ArgumentError("VoxelSet: level must be >= 0");
    if (dim == 2) {
        for (const auto& c : cells_)
            if (c[2] != 0) throw ValidationError("VoxelSet: 2D cells must have third coordinate 0");
    }
    std::sort(cells_.begin(), cells_.end());
    cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
}

bool VoxelSet::contains(const Cell& c) const { return std::binary_search(cells_.begin(), cells_.end(), c); }

VoxelSet VoxelSet::translated(const Cell& offset) const {
    std::vector<Cell> out;
    out.reserve(cells_.size());
    for (const auto& c : cells_) out.push_back({c[0] + offset[0], c[1] + offset[1], dim_ == 3 ? c[2] + offset[2] : 0});
    return VoxelSet(dim_, level_, std::move(out));
}

namespace {

// Dense occupancy over the bounding box of a cell set, padded by `pad` cells
// on every side of the active axes.
class Grid {
  public:
    Grid(const VoxelSet& v, int pad) : dim_(v.dim()) {
        Cell lo{0, 0, 0}, hi{0, 0, 0};
        if (!v.empty()) {
            lo = hi = v.cells().front();
            for (const auto& c : v.cells()) {
                for (int i = 0; i < 3; ++i) {
                    lo[i] = std::min(lo[i], c[i]);
                    hi[i] = std::max(hi[i], c[i]);
                }
            }
        }
        for (int i = 0; i < 3; ++i) {
            const int p = i < dim_ ? pad : 0;
            lo_[i] = lo[i] - p;
            n_[i] = (hi[i] - lo[i] + 1) + 2 * p;
        }
        const auto total = static_cast<std::size_t>(n_[0] * n_[1] * n_[2]);
        if (total > (std::size_t{1} << 31)) throw ResourceError("voxel set bounding box too large");
        occ_.assign(total, 0);
        for (const auto& c : v.cells()) occ_[index(c[0] - lo_[0], c[1] - lo_[1], c[2] - lo_[2])] = 1;
    }

    int dim() const { return dim_; }
    std::int64_t n(int i) const { return n_[i]; }
    std::size_t total() const { return occ_.size(); }
    std::size_t index(std::int64_t x, std::int64_t y, std::int64_t z) const {
        return static_cast<std::size_t>((z * n_[1] + y) * n_[0] + x);
    }
    bool in(std::int64_t x, std::int64_t y, std::int64_t z) const {
        return x >= 0 && y >= 0 && z >= 0 && x < n_[0] && y < n_[1] && z < n_[2];
    }
    bool at(std::int64_t x, std::int64_t y, std::int64_t z) const { return in(x, y, z) && occ_[index(x, y, z)]; }
    std::uint8_t raw(std::size_t k) const { return occ_[k]; }
    std::array<std::int64_t, 3> coords(std::size_t k) const {
        const auto kk = static_cast<std::int64_t>(k);
        return {kk % n_[0], (kk / n_[0]) % n_[1], kk / (n_[0] * n_[1])};
    }

  private:
    int dim_;
    Cell lo_{};
    std::array<std::int64_t, 3> n_{};
    std::vector<std::uint8_t> occ_;
};

std::vector<std::array<int, 3>> neighbour_offsets(int dim, bool full) {
    std::vector<std::array<int, 3>> out;
    const int zr = dim == 3 ? 1 : 0;
    for (int dz = -zr; dz <= zr; ++dz)
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                const int nz = (dx != 0) + (dy != 0) + (dz != 0);
                if (nz == 0) continue;
                if (!full && nz != 1) continue;
                out.push_back({dx, dy, dz});
            }
    return out;
}

// Labels connected components among grid positions with occ == want.
// Returns the number of components; `label` receives 1-based ids.
std::size_t label_components(const Grid& g, std::uint8_t want, bool full_adjacency, std::vector<std::uint32_t>& label) {
    label.assign(g.total(), 0);
    const auto offsets = neighbour_offsets(g.dim(), full_adjacency);
    std::uint32_t count = 0;
    std::vector<std::size_t> stack;
    for (std::size_t k = 0; k < g.total(); ++k) {
        if (g.raw(k) != want || label[k]) continue;
        label[k] = ++count;
        stack.push_back(k);
        while (!stack.empty()) {
            const auto [x, y, z] = g.coords(stack.back());
            stack.pop_back();
            for (const auto& o : offsets) {
                const std::int64_t nx = x + o[0], ny = y + o[1], nz = z + o[2];
                if (!g.in(nx, ny, nz)) continue;
                const std::size_t idx = g.index(nx, ny, nz);
                if (g.raw(idx) == want && !label[idx]) {
                    label[idx] = count;
                    stack.push_back(idx);
                }
            }
        }
    }
    return count;
}

// Bounded complement components: empty components not touching the padded
// grid border.
std::size_t bounded_complement_components(const VoxelSet& v, bool full_adjacency) {
    if (v.empty()) return 0;
    const Grid g(v, 1);
    std::vector<std::uint32_t> label;
    const std::size_t count = label_components(g, 0, full_adjacency, label);
    // The padding makes the border one connected empty region.
    return count == 0 ? 0 : count - 1;
}

}  // namespace

VoxelSet voxelize(const RepTileSystem& s, int level) {
    if (level < 0) throw ArgumentError("voxelize: level must be >= 0");
    if (level > kMaxVoxelLevel) {
        throw ResourceError("voxelize: level " + std::to_string(level) + " exceeds the limit of " +
                            std::to_string(kMaxVoxelLevel));
    }
    const int dim = s.dim();
    const std::int64_t r = bounding_radius(s);
    const auto& table = detail::MatrixTable::get(dim);
    std::vector<detail::CompactIso> hs;
    for (const auto& h : s.maps()) hs.push_back(detail::to_compact(h));

    // Word maps level by level; equal maps give equal boxes and equal
    // descendants, so each level is deduplicated.
    std::vector<detail::CompactIso> maps{detail::CompactIso{}};
    for (int n = 1; n <= level; ++n) {
        std::vector<detail::CompactIso> next;
        next.reserve(maps.size() * hs.size());
        for (const auto& u : maps) {
            for (const auto& h : hs) {
                detail::CompactIso c;
                c.mat = table.mul(u.mat, h.mat);
                c.t = table.apply(u.mat, h.t);
                for (int i = 0; i < dim; ++i) c.t[i] += 2 * u.t[i];
                next.push_back(c);
            }
        }
        std::sort(next.begin(), next.end(), [](const auto& a, const auto& b) {
            return std::tie(a.mat, a.t) < std::tie(b.mat, b.t);
        });
        next.erase(std::unique(next.begin(), next.end(),
                               [](const auto& a, const auto& b) { return a.mat == b.mat && a.t == b.t; }),
                   next.end());
        maps = std::move(next);
    }

    // Matrices preserve [-R, R]^d, so H_w of the ball is the box centred on
    // the translation. Paint the union on a dense grid.
    std::array<std::int64_t, 3> lo{0, 0, 0}, hi{0, 0, 0};
    for (int i = 0; i < dim; ++i) {
        lo[i] = maps.front().t[i];
        hi[i] = maps.front().t[i];
    }
    for (const auto& u : maps) {
        for (int i = 0; i < dim; ++i) {
            lo[i] = std::min(lo[i], u.t[i]);
            hi[i] = std::max(hi[i], u.t[i]);
        }
    }
    std::array<std::int64_t, 3> origin{0, 0, 0}, extent{1, 1, 1};
    for (int i = 0; i < dim; ++i) {
        origin[i] = lo[i] - r;
        extent[i] = hi[i] - lo[i] + 2 * r;
    }
    const auto total = static_cast<std::size_t>(extent[0] * extent[1] * extent[2]);
    if (total > (std::size_t{1} << 31)) throw ResourceError("voxelize: grid too large");
    std::vector<std::uint8_t> occ(total, 0);
    const std::int64_t zlo = dim == 3 ? -r : 0, zhi = dim == 3 ? r : 1;
    for (const auto& u : maps) {
        const std::int64_t bz = dim == 3 ? u.t[2] - origin[2] : 0;
        for (std::int64_t dz = zlo; dz < zhi; ++dz) {
            const std::int64_t z = dim == 3 ? bz + dz : 0;
            for (std::int64_t dy = -r; dy < r; ++dy) {
                const std::int64_t y = u.t[1] - origin[1] + dy;
                const std::size_t row = static_cast<std::size_t>((z * extent[1] + y) * extent[0]);
                const std::int64_t x0 = u.t[0] - origin[0] - r;
                std::fill_n(occ.begin() + static_cast<std::ptrdiff_t>(row + x0), 2 * r, std::uint8_t{1});
            }
        }
    }
    std::vector<Cell> cells;
    for (std::size_t k = 0; k < total; ++k) {
        if (!occ[k]) continue;
        const auto kk = static_cast<std::int64_t>(k);
        cells.push_back({kk % extent[0] + origin[0], (kk / extent[0]) % extent[1] + origin[1],
                         dim == 3 ? kk / (extent[0] * extent[1]) + origin[2] : 0});
    }
    return VoxelSet(dim, level, std::move(cells));
}

VoxelSet voxel_from_boxes(const std::vector<Box>& boxes, int level) {
    if (boxes.empty()) return VoxelSet(3, level, {});
    const int dim = boxes.front().lo.dim();
    check_dim(dim);
    for (std::size_t k = 0; k < boxes.size(); ++k) {
        const auto& b = boxes[k];
        if (b.lo.dim() != dim || b.hi.dim() != dim) throw DimensionError("voxel_from_boxes: mixed dimensions");
        for (int i = 0; i < dim; ++i) {
            if (b.hi[i] <= b.lo[i]) {
                throw ValidationError("voxel_from_boxes: box " + std::to_string(k) + " is empty");
            }
        }
    }
    for (std::size_t a = 0; a < boxes.size(); ++a) {
        for (std::size_t b = a + 1; b < boxes.size(); ++b) {
            bool overlap = true;
            for (int i = 0; i < dim; ++i) {
                overlap = overlap && std::max(boxes[a].lo[i], boxes[b].lo[i]) < std::min(boxes[a].hi[i], boxes[b].hi[i]);
            }
            if (overlap) {
                throw ValidationError("voxel_from_boxes: boxes " + std::to_string(a) + " and " + std::to_string(b) +
                                      " overlap");
            }
        }
    }
    std::vector<Cell> cells;
    for (const auto& b : boxes) {
        const std::int64_t z0 = dim == 3 ? b.lo[2] : 0, z1 = dim == 3 ? b.hi[2] : 1;
        for (std::int64_t z = z0; z < z1; ++z)
            for (std::int64_t y = b.lo[1]; y < b.hi[1]; ++y)
                for (std::int64_t x = b.lo[0]; x < b.hi[0]; ++x) cells.push_back({x, y, z});
    }
    return VoxelSet(dim, level, std::move(cells));
}

std::size_t components(const VoxelSet& v) {
    if (v.empty()) return 0;
    const Grid g(v, 0);
    std::vector<std::uint32_t> label;
    return label_components(g, 1, false, label);
}

std::int64_t euler_characteristic(const VoxelSet& v) {
    if (v.empty()) return 0;
    const Grid g(v, 0);
    const int dim = v.dim();
    // Elements of the closed complex are indexed by doubled coordinates
    // e in [0, 2n]; an odd coordinate spans a cell, an even one is a cell
    // boundary. An element exists iff some incident cell is present.
    const std::int64_t ex = 2 * g.n(0) + 1, ey = 2 * g.n(1) + 1, ez = dim == 3 ? 2 * g.n(2) + 1 : 1;
    std::int64_t chi = 0;
    for (std::int64_t z = 0; z < ez; ++z) {
        for (std::int64_t y = 0; y < ey; ++y) {
            for (std::int64_t x = 0; x < ex; ++x) {
                const std::int64_t e[3] = {x, y, z};
                std::int64_t lo[3], hi[3];
                int odd = 0;
                for (int i = 0; i < 3; ++i) {
                    if (i >= dim) {
                        lo[i] = hi[i] = 0;
                    } else if (e[i] % 2 == 1) {
                        lo[i] = hi[i] = (e[i] - 1) / 2;
                        ++odd;
                    } else {
                        lo[i] = e[i] / 2 - 1;
                        hi[i] = e[i] / 2;
                    }
                }
                bool present = false;
                for (std::int64_t cz = lo[2]; cz <= hi[2] && !present; ++cz)
                    for (std::int64_t cy = lo[1]; cy <= hi[1] && !present; ++cy)
                        for (std::int64_t cx = lo[0]; cx <= hi[0] && !present; ++cx) present = g.at(cx, cy, cz);
                if (present) chi += (odd % 2 == 0) ? 1 : -1;
            }
        }
    }
    return chi;
}

std::size_t cavities(const VoxelSet& v) { return bounded_complement_components(v, false); }

TopologyReport hole_report(const VoxelSet& v) {
    if (v.dim() != 3) throw DimensionError("hole_report: requires a 3-dimensional voxel set");
    TopologyReport r;
    r.components = components(v);
    r.euler_characteristic = euler_characteristic(v);
    r.cavities = cavities(v);
    r.handles = static_cast<std::int64_t>(r.components + r.cavities) - r.euler_characteristic;

    if (v.empty()) return r;
    const Grid g(v, 1);
    {
        std::vector<Cell> core;
        for (const auto& c : v.cells()) {
            bool full = true;
            for (int dz = -1; dz <= 1 && full; ++dz)
                for (int dy = -1; dy <= 1 && full; ++dy)
                    for (int dx = -1; dx <= 1 && full; ++dx)
                        full = v.contains({c[0] + dx, c[1] + dy, c[2] + dz});
            if (full) core.push_back(c);
        }
        r.interior_components_estimate = components(VoxelSet(3, v.level(), std::move(core)));
    }

    // Complex on cell centres: vertices, face-adjacent pairs, full 2x2
    // squares in each coordinate plane, full 2x2x2 blocks.
    std::int64_t vertices = 0, edges = 0, squares = 0, cubes = 0;
    for (std::int64_t z = 0; z < g.n(2); ++z) {
        for (std::int64_t y = 0; y < g.n(1); ++y) {
            for (std::int64_t x = 0; x < g.n(0); ++x) {
                if (!g.at(x, y, z)) continue;
                ++vertices;
                const bool px = g.at(x + 1, y, z), py = g.at(x, y + 1, z), pz = g.at(x, y, z + 1);
                edges += px + py + pz;
                const bool pxy = px && py && g.at(x + 1, y + 1, z);
                const bool pxz = px && pz && g.at(x + 1, y, z + 1);
                const bool pyz = py && pz && g.at(x, y + 1, z + 1);
                squares += pxy + pxz + pyz;
                cubes += pxy && pz && g.at(x + 1, y, z + 1) && g.at(x, y + 1, z + 1) && g.at(x + 1, y + 1, z + 1);
            }
        }
    }
    r.interior_euler = vertices - edges + squares - cubes;
    r.interior_cavities = bounded_complement_components(v, true);
    r.interior_handles = static_cast<std::int64_t>(r.components + r.interior_cavities) - r.interior_euler;
    return r;
}

}  // namespace reptile
