#include "reptile/export.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "reptile/error.hpp"

namespace reptile {

TilingPatch supertile_patch(const RepTileSystem& s, int level) {
    if (level < 0) throw ArgumentError("supertile_patch: level must be >= 0");
    if (level > kMaxPatchLevel) {
        throw ResourceError("supertile_patch: level " + std::to_string(level) + " exceeds the limit of " +
                            std::to_string(kMaxPatchLevel));
    }
    TilingPatch patch;
    patch.dim = s.dim();
    patch.level = level;
    // Lexicographic order, built by extending the previous level:
    // H_{uk} = double(H_u) h_k.
    std::vector<LatticeIsometry> current{LatticeIsometry::identity(s.dim())};
    for (int n = 1; n <= level; ++n) {
        std::vector<LatticeIsometry> next;
        next.reserve(current.size() * s.size());
        for (const auto& u : current) {
            const LatticeIsometry doubled = u.scaled_translation(2);
            for (const auto& h : s.maps()) next.push_back(compose(doubled, h));
        }
        current = std::move(next);
    }
    patch.placements = std::move(current);
    return patch;
}

namespace {

using Corner = std::array<std::int64_t, 3>;

struct FaceSpec {
    int axis;
    int side;
    std::array<Corner, 4> corners;
};

// Outward-facing winding for each of the six faces of the unit cell.
constexpr std::array<FaceSpec, 6> kFaces{{
    {0, 0, {{{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {0, 1, 0}}}},
    {0, 1, {{{1, 0, 0}, {1, 1, 0}, {1, 1, 1}, {1, 0, 1}}}},
    {1, 0, {{{0, 0, 0}, {1, 0, 0}, {1, 0, 1}, {0, 0, 1}}}},
    {1, 1, {{{0, 1, 0}, {0, 1, 1}, {1, 1, 1}, {1, 1, 0}}}},
    {2, 0, {{{0, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, 0, 0}}}},
    {2, 1, {{{0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}}}},
}};

}  // namespace

std::string mesh_export(const VoxelSet& v) {
    if (v.dim() != 3) throw DimensionError("mesh_export: requires a 3-dimensional voxel set");
    std::map<Corner, std::size_t> vertex_ids;
    std::vector<Corner> vertices;
    std::vector<std::array<std::size_t, 4>> quads;
    for (const auto& c : v.cells()) {
        for (const auto& f : kFaces) {
            Cell nb = c;
            nb[f.axis] += f.side ? 1 : -1;
            if (v.contains(nb)) continue;
            std::array<std::size_t, 4> q{};
            for (int k = 0; k < 4; ++k) {
                const Corner p{c[0] + f.corners[k][0], c[1] + f.corners[k][1], c[2] + f.corners[k][2]};
                auto [it, inserted] = vertex_ids.emplace(p, vertices.size() + 1);
                if (inserted) vertices.push_back(p);
                q[k] = it->second;
            }
            quads.push_back(q);
        }
    }
    std::ostringstream os;
    os << "# reptile voxel mesh: " << v.size() << " cells, level " << v.level() << '\n';
    for (const auto& p : vertices) os << "v " << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
    for (const auto& q : quads) os << "f " << q[0] << ' ' << q[1] << ' ' << q[2] << ' ' << q[3] << '\n';
    return os.str();
}

MeshStats mesh_stats(const std::string& obj) {
    MeshStats st;
    std::istringstream in(obj);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("v ", 0) == 0) ++st.vertices;
        if (line.rfind("f ", 0) == 0) ++st.quads;
    }
    return st;
}

namespace {

constexpr std::array<const char*, 16> kPalette{
    "#e6194b", "#3cb44b", "#ffe119", "#4363d8", "#f58231", "#911eb4", "#46f0f0", "#f032e6",
    "#bcf60c", "#fabebe", "#008080", "#e6beff", "#9a6324", "#fffac8", "#800000", "#aaffc3",
};

// Lower corner of the image of cell [c, c+1]^2 under x -> M x + offset.
Cell place_cell(const Cell& c, const LatticeIsometry& h, std::int64_t scale) {
    Cell out{0, 0, 0};
    for (int j = 0; j < 2; ++j) {
        const int row = h.matrix().perm(j);
        const int sign = h.matrix().sign(j);
        out[row] = sign > 0 ? c[j] : -c[j] - 1;
    }
    for (int i = 0; i < 2; ++i) out[i] += scale * h.translation()[i];
    return out;
}

}  // namespace

std::string svg_export(const VoxelSet& v, const std::optional<TilingPatch>& patch) {
    if (v.dim() != 2) throw DimensionError("svg_export: requires a 2-dimensional voxel set");
    if (patch && patch->dim != 2) throw DimensionError("svg_export: patch must be 2-dimensional");

    std::vector<std::vector<Cell>> copies;
    if (patch) {
        const std::int64_t scale = std::int64_t{1} << v.level();
        for (const auto& h : patch->placements) {
            std::vector<Cell> cells;
            cells.reserve(v.size());
            for (const auto& c : v.cells()) cells.push_back(place_cell(c, h, scale));
            std::sort(cells.begin(), cells.end());
            copies.push_back(std::move(cells));
        }
    } else {
        copies.push_back(v.cells());
    }

    std::int64_t x0 = 0, y0 = 0, x1 = 1, y1 = 1;
    bool first = true;
    for (const auto& copy : copies) {
        for (const auto& c : copy) {
            // SVG y grows downwards; flip so the drawing matches math axes.
            const std::int64_t sx = c[0], sy = -c[1] - 1;
            if (first) {
                x0 = sx, y0 = sy, x1 = sx + 1, y1 = sy + 1;
                first = false;
            }
            x0 = std::min(x0, sx), y0 = std::min(y0, sy);
            x1 = std::max(x1, sx + 1), y1 = std::max(y1, sy + 1);
        }
    }

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << x0 << ' ' << y0 << ' ' << (x1 - x0) << ' '
       << (y1 - y0) << "\" shape-rendering=\"crispEdges\">\n";
    if (!patch) {
        os << "<g fill=\"" << kPalette[0] << "\">\n";
        for (const auto& c : copies.front()) {
            os << "<rect x=\"" << c[0] << "\" y=\"" << (-c[1] - 1) << "\" width=\"1\" height=\"1\"/>\n";
        }
        os << "</g>\n";
    } else {
        for (std::size_t k = 0; k < copies.size(); ++k) {
            os << "<path data-index=\"" << k << "\" fill=\"" << kPalette[k % kPalette.size()]
               << "\" stroke=\"none\" d=\"";
            for (const auto& c : copies[k]) os << 'M' << c[0] << ' ' << (-c[1] - 1) << "h1v1h-1z";
            os << "\"/>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

std::string patch_export(const TilingPatch& patch) {
    std::ostringstream os;
    const std::size_t m = std::size_t{1} << patch.dim;
    for (std::size_t k = 0; k < patch.placements.size(); ++k) {
        const auto& h = patch.placements[k];
        os << "{\"index\":" << k << ",\"word\":[";
        // Index k written in base m with `level` digits is the word.
        std::vector<std::size_t> digits(patch.level);
        std::size_t rest = k;
        for (int i = patch.level - 1; i >= 0; --i) {
            digits[i] = rest % m;
            rest /= m;
        }
        for (int i = 0; i < patch.level; ++i) os << (i ? "," : "") << digits[i];
        os << "],\"perm\":[";
        for (int j = 0; j < h.dim(); ++j) os << (j ? "," : "") << h.matrix().perm(j);
        os << "],\"signs\":[";
        for (int j = 0; j < h.dim(); ++j) os << (j ? "," : "") << h.matrix().sign(j);
        os << "],\"v\":[";
        for (int j = 0; j < h.dim(); ++j) os << (j ? "," : "") << h.translation()[j];
        os << "]}\n";
    }
    return os.str();
}

}  // namespace reptile
