#include <doctest.h>

#include <algorithm>
#include <set>

#include "reptile/hole_tile.hpp"
#include "reptile/neighbor_graph.hpp"
#include "test_support.hpp"

using namespace reptile;

namespace {

PlateTile sample_tile() {
    PlateTile t;
    t.rotation_axis = 0;
    t.plates = {{IntVector{-4, -2, -1}, IntVector{2, 4, 1}},
                {IntVector{2, -2, -1}, IntVector{2, 4, 1}},
                {IntVector{-2, -2, -1}, IntVector{4, 1, 2}},
                {IntVector{-2, 0, -1}, IntVector{4, 1, 2}}};
    return t;
}

// Image of the unit cell at c under h.
Cell image_cell(const LatticeIsometry& h, const Cell& c) {
    Cell lo{0, 0, 0};
    for (int r = 0; r < 3; ++r) {
        long long a = h.translation()[r], b = h.translation()[r];
        for (int k = 0; k < 3; ++k) {
            const long long e = h.matrix().entry(r, k);
            a += e * c[k];
            b += e * (c[k] + 1);
        }
        lo[r] = std::min(a, b);
    }
    return lo;
}

}  // namespace

TEST_CASE("plate tile geometry") {
    const auto t = sample_tile();
    const auto v = plate_voxels(t);
    CHECK(v.size() == 32);
    for (const auto& c : v.cells()) {
        CHECK((c[0] >= -4 && c[0] < 4));
        CHECK((c[1] >= -2 && c[1] < 2));
        CHECK((c[2] >= -1 && c[2] < 1));
    }
    // The half-turn of T is the rest of B.
    const auto rho = half_turn(t.rotation_axis);
    std::set<Cell> rotated;
    for (const auto& c : v.cells()) rotated.insert(image_cell(rho, c));
    CHECK(rotated.size() == 32);
    for (const auto& c : rotated) CHECK_FALSE(v.contains(c));

    const auto r = hole_report(v);
    CHECK(r.components == 1);
    CHECK(r.handles == 1);
    CHECK(r.interior_handles == 1);
    // Same topology on the rotated copy.
    const auto rr = hole_report(VoxelSet(3, 0, {rotated.begin(), rotated.end()}));
    CHECK(rr.handles == r.handles);
    CHECK(rr.components == r.components);
}

TEST_CASE("plate tile system is exactly self-similar") {
    const auto t = sample_tile();
    const auto v = plate_voxels(t);
    const auto s = plate_tile_system(t);
    REQUIRE(s.dim() == 3);
    REQUIRE(s.size() == 8);
    // 2T cell by cell, and the eight images h_k(T).
    std::multiset<Cell> pieces;
    for (const auto& h : s.maps())
        for (const auto& c : v.cells()) pieces.insert(image_cell(h, c));
    std::set<Cell> doubled;
    for (const auto& c : v.cells())
        for (int dx = 0; dx < 2; ++dx)
            for (int dy = 0; dy < 2; ++dy)
                for (int dz = 0; dz < 2; ++dz) doubled.insert({2 * c[0] + dx, 2 * c[1] + dy, 2 * c[2] + dz});
    CHECK(pieces.size() == doubled.size());
    CHECK(std::set<Cell>(pieces.begin(), pieces.end()) == doubled);

    const auto report = analyze(s);
    CHECK(report.verdict == Verdict::rep_tile);
    CHECK(report.connected);
    CHECK_FALSE(overlap_oracle(s, 3));
}

TEST_CASE("hole tile fixture") {
    const auto s = load_system(read_file(testing::fixture("hole_tile.json")));
    CHECK(decide_rep_tile(build_graph(s)));
    // The outer approximation fills the tunnel at coarse levels; by level 4
    // the margin is thinner than the hole.
    const auto r = hole_report(voxelize(s, 4));
    CHECK(r.components == 1);
    CHECK(r.cavities == 0);
    CHECK(r.handles == 1);
    CHECK(r.interior_handles == 1);
}
