#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "reptile/error.hpp"
#include "reptile/ifs.hpp"
#include "test_support.hpp"

using namespace reptile;

namespace {

LatticeIsometry tr(long long x, long long y, long long z) { return LatticeIsometry::translation(IntVector{x, y, z}); }

// H_w as the composition g^n f_{w1} ... f_{wn}, f_k = g^-1 h_k, evaluated in
// floating point. All intermediate values are dyadic rationals with small
// numerators, so doubles represent them exactly.
std::array<double, 3> reference_word_apply(const RepTileSystem& s, const Word& w, const std::array<double, 3>& x) {
    const int d = s.dim();
    std::array<double, 3> y = x;
    for (int i = static_cast<int>(w.size()) - 1; i >= 0; --i) {
        const auto& h = s.map(w[i]);
        std::array<double, 3> z{};
        for (int r = 0; r < d; ++r) {
            double acc = h.translation()[r];
            for (int c = 0; c < d; ++c) acc += h.matrix().entry(r, c) * y[c];
            z[r] = acc / 2.0;
        }
        y = z;
    }
    for (int r = 0; r < d; ++r) y[r] = std::ldexp(y[r], static_cast<int>(w.size()));
    return y;
}

// Decimal big-number arithmetic on strings, independent of the library.
std::string dec_mul(const std::string& a, unsigned long long b) {
    std::string out;
    unsigned long long carry = 0;
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i) {
        const unsigned long long t = static_cast<unsigned long long>(a[i] - '0') * b + carry;
        out.push_back(static_cast<char>('0' + t % 10));
        carry = t / 10;
    }
    while (carry) {
        out.push_back(static_cast<char>('0' + carry % 10));
        carry /= 10;
    }
    while (out.size() > 1 && out.back() == '0') out.pop_back();
    std::reverse(out.begin(), out.end());
    return out;
}

std::string dec_pow(unsigned long long base, int e) {
    std::string r = "1";
    for (int i = 0; i < e; ++i) r = dec_mul(r, base);
    return r;
}

}  // namespace

TEST_CASE("RepTileSystem invariants") {
    std::vector<LatticeIsometry> seven(7, LatticeIsometry::identity(3));
    CHECK_THROWS_AS(RepTileSystem(3, seven), ValidationError);
    std::vector<LatticeIsometry> mixed(4, LatticeIsometry::identity(2));
    mixed[2] = LatticeIsometry::identity(3);
    CHECK_THROWS_AS(RepTileSystem(2, mixed), ValidationError);
    CHECK(square_system().size() == 4);
    CHECK(cube_system().size() == 8);
}

TEST_CASE("block_expand order") {
    const auto e = LatticeIsometry::identity(3);
    const auto all_id = block_expand(BlockSystem(e, e, e, e));
    CHECK(all_id.size() == 8);
    for (const auto& h : all_id.maps()) CHECK(is_identity(h));

    const auto t = IntVector{0, 0, 1}, u = IntVector{0, 2, 0}, w = IntVector{4, 0, 0};
    const auto s = block_expand(BlockSystem(LatticeIsometry::translation(w), LatticeIsometry::translation(u), e,
                                            LatticeIsometry::translation(t)));
    const std::vector<IntVector> expected{IntVector(3), t, u, u + t, w, w + t, w + u, w + u + t};
    for (int k = 0; k < 8; ++k) {
        CHECK(s.map(k).matrix().is_identity());
        CHECK(s.map(k).translation() == expected[k]);
    }
    // {0,4} x {0,2} x {0,1}, each exactly once
    std::vector<IntVector> got;
    for (const auto& h : s.maps()) got.push_back(h.translation());
    for (long long x : {0, 4})
        for (long long y : {0, 2})
            for (long long z : {0, 1}) CHECK(std::count(got.begin(), got.end(), IntVector{x, y, z}) == 1);

    // Non-commuting maps: each entry is the documented composite.
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 50; ++trial) {
        BlockSystem b(testing::random_isometry(gen, 3, 2), testing::random_isometry(gen, 3, 2),
                      testing::random_isometry(gen, 3, 2), testing::random_isometry(gen, 3, 2));
        const auto x = block_expand(b);
        CHECK(x.map(0) == b.f3);
        CHECK(x.map(1) == b.f4);
        CHECK(x.map(2) == compose(b.f2, b.f3));
        CHECK(x.map(3) == compose(b.f2, b.f4));
        CHECK(x.map(4) == compose(b.f1, b.f3));
        CHECK(x.map(5) == compose(b.f1, b.f4));
        CHECK(x.map(6) == compose(b.f1, compose(b.f2, b.f3)));
        CHECK(x.map(7) == compose(b.f1, compose(b.f2, b.f4)));
    }
}

TEST_CASE("word_map matches the composition definition") {
    const auto cube = cube_system();
    for (int k = 0; k < 8; ++k) CHECK(word_map(cube, {k}) == cube.map(k));
    for (int k = 0; k < 8; ++k)
        for (int j = 0; j < 8; ++j) {
            const auto h = word_map(cube, {k, j});
            CHECK(h.matrix().is_identity());
            CHECK(h.translation() == cube.map(k).translation().scaled(2) + cube.map(j).translation());
        }

    const RepTileSystem ids(2, std::vector<LatticeIsometry>(4, LatticeIsometry::identity(2)));
    CHECK(is_identity(word_map(ids, {0, 3, 2, 1})));

    CHECK_THROWS_AS(word_map(cube, {}), ArgumentError);
    CHECK_THROWS_AS(word_map(cube, {8}), ArgumentError);

    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 200; ++trial) {
        const int dim = trial % 2 ? 3 : 2;
        std::vector<LatticeIsometry> maps;
        for (int k = 0; k < map_count(dim); ++k) maps.push_back(testing::random_isometry(gen, dim, 3));
        const RepTileSystem s(dim, maps);
        const int n = 1 + trial % 6;
        Word w(n);
        for (auto& letter : w) letter = static_cast<int>(gen() % map_count(dim));
        const auto h = word_map(s, w);
        // Recover the affine map from images of 0 and the unit vectors.
        const auto o = reference_word_apply(s, w, {0, 0, 0});
        for (int r = 0; r < dim; ++r) CHECK(o[r] == static_cast<double>(h.translation()[r]));
        for (int c = 0; c < dim; ++c) {
            std::array<double, 3> e{};
            e[c] = 1;
            const auto img = reference_word_apply(s, w, e);
            for (int r = 0; r < dim; ++r) CHECK(img[r] - o[r] == static_cast<double>(h.matrix().entry(r, c)));
        }
        // Translation bound (2^n - 1) R.
        CHECK(h.translation().sup_norm() <= ((1LL << n) - 1) * bounding_radius(s));
        // Concatenation: H_uv = (g^|v| H_u g^-|v|) H_v.
        if (n >= 2) {
            const int split = 1 + trial % (n - 1);
            const Word u(w.begin(), w.begin() + split), v(w.begin() + split, w.end());
            const auto hu = word_map(s, u).scaled_translation(1LL << v.size());
            CHECK(compose(hu, word_map(s, v)) == h);
        }
    }
}

TEST_CASE("bounding_radius") {
    const RepTileSystem ids(2, std::vector<LatticeIsometry>(4, LatticeIsometry::identity(2)));
    CHECK(bounding_radius(ids) == 1);
    CHECK(bounding_radius(cube_system()) == 1);
    auto maps = cube_system().maps();
    maps[5] = tr(-7, 3, 10);
    CHECK(bounding_radius(RepTileSystem(3, maps)) == 10);
}

TEST_CASE("data_space_count") {
    CHECK(data_space_count(3, 10, 1) == 444528);
    CHECK(444528 == 48 * 21 * 21 * 21);
    CHECK(data_space_count(3, 10, 8).str() == dec_pow(444528, 8));
    CHECK(data_space_count(3, 10, 4).str() == dec_pow(444528, 4));
    CHECK(data_space_count(2, 1, 4).str() == dec_pow(8 * 9, 4));
    CHECK(data_space_count(2, 0, 1) == 8);
    CHECK_THROWS_AS(data_space_count(3, -1, 1), ArgumentError);
    CHECK_THROWS_AS(data_space_count(3, 1, 0), ArgumentError);
    CHECK_THROWS_AS(data_space_count(4, 1, 1), DimensionError);
}

TEST_CASE("parse and emit round trip") {
    for (const char* name : {"cube.json", "square.json", "flag.json", "hole_tile.json", "cube_block.json"}) {
        const std::string text = read_file(testing::fixture(name));
        const auto doc = parse_system(text);
        CHECK(emit_system(doc) == text);
        CHECK(parse_system(emit_system(doc)) == doc);
        CHECK(parse_system(emit_system_compact(doc)) == doc);
    }
    CHECK(emit_system(SystemDocument{cube_system()}) == read_file(testing::fixture("cube.json")));
    CHECK(load_system(read_file(testing::fixture("cube_block.json"))) == cube_system());

    // Field order and whitespace are not significant on input.
    const auto loose = parse_system(R"({"maps":[{"v":[0,0],"signs":[1,1],"perm":[0,1]},
        {"v":[0,1],"signs":[1,1],"perm":[0,1]},{"v":[1,0],"signs":[1,1],"perm":[0,1]},
        {"v":[1,1],"signs":[1,1],"perm":[0,1]}],"dim":2,"kind":"system"})");
    CHECK(emit_system(loose) == read_file(testing::fixture("square.json")));
}

TEST_CASE("parse errors") {
    std::string cube = read_file(testing::fixture("cube.json"));

    SUBCASE("seven maps") {
        const auto pos = cube.rfind(",\n    {");
        const std::string seven = cube.substr(0, pos) + cube.substr(cube.find('\n', pos + 2));
        try {
            parse_system(seven);
            FAIL("expected a validation error");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("expected 8 maps") != std::string::npos);
        }
    }
    SUBCASE("sign entry 2") {
        const auto pos = cube.find("\"signs\": [1, 1, 1]");
        cube.replace(pos, 18, "\"signs\": [1, 2, 1]");
        try {
            parse_system(cube);
            FAIL("expected a validation error");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("maps[0].signs") != std::string::npos);
        }
    }
    SUBCASE("bad permutation") {
        const auto pos = cube.find("\"perm\": [0, 1, 2]");
        cube.replace(pos, 17, "\"perm\": [0, 0, 2]");
        CHECK_THROWS_AS(parse_system(cube), ValidationError);
    }
    SUBCASE("unknown field") {
        CHECK_THROWS_AS(parse_system(R"({"kind":"system","dim":2,"maps":[],"extra":1})"), ValidationError);
    }
    SUBCASE("bad kind and dim") {
        CHECK_THROWS_AS(parse_system(R"({"kind":"other","dim":2,"maps":[]})"), ValidationError);
        CHECK_THROWS_AS(parse_system(R"({"kind":"system","dim":4,"maps":[]})"), ValidationError);
        CHECK_THROWS_AS(parse_system(R"({"kind":"block","dim":2})"), ValidationError);
    }
    SUBCASE("syntax error carries a position") {
        try {
            parse_system("{\n  \"kind\": \"system\",\n  \"dim\": 2,,\n}");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
            CHECK(e.column() >= 10);
        }
        CHECK_THROWS_AS(parse_system(""), ParseError);
        CHECK_THROWS_AS(parse_system("[1,2]"), ParseError);
    }
    CHECK_THROWS_AS(read_file(testing::fixture("does_not_exist.json")), IoError);
}
