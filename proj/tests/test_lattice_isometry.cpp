#include <doctest.h>

#include <algorithm>
#include <set>

#include "reptile/error.hpp"
#include "reptile/lattice_isometry.hpp"
#include "test_support.hpp"

using namespace reptile;

TEST_CASE("enumerate_matrices sizes and canonical order") {
    CHECK(enumerate_matrices(2).size() == 8);
    CHECK(enumerate_matrices(3).size() == 48);
    CHECK(enumerate_matrices(2).front().is_identity());
    CHECK(enumerate_matrices(3).front().is_identity());
    CHECK_THROWS_AS(enumerate_matrices(1), DimensionError);
    CHECK_THROWS_AS(enumerate_matrices(4), DimensionError);

    for (int dim : {2, 3}) {
        const auto& mats = enumerate_matrices(dim);
        // Lexicographic on (perm, signs) with +1 ordered before -1.
        auto key = [dim](const SignedPermMatrix& m) {
            std::vector<int> k;
            for (int j = 0; j < dim; ++j) k.push_back(m.perm(j));
            for (int j = 0; j < dim; ++j) k.push_back(m.sign(j) > 0 ? 0 : 1);
            return k;
        };
        for (std::size_t i = 1; i < mats.size(); ++i) CHECK(key(mats[i - 1]) < key(mats[i]));
        for (std::size_t i = 0; i < mats.size(); ++i) {
            CHECK(mats[i].index() == static_cast<int>(i));
            CHECK(SignedPermMatrix::from_index(dim, static_cast<int>(i)) == mats[i]);
        }
    }
}

TEST_CASE("enumerated matrices are distinct orthogonal signed permutations") {
    for (int dim : {2, 3}) {
        std::set<testing::Dense> seen;
        for (const auto& m : enumerate_matrices(dim)) {
            const auto d = testing::dense(m);
            seen.insert(d);
            for (int r = 0; r < dim; ++r) {
                int row_nonzero = 0, col_nonzero = 0;
                for (int c = 0; c < dim; ++c) {
                    row_nonzero += d[r][c] != 0;
                    col_nonzero += d[c][r] != 0;
                    CHECK(std::abs(d[r][c]) <= 1);
                }
                CHECK(row_nonzero == 1);
                CHECK(col_nonzero == 1);
            }
            // M M^T = I
            testing::Dense t{};
            for (int r = 0; r < dim; ++r)
                for (int c = 0; c < dim; ++c) t[r][c] = d[c][r];
            const auto p = testing::mul(d, t, dim);
            for (int r = 0; r < dim; ++r)
                for (int c = 0; c < dim; ++c) CHECK(p[r][c] == (r == c ? 1 : 0));
        }
        CHECK(seen.size() == enumerate_matrices(dim).size());
    }
}

TEST_CASE("matrix validation") {
    const int bad_perm[] = {0, 0};
    const int signs[] = {1, 1};
    CHECK_THROWS_AS(SignedPermMatrix::from_parts(bad_perm, signs), ValidationError);
    const int perm[] = {1, 0};
    const int bad_signs[] = {1, 2};
    CHECK_THROWS_AS(SignedPermMatrix::from_parts(perm, bad_signs), ValidationError);
    const int dense_bad[] = {1, 1, 0, 1};
    CHECK_THROWS_AS(SignedPermMatrix::from_dense(2, dense_bad), ValidationError);
    const int dense_two[] = {2, 0, 0, 1};
    CHECK_THROWS_AS(SignedPermMatrix::from_dense(2, dense_two), ValidationError);
    const int dense_ok[] = {0, -1, 1, 0};
    const auto m = SignedPermMatrix::from_dense(2, dense_ok);
    CHECK(m.entry(0, 1) == -1);
    CHECK(m.entry(1, 0) == 1);
    CHECK_THROWS_AS(SignedPermMatrix::from_index(2, 8), ValidationError);
}

TEST_CASE("apply") {
    const auto id = LatticeIsometry(SignedPermMatrix::identity(2), IntVector{1, 2});
    CHECK(id.apply(IntVector{0, 0}) == IntVector{1, 2});

    // perm = (1,0), signs = (-1,+1): column 0 is -e_1, column 1 is e_0.
    const int perm[] = {1, 0};
    const int signs[] = {-1, 1};
    const auto rot = LatticeIsometry(SignedPermMatrix::from_parts(perm, signs), IntVector(2));
    const IntVector y = rot.apply(IntVector{1, 0});
    CHECK(y == IntVector{0, -1});
    CHECK(y.sup_norm() == 1);
    CHECK(rot.apply(IntVector{0, 1}) == IntVector{1, 0});

    CHECK_THROWS_AS(rot.apply(IntVector{1, 2, 3}), DimensionError);
}

TEST_CASE("apply agrees with dense arithmetic and preserves norms") {
    std::mt19937_64 gen(11);
    for (int dim : {2, 3}) {
        for (int trial = 0; trial < 500; ++trial) {
            const auto h = testing::random_isometry(gen, dim, 5);
            const auto d = testing::dense(h.matrix());
            std::uniform_int_distribution<long long> coord(-20, 20);
            std::array<long long, 3> x{};
            IntVector xv(dim);
            for (int i = 0; i < dim; ++i) xv[i] = x[i] = coord(gen);
            const auto ref = testing::dense_apply(d, x, dim);
            const IntVector mx = h.matrix().apply(xv);
            long long n2 = 0, m2 = 0;
            for (int i = 0; i < dim; ++i) {
                CHECK(h.apply(xv)[i] == ref[i] + h.translation()[i]);
                n2 += x[i] * x[i];
                m2 += mx[i] * mx[i];
            }
            CHECK(n2 == m2);
            CHECK(mx.sup_norm() == xv.sup_norm());
        }
    }
}

TEST_CASE("compose, inverse and the group laws") {
    std::mt19937_64 gen(12);
    for (int dim : {2, 3}) {
        const auto e = LatticeIsometry::identity(dim);
        CHECK(is_identity(e));
        CHECK(inverse(e) == e);
        for (int trial = 0; trial < 300; ++trial) {
            const auto a = testing::random_isometry(gen, dim, 4);
            const auto b = testing::random_isometry(gen, dim, 4);
            const auto c = testing::random_isometry(gen, dim, 4);
            CHECK(compose(e, a) == a);
            CHECK(compose(a, e) == a);
            CHECK(is_identity(compose(a, inverse(a))));
            CHECK(is_identity(compose(inverse(a), a)));
            CHECK(inverse(inverse(a)) == a);
            CHECK(compose(a, compose(b, c)) == compose(compose(a, b), c));
            // Matrix of a o b is the dense product.
            CHECK(testing::dense(compose(a, b).matrix()) == testing::mul(testing::dense(a.matrix()), testing::dense(b.matrix()), dim));
            for (long long x = -2; x <= 2; ++x)
                for (long long y = -2; y <= 2; ++y) {
                    IntVector p(dim);
                    p[0] = x;
                    p[1] = y;
                    if (dim == 3) p[2] = x - y;
                    CHECK(compose(a, b).apply(p) == a.apply(b.apply(p)));
                    CHECK(inverse(a).apply(a.apply(p)) == p);
                }
        }
    }
    CHECK(inverse(LatticeIsometry::translation(IntVector{3, -1})) == LatticeIsometry::translation(IntVector{-3, 1}));
    CHECK_THROWS_AS(compose(LatticeIsometry::identity(2), LatticeIsometry::identity(3)), DimensionError);
}

TEST_CASE("is_identity") {
    CHECK(is_identity(LatticeIsometry::identity(3)));
    CHECK_FALSE(is_identity(LatticeIsometry::translation(IntVector{1, 0, 0})));
    const int perm[] = {0, 1, 2};
    const int signs[] = {-1, 1, 1};
    CHECK_FALSE(is_identity(LatticeIsometry(SignedPermMatrix::from_parts(perm, signs), IntVector(3))));
}

TEST_CASE("scaled translation and hashing") {
    const int perm[] = {1, 0};
    const int signs[] = {1, -1};
    const LatticeIsometry h(SignedPermMatrix::from_parts(perm, signs), IntVector{2, -3});
    const auto d = h.scaled_translation(2);
    CHECK(d.matrix() == h.matrix());
    CHECK(d.translation() == IntVector{4, -6});
    LatticeIsometryHash hash;
    CHECK(hash(h) == hash(LatticeIsometry(h.matrix(), IntVector{2, -3})));
    CHECK(to_string(LatticeIsometry::identity(2)).size() > 0);
}
