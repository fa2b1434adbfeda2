#include "reptile/lattice_isometry.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "reptile/error.hpp"

namespace reptile {

void check_dim(int dim) {
    if (dim != 2 && dim != 3) {
        throw DimensionError("unsupported dimension " + std::to_string(dim) + " (expected 2 or 3)");
    }
}

namespace {

void require_same_dim(int a, int b) {
    if (a != b) {
        throw DimensionError("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// IntVector

IntVector::IntVector(int dim) : dim_(dim) {
    if (dim < 0 || dim > kMaxDim) throw DimensionError("vector dimension out of range");
}

IntVector::IntVector(std::initializer_list<value_type> coords) {
    if (coords.size() > kMaxDim) throw DimensionError("vector dimension out of range");
    dim_ = static_cast<int>(coords.size());
    std::copy(coords.begin(), coords.end(), c_.begin());
}

IntVector IntVector::from_span(std::span<const value_type> coords) {
    if (coords.size() > kMaxDim) throw DimensionError("vector dimension out of range");
    IntVector v(static_cast<int>(coords.size()));
    std::copy(coords.begin(), coords.end(), v.c_.begin());
    return v;
}

IntVector::value_type IntVector::sup_norm() const noexcept {
    value_type n = 0;
    for (int i = 0; i < dim_; ++i) n = std::max(n, c_[i] < 0 ? -c_[i] : c_[i]);
    return n;
}

bool IntVector::is_zero() const noexcept {
    for (int i = 0; i < dim_; ++i)
        if (c_[i] != 0) return false;
    return true;
}

IntVector IntVector::operator+(const IntVector& o) const {
    require_same_dim(dim_, o.dim_);
    IntVector r(dim_);
    for (int i = 0; i < dim_; ++i) r.c_[i] = c_[i] + o.c_[i];
    return r;
}

IntVector IntVector::operator-(const IntVector& o) const {
    require_same_dim(dim_, o.dim_);
    IntVector r(dim_);
    for (int i = 0; i < dim_; ++i) r.c_[i] = c_[i] - o.c_[i];
    return r;
}

IntVector IntVector::operator-() const {
    IntVector r(dim_);
    for (int i = 0; i < dim_; ++i) r.c_[i] = -c_[i];
    return r;
}

IntVector IntVector::scaled(value_type k) const {
    IntVector r(dim_);
    for (int i = 0; i < dim_; ++i) r.c_[i] = k * c_[i];
    return r;
}

bool operator==(const IntVector& a, const IntVector& b) noexcept {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i)
        if (a.c_[i] != b.c_[i]) return false;
    return true;
}

// ---------------------------------------------------------------------------
// SignedPermMatrix

SignedPermMatrix SignedPermMatrix::identity(int dim) {
    check_dim(dim);
    SignedPermMatrix m;
    m.dim_ = dim;
    for (int j = 0; j < dim; ++j) {
        m.perm_[j] = static_cast<std::int8_t>(j);
        m.signs_[j] = 1;
    }
    return m;
}

SignedPermMatrix SignedPermMatrix::from_parts(std::span<const int> perm, std::span<const int> signs) {
    const int dim = static_cast<int>(perm.size());
    check_dim(dim);
    if (signs.size() != perm.size()) {
        throw ValidationError("signs: expected " + std::to_string(dim) + " entries, got " +
                              std::to_string(signs.size()));
    }
    SignedPermMatrix m;
    m.dim_ = dim;
    std::array<bool, kMaxDim> seen{};
    for (int j = 0; j < dim; ++j) {
        if (perm[j] < 0 || perm[j] >= dim || seen[perm[j]]) {
            throw ValidationError("perm: not a permutation of 0.." + std::to_string(dim - 1));
        }
        seen[perm[j]] = true;
        if (signs[j] != 1 && signs[j] != -1) {
            throw ValidationError("signs: entry " + std::to_string(signs[j]) + " is not +1 or -1");
        }
        m.perm_[j] = static_cast<std::int8_t>(perm[j]);
        m.signs_[j] = static_cast<std::int8_t>(signs[j]);
    }
    return m;
}

SignedPermMatrix SignedPermMatrix::from_dense(int dim, std::span<const int> entries) {
    check_dim(dim);
    if (entries.size() != static_cast<std::size_t>(dim * dim)) {
        throw ValidationError("matrix: expected " + std::to_string(dim * dim) + " entries");
    }
    std::array<int, kMaxDim> perm{};
    std::array<int, kMaxDim> signs{};
    std::array<int, kMaxDim> row_count{};
    for (int col = 0; col < dim; ++col) {
        int nonzero = 0;
        for (int row = 0; row < dim; ++row) {
            const int e = entries[row * dim + col];
            if (e == 0) continue;
            if (e != 1 && e != -1) throw ValidationError("matrix: entries must be 0, +1 or -1");
            ++nonzero;
            ++row_count[row];
            perm[col] = row;
            signs[col] = e;
        }
        if (nonzero != 1) throw ValidationError("matrix: each column needs exactly one nonzero entry");
    }
    for (int row = 0; row < dim; ++row) {
        if (row_count[row] != 1) throw ValidationError("matrix: each row needs exactly one nonzero entry");
    }
    return from_parts(std::span<const int>(perm.data(), dim), std::span<const int>(signs.data(), dim));
}

SignedPermMatrix SignedPermMatrix::from_index(int dim, int index) {
    const auto& all = enumerate_matrices(dim);
    if (index < 0 || index >= static_cast<int>(all.size())) {
        throw ValidationError("matrix index " + std::to_string(index) + " out of range");
    }
    return all[index];
}

int SignedPermMatrix::index() const noexcept {
    // Lexicographic rank of perm among permutations of 0..dim-1.
    int perm_rank = 0;
    for (int i = 0; i < dim_; ++i) {
        int smaller_later = 0;
        for (int j = i + 1; j < dim_; ++j)
            if (perm_[j] < perm_[i]) ++smaller_later;
        int fact = 1;
        for (int k = 2; k <= dim_ - 1 - i; ++k) fact *= k;
        perm_rank += smaller_later * fact;
    }
    int sign_rank = 0;
    for (int j = 0; j < dim_; ++j) sign_rank = sign_rank * 2 + (signs_[j] < 0 ? 1 : 0);
    return perm_rank * (1 << dim_) + sign_rank;
}

bool SignedPermMatrix::is_identity() const noexcept {
    for (int j = 0; j < dim_; ++j)
        if (perm_[j] != j || signs_[j] != 1) return false;
    return true;
}

IntVector SignedPermMatrix::apply(const IntVector& x) const {
    require_same_dim(dim_, x.dim());
    IntVector y(dim_);
    for (int j = 0; j < dim_; ++j) y[perm_[j]] = signs_[j] * x[j];
    return y;
}

SignedPermMatrix SignedPermMatrix::transpose() const {
    SignedPermMatrix t;
    t.dim_ = dim_;
    for (int j = 0; j < dim_; ++j) {
        t.perm_[perm_[j]] = static_cast<std::int8_t>(j);
        t.signs_[perm_[j]] = signs_[j];
    }
    return t;
}

SignedPermMatrix operator*(const SignedPermMatrix& a, const SignedPermMatrix& b) {
    require_same_dim(a.dim_, b.dim_);
    SignedPermMatrix r;
    r.dim_ = a.dim_;
    // Column j of AB is A applied to column j of B.
    for (int j = 0; j < a.dim_; ++j) {
        const int mid = b.perm_[j];
        r.perm_[j] = a.perm_[mid];
        r.signs_[j] = static_cast<std::int8_t>(b.signs_[j] * a.signs_[mid]);
    }
    return r;
}

namespace {

std::vector<SignedPermMatrix> build_matrices(int dim) {
    std::vector<SignedPermMatrix> out;
    std::vector<int> perm(dim);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        for (int bits = 0; bits < (1 << dim); ++bits) {
            std::vector<int> signs(dim);
            for (int j = 0; j < dim; ++j) signs[j] = (bits >> (dim - 1 - j)) & 1 ? -1 : 1;
            out.push_back(SignedPermMatrix::from_parts(perm, signs));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace

const std::vector<SignedPermMatrix>& enumerate_matrices(int dim) {
    check_dim(dim);
    static const std::vector<SignedPermMatrix> two = build_matrices(2);
    static const std::vector<SignedPermMatrix> three = build_matrices(3);
    return dim == 2 ? two : three;
}

// ---------------------------------------------------------------------------
// LatticeIsometry

LatticeIsometry::LatticeIsometry(SignedPermMatrix matrix, IntVector translation)
    : matrix_(matrix), translation_(translation) {
    require_same_dim(matrix_.dim(), translation_.dim());
}

LatticeIsometry LatticeIsometry::identity(int dim) {
    return {SignedPermMatrix::identity(dim), IntVector(dim)};
}

LatticeIsometry LatticeIsometry::translation(const IntVector& v) {
    return {SignedPermMatrix::identity(v.dim()), v};
}

IntVector LatticeIsometry::apply(const IntVector& x) const {
    return matrix_.apply(x) + translation_;
}

LatticeIsometry LatticeIsometry::scaled_translation(std::int64_t factor) const {
    return {matrix_, translation_.scaled(factor)};
}

LatticeIsometry compose(const LatticeIsometry& a, const LatticeIsometry& b) {
    require_same_dim(a.dim(), b.dim());
    return {a.matrix() * b.matrix(), a.matrix().apply(b.translation()) + a.translation()};
}

LatticeIsometry inverse(const LatticeIsometry& h) {
    const SignedPermMatrix t = h.matrix().transpose();
    return {t, -t.apply(h.translation())};
}

bool is_identity(const LatticeIsometry& h) noexcept {
    return h.matrix().is_identity() && h.translation().is_zero();
}

std::string to_string(const SignedPermMatrix& m) {
    std::ostringstream os;
    os << '[';
    for (int r = 0; r < m.dim(); ++r) {
        if (r) os << "; ";
        for (int c = 0; c < m.dim(); ++c) {
            if (c) os << ' ';
            const int e = m.entry(r, c);
            os << (e > 0 ? " 1" : e < 0 ? "-1" : " 0");
        }
    }
    os << ']';
    return os.str();
}

std::string to_string(const LatticeIsometry& h) {
    std::ostringstream os;
    os << "x -> " << to_string(h.matrix()) << " x + (";
    for (int i = 0; i < h.dim(); ++i) os << (i ? ", " : "") << h.translation()[i];
    os << ')';
    return os.str();
}

std::size_t LatticeIsometryHash::operator()(const LatticeIsometry& h) const noexcept {
    std::uint64_t x = static_cast<std::uint64_t>(h.matrix().index()) * 0x9E3779B97F4A7C15ull;
    for (auto c : h.translation().coords()) {
        x ^= static_cast<std::uint64_t>(c) + 0x9E3779B97F4A7C15ull + (x << 6) + (x >> 2);
    }
    return static_cast<std::size_t>(x);
}

}  // namespace reptile
