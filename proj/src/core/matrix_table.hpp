// Index-based signed permutation arithmetic for the hot loops. Matrices are
// referred to by their canonical index from enumerate_matrices().
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "reptile/lattice_isometry.hpp"

namespace reptile::detail {

using Vec = std::array<std::int64_t, kMaxDim>;

class MatrixTable {
  public:
    explicit MatrixTable(int dim);

    static const MatrixTable& get(int dim);

    int dim() const noexcept { return dim_; }
    int size() const noexcept { return size_; }
    int mul(int a, int b) const noexcept { return mul_[a * size_ + b]; }
    int transpose(int a) const noexcept { return transpose_[a]; }

    Vec apply(int a, const Vec& x) const noexcept {
        Vec y{};
        const auto& p = perm_[a];
        const auto& s = sign_[a];
        for (int j = 0; j < dim_; ++j) y[p[j]] = s[j] * x[j];
        return y;
    }

  private:
    int dim_;
    int size_;
    std::vector<int> mul_;
    std::vector<int> transpose_;
    std::vector<std::array<int, kMaxDim>> perm_;
    std::vector<std::array<int, kMaxDim>> sign_;
};

struct CompactIso {
    int mat = 0;
    Vec t{};
};

inline CompactIso to_compact(const LatticeIsometry& h) {
    CompactIso c;
    c.mat = h.matrix().index();
    for (int i = 0; i < h.dim(); ++i) c.t[i] = h.translation()[i];
    return c;
}

inline LatticeIsometry from_compact(int dim, const CompactIso& c) {
    IntVector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = c.t[i];
    return {SignedPermMatrix::from_index(dim, c.mat), v};
}

inline std::int64_t sup_norm(const Vec& v, int dim) noexcept {
    std::int64_t n = 0;
    for (int i = 0; i < dim; ++i) n = std::max(n, v[i] < 0 ? -v[i] : v[i]);
    return n;
}

// Packs matrix index and translation into 64 bits. Coordinates must satisfy
// |t| < 2^18.
inline constexpr int kPackBits = 19;
inline constexpr std::int64_t kPackOffset = std::int64_t{1} << (kPackBits - 1);

inline std::uint64_t pack(const CompactIso& c) noexcept {
    std::uint64_t key = static_cast<std::uint64_t>(c.mat);
    for (int i = 0; i < kMaxDim; ++i) {
        key = (key << kPackBits) | static_cast<std::uint64_t>(c.t[i] + kPackOffset);
    }
    return key;
}

inline CompactIso unpack(std::uint64_t key) noexcept {
    CompactIso c;
    const std::uint64_t mask = (std::uint64_t{1} << kPackBits) - 1;
    for (int i = kMaxDim - 1; i >= 0; --i) {
        c.t[i] = static_cast<std::int64_t>(key & mask) - kPackOffset;
        key >>= kPackBits;
    }
    c.mat = static_cast<int>(key);
    return c;
}

struct KeyHash {
    std::size_t operator()(std::uint64_t x) const noexcept {
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ull;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebull;
        x ^= x >> 31;
        return static_cast<std::size_t>(x);
    }
};

}  // namespace reptile::detail
