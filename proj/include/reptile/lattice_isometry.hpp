// Isometries of the integer lattice Z^d, d in {2,3}: x -> M x + v with M a
// signed permutation matrix and v an integer vector.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace reptile {

inline constexpr int kMaxDim = 3;

// Throws DimensionError unless dim is 2 or 3.
void check_dim(int dim);

class IntVector {
  public:
    using value_type = std::int64_t;

    IntVector() = default;
    explicit IntVector(int dim);
    IntVector(std::initializer_list<value_type> coords);
    static IntVector from_span(std::span<const value_type> coords);

    int dim() const noexcept { return dim_; }
    value_type operator[](int i) const noexcept { return c_[i]; }
    value_type& operator[](int i) noexcept { return c_[i]; }
    std::span<const value_type> coords() const noexcept { return {c_.data(), static_cast<std::size_t>(dim_)}; }

    value_type sup_norm() const noexcept;
    bool is_zero() const noexcept;

    IntVector operator+(const IntVector& o) const;
    IntVector operator-(const IntVector& o) const;
    IntVector operator-() const;
    IntVector scaled(value_type k) const;

    friend bool operator==(const IntVector& a, const IntVector& b) noexcept;
    friend auto operator<=>(const IntVector& a, const IntVector& b) noexcept {
        if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
        return a.c_ <=> b.c_;
    }

  private:
    int dim_ = 0;
    std::array<value_type, kMaxDim> c_{};
};

// Column j of the matrix is signs[j] * e_{perm[j]}. The (perm, signs) encoding
// keeps the one-nonzero-per-row-and-column property true by construction.
class SignedPermMatrix {
  public:
    SignedPermMatrix() = default;

    static SignedPermMatrix identity(int dim);
    // Validates that perm is a permutation and every sign is +1 or -1.
    static SignedPermMatrix from_parts(std::span<const int> perm, std::span<const int> signs);
    // Validates a dense row-major dim x dim matrix.
    static SignedPermMatrix from_dense(int dim, std::span<const int> entries);
    // Inverse of index(): position within enumerate_matrices(dim).
    static SignedPermMatrix from_index(int dim, int index);

    int dim() const noexcept { return dim_; }
    int perm(int j) const noexcept { return perm_[j]; }
    int sign(int j) const noexcept { return signs_[j]; }
    int entry(int row, int col) const noexcept { return perm_[col] == row ? signs_[col] : 0; }

    // Position in the canonical order used by enumerate_matrices.
    int index() const noexcept;
    bool is_identity() const noexcept;

    IntVector apply(const IntVector& x) const;
    SignedPermMatrix transpose() const;

    friend SignedPermMatrix operator*(const SignedPermMatrix& a, const SignedPermMatrix& b);
    friend bool operator==(const SignedPermMatrix& a, const SignedPermMatrix& b) noexcept = default;

  private:
    int dim_ = 0;
    std::array<std::int8_t, kMaxDim> perm_{};
    std::array<std::int8_t, kMaxDim> signs_{};
};

// All 2^d * d! signed permutation matrices, ordered lexicographically on
// (perm, signs) with +1 ordered before -1. The identity comes first.
const std::vector<SignedPermMatrix>& enumerate_matrices(int dim);

class LatticeIsometry {
  public:
    LatticeIsometry() = default;
    LatticeIsometry(SignedPermMatrix matrix, IntVector translation);

    static LatticeIsometry identity(int dim);
    static LatticeIsometry translation(const IntVector& v);

    int dim() const noexcept { return matrix_.dim(); }
    const SignedPermMatrix& matrix() const noexcept { return matrix_; }
    const IntVector& translation() const noexcept { return translation_; }

    // M x + v
    IntVector apply(const IntVector& x) const;
    // x -> M x + factor * v, i.e. conjugation by x -> factor * x.
    LatticeIsometry scaled_translation(std::int64_t factor) const;

    friend bool operator==(const LatticeIsometry& a, const LatticeIsometry& b) noexcept = default;

  private:
    SignedPermMatrix matrix_;
    IntVector translation_;
};

// x -> a(b(x))
LatticeIsometry compose(const LatticeIsometry& a, const LatticeIsometry& b);
LatticeIsometry inverse(const LatticeIsometry& h);
bool is_identity(const LatticeIsometry& h) noexcept;

std::string to_string(const SignedPermMatrix& m);
std::string to_string(const LatticeIsometry& h);

struct LatticeIsometryHash {
    std::size_t operator()(const LatticeIsometry& h) const noexcept;
};

}  // namespace reptile
