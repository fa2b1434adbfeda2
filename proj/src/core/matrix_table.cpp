#include "matrix_table.hpp"

namespace reptile::detail {

MatrixTable::MatrixTable(int dim) : dim_(dim) {
    const auto& all = enumerate_matrices(dim);
    size_ = static_cast<int>(all.size());
    mul_.resize(static_cast<std::size_t>(size_) * size_);
    transpose_.resize(size_);
    perm_.resize(size_);
    sign_.resize(size_);
    for (int a = 0; a < size_; ++a) {
        for (int b = 0; b < size_; ++b) mul_[a * size_ + b] = (all[a] * all[b]).index();
        transpose_[a] = all[a].transpose().index();
        for (int j = 0; j < dim; ++j) {
            perm_[a][j] = all[a].perm(j);
            sign_[a][j] = all[a].sign(j);
        }
    }
}

const MatrixTable& MatrixTable::get(int dim) {
    check_dim(dim);
    static const MatrixTable two(2);
    static const MatrixTable three(3);
    return dim == 2 ? two : three;
}

}  // namespace reptile::detail
