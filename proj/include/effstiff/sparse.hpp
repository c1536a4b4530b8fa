#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "effstiff/dense.hpp"

namespace effstiff {

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

// Sparse symmetric matrix holding the lower triangle in compressed-column
// form. Row indices within a column are strictly ascending and start at or
// below the diagonal.
class SparseSymmetric {
public:
    SparseSymmetric() = default;
    explicit SparseSymmetric(std::size_t order);

    // Entries from either triangle are folded into the lower one and
    // duplicates are summed. Explicit zeros are kept so the pattern reflects
    // the contributing structure.
    static SparseSymmetric from_triplets(std::size_t order, std::span<const Triplet> entries);
    static SparseSymmetric from_dense(const SymmetricDense& a, double drop_below = 0.0);
    static SparseSymmetric identity(std::size_t order);

    std::size_t order() const { return order_; }
    std::size_t nnz() const { return row_idx_.size(); }

    std::span<const std::size_t> col_ptr() const { return col_ptr_; }
    std::span<const std::size_t> row_idx() const { return row_idx_; }
    std::span<const double> values() const { return values_; }

    double operator()(std::size_t i, std::size_t j) const;
    Vector diagonal() const;

    Vector multiply(std::span<const double> x) const;
    void multiply(std::span<const double> x, std::span<double> y) const;

    SymmetricDense to_dense() const;
    double frobenius_norm() const;

    // Principal submatrix on ascending indices idx.
    SparseSymmetric principal_submatrix(std::span<const std::size_t> idx) const;

    // Rows of the off-diagonal block K(rows, cols) as dense columns: result
    // column j is K(rows, cols[j]). Both index sets ascending and disjoint.
    DenseMatrix coupling_block(std::span<const std::size_t> rows,
                               std::span<const std::size_t> cols) const;

    // Full symmetric adjacency (both triangles, no diagonal) per column.
    std::vector<std::vector<std::size_t>> adjacency() const;

    // True if every stored coordinate of this matrix is also stored in other.
    bool pattern_subset_of(const SparseSymmetric& other) const;

private:
    std::size_t order_ = 0;
    std::vector<std::size_t> col_ptr_{0};
    std::vector<std::size_t> row_idx_;
    std::vector<double> values_;
};

SparseSymmetric operator+(const SparseSymmetric& a, const SparseSymmetric& b);
SparseSymmetric operator*(double s, const SparseSymmetric& a);
SparseSymmetric operator-(const SparseSymmetric& a, const SparseSymmetric& b);

}  // namespace effstiff
