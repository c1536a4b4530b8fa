#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "effstiff/sparse.hpp"

namespace effstiff {

// Pivots at or below this fraction of the largest diagonal entry count as zero.
inline constexpr double kPivotTolerance = 1e-12;

// Fill-reducing elimination order (minimum degree on the explicit elimination
// graph, ties broken by lowest index). order[k] is the original index
// eliminated at step k.
std::vector<std::size_t> minimum_degree_order(const SparseSymmetric& a);

// Sparse L D L^T factorization of a symmetric positive semidefinite matrix,
// P(perm, perm) = L D L^T with L unit lower triangular. Numerically zero
// pivots are skipped: their D entry and L column are zero and the solve sets
// the matching solution component to zero.
class CholeskyFactor {
public:
    std::size_t order() const { return perm_.size(); }
    std::size_t detected_rank() const { return detected_rank_; }
    std::size_t null_dim_expected() const { return null_dim_expected_; }
    std::size_t rank_deficit() const { return order() - detected_rank_; }
    // Deficit no larger than the expected null-space dimension.
    bool usable() const { return rank_deficit() <= null_dim_expected_; }

    std::span<const std::size_t> permutation() const { return perm_; }
    std::span<const double> pivots() const { return diag_; }
    std::size_t factor_nnz() const { return row_idx_.size(); }

    // Solves on the range, zeroing deficient components; x holds b on entry.
    void solve_in_place(std::span<double> x) const;

    // Permuted-back L D L^T, for verification.
    SymmetricDense reconstruct() const;

private:
    friend CholeskyFactor factor(const SparseSymmetric&, std::size_t, bool);

    std::vector<std::size_t> perm_;
    std::vector<std::size_t> col_ptr_;
    std::vector<std::size_t> row_idx_;  // permuted row positions, strictly below diagonal
    std::vector<double> values_;
    Vector diag_;
    std::vector<char> deficient_;
    std::size_t detected_rank_ = 0;
    std::size_t null_dim_expected_ = 0;
};

// Factors p expecting a null space of dimension null_dim. With strict set, the
// first numerically zero pivot raises NotWellFormedError naming the original
// index. A pivot below -tolerance raises NumericalError.
CholeskyFactor factor(const SparseSymmetric& p, std::size_t null_dim, bool strict = false);

// K(pivot, pivot) - K(rest, pivot)^T K(rest, rest)^{-1} K(rest, pivot), with
// pivot ascending and rest its complement. Raises NotWellFormedError if
// K(rest, rest) is numerically singular.
SymmetricDense schur_complement(const SparseSymmetric& k,
                                std::span<const std::size_t> pivot_block);

}  // namespace effstiff
