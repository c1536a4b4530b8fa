#pragma once

#include <cstddef>
#include <vector>

#include "effstiff/dense.hpp"

namespace effstiff {

// Relative rank tolerance used across the library: values below
// kRankTolerance * max|lambda| count as zero.
inline constexpr double kRankTolerance = 1e-10;

struct EigDecomposition {
    Vector values;        // descending
    DenseMatrix vectors;  // column j pairs with values[j]; empty if not requested
    std::size_t rank = 0;
    double tolerance_used = 0.0;
};

// Symmetric eigendecomposition by Householder tridiagonalization followed by
// implicit QL. Throws NumericalError if an eigenvalue needs more than the
// fixed sweep budget.
EigDecomposition sym_eig(const SymmetricDense& a, double rel_tol = kRankTolerance,
                         bool want_vectors = true);

// Moore-Penrose pseudoinverse of a symmetric matrix.
SymmetricDense pinv(const SymmetricDense& a, double rel_tol = kRankTolerance);

struct PencilSpectrum {
    Vector finite_eigenvalues;  // ascending
    std::size_t common_null_dim = 0;

    double max() const;
    double min() const;
    double trace() const;
    // max/min; throws ConditioningError on an empty or non-positive spectrum.
    double condition() const;
};

// Finite generalized eigenvalues of the semidefinite pencil (A, B), computed
// by deflating onto range(B). Throws PencilDomainError when the null spaces of
// A and B differ.
PencilSpectrum pencil_eigs(const SymmetricDense& a, const SymmetricDense& b,
                           double rel_tol = kRankTolerance);

// Same spectrum from row factors A = Fa^T Fa and B = Fb^T Fb, as the nonzero
// squared singular values of V^+ U with U = Fa^T and V = Fb^T. The factors may
// have different row counts.
PencilSpectrum pencil_eigs_factored(const DenseMatrix& fa, const DenseMatrix& fb,
                                    double rel_tol = kRankTolerance);

}  // namespace effstiff
