#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "effstiff/cholesky.hpp"
#include "effstiff/dense.hpp"
#include "effstiff/sparse.hpp"

namespace effstiff {

// Orthogonal projector onto the complement of range(N).
class NullProjector {
public:
    NullProjector() = default;
    explicit NullProjector(const DenseMatrix& null_basis);

    std::size_t dim() const { return q_.cols(); }
    const DenseMatrix& orthonormal_basis() const { return q_; }

    void project(std::span<double> x) const;
    // Norm of the component of x inside range(N).
    double null_component(std::span<const double> x) const;

private:
    DenseMatrix q_;  // n x d, orthonormal columns
};

// Relative distance from range(P) tolerated by apply_pinv.
inline constexpr double kConsistencyTolerance = 1e-8;

// Solves P x = b on range(P) with the factor's deficient pivots skipped, then
// projects x orthogonal to range(N). Raises DomainError for an unusable factor
// and ConsistencyError when b has a component in range(N) beyond tolerance.
Vector apply_pinv(const CholeskyFactor& f, std::span<const double> b, const NullProjector& proj);

struct SolveReport {
    std::size_t iterations = 0;
    Vector residual_history;  // relative residuals, entry 0 is the initial one
    bool converged = false;
    std::optional<double> kappa_estimate;
    Vector x;
};

// Preconditioned conjugate gradients on K x = b with preconditioner solves by
// apply_pinv. Stops when ||K x - b||_2 / ||b||_2 <= tol, confirmed with the
// true residual. Exceeding maxit is reported, not raised; a non-positive
// curvature or preconditioned inner product raises NumericalError.
SolveReport pcg(const SparseSymmetric& k, std::span<const double> b, const CholeskyFactor& f,
                double tol, std::size_t maxit, const NullProjector& proj);

// Upper limit on the dense condition-number computation.
inline constexpr std::size_t kDenseConditionMaxOrder = 2000;

// kappa(K, P) over the complement of range(N), by dense deflation. Raises
// NullSpaceMismatchError when P does not annihilate N or loses rank on its
// complement.
double exact_generalized_condition(const SparseSymmetric& k, const SparseSymmetric& p,
                                   const DenseMatrix& null_basis);

// ceil(sqrt(kappa) * ln(2 / tol)) + 5.
std::size_t pcg_iteration_bound(double kappa, double tol);

}  // namespace effstiff
