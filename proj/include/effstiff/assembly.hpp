#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "effstiff/dense.hpp"
#include "effstiff/eigen.hpp"
#include "effstiff/sparse.hpp"

namespace effstiff {

// One element: its essential matrix on the ascending global index set `nodes`,
// and optionally a row factor F with F^T F = k_tilde.
struct ElementMatrix {
    std::size_t id = 0;
    std::vector<std::size_t> nodes;
    SymmetricDense k_tilde;
    std::optional<DenseMatrix> factor;

    std::size_t size() const { return nodes.size(); }
};

// A finite-element model K = sum_e K_e with declared null basis N (n x d) and
// common element rank r. Immutable once built; the constructor validates every
// element and assembles K.
class Assembly {
public:
    Assembly(std::size_t n, std::vector<ElementMatrix> elements, DenseMatrix null_basis,
             std::size_t r);

    // Skips element validation; for models derived from a validated one.
    struct Prevalidated {};
    Assembly(std::size_t n, std::vector<ElementMatrix> elements, DenseMatrix null_basis,
             std::size_t r, Prevalidated);

    std::size_t n() const { return n_; }
    std::size_t m() const { return elements_.size(); }
    std::size_t r() const { return r_; }
    std::size_t d() const { return null_basis_.cols(); }

    const std::vector<ElementMatrix>& elements() const { return elements_; }
    const ElementMatrix& element(std::size_t e) const;
    const DenseMatrix& null_basis() const { return null_basis_; }
    const SparseSymmetric& stiffness() const { return stiffness_; }

    bool factored() const;

    // Element e scattered into an n x n sparse matrix.
    SparseSymmetric element_matrix(std::size_t e) const;

private:
    std::size_t n_;
    std::size_t r_;
    std::vector<ElementMatrix> elements_;
    DenseMatrix null_basis_;
    SparseSymmetric stiffness_;
};

// Sums the scattered element matrices. Raises ModelError on out-of-range nodes.
SparseSymmetric assemble(std::size_t n, std::span<const ElementMatrix> elements);
inline SparseSymmetric assemble(const Assembly& a) { return a.stiffness(); }

// Weighted sum sum_e coeffs[e] K_e over the elements with nonzero weight.
SparseSymmetric assemble_weighted(const Assembly& a, std::span<const double> coeffs);

// Fills the factor as Sigma^{1/2} V^T over the nonzero eigenpairs. If
// expected_rank is given and differs from the detected rank, raises ModelError.
ElementMatrix factor_element(const ElementMatrix& e, double rel_tol = kRankTolerance,
                             std::optional<std::size_t> expected_rank = std::nullopt);

// Copy of a with every element factored.
Assembly factor_all(const Assembly& a);

// Stacked global factor F (m r x n): block e is element e's factor scattered
// into its columns. Raises ModelError when an element has no factor.
struct GlobalFactor {
    std::size_t block_rows = 0;
    DenseMatrix f;
};
GlobalFactor build_global_factor(const Assembly& a);

struct WellFormedReport {
    bool nullspace_ok = false;
    bool compatibility_ok = false;
    bool minimal_rank_ok = false;
    std::vector<std::string> diagnostics;

    bool ok() const { return nullspace_ok && compatibility_ok && minimal_rank_ok; }
};

// Checks rigidity (null(K) = range(N)), N-compatibility of every element, and
// that sampled elimination blocks K(rest_e, rest_e) are nonsingular.
WellFormedReport check_well_formed(const Assembly& a, std::size_t trials = 100,
                                   std::uint64_t seed = 0x5eed);

struct RigidityGraph {
    std::size_t min_shared = 1;
    std::vector<std::vector<std::size_t>> adjacency;

    std::size_t m() const { return adjacency.size(); }
};

// Elements are adjacent when they share at least min_shared global indices.
RigidityGraph rigidity_graph(const Assembly& a, std::size_t min_shared);

// Default sharing threshold: one index for scalar problems (d <= 1), d + 1
// indices otherwise (two points for 2D elasticity).
std::size_t default_min_shared(const Assembly& a);

// Elements within graph distance `radius` of e, ascending, e included.
std::vector<std::size_t> ball(const RigidityGraph& g, std::size_t e, std::size_t radius);

struct Submodel {
    Assembly assembly;
    std::vector<std::size_t> node_map;     // local index -> global index
    std::vector<std::size_t> element_map;  // local element -> global element
};

// Elements in `subset` on the union of their nodes, compacted in ascending
// global order. N is restricted to the kept rows.
Submodel submodel(const Assembly& a, std::span<const std::size_t> subset);

}  // namespace effstiff
