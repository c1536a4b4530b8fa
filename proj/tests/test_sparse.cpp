#include <doctest.h>

#include <cmath>

#include "effstiff/errors.hpp"
#include "effstiff/sparse.hpp"

using namespace effstiff;

TEST_CASE("triplets fold into the lower triangle and sum duplicates") {
    const std::vector<Triplet> t{{0, 1, -1.0}, {1, 0, -0.5}, {0, 0, 2.0}, {1, 1, 3.0}, {0, 0, 1.0}};
    const SparseSymmetric a = SparseSymmetric::from_triplets(2, t);
    CHECK(a(0, 0) == 3.0);
    CHECK(a(1, 0) == -1.5);
    CHECK(a(0, 1) == -1.5);
    CHECK(a.nnz() == 3);
}

TEST_CASE("triplets out of range or non-finite are rejected") {
    const std::vector<Triplet> bad{{2, 0, 1.0}};
    CHECK_THROWS_AS(SparseSymmetric::from_triplets(2, bad), Error);
    const std::vector<Triplet> nan{{0, 0, std::nan("")}};
    CHECK_THROWS_AS(SparseSymmetric::from_triplets(1, nan), Error);
}

TEST_CASE("sparse multiply, dense round trip and submatrices") {
    const SymmetricDense d{{4, -1, 0, -1}, {-1, 4, -1, 0}, {0, -1, 4, -1}, {-1, 0, -1, 4}};
    const SparseSymmetric a = SparseSymmetric::from_dense(d);
    CHECK(a.nnz() == 8);
    const Vector x{1, -2, 3, 0.5};
    const Vector y = a.multiply(x);
    const Vector z = d.multiply(x);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(y[i] == doctest::Approx(z[i]));
    }
    CHECK((a.to_dense().to_dense() - d.to_dense()).frobenius_norm() == 0.0);
    CHECK(a.frobenius_norm() == doctest::Approx(d.frobenius_norm()));

    const std::vector<std::size_t> idx{1, 3};
    const SparseSymmetric s = a.principal_submatrix(idx);
    CHECK(s(0, 0) == 4.0);
    CHECK(s(1, 0) == 0.0);

    const std::vector<std::size_t> rows{0, 2};
    const DenseMatrix c = a.coupling_block(rows, idx);
    CHECK(c(0, 0) == -1.0);
    CHECK(c(0, 1) == -1.0);
    CHECK(c(1, 0) == -1.0);
    CHECK(c(1, 1) == -1.0);
}

TEST_CASE("adjacency and pattern subset") {
    const std::vector<Triplet> t{{0, 0, 1}, {1, 1, 1}, {2, 2, 1}, {2, 0, -1}};
    const SparseSymmetric a = SparseSymmetric::from_triplets(3, t);
    const auto adj = a.adjacency();
    CHECK(adj[0] == std::vector<std::size_t>{2});
    CHECK(adj[1].empty());
    CHECK(adj[2] == std::vector<std::size_t>{0});
    const SparseSymmetric id = SparseSymmetric::identity(3);
    CHECK(id.pattern_subset_of(a));
    CHECK_FALSE(a.pattern_subset_of(id));
}

TEST_CASE("sparse arithmetic") {
    const SparseSymmetric i3 = SparseSymmetric::identity(3);
    const SparseSymmetric two = 2.0 * i3;
    const SparseSymmetric diff = two - i3;
    const SparseSymmetric sum = diff + i3;
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(diff(k, k) == 1.0);
        CHECK(sum(k, k) == 2.0);
    }
}
