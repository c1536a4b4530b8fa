#include <doctest.h>

#include <cmath>

#include "effstiff/eigen.hpp"
#include "effstiff/errors.hpp"
#include "effstiff/rng.hpp"

using namespace effstiff;

namespace {

SymmetricDense random_psd(std::size_t n, std::size_t rank, std::uint64_t seed) {
    Xoshiro256 rng(seed);
    DenseMatrix f(rank, n);
    for (std::size_t i = 0; i < rank; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            f(i, j) = rng.uniform() - 0.5;
        }
    }
    return SymmetricDense::from_dense(gram(f));
}

SymmetricDense random_symmetric(std::size_t n, std::uint64_t seed) {
    Xoshiro256 rng(seed);
    SymmetricDense a(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            a(i, j) = 2.0 * rng.uniform() - 1.0;
        }
    }
    return a;
}

}  // namespace

TEST_CASE("sym_eig small closed forms") {
    const EigDecomposition id = sym_eig(SymmetricDense::identity(3));
    CHECK(id.rank == 3);
    for (double v : id.values) {
        CHECK(v == doctest::Approx(1.0));
    }

    const EigDecomposition two = sym_eig(SymmetricDense{{2, 1}, {1, 2}});
    REQUIRE(two.values.size() == 2);
    CHECK(two.values[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(two.values[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(two.rank == 2);

    const EigDecomposition z = sym_eig(SymmetricDense::zero(4));
    CHECK(z.rank == 0);
    for (double v : z.values) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("sym_eig rejects tolerance outside (0, 1)") {
    CHECK_THROWS_AS(sym_eig(SymmetricDense::identity(2), 0.0), DomainError);
    CHECK_THROWS_AS(sym_eig(SymmetricDense::identity(2), 1.0), DomainError);
}

TEST_CASE("sym_eig orthonormality and reconstruction on random matrices") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const std::size_t n = 5 + 7 * seed;
        const SymmetricDense a = random_symmetric(n, seed);
        const EigDecomposition eig = sym_eig(a);
        for (std::size_t k = 1; k < n; ++k) {
            CHECK(eig.values[k - 1] >= eig.values[k]);
        }
        const DenseMatrix& v = eig.vectors;
        const DenseMatrix vtv = gram(v);
        const DenseMatrix err = vtv - DenseMatrix::identity(n);
        CHECK(err.frobenius_norm() <= 1e-12 * static_cast<double>(n));

        DenseMatrix rec(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    s += v(i, k) * eig.values[k] * v(j, k);
                }
                rec(i, j) = s;
            }
        }
        const double scale = std::max(std::abs(eig.values.front()), 1.0);
        CHECK((rec - a.to_dense()).frobenius_norm() <= 1e-10 * scale);

        // The values-only path must give the same spectrum.
        const EigDecomposition vals = sym_eig(a, kRankTolerance, false);
        for (std::size_t k = 0; k < n; ++k) {
            CHECK(vals.values[k] == doctest::Approx(eig.values[k]).epsilon(1e-12).scale(scale));
        }
    }
}

TEST_CASE("sym_eig rank counts values above tolerance") {
    const SymmetricDense a = random_psd(12, 4, 99);
    const EigDecomposition eig = sym_eig(a);
    CHECK(eig.rank == 4);
    CHECK(eig.tolerance_used == doctest::Approx(kRankTolerance * eig.values.front()));
}

TEST_CASE("pinv examples") {
    const SymmetricDense id = pinv(SymmetricDense::identity(3));
    CHECK((id.to_dense() - DenseMatrix::identity(3)).frobenius_norm() < 1e-14);

    const std::vector<double> d{2.0, 0.0};
    const SymmetricDense p = pinv(SymmetricDense::diagonal(d));
    CHECK(p(0, 0) == doctest::Approx(0.5));
    CHECK(p(1, 1) == 0.0);
    CHECK(p(0, 1) == 0.0);

    const SymmetricDense l{{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}};
    const SymmetricDense lp = pinv(l);
    for (auto [u, v] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{0, 2}}) {
        const double r = lp(u, u) + lp(v, v) - 2.0 * lp(u, v);
        CHECK(r == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    }
}

TEST_CASE("pinv satisfies A A+ A = A and keeps the rank") {
    const SymmetricDense a = random_psd(10, 6, 7);
    const SymmetricDense ap = pinv(a);
    const DenseMatrix ad = a.to_dense();
    const DenseMatrix aaa = ad * ap.to_dense() * ad;
    CHECK((aaa - ad).frobenius_norm() <= 1e-9 * ad.frobenius_norm());
    CHECK(sym_eig(ap).rank == 6);
}

TEST_CASE("pencil identity and scalar examples") {
    const SymmetricDense a = random_psd(9, 5, 3);
    const PencilSpectrum s = pencil_eigs(a, a);
    CHECK(s.finite_eigenvalues.size() == 5);
    CHECK(s.common_null_dim == 4);
    for (double v : s.finite_eigenvalues) {
        CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
    }

    const SymmetricDense x{{1, -1}, {-1, 1}};
    SymmetricDense y = x;
    y *= 1.5;
    const PencilSpectrum t = pencil_eigs(x, y);
    REQUIRE(t.finite_eigenvalues.size() == 1);
    CHECK(t.finite_eigenvalues[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(t.common_null_dim == 1);
}

TEST_CASE("pencil of the 3-cycle with one edge removed has condition 3") {
    const SymmetricDense k{{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}};
    const SymmetricDense ke{{1, -1, 0}, {-1, 1, 0}, {0, 0, 0}};
    const PencilSpectrum s = pencil_eigs(k, k - ke);
    CHECK(s.condition() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(s.finite_eigenvalues.size() + s.common_null_dim == 3);
}

TEST_CASE("pencil rejects mismatched null spaces") {
    const SymmetricDense a{{1, 0}, {0, 1}};
    const SymmetricDense b{{1, 0}, {0, 0}};
    CHECK_THROWS_AS(pencil_eigs(a, b), PencilDomainError);
    // Same rank, different null spaces.
    const SymmetricDense c{{0, 0}, {0, 1}};
    CHECK_THROWS_AS(pencil_eigs(b, c), PencilDomainError);
}

TEST_CASE("pencil scale covariance") {
    const SymmetricDense a = random_psd(8, 8, 11);
    const SymmetricDense b = random_psd(8, 8, 12);
    const PencilSpectrum s = pencil_eigs(a, b);
    const PencilSpectrum t = pencil_eigs(4.5 * a, b);
    REQUIRE(s.finite_eigenvalues.size() == t.finite_eigenvalues.size());
    for (std::size_t k = 0; k < s.finite_eigenvalues.size(); ++k) {
        CHECK(t.finite_eigenvalues[k] ==
              doctest::Approx(4.5 * s.finite_eigenvalues[k]).epsilon(1e-10));
    }
}

TEST_CASE("factored pencil route agrees with the deflated route") {
    Xoshiro256 rng(2024);
    // Common null space: both factors annihilate the all-ones vector.
    auto factor_rows = [&](std::size_t rows, std::size_t n) {
        DenseMatrix f(rows, n);
        for (std::size_t i = 0; i < rows; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j + 1 < n; ++j) {
                f(i, j) = rng.uniform() - 0.5;
                s += f(i, j);
            }
            f(i, n - 1) = -s;
        }
        return f;
    };
    const DenseMatrix fa = factor_rows(9, 6);
    const DenseMatrix fb = factor_rows(14, 6);
    const PencilSpectrum dense =
        pencil_eigs(SymmetricDense::from_dense(gram(fa)), SymmetricDense::from_dense(gram(fb)));
    const PencilSpectrum fact = pencil_eigs_factored(fa, fb);
    REQUIRE(dense.finite_eigenvalues.size() == fact.finite_eigenvalues.size());
    CHECK(fact.common_null_dim == 1);
    for (std::size_t k = 0; k < dense.finite_eigenvalues.size(); ++k) {
        CHECK(fact.finite_eigenvalues[k] ==
              doctest::Approx(dense.finite_eigenvalues[k]).epsilon(1e-9));
    }
}

TEST_CASE("condition rejects empty spectra") {
    PencilSpectrum s;
    CHECK_THROWS_AS(s.condition(), ConditioningError);
}
