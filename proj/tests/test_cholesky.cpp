#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "effstiff/cholesky.hpp"
#include "effstiff/errors.hpp"
#include "effstiff/generators.hpp"
#include "oracles.hpp"

using namespace effstiff;

TEST_CASE("identity factors trivially") {
    const CholeskyFactor f = factor(SparseSymmetric::identity(5), 0);
    CHECK(f.detected_rank() == 5);
    CHECK(f.usable());
    CHECK(f.factor_nnz() == 0);
    for (double p : f.pivots()) {
        CHECK(p == 1.0);
    }
}

TEST_CASE("connected Laplacian has rank n - 1 and is usable") {
    const Assembly a = laplacian_assembly(grid_graph(6, 7));
    const CholeskyFactor f = factor(a.stiffness(), 1);
    CHECK(f.detected_rank() == a.n() - 1);
    CHECK(f.usable());
    const SymmetricDense rec = f.reconstruct();
    const SymmetricDense k = a.stiffness().to_dense();
    CHECK((rec - k).frobenius_norm() <= 1e-8 * k.frobenius_norm());
}

TEST_CASE("disconnected Laplacian is flagged unusable") {
    GraphSpec g = path_graph(4);
    g.edges.erase(g.edges.begin() + 1);
    const Assembly a = laplacian_assembly(g);
    const CholeskyFactor f = factor(a.stiffness(), 1);
    CHECK(f.rank_deficit() == 2);
    CHECK_FALSE(f.usable());
}

TEST_CASE("strict mode names the zero pivot; indefinite raises") {
    const Assembly a = laplacian_assembly(cycle_graph(5));
    CHECK_THROWS_AS(factor(a.stiffness(), 1, true), NotWellFormedError);
    const SymmetricDense ind{{1, 2}, {2, 1}};
    CHECK_THROWS_AS(factor(SparseSymmetric::from_dense(ind), 0), NumericalError);
}

TEST_CASE("solve on a nonsingular system matches a dense inverse") {
    const SymmetricDense d{{4, 1, 0, 1}, {1, 5, 2, 0}, {0, 2, 6, 1}, {1, 0, 1, 7}};
    const CholeskyFactor f = factor(SparseSymmetric::from_dense(d), 0);
    Vector x{1, 2, 3, 4};
    f.solve_in_place(x);
    const DenseMatrix inv = oracle::inverse(d.to_dense());
    const Vector b{1, 2, 3, 4};
    const Vector ref = inv * std::span<const double>(b);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(x[i] == doctest::Approx(ref[i]).epsilon(1e-13));
    }
}

TEST_CASE("minimum degree order is a permutation and limits fill on a star") {
    const Assembly a = laplacian_assembly(star_graph(30));
    const auto order = minimum_degree_order(a.stiffness());
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> iota(30);
    std::iota(iota.begin(), iota.end(), std::size_t{0});
    CHECK(sorted == iota);
    // Leaves go first; the hub only once its degree has dropped to one.
    CHECK(std::find(order.begin(), order.end(), 0) >= order.end() - 2);
    const CholeskyFactor f = factor(a.stiffness(), 1);
    CHECK(f.factor_nnz() == 29);
}

TEST_CASE("schur complement examples") {
    const std::vector<double> diag{2, 3, 5};
    const SparseSymmetric k = SparseSymmetric::from_dense(SymmetricDense::diagonal(diag));
    const std::vector<std::size_t> last{2};
    const SymmetricDense s = schur_complement(k, last);
    CHECK(s.order() == 1);
    CHECK(s(0, 0) == doctest::Approx(5.0));

    const Assembly cyc = laplacian_assembly(cycle_graph(3));
    const std::vector<std::size_t> edge{0, 1};
    const SymmetricDense sc = schur_complement(cyc.stiffness(), edge);
    CHECK(sc(0, 0) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(sc(1, 1) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(sc(0, 1) == doctest::Approx(-1.5).epsilon(1e-14));

    const Assembly p3 = laplacian_assembly(path_graph(3));
    const std::vector<std::size_t> bridge{1, 2};
    const SymmetricDense sp = schur_complement(p3.stiffness(), bridge);
    // Bridge: R_e = 1, so S_e = [[1, -1], [-1, 1]].
    CHECK(sp(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sp(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sp(0, 1) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("schur complement matches explicit inversion on random graphs") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const GraphSpec g = random_connected_graph(8 + 2 * seed, 2 * seed, 0.1, 10.0, seed);
        const Assembly a = laplacian_assembly(g);
        const DenseMatrix kd = a.stiffness().to_dense().to_dense();
        for (std::size_t e = 0; e < a.m(); e += 3) {
            const auto& nodes = a.element(e).nodes;
            std::vector<std::size_t> rest;
            for (std::size_t i = 0; i < a.n(); ++i) {
                if (i != nodes[0] && i != nodes[1]) {
                    rest.push_back(i);
                }
            }
            DenseMatrix k11(rest.size(), rest.size());
            DenseMatrix k12(rest.size(), 2);
            for (std::size_t i = 0; i < rest.size(); ++i) {
                for (std::size_t j = 0; j < rest.size(); ++j) {
                    k11(i, j) = kd(rest[i], rest[j]);
                }
                for (std::size_t j = 0; j < 2; ++j) {
                    k12(i, j) = kd(rest[i], nodes[j]);
                }
            }
            const DenseMatrix corr = k12.transpose() * oracle::inverse(k11) * k12;
            const SymmetricDense s = schur_complement(a.stiffness(), nodes);
            double err = 0.0;
            double scale = 0.0;
            for (std::size_t i = 0; i < 2; ++i) {
                for (std::size_t j = 0; j < 2; ++j) {
                    const double ref = kd(nodes[i], nodes[j]) - corr(i, j);
                    err = std::max(err, std::abs(ref - s(i, j)));
                    scale = std::max(scale, std::abs(ref));
                }
            }
            CHECK(err <= 1e-9 * scale);

            // Laplacian form: S_e = R_e^{-1} (e1 - e2)(e1 - e2)^T.
            const DenseMatrix lp = oracle::laplacian_pinv(g);
            const double r = lp(nodes[0], nodes[0]) + lp(nodes[1], nodes[1]) -
                             2.0 * lp(nodes[0], nodes[1]);
            CHECK(s(0, 0) == doctest::Approx(1.0 / r).epsilon(1e-9));
            CHECK(s(0, 1) == doctest::Approx(-1.0 / r).epsilon(1e-9));
        }
    }
}

TEST_CASE("schur complement with a singular eliminated block raises") {
    GraphSpec g = path_graph(4);
    g.edges.pop_back();  // node 3 isolated
    const Assembly a = laplacian_assembly(g);
    const std::vector<std::size_t> edge{0, 1};
    CHECK_THROWS_AS(schur_complement(a.stiffness(), edge), NotWellFormedError);
}
