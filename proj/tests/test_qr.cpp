#include <doctest.h>
#include <cmath>

#include "effstiff/assembly.hpp"
#include "effstiff/eigen.hpp"
#include "effstiff/errors.hpp"
#include "effstiff/generators.hpp"
#include "effstiff/qr.hpp"

using namespace effstiff;

TEST_CASE("identity factor") {
    const ThinQr qr = thin_qr(DenseMatrix::identity(4), 1, 4);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const double want = i == j ? 1.0 : 0.0;
            CHECK(std::abs(qr.q(i, j)) == doctest::Approx(want));
            CHECK(std::abs(qr.r(i, j)) == doctest::Approx(want));
        }
    }
}

TEST_CASE("two proportional rows give equal blocks of norm 1/sqrt(2)") {
    const DenseMatrix f{{1.0}, {1.0}};
    const ThinQr qr = thin_qr(f, 1, 1);
    CHECK(qr.blocks() == 2);
    CHECK(qr.block(0).frobenius_norm() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(qr.block(1).frobenius_norm() == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("3-cycle factor yields leverage 2/3 per edge") {
    const Assembly a = laplacian_assembly(cycle_graph(3));
    const GlobalFactor g = build_global_factor(a);
    const ThinQr qr = thin_qr(g.f, g.block_rows, a.n() - a.d());
    for (std::size_t e = 0; e < 3; ++e) {
        const DenseMatrix u = qr.block(e);
        const DenseMatrix uut = u * u.transpose();
        CHECK(uut(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    }
}

TEST_CASE("QR reconstructs F with orthonormal columns") {
    const GeneratedModel m = elasticity2d_model({.bars = 2, .nx = 3, .ny = 1});
    const GlobalFactor g = build_global_factor(m.assembly);
    const std::size_t rank = m.assembly.n() - m.assembly.d();
    const ThinQr qr = thin_qr(g.f, g.block_rows, rank);
    const DenseMatrix qtq = gram(qr.q);
    CHECK((qtq - DenseMatrix::identity(rank)).frobenius_norm() <= 1e-12 * rank);
    const DenseMatrix rec = qr.q * qr.r;
    CHECK((rec - g.f).frobenius_norm() <= 1e-9 * g.f.frobenius_norm());
}

TEST_CASE("wrong rank is rejected") {
    const Assembly a = laplacian_assembly(cycle_graph(4));
    const GlobalFactor g = build_global_factor(a);
    CHECK_THROWS_AS(thin_qr(g.f, 1, 4), NotWellFormedError);
    CHECK_THROWS_AS(thin_qr(g.f, 1, 2), NotWellFormedError);
}
