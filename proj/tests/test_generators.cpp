#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "effstiff/cholesky.hpp"
#include "effstiff/errors.hpp"
#include "effstiff/generators.hpp"
#include "effstiff/leverage.hpp"

using namespace effstiff;

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

}  // namespace

TEST_CASE("graph families have the expected sizes") {
    CHECK(laplacian_assembly(path_graph(10)).m() == 9);
    CHECK(laplacian_assembly(cycle_graph(10)).m() == 10);
    CHECK(laplacian_assembly(star_graph(10)).m() == 9);
    CHECK(laplacian_assembly(complete_graph(6)).m() == 15);
    CHECK(laplacian_assembly(grid_graph(4, 5)).m() == 31);
    const GraphSpec g = random_connected_graph(40, 30, 0.1, 10.0, 77);
    CHECK(g.edges.size() == 69);
    for (const auto& e : g.edges) {
        CHECK(e.u < e.v);
        CHECK(e.w >= 0.1);
        CHECK(e.w <= 10.0);
    }
    const Assembly a = laplacian_assembly(g);
    CHECK(a.r() == 1);
    CHECK(a.d() == 1);
    CHECK(check_well_formed(a).ok());
}

TEST_CASE("laplacian generator rejects bad graphs") {
    GraphSpec g{3, {{0, 0, 1.0}}, {}};
    CHECK_THROWS_AS(laplacian_assembly(g), ModelError);
    g.edges = {{0, 1, -1.0}};
    CHECK_THROWS_AS(laplacian_assembly(g), ModelError);
}

TEST_CASE("single CST element has a rank-3 rigid-body null space") {
    const std::array<double, 6> xy{0.0, 0.0, 1.0, 0.1, 0.2, 0.9};
    const ElementPair kp = cst_stiffness(xy, 1.0, 0.3);
    const EigDecomposition eig = sym_eig(kp.k);
    CHECK(eig.rank == 3);
    DenseMatrix nb(6, 3);
    for (std::size_t p = 0; p < 3; ++p) {
        nb(2 * p, 0) = 1.0;
        nb(2 * p, 2) = -xy[2 * p + 1];
        nb(2 * p + 1, 1) = 1.0;
        nb(2 * p + 1, 2) = xy[2 * p];
    }
    const DenseMatrix kn = kp.k.to_dense() * nb;
    CHECK(kn.frobenius_norm() <= 1e-12 * kp.k.frobenius_norm());

    const std::array<double, 6> flat{0.0, 0.0, 1.0, 1.0, 2.0, 2.0};
    CHECK_THROWS_AS(cst_stiffness(flat, 1.0, 0.3), ModelError);
}

TEST_CASE("single tetrahedron has zero row sums") {
    const double s = 1.0 / std::sqrt(2.0);
    const std::array<double, 12> xyz{1, 0, -s, -1, 0, -s, 0, 1, s, 0, -1, s};
    const ElementPair kp = tet_stiffness(xyz, 1.0);
    for (std::size_t i = 0; i < 4; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < 4; ++j) {
            row += kp.k(i, j);
        }
        CHECK(std::abs(row) <= 1e-14);
    }
    CHECK(sym_eig(kp.k).rank == 3);
    const std::array<double, 12> flat{0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 1, 0};
    CHECK_THROWS_AS(tet_stiffness(flat, 1.0), ModelError);
}

TEST_CASE("elasticity model constants") {
    const GeneratedModel m = elasticity2d_model({.bars = 2, .nx = 8, .ny = 2});
    const Assembly& a = m.assembly;
    CHECK(a.r() == 3);
    CHECK(a.d() == 3);
    CHECK(a.n() == 2 * 9 * 5);
    CHECK(a.m() == 2 * 8 * 4);
    for (const auto& el : a.elements()) {
        CHECK(el.size() == 6);
    }
    CHECK(check_well_formed(a).ok());
    CHECK_THROWS_AS(elasticity2d_model({.bars = 0}), DomainError);
}

TEST_CASE("stiff side of the material interface carries higher leverage than the interior") {
    const ElasticitySpec spec{.bars = 2, .nx = 10, .ny = 3, .ratio = 1000.0};
    const GeneratedModel m = elasticity2d_model(spec);
    const Assembly& a = m.assembly;
    const LeverageTable t = leverage_exact_qr(a);
    // Row ny is the first row of the stiff bar, touching the interface. Rows
    // 1 and ny + 1 touch neither the interface nor the outer boundary.
    const std::size_t cells_per_row = 2 * spec.nx;
    std::vector<double> interface;
    std::vector<double> interior;
    for (std::size_t e = 0; e < a.m(); ++e) {
        const std::size_t row = e / cells_per_row;
        if (row == spec.ny) {
            interface.push_back(t.records[e].tau);
        } else if (row == 1 || row == spec.ny + 1) {
            interior.push_back(t.records[e].tau);
        }
    }
    CHECK(median(interface) > median(interior));
}

TEST_CASE("homogeneous interior leverages are within a factor 3") {
    const ElasticitySpec spec{.bars = 1, .nx = 12, .ny = 6, .ratio = 1.0, .rotation = 0.0};
    const GeneratedModel m = elasticity2d_model(spec);
    const LeverageTable t = leverage_exact_qr(m.assembly);
    double lo = 1.0;
    double hi = 0.0;
    const std::size_t cells_per_row = 2 * spec.nx;
    for (std::size_t e = 0; e < m.assembly.m(); ++e) {
        const std::size_t row = e / cells_per_row;
        const std::size_t col = (e % cells_per_row) / 2;
        if (row >= 2 && row + 2 < spec.ny && col >= 2 && col + 2 < spec.nx) {
            lo = std::min(lo, t.records[e].tau);
            hi = std::max(hi, t.records[e].tau);
        }
    }
    REQUIRE(hi > 0.0);
    CHECK(hi <= 3.0 * lo);
}

TEST_CASE("poisson model constants and leverage bracket") {
    const GeneratedModel m = poisson3d_model({.box = 4, .ball_r = 0.0});
    const Assembly& a = m.assembly;
    CHECK(a.n() == 125);
    CHECK(a.m() == 384);
    CHECK(a.r() == 3);
    CHECK(a.d() == 1);
    const LeverageTable t = leverage_exact_qr(a);
    CHECK(t.total <= a.n() - 1.0 + 1e-8);
    CHECK(t.total >= (a.n() - 1.0) / 3.0 - 1e-8);
    CHECK_THROWS_AS(poisson3d_model({.box = 3}), DomainError);
    CHECK_THROWS_AS(poisson3d_model({.box = 4, .ball_r = 0.6}), DomainError);
}

TEST_CASE("ball surface leverages exceed deep interior ones") {
    const PoissonSpec spec{.box = 8, .ball_r = 0.3, .ball_k = 1000.0};
    const GeneratedModel m = poisson3d_model(spec);
    const Assembly& a = m.assembly;
    const LeverageTable t = leverage_exact_qr(a);
    std::vector<double> surface;
    std::vector<double> deep;
    for (std::size_t e = 0; e < a.m(); ++e) {
        double c[3] = {0, 0, 0};
        for (std::size_t v : a.element(e).nodes) {
            for (std::size_t k = 0; k < 3; ++k) {
                c[k] += 0.25 * m.coords(v, k);
            }
        }
        const double r = std::hypot(c[0] - 0.5, c[1] - 0.5, c[2] - 0.5);
        // Stiff elements in the outer shell of the ball versus its core.
        if (r < spec.ball_r && r > spec.ball_r - 0.06) {
            surface.push_back(t.records[e].tau);
        } else if (r < spec.ball_r - 0.12) {
            deep.push_back(t.records[e].tau);
        }
    }
    REQUIRE(!surface.empty());
    REQUIRE(!deep.empty());
    CHECK(median(surface) > median(deep));
}

TEST_CASE("pinned variants are nonsingular") {
    const Assembly lap = laplacian_assembly(grid_graph(5, 5));
    const std::vector<std::size_t> one{0};
    const Assembly pl = pin_dofs(lap, one);
    CHECK(pl.d() == 0);
    CHECK(factor(pl.stiffness(), 0).detected_rank() == pl.n());

    const GeneratedModel el = elasticity2d_model({.bars = 2, .nx = 4, .ny = 1});
    const std::vector<std::size_t> three{0, 1, 3};
    const Assembly pe = pin_dofs(el.assembly, three);
    CHECK(factor(pe.stiffness(), 0).detected_rank() == pe.n());

    const GeneratedModel po = poisson3d_model({.box = 4});
    const Assembly pp = pin_dofs(po.assembly, one);
    CHECK(factor(pp.stiffness(), 0).detected_rank() == pp.n());
}
