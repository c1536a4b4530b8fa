#include <doctest.h>

#include <algorithm>

#include "effstiff/errors.hpp"
#include "effstiff/generators.hpp"
#include "effstiff/leverage.hpp"
#include "oracles.hpp"

using namespace effstiff;

namespace {

LeverageTable table(const Assembly& a, LeverageMethod m, std::optional<std::size_t> radius = {},
                    std::size_t threads = 1) {
    LeverageOptions o;
    o.method = m;
    o.radius = radius;
    o.threads = threads;
    return leverage_table(a, o);
}

}  // namespace

TEST_CASE("effective stiffness examples") {
    const Assembly cyc = laplacian_assembly(cycle_graph(3));
    const SymmetricDense s = effective_stiffness(cyc, 1);
    CHECK(s(0, 0) == doctest::Approx(1.5));
    CHECK(s(0, 1) == doctest::Approx(-1.5));

    ElementMatrix el;
    el.nodes = {0, 1, 2};
    el.k_tilde = SymmetricDense{{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}};
    const Assembly one(3, {el}, DenseMatrix(3, 1, 1.0), 2);
    CHECK((effective_stiffness(one, 0) - el.k_tilde).frobenius_norm() == 0.0);
    CHECK(leverage_exact_schur(one, 0) == doctest::Approx(1.0));
    CHECK(leverage_exact_qr(one).records[0].tau == doctest::Approx(1.0));
}

TEST_CASE("effective stiffness dominates the element and shares its null space") {
    const GeneratedModel m = elasticity2d_model({.bars = 2, .nx = 4, .ny = 2});
    const Assembly& a = m.assembly;
    for (std::size_t e = 0; e < a.m(); e += 5) {
        const SymmetricDense s = effective_stiffness(a, e);
        const SymmetricDense& k = a.element(e).k_tilde;
        const EigDecomposition diff = sym_eig(s - k);
        CHECK(diff.values.back() >= -1e-9 * diff.values.front());
        CHECK(sym_eig(s).rank == sym_eig(k).rank);
    }
}

TEST_CASE("3-cycle and bridges") {
    const Assembly cyc = laplacian_assembly(cycle_graph(3));
    for (std::size_t e = 0; e < 3; ++e) {
        CHECK(leverage_exact_schur(cyc, e) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
        CHECK(leverage_via_removal(cyc, e) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    }
    const LeverageTable t = table(cyc, LeverageMethod::ExactQr);
    CHECK(t.total == doctest::Approx(2.0).epsilon(1e-13));

    const Assembly p3 = laplacian_assembly(path_graph(3));
    const LeverageTable tp = table(p3, LeverageMethod::ExactQr);
    CHECK(tp.records[0].tau == doctest::Approx(1.0));
    CHECK(tp.records[1].tau == doctest::Approx(1.0));
    CHECK(leverage_via_removal(p3, 0) == 1.0);

    const Assembly star = laplacian_assembly(star_graph(7));
    for (const auto& r : table(star, LeverageMethod::ExactSchur).records) {
        CHECK(r.tau == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("path leverages are all one") {
    const Assembly a = laplacian_assembly(path_graph(10));
    for (auto m : {LeverageMethod::ExactSchur, LeverageMethod::ExactQr, LeverageMethod::Removal}) {
        const LeverageTable t = table(a, m);
        CHECK(t.size() == 9);
        CHECK(t.total == doctest::Approx(9.0).epsilon(1e-12));
    }
}

TEST_CASE("laplacian leverages match weighted effective resistances") {
    for (std::uint64_t seed = 100; seed < 106; ++seed) {
        const GraphSpec g = random_connected_graph(30, 25, 0.1, 10.0, seed);
        const Assembly a = laplacian_assembly(g);
        const std::vector<double> ref = oracle::weighted_resistances(g);
        const LeverageTable t = table(a, LeverageMethod::ExactSchur);
        const LeverageTable q = table(a, LeverageMethod::ExactQr);
        for (std::size_t e = 0; e < a.m(); ++e) {
            CHECK(std::abs(t.records[e].tau - ref[e]) <= 1e-8);
            CHECK(std::abs(q.records[e].tau - ref[e]) <= 1e-8);
        }
        CHECK(std::abs(t.total - (a.n() - 1.0)) <= 1e-8);
    }
}

TEST_CASE("routes agree on elasticity and Poisson models") {
    const std::vector<Assembly> models{
        elasticity2d_model({.bars = 2, .nx = 4, .ny = 2, .ratio = 100.0}).assembly,
        poisson3d_model({.box = 4, .ball_r = 0.3, .ball_k = 50.0}).assembly,
    };
    for (const Assembly& a : models) {
        const LeverageTable s = table(a, LeverageMethod::ExactSchur, {}, 4);
        const LeverageTable q = table(a, LeverageMethod::ExactQr);
        for (std::size_t e = 0; e < a.m(); ++e) {
            CHECK(std::abs(s.records[e].tau - q.records[e].tau) <= 1e-8);
        }
        for (std::size_t e = 0; e < a.m(); e += 17) {
            CHECK(std::abs(s.records[e].tau - leverage_via_removal(a, e)) <= 1e-7);
        }
        const double lo = static_cast<double>(a.n() - a.d()) / static_cast<double>(a.r());
        CHECK(s.total >= lo - 1e-8);
        CHECK(s.total <= static_cast<double>(a.n() - a.d()) + 1e-8);
    }
}

TEST_CASE("duplicated element: removal agrees with the Schur route") {
    GraphSpec g = cycle_graph(3);
    g.edges.push_back(g.edges[0]);
    const Assembly a = laplacian_assembly(g);
    for (std::size_t e = 0; e < a.m(); ++e) {
        CHECK(leverage_via_removal(a, e) ==
              doctest::Approx(leverage_exact_schur(a, e)).epsilon(1e-8));
    }
}

TEST_CASE("local leverages on cycles") {
    const Assembly c3 = laplacian_assembly(cycle_graph(3));
    const RigidityGraph g3 = rigidity_graph(c3, 1);
    CHECK(leverage_local(c3, g3, 0, 1) == doctest::Approx(2.0 / 3.0));

    const Assembly c6 = laplacian_assembly(cycle_graph(6));
    const RigidityGraph g6 = rigidity_graph(c6, 1);
    for (std::size_t e = 0; e < 6; ++e) {
        CHECK(leverage_local(c6, g6, e, 1) == 1.0);
        CHECK(leverage_exact_schur(c6, e) == doctest::Approx(5.0 / 6.0));
        CHECK(leverage_local(c6, g6, e, 3) == doctest::Approx(5.0 / 6.0));
    }
    const LeverageTable t = table(c6, LeverageMethod::Local, 1);
    CHECK(t.total == doctest::Approx(6.0));
    CHECK(t.records[0].radius == 1u);
    CHECK_THROWS_AS(leverage_local(c6, g6, 0, 0), DomainError);
}

TEST_CASE("local leverages are upper bounds, non-increasing in radius") {
    const GeneratedModel m = elasticity2d_model({.bars = 2, .nx = 6, .ny = 2, .ratio = 1000.0});
    const Assembly& a = m.assembly;
    const LeverageTable exact = table(a, LeverageMethod::ExactQr);
    const RigidityGraph g = rigidity_graph(a, default_min_shared(a));
    for (std::size_t e = 0; e < a.m(); e += 3) {
        double prev = 1.0 + 1e-12;
        for (std::size_t rho = 1; rho <= 4; ++rho) {
            const double t = leverage_local(a, g, e, rho);
            CHECK(t >= exact.records[e].tau - 1e-10);
            CHECK(t <= prev + 1e-10);
            prev = t;
        }
    }
}

TEST_CASE("table is independent of thread count and honours subsets") {
    const Assembly a = laplacian_assembly(grid_graph(8, 8));
    const LeverageTable one = table(a, LeverageMethod::Local, 2, 1);
    const LeverageTable many = table(a, LeverageMethod::Local, 2, 6);
    REQUIRE(one.size() == many.size());
    for (std::size_t k = 0; k < one.size(); ++k) {
        CHECK(one.records[k].tau == many.records[k].tau);
    }
    CHECK(one.total == many.total);

    LeverageOptions o;
    o.method = LeverageMethod::ExactSchur;
    o.subset = std::vector<std::size_t>{5, 2};
    const LeverageTable sub = leverage_table(a, o);
    CHECK(sub.size() == 2);
    CHECK(sub.records[0].element_id == 5);
    o.subset = std::vector<std::size_t>{};
    CHECK_THROWS_AS(leverage_table(a, o), DomainError);
    o.subset = std::nullopt;
    o.method = LeverageMethod::Local;
    CHECK_THROWS_AS(leverage_table(a, o), DomainError);
}

TEST_CASE("global scaling leaves leverages unchanged") {
    const GeneratedModel m = poisson3d_model({.box = 4});
    const Assembly& a = m.assembly;
    std::vector<ElementMatrix> scaled = a.elements();
    for (auto& el : scaled) {
        el.k_tilde *= 7.5;
        el.factor.reset();
    }
    const Assembly b(a.n(), scaled, a.null_basis(), a.r());
    const LeverageTable ta = table(a, LeverageMethod::ExactQr);
    const LeverageTable tb = table(b, LeverageMethod::ExactQr);
    for (std::size_t e = 0; e < a.m(); ++e) {
        CHECK(std::abs(ta.records[e].tau - tb.records[e].tau) <= 1e-10);
    }
}

TEST_CASE("method names round trip") {
    for (auto m : {LeverageMethod::ExactSchur, LeverageMethod::ExactQr, LeverageMethod::Local,
                   LeverageMethod::Removal}) {
        CHECK(parse_leverage_method(to_string(m)) == m);
    }
    CHECK_THROWS_AS(parse_leverage_method("bogus"), DomainError);
    CHECK(clamp_leverage(0.0) == kLeverageFloor);
    CHECK(clamp_leverage(1.0 + 1e-13) == 1.0);
}
