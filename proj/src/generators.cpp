#include "effstiff/generators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "effstiff/errors.hpp"
#include "effstiff/rng.hpp"

namespace effstiff {

namespace {

void require_nodes(std::size_t n, std::size_t min, const char* what) {
    if (n < min) {
        throw DomainError(std::string(what) + ": needs at least " + std::to_string(min) +
                          " nodes");
    }
}

DenseMatrix circle_layout(std::size_t n) {
    DenseMatrix c(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        c(i, 0) = std::cos(t);
        c(i, 1) = std::sin(t);
    }
    return c;
}

// Sorts point ids and returns the permutation applied to them.
template <std::size_t N>
std::array<std::size_t, N> sorted_order(const std::array<std::size_t, N>& pts) {
    std::array<std::size_t, N> order{};
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a] < pts[b]; });
    return order;
}

}  // namespace

GraphSpec path_graph(std::size_t n, double w) {
    require_nodes(n, 2, "path_graph");
    GraphSpec g{n, {}, {}};
    for (std::size_t i = 0; i + 1 < n; ++i) {
        g.edges.push_back({i, i + 1, w});
    }
    g.coords = DenseMatrix(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        g.coords(i, 0) = static_cast<double>(i);
    }
    return g;
}

GraphSpec cycle_graph(std::size_t n, double w) {
    require_nodes(n, 3, "cycle_graph");
    GraphSpec g{n, {}, {}};
    for (std::size_t i = 0; i < n; ++i) {
        g.edges.push_back({i, (i + 1) % n, w});
    }
    return g;
}

GraphSpec star_graph(std::size_t n, double w) {
    require_nodes(n, 2, "star_graph");
    GraphSpec g{n, {}, {}};
    for (std::size_t i = 1; i < n; ++i) {
        g.edges.push_back({0, i, w});
    }
    return g;
}

GraphSpec complete_graph(std::size_t n, double w) {
    require_nodes(n, 2, "complete_graph");
    GraphSpec g{n, {}, {}};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            g.edges.push_back({i, j, w});
        }
    }
    return g;
}

GraphSpec grid_graph(std::size_t rows, std::size_t cols, double w) {
    if (rows == 0 || cols == 0 || rows * cols < 2) {
        throw DomainError("grid_graph: needs at least two nodes");
    }
    GraphSpec g{rows * cols, {}, DenseMatrix(rows * cols, 2)};
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const std::size_t v = i * cols + j;
            g.coords(v, 0) = static_cast<double>(j);
            g.coords(v, 1) = static_cast<double>(i);
            if (j + 1 < cols) {
                g.edges.push_back({v, v + 1, w});
            }
            if (i + 1 < rows) {
                g.edges.push_back({v, v + cols, w});
            }
        }
    }
    return g;
}

GraphSpec random_connected_graph(std::size_t n, std::size_t extra, double wmin, double wmax,
                                 std::uint64_t seed) {
    require_nodes(n, 2, "random_connected_graph");
    if (!(wmin > 0.0) || !(wmax >= wmin)) {
        throw DomainError("random_connected_graph: need 0 < wmin <= wmax");
    }
    Xoshiro256 rng(seed);
    auto weight = [&] { return wmin + (wmax - wmin) * rng.uniform(); };

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n - 1; i > 0; --i) {
        std::swap(perm[i], perm[rng.below(i + 1)]);
    }
    GraphSpec g{n, {}, {}};
    std::set<std::pair<std::size_t, std::size_t>> seen;
    auto add = [&](std::size_t u, std::size_t v) {
        const auto key = std::minmax(u, v);
        if (u == v || !seen.insert(key).second) {
            return false;
        }
        g.edges.push_back({key.first, key.second, weight()});
        return true;
    };
    for (std::size_t i = 1; i < n; ++i) {
        add(perm[i], perm[rng.below(i)]);
    }
    const std::size_t max_edges = n * (n - 1) / 2;
    extra = std::min(extra, max_edges - g.edges.size());
    for (std::size_t added = 0; added < extra;) {
        if (add(rng.below(n), rng.below(n))) {
            ++added;
        }
    }
    return g;
}

Assembly laplacian_assembly(const GraphSpec& g) {
    if (g.n == 0) {
        throw ModelError("laplacian_assembly: empty graph");
    }
    std::vector<ElementMatrix> els;
    els.reserve(g.edges.size());
    for (const auto& edge : g.edges) {
        if (edge.u == edge.v) {
            throw ModelError("laplacian_assembly: self-loop at node " + std::to_string(edge.u));
        }
        if (!(edge.w > 0.0) || !std::isfinite(edge.w)) {
            throw ModelError("laplacian_assembly: edge weights must be positive and finite");
        }
        ElementMatrix el;
        el.id = els.size();
        el.nodes = {std::min(edge.u, edge.v), std::max(edge.u, edge.v)};
        el.k_tilde = SymmetricDense{{edge.w, -edge.w}, {-edge.w, edge.w}};
        const double s = std::sqrt(edge.w);
        el.factor = DenseMatrix{{s, -s}};
        els.push_back(std::move(el));
    }
    return Assembly(g.n, std::move(els), DenseMatrix(g.n, 1, 1.0), 1);
}

GeneratedModel laplacian_model(const GraphSpec& g) {
    DenseMatrix coords = g.coords.rows() == g.n ? g.coords : circle_layout(g.n);
    return GeneratedModel{laplacian_assembly(g), std::move(coords)};
}

ElementPair cst_stiffness(std::span<const double, 6> xy, double youngs, double poisson,
                          double thickness) {
    const double x0 = xy[0], y0 = xy[1], x1 = xy[2], y1 = xy[3], x2 = xy[4], y2 = xy[5];
    const double area = 0.5 * ((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0));
    const double scale = std::max({std::abs(x1 - x0), std::abs(x2 - x0), std::abs(y1 - y0),
                                   std::abs(y2 - y0)});
    if (!(std::abs(area) > 1e-12 * scale * scale)) {
        throw ModelError("cst_stiffness: degenerate (zero-area) triangle");
    }
    if (!(youngs > 0.0) || !(poisson > -1.0 && poisson < 0.5) || !(thickness > 0.0)) {
        throw ModelError("cst_stiffness: material parameters out of range");
    }
    const std::array<double, 3> b{y1 - y2, y2 - y0, y0 - y1};
    const std::array<double, 3> c{x2 - x1, x0 - x2, x1 - x0};
    DenseMatrix strain(3, 6);
    for (std::size_t i = 0; i < 3; ++i) {
        strain(0, 2 * i) = b[i];
        strain(1, 2 * i + 1) = c[i];
        strain(2, 2 * i) = c[i];
        strain(2, 2 * i + 1) = b[i];
    }
    // D = L L^T for the plane-stress constitutive matrix.
    const double s = std::sqrt(youngs / (1.0 - poisson * poisson));
    const DenseMatrix lt{{s, s * poisson, 0.0},
                         {0.0, s * std::sqrt(1.0 - poisson * poisson), 0.0},
                         {0.0, 0.0, s * std::sqrt(0.5 * (1.0 - poisson))}};
    DenseMatrix f = lt * strain;
    const double w = std::sqrt(thickness * std::abs(area)) / (2.0 * std::abs(area));
    for (std::size_t i = 0; i < 3; ++i) {
        for (double& v : f.row(i)) {
            v *= w;
        }
    }
    return ElementPair{SymmetricDense::from_dense(gram(f)), std::move(f)};
}

GeneratedModel elasticity2d_model(const ElasticitySpec& spec) {
    if (spec.bars == 0 || spec.nx == 0 || spec.ny == 0) {
        throw DomainError("elasticity2d: bars, nx and ny must be positive");
    }
    if (!(spec.bar_length > 0.0) || !(spec.bar_height > 0.0) || !(spec.youngs > 0.0) ||
        !(spec.ratio > 0.0)) {
        throw DomainError("elasticity2d: geometry and material parameters must be positive");
    }
    const std::size_t cols = spec.nx + 1;
    const std::size_t rows = spec.bars * spec.ny + 1;
    const std::size_t points = cols * rows;
    const double dx = spec.bar_length / static_cast<double>(spec.nx);
    const double dy = spec.bar_height / static_cast<double>(spec.ny);
    const double ct = std::cos(spec.rotation);
    const double st = std::sin(spec.rotation);

    DenseMatrix coords(points, 2);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const double x = static_cast<double>(j) * dx;
            const double y = static_cast<double>(i) * dy;
            coords(i * cols + j, 0) = ct * x - st * y;
            coords(i * cols + j, 1) = st * x + ct * y;
        }
    }

    std::vector<ElementMatrix> els;
    els.reserve(2 * spec.nx * spec.bars * spec.ny);
    auto add_triangle = [&](std::array<std::size_t, 3> tri, double youngs) {
        std::sort(tri.begin(), tri.end());
        std::array<double, 6> xy{};
        ElementMatrix el;
        el.id = els.size();
        for (std::size_t k = 0; k < 3; ++k) {
            xy[2 * k] = coords(tri[k], 0);
            xy[2 * k + 1] = coords(tri[k], 1);
            el.nodes.push_back(2 * tri[k]);
            el.nodes.push_back(2 * tri[k] + 1);
        }
        ElementPair kp = cst_stiffness(xy, youngs, spec.poisson);
        el.k_tilde = std::move(kp.k);
        el.factor = std::move(kp.f);
        els.push_back(std::move(el));
    };
    for (std::size_t i = 0; i + 1 < rows; ++i) {
        const std::size_t bar = i / spec.ny;
        const double youngs = spec.youngs * (bar % 2 == 1 ? spec.ratio : 1.0);
        for (std::size_t j = 0; j + 1 < cols; ++j) {
            const std::size_t p00 = i * cols + j;
            const std::size_t p10 = p00 + 1;
            const std::size_t p01 = p00 + cols;
            const std::size_t p11 = p01 + 1;
            if ((i + j) % 2 == 0) {
                add_triangle({p00, p10, p11}, youngs);
                add_triangle({p00, p11, p01}, youngs);
            } else {
                add_triangle({p00, p10, p01}, youngs);
                add_triangle({p10, p11, p01}, youngs);
            }
        }
    }

    DenseMatrix null_basis(2 * points, 3);
    for (std::size_t p = 0; p < points; ++p) {
        null_basis(2 * p, 0) = 1.0;
        null_basis(2 * p, 2) = -coords(p, 1);
        null_basis(2 * p + 1, 1) = 1.0;
        null_basis(2 * p + 1, 2) = coords(p, 0);
    }
    return GeneratedModel{Assembly(2 * points, std::move(els), std::move(null_basis), 3),
                          std::move(coords)};
}

ElementPair tet_stiffness(std::span<const double, 12> xyz, double conductivity) {
    if (!(conductivity > 0.0)) {
        throw ModelError("tet_stiffness: conductivity must be positive");
    }
    // Rows of j are the edge vectors from vertex 0.
    double j[3][3];
    double scale = 0.0;
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
            j[r][c] = xyz[3 * (r + 1) + c] - xyz[c];
            scale = std::max(scale, std::abs(j[r][c]));
        }
    }
    const double det = j[0][0] * (j[1][1] * j[2][2] - j[1][2] * j[2][1]) -
                       j[0][1] * (j[1][0] * j[2][2] - j[1][2] * j[2][0]) +
                       j[0][2] * (j[1][0] * j[2][1] - j[1][1] * j[2][0]);
    if (!(std::abs(det) > 1e-12 * scale * scale * scale)) {
        throw ModelError("tet_stiffness: degenerate (zero-volume) tetrahedron");
    }
    // inv = J^{-1}; column i is the gradient of barycentric coordinate i + 1.
    double inv[3][3];
    inv[0][0] = (j[1][1] * j[2][2] - j[1][2] * j[2][1]) / det;
    inv[0][1] = (j[0][2] * j[2][1] - j[0][1] * j[2][2]) / det;
    inv[0][2] = (j[0][1] * j[1][2] - j[0][2] * j[1][1]) / det;
    inv[1][0] = (j[1][2] * j[2][0] - j[1][0] * j[2][2]) / det;
    inv[1][1] = (j[0][0] * j[2][2] - j[0][2] * j[2][0]) / det;
    inv[1][2] = (j[0][2] * j[1][0] - j[0][0] * j[1][2]) / det;
    inv[2][0] = (j[1][0] * j[2][1] - j[1][1] * j[2][0]) / det;
    inv[2][1] = (j[0][1] * j[2][0] - j[0][0] * j[2][1]) / det;
    inv[2][2] = (j[0][0] * j[1][1] - j[0][1] * j[1][0]) / det;

    const double vol = std::abs(det) / 6.0;
    const double w = std::sqrt(conductivity * vol);
    DenseMatrix f(3, 4);  // f = w G^T
    for (std::size_t c = 0; c < 3; ++c) {
        double sum = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            f(c, i + 1) = w * inv[c][i];
            sum += inv[c][i];
        }
        f(c, 0) = -w * sum;
    }
    return ElementPair{SymmetricDense::from_dense(gram(f)), std::move(f)};
}

GeneratedModel poisson3d_model(const PoissonSpec& spec) {
    if (spec.box < 4) {
        throw DomainError("poisson3d: box resolution must be at least 4");
    }
    if (!(spec.ball_r >= 0.0 && spec.ball_r < 0.5)) {
        throw DomainError("poisson3d: ball radius must lie in [0, 0.5)");
    }
    if (!(spec.ball_k > 0.0) || !(spec.box_k > 0.0)) {
        throw DomainError("poisson3d: conductivities must be positive");
    }
    const std::size_t b = spec.box;
    const std::size_t side = b + 1;
    const std::size_t n = side * side * side;
    const double h = 1.0 / static_cast<double>(b);
    auto node = [&](std::size_t i, std::size_t jj, std::size_t k) {
        return (k * side + jj) * side + i;
    };
    DenseMatrix coords(n, 3);
    for (std::size_t k = 0; k < side; ++k) {
        for (std::size_t jj = 0; jj < side; ++jj) {
            for (std::size_t i = 0; i < side; ++i) {
                const std::size_t v = node(i, jj, k);
                coords(v, 0) = static_cast<double>(i) * h;
                coords(v, 1) = static_cast<double>(jj) * h;
                coords(v, 2) = static_cast<double>(k) * h;
            }
        }
    }

    static constexpr std::array<std::array<std::size_t, 3>, 6> kAxisOrders{{
        {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
    }};
    std::vector<ElementMatrix> els;
    els.reserve(6 * b * b * b);
    for (std::size_t k = 0; k < b; ++k) {
        for (std::size_t jj = 0; jj < b; ++jj) {
            for (std::size_t i = 0; i < b; ++i) {
                for (const auto& axes : kAxisOrders) {
                    // Monotone lattice path from the cube's low corner to its high corner.
                    std::array<std::size_t, 3> at{i, jj, k};
                    std::array<std::size_t, 4> tet{node(i, jj, k), 0, 0, 0};
                    for (std::size_t s = 0; s < 3; ++s) {
                        ++at[axes[s]];
                        tet[s + 1] = node(at[0], at[1], at[2]);
                    }
                    const auto order = sorted_order(tet);
                    std::array<double, 12> xyz{};
                    std::array<double, 3> centroid{};
                    ElementMatrix el;
                    el.id = els.size();
                    for (std::size_t v = 0; v < 4; ++v) {
                        const std::size_t p = tet[order[v]];
                        el.nodes.push_back(p);
                        for (std::size_t c = 0; c < 3; ++c) {
                            xyz[3 * v + c] = coords(p, c);
                            centroid[c] += 0.25 * coords(p, c);
                        }
                    }
                    const double dist = std::hypot(centroid[0] - 0.5, centroid[1] - 0.5,
                                                   centroid[2] - 0.5);
                    const double kc = dist < spec.ball_r ? spec.ball_k : spec.box_k;
                    ElementPair kp = tet_stiffness(xyz, kc);
                    el.k_tilde = std::move(kp.k);
                    el.factor = std::move(kp.f);
                    els.push_back(std::move(el));
                }
            }
        }
    }
    return GeneratedModel{Assembly(n, std::move(els), DenseMatrix(n, 1, 1.0), 3),
                          std::move(coords)};
}

Assembly pin_dofs(const Assembly& a, std::span<const std::size_t> pinned) {
    std::vector<char> is_pinned(a.n(), 0);
    for (std::size_t p : pinned) {
        if (p >= a.n()) {
            throw DomainError("pin_dofs: index " + std::to_string(p) + " out of range");
        }
        is_pinned[p] = 1;
    }
    constexpr std::size_t kDropped = static_cast<std::size_t>(-1);
    std::vector<std::size_t> local(a.n(), kDropped);
    std::size_t kept = 0;
    for (std::size_t i = 0; i < a.n(); ++i) {
        if (!is_pinned[i]) {
            local[i] = kept++;
        }
    }
    if (kept == 0) {
        throw DomainError("pin_dofs: every index pinned");
    }
    std::vector<ElementMatrix> els;
    for (const auto& src : a.elements()) {
        std::vector<std::size_t> positions;
        for (std::size_t k = 0; k < src.size(); ++k) {
            if (local[src.nodes[k]] != kDropped) {
                positions.push_back(k);
            }
        }
        if (positions.empty()) {
            continue;
        }
        ElementMatrix el;
        el.id = els.size();
        for (std::size_t k : positions) {
            el.nodes.push_back(local[src.nodes[k]]);
        }
        el.k_tilde = src.k_tilde.restrict_to(positions);
        if (src.factor) {
            DenseMatrix f(src.factor->rows(), positions.size());
            for (std::size_t r = 0; r < f.rows(); ++r) {
                for (std::size_t c = 0; c < positions.size(); ++c) {
                    f(r, c) = (*src.factor)(r, positions[c]);
                }
            }
            el.factor = std::move(f);
        }
        els.push_back(std::move(el));
    }
    return Assembly(kept, std::move(els), DenseMatrix(kept, 0), a.r());
}

}  // namespace effstiff
