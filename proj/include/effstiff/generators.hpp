#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "effstiff/assembly.hpp"
#include "effstiff/dense.hpp"

namespace effstiff {

struct WeightedEdge {
    std::size_t u = 0;
    std::size_t v = 0;
    double w = 1.0;
};

struct GraphSpec {
    std::size_t n = 0;
    std::vector<WeightedEdge> edges;
    DenseMatrix coords;  // optional n x 2 layout; empty means a circle
};

GraphSpec path_graph(std::size_t n, double w = 1.0);
GraphSpec cycle_graph(std::size_t n, double w = 1.0);
GraphSpec star_graph(std::size_t n, double w = 1.0);  // node 0 is the hub
GraphSpec complete_graph(std::size_t n, double w = 1.0);
// rows x cols lattice; node (i, j) is i * cols + j.
GraphSpec grid_graph(std::size_t rows, std::size_t cols, double w = 1.0);
// Random spanning tree plus `extra` distinct random chords, weights uniform
// in [wmin, wmax].
GraphSpec random_connected_graph(std::size_t n, std::size_t extra, double wmin, double wmax,
                                 std::uint64_t seed);

// Model plus node coordinates (one row per geometric point) for exports.
struct GeneratedModel {
    Assembly assembly;
    DenseMatrix coords;
};

// One element per edge with essential matrix w [[1, -1], [-1, 1]] and factor
// sqrt(w) (e_u - e_v)^T. r = 1, d = 1, N = all ones.
Assembly laplacian_assembly(const GraphSpec& g);
GeneratedModel laplacian_model(const GraphSpec& g);

// Horizontal bars stacked vertically, each nx x ny cells, every cell split
// into two constant-strain triangles with alternating diagonals. Bar b uses
// Young's modulus youngs * ratio^(b mod 2). Plane stress, unit thickness.
// The mesh is rotated by `rotation` radians.
struct ElasticitySpec {
    std::size_t bars = 2;
    std::size_t nx = 8;
    std::size_t ny = 2;
    double bar_length = 4.0;
    double bar_height = 1.0;
    double youngs = 1.0;
    double ratio = 1000.0;
    double poisson = 0.3;
    double rotation = 0.05;
};
GeneratedModel elasticity2d_model(const ElasticitySpec& spec);

// Essential matrix and factor of a plane-stress constant-strain triangle with
// vertices given in any order. Rows/cols follow (x0, y0, x1, y1, x2, y2).
struct ElementPair {
    SymmetricDense k;
    DenseMatrix f;
};
ElementPair cst_stiffness(std::span<const double, 6> xy, double youngs, double poisson,
                          double thickness = 1.0);

// Unit cube cut into box^3 cubes, six tetrahedra each (all sharing the cube's
// main diagonal). Tetrahedra whose centroid lies within ball_r of the centre
// get conductivity ball_k, the rest box_k.
struct PoissonSpec {
    std::size_t box = 8;
    double ball_r = 0.3;
    double ball_k = 1000.0;
    double box_k = 1.0;
};
GeneratedModel poisson3d_model(const PoissonSpec& spec);

// k * vol * G G^T for a linear tetrahedron, G the barycentric gradients.
// xyz holds the four vertices as (x, y, z) triples.
ElementPair tet_stiffness(std::span<const double, 12> xyz, double conductivity);

// Dirichlet variant: removes the given global indices, leaving a model with
// d = 0. Elements losing all indices are dropped; an element whose remaining
// block falls below rank r raises ModelError.
Assembly pin_dofs(const Assembly& a, std::span<const std::size_t> pinned);

}  // namespace effstiff
