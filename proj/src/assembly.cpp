#include "effstiff/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "effstiff/cholesky.hpp"
#include "effstiff/errors.hpp"
#include "effstiff/rng.hpp"

namespace effstiff {

namespace {

constexpr double kFactorTolerance = 1e-9;
constexpr double kNullResidualTolerance = 1e-8;
constexpr std::size_t kMaxReportedFindings = 10;

std::string element_label(std::size_t e) { return "element " + std::to_string(e); }

void validate_element(const ElementMatrix& el, std::size_t index, std::size_t n, std::size_t r) {
    if (el.id != index) {
        throw ModelError(element_label(index) + ": id " + std::to_string(el.id) +
                         " does not match its position");
    }
    if (el.nodes.empty()) {
        throw ModelError(element_label(index) + ": empty node set");
    }
    for (std::size_t k = 0; k < el.nodes.size(); ++k) {
        if (el.nodes[k] >= n) {
            throw ModelError(element_label(index) + ": node " + std::to_string(el.nodes[k]) +
                             " out of range [0, " + std::to_string(n) + ")");
        }
        if (k > 0 && el.nodes[k] <= el.nodes[k - 1]) {
            throw ModelError(element_label(index) +
                             ": node indices must be strictly ascending (duplicate or unsorted)");
        }
    }
    if (el.k_tilde.order() != el.nodes.size()) {
        throw ModelError(element_label(index) + ": matrix order does not match node count");
    }
    const EigDecomposition eig = sym_eig(el.k_tilde, kRankTolerance, false);
    if (!eig.values.empty() && eig.values.back() < -eig.tolerance_used) {
        throw ModelError(element_label(index) + ": matrix is not positive semidefinite");
    }
    if (eig.rank != r) {
        throw ModelError(element_label(index) + ": rank " + std::to_string(eig.rank) +
                         " differs from declared r = " + std::to_string(r));
    }
    if (el.factor) {
        const DenseMatrix& f = *el.factor;
        if (f.cols() != el.nodes.size() || f.rows() != r) {
            throw ModelError(element_label(index) + ": factor shape must be r x n_e");
        }
        const DenseMatrix diff = gram(f) - el.k_tilde.to_dense();
        if (diff.frobenius_norm() > kFactorTolerance * el.k_tilde.frobenius_norm()) {
            throw ModelError(element_label(index) + ": factor does not reproduce the matrix");
        }
    }
}

DenseMatrix restrict_rows(const DenseMatrix& a, std::span<const std::size_t> rows) {
    DenseMatrix out(rows.size(), a.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto src = a.row(rows[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

std::size_t column_rank(const DenseMatrix& a) {
    if (a.cols() == 0) {
        return 0;
    }
    return sym_eig(SymmetricDense::from_dense(gram(a)), kRankTolerance, false).rank;
}

std::vector<std::size_t> complement(std::size_t n, std::span<const std::size_t> sorted) {
    std::vector<std::size_t> rest;
    rest.reserve(n - sorted.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (k < sorted.size() && sorted[k] == i) {
            ++k;
        } else {
            rest.push_back(i);
        }
    }
    return rest;
}

}  // namespace

Assembly::Assembly(std::size_t n, std::vector<ElementMatrix> elements, DenseMatrix null_basis,
                   std::size_t r, Prevalidated)
    : n_(n), r_(r), elements_(std::move(elements)), null_basis_(std::move(null_basis)) {
    stiffness_ = effstiff::assemble(n_, elements_);
}

Assembly::Assembly(std::size_t n, std::vector<ElementMatrix> elements, DenseMatrix null_basis,
                   std::size_t r)
    : n_(n), r_(r), elements_(std::move(elements)), null_basis_(std::move(null_basis)) {
    if (n_ == 0) {
        throw ModelError("assembly: dimension must be positive");
    }
    if (null_basis_.rows() != n_) {
        if (!(null_basis_.rows() == 0 && null_basis_.cols() == 0)) {
            throw ModelError("assembly: null basis must have n rows");
        }
        null_basis_ = DenseMatrix(n_, 0);
    }
    if (r_ == 0) {
        throw ModelError("assembly: element rank r must be positive");
    }
    for (std::size_t e = 0; e < elements_.size(); ++e) {
        validate_element(elements_[e], e, n_, r_);
    }
    if (column_rank(null_basis_) != null_basis_.cols()) {
        throw ModelError("assembly: null basis does not have full column rank");
    }
    stiffness_ = effstiff::assemble(n_, elements_);
}

const ElementMatrix& Assembly::element(std::size_t e) const {
    if (e >= elements_.size()) {
        throw DomainError("unknown element id " + std::to_string(e));
    }
    return elements_[e];
}

bool Assembly::factored() const {
    return std::all_of(elements_.begin(), elements_.end(),
                       [](const ElementMatrix& el) { return el.factor.has_value(); });
}

SparseSymmetric Assembly::element_matrix(std::size_t e) const {
    const ElementMatrix& el = element(e);
    return effstiff::assemble(n_, std::span<const ElementMatrix>(&el, 1));
}

SparseSymmetric assemble(std::size_t n, std::span<const ElementMatrix> elements) {
    std::vector<Triplet> t;
    std::size_t total = 0;
    for (const auto& el : elements) {
        total += el.size() * (el.size() + 1) / 2;
    }
    t.reserve(total);
    for (const auto& el : elements) {
        for (std::size_t i = 0; i < el.size(); ++i) {
            if (el.nodes[i] >= n) {
                throw ModelError(element_label(el.id) + ": node " + std::to_string(el.nodes[i]) +
                                 " out of range");
            }
            for (std::size_t j = 0; j <= i; ++j) {
                t.push_back({el.nodes[i], el.nodes[j], el.k_tilde(i, j)});
            }
        }
    }
    return SparseSymmetric::from_triplets(n, t);
}

SparseSymmetric assemble_weighted(const Assembly& a, std::span<const double> coeffs) {
    if (coeffs.size() != a.m()) {
        throw DomainError("assemble_weighted: one coefficient per element required");
    }
    std::vector<Triplet> t;
    for (std::size_t e = 0; e < a.m(); ++e) {
        const double c = coeffs[e];
        if (c == 0.0) {
            continue;
        }
        const ElementMatrix& el = a.element(e);
        for (std::size_t i = 0; i < el.size(); ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                t.push_back({el.nodes[i], el.nodes[j], c * el.k_tilde(i, j)});
            }
        }
    }
    return SparseSymmetric::from_triplets(a.n(), t);
}

ElementMatrix factor_element(const ElementMatrix& e, double rel_tol,
                             std::optional<std::size_t> expected_rank) {
    const EigDecomposition eig = sym_eig(e.k_tilde, rel_tol);
    if (expected_rank && eig.rank != *expected_rank) {
        throw ModelError(element_label(e.id) + ": rank " + std::to_string(eig.rank) +
                         " differs from declared r = " + std::to_string(*expected_rank));
    }
    if (eig.rank == 0) {
        throw ModelError(element_label(e.id) + ": zero matrix has no factor");
    }
    const std::size_t ne = e.size();
    DenseMatrix f(eig.rank, ne);
    for (std::size_t k = 0; k < eig.rank; ++k) {
        const double s = std::sqrt(std::max(eig.values[k], 0.0));
        for (std::size_t j = 0; j < ne; ++j) {
            f(k, j) = s * eig.vectors(j, k);
        }
    }
    ElementMatrix out = e;
    out.factor = std::move(f);
    return out;
}

Assembly factor_all(const Assembly& a) {
    std::vector<ElementMatrix> els;
    els.reserve(a.m());
    for (const auto& el : a.elements()) {
        els.push_back(el.factor ? el : factor_element(el, kRankTolerance, a.r()));
    }
    return Assembly(a.n(), std::move(els), a.null_basis(), a.r());
}

GlobalFactor build_global_factor(const Assembly& a) {
    GlobalFactor g;
    g.block_rows = a.r();
    g.f = DenseMatrix(a.m() * a.r(), a.n());
    for (std::size_t e = 0; e < a.m(); ++e) {
        const ElementMatrix& el = a.element(e);
        if (!el.factor) {
            throw ModelError(element_label(e) + ": missing factor");
        }
        for (std::size_t i = 0; i < a.r(); ++i) {
            for (std::size_t j = 0; j < el.size(); ++j) {
                g.f(e * a.r() + i, el.nodes[j]) = (*el.factor)(i, j);
            }
        }
    }
    return g;
}

WellFormedReport check_well_formed(const Assembly& a, std::size_t trials, std::uint64_t seed) {
    WellFormedReport rep;
    const std::size_t n = a.n();
    const std::size_t d = a.d();
    const SparseSymmetric& k = a.stiffness();
    const DenseMatrix& nb = a.null_basis();

    // Rigidity: K N = 0 and rank(K) = n - d.
    rep.nullspace_ok = true;
    double leak = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
        Vector col(n);
        for (std::size_t i = 0; i < n; ++i) {
            col[i] = nb(i, c);
        }
        const Vector kc = k.multiply(col);
        leak += dot(kc, kc);
    }
    leak = std::sqrt(leak);
    const double scale = k.frobenius_norm() * nb.frobenius_norm();
    if (d > 0 && leak > kNullResidualTolerance * scale) {
        rep.nullspace_ok = false;
        rep.diagnostics.push_back("null basis is not annihilated by K (relative residual " +
                                  std::to_string(leak / scale) + ")");
    }
    try {
        const CholeskyFactor f = factor(k, d);
        if (f.detected_rank() != n - d) {
            rep.nullspace_ok = false;
            rep.diagnostics.push_back("rank deficit: rank(K) = " +
                                      std::to_string(f.detected_rank()) + ", expected n - d = " +
                                      std::to_string(n - d));
        }
    } catch (const NumericalError& e) {
        rep.nullspace_ok = false;
        rep.diagnostics.push_back(std::string("K is not positive semidefinite: ") + e.what());
    }

    // N-compatibility: the restriction of range(N) to each element's nodes is
    // exactly its essential null space, with unique extension.
    rep.compatibility_ok = true;
    std::size_t incompatible = 0;
    for (std::size_t e = 0; e < a.m(); ++e) {
        const ElementMatrix& el = a.element(e);
        const DenseMatrix ne = restrict_rows(nb, el.nodes);
        std::string why;
        if (el.size() - a.r() != d) {
            why = "essential null space has dimension " + std::to_string(el.size() - a.r()) +
                  " but d = " + std::to_string(d);
        } else if (column_rank(ne) != d) {
            why = "restricted null basis is rank deficient";
        } else if (d > 0) {
            const DenseMatrix kn = el.k_tilde.to_dense() * ne;
            if (kn.frobenius_norm() >
                kNullResidualTolerance * el.k_tilde.frobenius_norm() * ne.frobenius_norm()) {
                why = "restricted null basis is not in the element null space";
            }
        }
        if (!why.empty()) {
            rep.compatibility_ok = false;
            if (++incompatible <= kMaxReportedFindings) {
                rep.diagnostics.push_back(element_label(e) + " is not N-compatible: " + why);
            }
        }
    }
    if (incompatible > kMaxReportedFindings) {
        rep.diagnostics.push_back(std::to_string(incompatible) + " incompatible elements in total");
    }

    // Minimal rank deficiency, as consumed downstream: eliminating everything
    // outside an element's nodes must not break down.
    rep.minimal_rank_ok = true;
    std::vector<std::size_t> sample;
    if (trials >= a.m()) {
        for (std::size_t e = 0; e < a.m(); ++e) {
            sample.push_back(e);
        }
    } else {
        Xoshiro256 rng(seed);
        for (std::size_t t = 0; t < trials; ++t) {
            sample.push_back(rng.below(a.m()));
        }
    }
    std::size_t broken = 0;
    for (std::size_t e : sample) {
        const ElementMatrix& el = a.element(e);
        const std::vector<std::size_t> rest = complement(n, el.nodes);
        if (rest.empty()) {
            continue;
        }
        try {
            (void)factor(k.principal_submatrix(rest), 0, true);
        } catch (const Error& err) {
            rep.minimal_rank_ok = false;
            if (++broken <= kMaxReportedFindings) {
                rep.diagnostics.push_back("columns of F outside " + element_label(e) +
                                          " are dependent: " + err.what());
            }
        }
    }
    return rep;
}

RigidityGraph rigidity_graph(const Assembly& a, std::size_t min_shared) {
    if (min_shared == 0) {
        throw DomainError("rigidity_graph: min_shared must be at least 1");
    }
    std::vector<std::vector<std::size_t>> incident(a.n());
    for (std::size_t e = 0; e < a.m(); ++e) {
        for (std::size_t v : a.element(e).nodes) {
            incident[v].push_back(e);
        }
    }
    RigidityGraph g;
    g.min_shared = min_shared;
    g.adjacency.resize(a.m());
    std::vector<std::size_t> count(a.m(), 0);
    std::vector<std::size_t> touched;
    for (std::size_t e = 0; e < a.m(); ++e) {
        touched.clear();
        for (std::size_t v : a.element(e).nodes) {
            for (std::size_t f : incident[v]) {
                if (f != e && count[f]++ == 0) {
                    touched.push_back(f);
                }
            }
        }
        for (std::size_t f : touched) {
            if (count[f] >= min_shared) {
                g.adjacency[e].push_back(f);
            }
            count[f] = 0;
        }
        std::sort(g.adjacency[e].begin(), g.adjacency[e].end());
    }
    return g;
}

std::size_t default_min_shared(const Assembly& a) { return a.d() <= 1 ? 1 : a.d() + 1; }

std::vector<std::size_t> ball(const RigidityGraph& g, std::size_t e, std::size_t radius) {
    if (e >= g.m()) {
        throw DomainError("ball: unknown element id " + std::to_string(e));
    }
    constexpr std::size_t kUnseen = static_cast<std::size_t>(-1);
    std::vector<std::size_t> dist(g.m(), kUnseen);
    std::vector<std::size_t> out{e};
    std::deque<std::size_t> queue{e};
    dist[e] = 0;
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        if (dist[u] == radius) {
            continue;
        }
        for (std::size_t w : g.adjacency[u]) {
            if (dist[w] == kUnseen) {
                dist[w] = dist[u] + 1;
                out.push_back(w);
                queue.push_back(w);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Submodel submodel(const Assembly& a, std::span<const std::size_t> subset) {
    if (subset.empty()) {
        throw DomainError("submodel: subset must be nonempty");
    }
    std::vector<std::size_t> elems(subset.begin(), subset.end());
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());

    std::vector<std::size_t> nodes;
    for (std::size_t e : elems) {
        const auto& nn = a.element(e).nodes;
        nodes.insert(nodes.end(), nn.begin(), nn.end());
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    std::vector<std::size_t> local(a.n(), 0);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        local[nodes[k]] = k;
    }
    std::vector<ElementMatrix> els;
    els.reserve(elems.size());
    for (std::size_t k = 0; k < elems.size(); ++k) {
        ElementMatrix el = a.element(elems[k]);
        el.id = k;
        for (auto& v : el.nodes) {
            v = local[v];
        }
        els.push_back(std::move(el));
    }
    // Elements were validated by the parent; only indices changed.
    Assembly sub(nodes.size(), std::move(els), restrict_rows(a.null_basis(), nodes), a.r(),
                 Assembly::Prevalidated{});
    return Submodel{std::move(sub), std::move(nodes), std::move(elems)};
}

}  // namespace effstiff
