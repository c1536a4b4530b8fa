#include "effstiff/cholesky.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <string>
#include <utility>

#include "effstiff/errors.hpp"

namespace effstiff {

namespace {

struct Elimination {
    std::vector<std::size_t> order;
    // Column structure of L in original indices: neighbors of order[k] at the
    // time it was eliminated.
    std::vector<std::vector<std::size_t>> structure;
};

Elimination eliminate_min_degree(const SparseSymmetric& a) {
    const std::size_t n = a.order();
    auto adj = a.adjacency();
    std::vector<char> gone(n, 0);

    using Entry = std::pair<std::size_t, std::size_t>;  // (degree, node)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    for (std::size_t v = 0; v < n; ++v) {
        heap.emplace(adj[v].size(), v);
    }

    Elimination out;
    out.order.reserve(n);
    out.structure.reserve(n);
    std::vector<std::size_t> merged;
    while (!heap.empty()) {
        const auto [deg, v] = heap.top();
        heap.pop();
        if (gone[v] || deg != adj[v].size()) {
            continue;
        }
        gone[v] = 1;
        std::vector<std::size_t> nbrs = std::move(adj[v]);
        adj[v].clear();
        for (std::size_t u : nbrs) {
            // adj[u] := (adj[u] U nbrs) \ {u, v}
            merged.clear();
            std::set_union(adj[u].begin(), adj[u].end(), nbrs.begin(), nbrs.end(),
                           std::back_inserter(merged));
            std::erase_if(merged, [&](std::size_t w) { return w == u || w == v; });
            adj[u].swap(merged);
            heap.emplace(adj[u].size(), u);
        }
        out.order.push_back(v);
        out.structure.push_back(std::move(nbrs));
    }
    return out;
}

}  // namespace

std::vector<std::size_t> minimum_degree_order(const SparseSymmetric& a) {
    return eliminate_min_degree(a).order;
}

CholeskyFactor factor(const SparseSymmetric& p, std::size_t null_dim, bool strict) {
    const std::size_t n = p.order();
    Elimination elim = eliminate_min_degree(p);

    CholeskyFactor f;
    f.perm_ = std::move(elim.order);
    f.null_dim_expected_ = null_dim;
    std::vector<std::size_t> inv(n);
    for (std::size_t k = 0; k < n; ++k) {
        inv[f.perm_[k]] = k;
    }

    // Symbolic structure in permuted positions.
    f.col_ptr_.assign(n + 1, 0);
    for (std::size_t k = 0; k < n; ++k) {
        auto& s = elim.structure[k];
        for (auto& u : s) {
            u = inv[u];
        }
        std::sort(s.begin(), s.end());
        f.col_ptr_[k + 1] = f.col_ptr_[k] + s.size();
    }
    f.row_idx_.reserve(f.col_ptr_[n]);
    for (const auto& s : elim.structure) {
        f.row_idx_.insert(f.row_idx_.end(), s.begin(), s.end());
    }
    f.values_.assign(f.row_idx_.size(), 0.0);

    // Row lists: columns j < k with L(k, j) structurally nonzero, ascending.
    std::vector<std::vector<std::size_t>> row_cols(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t q = f.col_ptr_[j]; q < f.col_ptr_[j + 1]; ++q) {
            row_cols[f.row_idx_[q]].push_back(j);
        }
    }

    // Full symmetric column access to p in original indices.
    std::vector<std::vector<std::pair<std::size_t, double>>> full(n);
    double max_diag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t q = p.col_ptr()[j]; q < p.col_ptr()[j + 1]; ++q) {
            const std::size_t i = p.row_idx()[q];
            const double v = p.values()[q];
            full[j].emplace_back(i, v);
            if (i != j) {
                full[i].emplace_back(j, v);
            } else {
                max_diag = std::max(max_diag, std::abs(v));
            }
        }
    }
    const double tol = kPivotTolerance * max_diag;

    f.diag_.assign(n, 0.0);
    f.deficient_.assign(n, 0);
    std::vector<std::size_t> cursor(n);
    for (std::size_t j = 0; j < n; ++j) {
        cursor[j] = f.col_ptr_[j];
    }
    Vector w(n, 0.0);
    std::size_t rank = 0;

    for (std::size_t k = 0; k < n; ++k) {
        for (const auto& [i, v] : full[f.perm_[k]]) {
            const std::size_t pi = inv[i];
            if (pi >= k) {
                w[pi] += v;
            }
        }
        for (std::size_t j : row_cols[k]) {
            const std::size_t q0 = cursor[j];
            // cursor[j] points at row k of column j.
            const double ljk = f.values_[q0];
            const double scale = ljk * f.diag_[j];
            w[k] -= ljk * scale;
            for (std::size_t q = q0 + 1; q < f.col_ptr_[j + 1]; ++q) {
                w[f.row_idx_[q]] -= f.values_[q] * scale;
            }
            cursor[j] = q0 + 1;
        }

        const double pivot = w[k];
        if (pivot <= tol) {
            if (strict) {
                throw NotWellFormedError("factorization breakdown: zero pivot at index " +
                                         std::to_string(f.perm_[k]) + " (step " +
                                         std::to_string(k) + ")");
            }
            if (pivot < -tol) {
                throw NumericalError("factorization: matrix is indefinite (pivot " +
                                     std::to_string(pivot) + " at index " +
                                     std::to_string(f.perm_[k]) + ")");
            }
            f.deficient_[k] = 1;
        } else {
            f.diag_[k] = pivot;
            for (std::size_t q = f.col_ptr_[k]; q < f.col_ptr_[k + 1]; ++q) {
                f.values_[q] = w[f.row_idx_[q]] / pivot;
            }
            ++rank;
        }
        w[k] = 0.0;
        for (std::size_t q = f.col_ptr_[k]; q < f.col_ptr_[k + 1]; ++q) {
            w[f.row_idx_[q]] = 0.0;
        }
    }
    f.detected_rank_ = rank;
    return f;
}

void CholeskyFactor::solve_in_place(std::span<double> x) const {
    const std::size_t n = order();
    if (x.size() != n) {
        throw DomainError("CholeskyFactor::solve: length mismatch");
    }
    Vector y(n);
    for (std::size_t k = 0; k < n; ++k) {
        y[k] = x[perm_[k]];
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double yk = y[k];
        if (yk == 0.0) {
            continue;
        }
        for (std::size_t q = col_ptr_[k]; q < col_ptr_[k + 1]; ++q) {
            y[row_idx_[q]] -= values_[q] * yk;
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        y[k] = deficient_[k] ? 0.0 : y[k] / diag_[k];
    }
    for (std::size_t k = n; k-- > 0;) {
        double s = y[k];
        for (std::size_t q = col_ptr_[k]; q < col_ptr_[k + 1]; ++q) {
            s -= values_[q] * y[row_idx_[q]];
        }
        y[k] = deficient_[k] ? 0.0 : s;
    }
    for (std::size_t k = 0; k < n; ++k) {
        x[perm_[k]] = y[k];
    }
}

SymmetricDense CholeskyFactor::reconstruct() const {
    const std::size_t n = order();
    // Dense L with unit diagonal, in permuted positions.
    DenseMatrix l(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        l(k, k) = 1.0;
        for (std::size_t q = col_ptr_[k]; q < col_ptr_[k + 1]; ++q) {
            l(row_idx_[q], k) = values_[q];
        }
    }
    SymmetricDense out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k <= j; ++k) {
                s += l(i, k) * diag_[k] * l(j, k);
            }
            out(perm_[i], perm_[j]) = s;
        }
    }
    return out;
}

SymmetricDense schur_complement(const SparseSymmetric& k,
                                std::span<const std::size_t> pivot_block) {
    const std::size_t n = k.order();
    std::vector<char> in_block(n, 0);
    for (std::size_t i = 0; i < pivot_block.size(); ++i) {
        if (pivot_block[i] >= n || (i > 0 && pivot_block[i] <= pivot_block[i - 1])) {
            throw DomainError("schur_complement: pivot block must be ascending and in range");
        }
        in_block[pivot_block[i]] = 1;
    }
    std::vector<std::size_t> rest;
    rest.reserve(n - pivot_block.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (!in_block[i]) {
            rest.push_back(i);
        }
    }

    SymmetricDense s = k.principal_submatrix(pivot_block).to_dense();
    if (rest.empty()) {
        return s;
    }

    CholeskyFactor f11;
    try {
        f11 = factor(k.principal_submatrix(rest), 0, true);
    } catch (const NotWellFormedError& e) {
        throw NotWellFormedError(std::string("schur_complement: eliminated block is singular; ") +
                                 e.what());
    }
    const DenseMatrix k12 = k.coupling_block(rest, pivot_block);
    const std::size_t ne = pivot_block.size();
    const DenseMatrix k21 = k12.transpose();
    for (std::size_t j = 0; j < ne; ++j) {
        Vector x(k21.row(j).begin(), k21.row(j).end());
        f11.solve_in_place(x);
        for (std::size_t i = j; i < ne; ++i) {
            s(i, j) -= dot(k21.row(i), x);
        }
    }
    return s;
}

}  // namespace effstiff
