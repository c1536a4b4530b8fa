#include "effstiff/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "effstiff/errors.hpp"

namespace effstiff {

SparseSymmetric::SparseSymmetric(std::size_t order) : order_(order), col_ptr_(order + 1, 0) {}

SparseSymmetric SparseSymmetric::from_triplets(std::size_t order,
                                               std::span<const Triplet> entries) {
    std::vector<Triplet> lower;
    lower.reserve(entries.size());
    for (const Triplet& t : entries) {
        if (t.row >= order || t.col >= order) {
            throw DomainError("SparseSymmetric: index (" + std::to_string(t.row) + ", " +
                              std::to_string(t.col) + ") outside order " +
                              std::to_string(order));
        }
        if (!std::isfinite(t.value)) {
            throw DomainError("SparseSymmetric: non-finite entry");
        }
        lower.push_back(t.row >= t.col ? t : Triplet{t.col, t.row, t.value});
    }
    // Stable so duplicate coordinates sum in input order.
    std::stable_sort(lower.begin(), lower.end(), [](const Triplet& a, const Triplet& b) {
        return a.col != b.col ? a.col < b.col : a.row < b.row;
    });

    SparseSymmetric m(order);
    m.row_idx_.reserve(lower.size());
    m.values_.reserve(lower.size());
    std::size_t k = 0;
    for (std::size_t c = 0; c < order; ++c) {
        while (k < lower.size() && lower[k].col == c) {
            const std::size_t r = lower[k].row;
            double v = 0.0;
            while (k < lower.size() && lower[k].col == c && lower[k].row == r) {
                v += lower[k].value;
                ++k;
            }
            m.row_idx_.push_back(r);
            m.values_.push_back(v);
        }
        m.col_ptr_[c + 1] = m.row_idx_.size();
    }
    return m;
}

SparseSymmetric SparseSymmetric::from_dense(const SymmetricDense& a, double drop_below) {
    std::vector<Triplet> t;
    for (std::size_t j = 0; j < a.order(); ++j) {
        for (std::size_t i = j; i < a.order(); ++i) {
            const double v = a(i, j);
            if (std::abs(v) > drop_below || (i == j && v != 0.0)) {
                t.push_back({i, j, v});
            }
        }
    }
    return from_triplets(a.order(), t);
}

SparseSymmetric SparseSymmetric::identity(std::size_t order) {
    std::vector<Triplet> t;
    t.reserve(order);
    for (std::size_t i = 0; i < order; ++i) {
        t.push_back({i, i, 1.0});
    }
    return from_triplets(order, t);
}

double SparseSymmetric::operator()(std::size_t i, std::size_t j) const {
    if (i < j) {
        std::swap(i, j);
    }
    const auto begin = row_idx_.begin() + static_cast<std::ptrdiff_t>(col_ptr_[j]);
    const auto end = row_idx_.begin() + static_cast<std::ptrdiff_t>(col_ptr_[j + 1]);
    const auto it = std::lower_bound(begin, end, i);
    if (it == end || *it != i) {
        return 0.0;
    }
    return values_[static_cast<std::size_t>(it - row_idx_.begin())];
}

Vector SparseSymmetric::diagonal() const {
    Vector d(order_, 0.0);
    for (std::size_t j = 0; j < order_; ++j) {
        const std::size_t p = col_ptr_[j];
        if (p < col_ptr_[j + 1] && row_idx_[p] == j) {
            d[j] = values_[p];
        }
    }
    return d;
}

Vector SparseSymmetric::multiply(std::span<const double> x) const {
    Vector y(order_, 0.0);
    multiply(x, y);
    return y;
}

void SparseSymmetric::multiply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != order_ || y.size() != order_) {
        throw DomainError("SparseSymmetric::multiply: vector length mismatch");
    }
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t j = 0; j < order_; ++j) {
        const double xj = x[j];
        double acc = 0.0;
        for (std::size_t p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
            const std::size_t i = row_idx_[p];
            const double v = values_[p];
            if (i == j) {
                acc += v * xj;
            } else {
                y[i] += v * xj;
                acc += v * x[i];
            }
        }
        y[j] += acc;
    }
}

SymmetricDense SparseSymmetric::to_dense() const {
    SymmetricDense d(order_);
    for (std::size_t j = 0; j < order_; ++j) {
        for (std::size_t p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
            d(row_idx_[p], j) = values_[p];
        }
    }
    return d;
}

double SparseSymmetric::frobenius_norm() const {
    double s = 0.0;
    for (std::size_t j = 0; j < order_; ++j) {
        for (std::size_t p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
            const double v = values_[p];
            s += (row_idx_[p] == j ? 1.0 : 2.0) * v * v;
        }
    }
    return std::sqrt(s);
}

SparseSymmetric SparseSymmetric::principal_submatrix(std::span<const std::size_t> idx) const {
    constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);
    std::vector<std::size_t> local(order_, kAbsent);
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (idx[k] >= order_ || (k > 0 && idx[k] <= idx[k - 1])) {
            throw DomainError("principal_submatrix: indices must be ascending and in range");
        }
        local[idx[k]] = k;
    }
    SparseSymmetric m(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const std::size_t j = idx[k];
        for (std::size_t p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
            const std::size_t li = local[row_idx_[p]];
            if (li != kAbsent) {
                // Monotone relabeling keeps rows ascending.
                m.row_idx_.push_back(li);
                m.values_.push_back(values_[p]);
            }
        }
        m.col_ptr_[k + 1] = m.row_idx_.size();
    }
    return m;
}

DenseMatrix SparseSymmetric::coupling_block(std::span<const std::size_t> rows,
                                            std::span<const std::size_t> cols) const {
    constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);
    std::vector<std::size_t> row_local(order_, kAbsent);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        row_local[rows[k]] = k;
    }
    std::vector<std::size_t> col_local(order_, kAbsent);
    for (std::size_t k = 0; k < cols.size(); ++k) {
        col_local[cols[k]] = k;
    }
    DenseMatrix out(rows.size(), cols.size());
    for (std::size_t j = 0; j < order_; ++j) {
        for (std::size_t p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
            const std::size_t i = row_idx_[p];
            if (row_local[i] != kAbsent && col_local[j] != kAbsent) {
                out(row_local[i], col_local[j]) = values_[p];
            } else if (row_local[j] != kAbsent && col_local[i] != kAbsent) {
                out(row_local[j], col_local[i]) = values_[p];
            }
        }
    }
    return out;
}

std::vector<std::vector<std::size_t>> SparseSymmetric::adjacency() const {
    std::vector<std::vector<std::size_t>> adj(order_);
    for (std::size_t j = 0; j < order_; ++j) {
        for (std::size_t p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
            const std::size_t i = row_idx_[p];
            if (i != j) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
        }
    }
    for (auto& a : adj) {
        std::sort(a.begin(), a.end());
    }
    return adj;
}

bool SparseSymmetric::pattern_subset_of(const SparseSymmetric& other) const {
    if (other.order_ != order_) {
        return false;
    }
    for (std::size_t j = 0; j < order_; ++j) {
        auto ob = other.row_idx_.begin() + static_cast<std::ptrdiff_t>(other.col_ptr_[j]);
        auto oe = other.row_idx_.begin() + static_cast<std::ptrdiff_t>(other.col_ptr_[j + 1]);
        for (std::size_t p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
            if (!std::binary_search(ob, oe, row_idx_[p])) {
                return false;
            }
        }
    }
    return true;
}

namespace {

SparseSymmetric combine(const SparseSymmetric& a, double sa, const SparseSymmetric& b,
                        double sb) {
    if (a.order() != b.order()) {
        throw DomainError("sparse combination: orders differ");
    }
    std::vector<Triplet> t;
    t.reserve(a.nnz() + b.nnz());
    for (const auto* m : {&a, &b}) {
        const double s = (m == &a) ? sa : sb;
        for (std::size_t j = 0; j < m->order(); ++j) {
            for (std::size_t p = m->col_ptr()[j]; p < m->col_ptr()[j + 1]; ++p) {
                t.push_back({m->row_idx()[p], j, s * m->values()[p]});
            }
        }
    }
    return SparseSymmetric::from_triplets(a.order(), t);
}

}  // namespace

SparseSymmetric operator+(const SparseSymmetric& a, const SparseSymmetric& b) {
    return combine(a, 1.0, b, 1.0);
}

SparseSymmetric operator-(const SparseSymmetric& a, const SparseSymmetric& b) {
    return combine(a, 1.0, b, -1.0);
}

SparseSymmetric operator*(double s, const SparseSymmetric& a) {
    return combine(a, s, SparseSymmetric(a.order()), 0.0);
}

}  // namespace effstiff
