#include "effstiff/dense.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "effstiff/errors.hpp"

namespace effstiff {

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> init)
    : rows_(init.size()), cols_(init.size() ? init.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : init) {
        if (r.size() != cols_) {
            throw DomainError("DenseMatrix: ragged initializer");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

double DenseMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) {
        s += v * v;
    }
    return std::sqrt(s);
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) {
        throw DomainError("matrix product: inner dimensions differ");
    }
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ci = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) {
                continue;
            }
            auto bk = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                ci[j] += aik * bk[j];
            }
        }
    }
    return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DomainError("matrix difference: shapes differ");
    }
    DenseMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            c(i, j) = a(i, j) - b(i, j);
        }
    }
    return c;
}

Vector operator*(const DenseMatrix& a, std::span<const double> x) {
    assert(x.size() == a.cols());
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        y[i] = dot(a.row(i), x);
    }
    return y;
}

DenseMatrix gram(const DenseMatrix& a) {
    DenseMatrix g(a.cols(), a.cols());
    for (std::size_t k = 0; k < a.rows(); ++k) {
        auto ak = a.row(k);
        for (std::size_t i = 0; i < a.cols(); ++i) {
            if (ak[i] == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < a.cols(); ++j) {
                g(i, j) += ak[i] * ak[j];
            }
        }
    }
    return g;
}

SymmetricDense::SymmetricDense(std::initializer_list<std::initializer_list<double>> init)
    : SymmetricDense(DenseMatrix(init).rows()) {
    const DenseMatrix full(init);
    if (full.rows() != full.cols()) {
        throw DomainError("SymmetricDense: initializer is not square");
    }
    for (std::size_t i = 0; i < order_; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            if (full(i, j) != full(j, i)) {
                throw DomainError("SymmetricDense: initializer is not symmetric");
            }
            (*this)(i, j) = full(i, j);
        }
    }
}

SymmetricDense SymmetricDense::identity(std::size_t n) {
    SymmetricDense m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

SymmetricDense SymmetricDense::diagonal(std::span<const double> d) {
    SymmetricDense m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        m(i, i) = d[i];
    }
    return m;
}

SymmetricDense SymmetricDense::from_dense(const DenseMatrix& a) {
    if (a.rows() != a.cols()) {
        throw DomainError("SymmetricDense::from_dense: matrix is not square");
    }
    SymmetricDense s(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            s(i, j) = 0.5 * (a(i, j) + a(j, i));
        }
    }
    return s;
}

DenseMatrix SymmetricDense::to_dense() const {
    DenseMatrix d(order_, order_);
    for (std::size_t i = 0; i < order_; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            d(i, j) = d(j, i) = (*this)(i, j);
        }
    }
    return d;
}

double SymmetricDense::frobenius_norm() const {
    double s = 0.0;
    for (std::size_t i = 0; i < order_; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const double v = (*this)(i, j);
            s += 2.0 * v * v;
        }
        const double v = (*this)(i, i);
        s += v * v;
    }
    return std::sqrt(s);
}

double SymmetricDense::max_abs_diagonal() const {
    double m = 0.0;
    for (std::size_t i = 0; i < order_; ++i) {
        m = std::max(m, std::abs((*this)(i, i)));
    }
    return m;
}

SymmetricDense& SymmetricDense::operator+=(const SymmetricDense& other) {
    if (other.order_ != order_) {
        throw DomainError("SymmetricDense +=: orders differ");
    }
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] += other.data_[k];
    }
    return *this;
}

SymmetricDense& SymmetricDense::operator-=(const SymmetricDense& other) {
    if (other.order_ != order_) {
        throw DomainError("SymmetricDense -=: orders differ");
    }
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] -= other.data_[k];
    }
    return *this;
}

SymmetricDense& SymmetricDense::operator*=(double s) {
    for (double& v : data_) {
        v *= s;
    }
    return *this;
}

Vector SymmetricDense::multiply(std::span<const double> x) const {
    assert(x.size() == order_);
    Vector y(order_, 0.0);
    for (std::size_t i = 0; i < order_; ++i) {
        const double* ri = data_.data() + i * (i + 1) / 2;
        for (std::size_t j = 0; j < i; ++j) {
            y[i] += ri[j] * x[j];
            y[j] += ri[j] * x[i];
        }
        y[i] += ri[i] * x[i];
    }
    return y;
}

double SymmetricDense::quadratic_form(std::span<const double> x) const {
    return dot(x, multiply(x));
}

SymmetricDense SymmetricDense::restrict_to(std::span<const std::size_t> idx) const {
    SymmetricDense s(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            s(i, j) = (*this)(idx[i], idx[j]);
        }
    }
    return s;
}

SymmetricDense operator+(SymmetricDense a, const SymmetricDense& b) { return a += b; }
SymmetricDense operator-(SymmetricDense a, const SymmetricDense& b) { return a -= b; }
SymmetricDense operator*(double s, SymmetricDense a) { return a *= s; }

SymmetricDense congruence(const SymmetricDense& a, const DenseMatrix& q) {
    if (q.rows() != a.order()) {
        throw DomainError("congruence: dimension mismatch");
    }
    // AQ, then Q^T (AQ) keeping the lower triangle.
    const std::size_t k = q.cols();
    const DenseMatrix qt = q.transpose();
    const DenseMatrix aqt = (a.to_dense() * q).transpose();
    SymmetricDense out(k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            out(i, j) = dot(qt.row(i), aqt.row(j));
        }
    }
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    assert(x.size() == y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] += alpha * x[i];
    }
}

}  // namespace effstiff
