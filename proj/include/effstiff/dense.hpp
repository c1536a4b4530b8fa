#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace effstiff {

using Vector = std::vector<double>;

// Row-major general dense matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    DenseMatrix(std::initializer_list<std::initializer_list<double>> init);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::span<const double> data() const { return data_; }

    DenseMatrix transpose() const;
    double frobenius_norm() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
Vector operator*(const DenseMatrix& a, std::span<const double> x);

// A^T A.
DenseMatrix gram(const DenseMatrix& a);

// Symmetric dense matrix. Only the lower triangle is stored, so symmetry holds
// by construction.
class SymmetricDense {
public:
    SymmetricDense() = default;
    explicit SymmetricDense(std::size_t order, double fill = 0.0)
        : order_(order), data_(order * (order + 1) / 2, fill) {}
    SymmetricDense(std::initializer_list<std::initializer_list<double>> init);

    static SymmetricDense identity(std::size_t n);
    static SymmetricDense zero(std::size_t n) { return SymmetricDense(n); }
    static SymmetricDense diagonal(std::span<const double> d);
    // Symmetrizes (a + a^T)/2.
    static SymmetricDense from_dense(const DenseMatrix& a);

    std::size_t order() const { return order_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[index(i, j)]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[index(i, j)]; }

    DenseMatrix to_dense() const;
    double frobenius_norm() const;
    double max_abs_diagonal() const;

    SymmetricDense& operator+=(const SymmetricDense& other);
    SymmetricDense& operator-=(const SymmetricDense& other);
    SymmetricDense& operator*=(double s);

    Vector multiply(std::span<const double> x) const;
    double quadratic_form(std::span<const double> x) const;

    // Principal submatrix on the given indices, in the given order.
    SymmetricDense restrict_to(std::span<const std::size_t> idx) const;

private:
    static std::size_t index(std::size_t i, std::size_t j) {
        return i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i;
    }

    std::size_t order_ = 0;
    std::vector<double> data_;
};

SymmetricDense operator+(SymmetricDense a, const SymmetricDense& b);
SymmetricDense operator-(SymmetricDense a, const SymmetricDense& b);
SymmetricDense operator*(double s, SymmetricDense a);

// Q^T A Q for symmetric A.
SymmetricDense congruence(const SymmetricDense& a, const DenseMatrix& q);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace effstiff
