#include "effstiff/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "effstiff/errors.hpp"

namespace effstiff {

namespace {

constexpr int kMaxQlIterations = 60;

// Householder reduction to tridiagonal form (EISPACK tred2 ordering). On exit
// d holds the diagonal, e the subdiagonal in e[1..n-1], and v the orthogonal
// transform when accumulate is set.
void tridiagonalize(DenseMatrix& v, Vector& d, Vector& e, bool accumulate) {
    const std::size_t n = v.rows();
    for (std::size_t j = 0; j < n; ++j) {
        d[j] = v(n - 1, j);
    }
    for (std::size_t i = n - 1; i > 0; --i) {
        double scale = 0.0;
        double h = 0.0;
        for (std::size_t k = 0; k < i; ++k) {
            scale += std::abs(d[k]);
        }
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (std::size_t j = 0; j < i; ++j) {
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
                v(j, i) = 0.0;
            }
        } else {
            for (std::size_t k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0) {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (std::size_t j = 0; j < i; ++j) {
                e[j] = 0.0;
            }
            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                v(j, i) = f;
                g = e[j] + v(j, j) * f;
                for (std::size_t k = j + 1; k + 1 <= i; ++k) {
                    g += v(k, j) * d[k];
                    e[k] += v(k, j) * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (std::size_t j = 0; j < i; ++j) {
                e[j] -= hh * d[j];
            }
            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (std::size_t k = j; k + 1 <= i; ++k) {
                    v(k, j) -= (f * e[k] + g * d[k]);
                }
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    if (!accumulate) {
        for (std::size_t j = 0; j < n; ++j) {
            d[j] = v(j, j);
        }
        e[0] = 0.0;
        return;
    }

    for (std::size_t i = 0; i + 1 < n; ++i) {
        v(n - 1, i) = v(i, i);
        v(i, i) = 1.0;
        const double h = d[i + 1];
        if (h != 0.0) {
            for (std::size_t k = 0; k <= i; ++k) {
                d[k] = v(k, i + 1) / h;
            }
            for (std::size_t j = 0; j <= i; ++j) {
                double g = 0.0;
                for (std::size_t k = 0; k <= i; ++k) {
                    g += v(k, i + 1) * v(k, j);
                }
                for (std::size_t k = 0; k <= i; ++k) {
                    v(k, j) -= g * d[k];
                }
            }
        }
        for (std::size_t k = 0; k <= i; ++k) {
            v(k, i + 1) = 0.0;
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        d[j] = v(n - 1, j);
        v(n - 1, j) = 0.0;
    }
    v(n - 1, n - 1) = 1.0;
    e[0] = 0.0;
}

// Implicit QL on the tridiagonal (d, e). Rotations are applied to the rows of
// vt, which holds the transposed eigenvector matrix.
void tridiagonal_ql(Vector& d, Vector& e, DenseMatrix* vt) {
    const std::size_t n = d.size();
    for (std::size_t i = 1; i < n; ++i) {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    double f = 0.0;
    double tst1 = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        std::size_t m = l;
        while (m < n - 1 && std::abs(e[m]) > eps * tst1) {
            ++m;
        }
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > kMaxQlIterations) {
                    throw NumericalError("sym_eig: QL iteration did not converge for order " +
                                         std::to_string(n));
                }
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) {
                    d[i] -= h;
                }
                f += h;

                p = d[m];
                double c = 1.0;
                double c2 = c;
                double c3 = c;
                const double el1 = e[l + 1];
                double s = 0.0;
                double s2 = 0.0;
                for (std::size_t ii = m; ii-- > l;) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[ii];
                    h = c * p;
                    r = std::hypot(p, e[ii]);
                    e[ii + 1] = s * r;
                    s = e[ii] / r;
                    c = p / r;
                    p = c * d[ii] - s * g;
                    d[ii + 1] = h + s * (c * g + s * d[ii]);
                    if (vt != nullptr) {
                        auto lo = vt->row(ii);
                        auto hi = vt->row(ii + 1);
                        for (std::size_t k = 0; k < n; ++k) {
                            const double t = hi[k];
                            hi[k] = s * lo[k] + c * t;
                            lo[k] = c * lo[k] - s * t;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

}  // namespace

EigDecomposition sym_eig(const SymmetricDense& a, double rel_tol, bool want_vectors) {
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
        throw DomainError("sym_eig: rel_tol must lie in (0, 1)");
    }
    const std::size_t n = a.order();
    EigDecomposition out;
    if (n == 0) {
        return out;
    }

    DenseMatrix v = a.to_dense();
    Vector d(n, 0.0);
    Vector e(n, 0.0);
    tridiagonalize(v, d, e, want_vectors);

    DenseMatrix vt;
    if (want_vectors) {
        vt = v.transpose();
    }
    tridiagonal_ql(d, e, want_vectors ? &vt : nullptr);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return d[x] > d[y]; });

    out.values.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = d[order[j]];
    }
    if (want_vectors) {
        out.vectors = DenseMatrix(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            auto src = vt.row(order[j]);
            for (std::size_t i = 0; i < n; ++i) {
                out.vectors(i, j) = src[i];
            }
        }
    }

    double scale = 0.0;
    for (double x : out.values) {
        scale = std::max(scale, std::abs(x));
    }
    out.tolerance_used = rel_tol * std::max(scale, std::numeric_limits<double>::min());
    out.rank = static_cast<std::size_t>(std::count_if(
        out.values.begin(), out.values.end(),
        [&](double x) { return std::abs(x) > out.tolerance_used; }));
    return out;
}

SymmetricDense pinv(const SymmetricDense& a, double rel_tol) {
    const EigDecomposition eig = sym_eig(a, rel_tol);
    const std::size_t n = a.order();
    SymmetricDense out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lambda = eig.values[k];
        if (std::abs(lambda) <= eig.tolerance_used) {
            continue;
        }
        const double inv = 1.0 / lambda;
        for (std::size_t i = 0; i < n; ++i) {
            const double vi = eig.vectors(i, k) * inv;
            for (std::size_t j = 0; j <= i; ++j) {
                out(i, j) += vi * eig.vectors(j, k);
            }
        }
    }
    return out;
}

double PencilSpectrum::max() const {
    if (finite_eigenvalues.empty()) {
        throw ConditioningError("pencil has no finite eigenvalues");
    }
    return finite_eigenvalues.back();
}

double PencilSpectrum::min() const {
    if (finite_eigenvalues.empty()) {
        throw ConditioningError("pencil has no finite eigenvalues");
    }
    return finite_eigenvalues.front();
}

double PencilSpectrum::trace() const {
    return std::accumulate(finite_eigenvalues.begin(), finite_eigenvalues.end(), 0.0);
}

double PencilSpectrum::condition() const {
    const double lo = min();
    if (!(lo > 0.0)) {
        throw ConditioningError("pencil has a non-positive finite eigenvalue");
    }
    return max() / lo;
}

PencilSpectrum pencil_eigs(const SymmetricDense& a, const SymmetricDense& b, double rel_tol) {
    // Mismatch threshold for ||A Z||_F / ||A||_F with Z spanning null(B).
    constexpr double kNullLeak = 1e-8;

    const std::size_t n = a.order();
    if (b.order() != n) {
        throw DomainError("pencil_eigs: matrix orders differ");
    }
    const EigDecomposition eb = sym_eig(b, rel_tol);
    const EigDecomposition ea = sym_eig(a, rel_tol, false);

    for (double x : eb.values) {
        if (x < -eb.tolerance_used) {
            throw PencilDomainError("pencil_eigs: B is not positive semidefinite");
        }
    }
    for (double x : ea.values) {
        if (x < -ea.tolerance_used) {
            throw PencilDomainError("pencil_eigs: A is not positive semidefinite");
        }
    }
    if (ea.rank != eb.rank) {
        throw PencilDomainError("pencil_eigs: rank(A) = " + std::to_string(ea.rank) +
                                " differs from rank(B) = " + std::to_string(eb.rank));
    }

    const std::size_t k = eb.rank;
    PencilSpectrum out;
    out.common_null_dim = n - k;
    if (k == 0) {
        return out;
    }

    // Scaled range basis W = Q D^{-1/2}; the reduced pencil becomes
    // (W^T A W, I).
    DenseMatrix w(n, k);
    for (std::size_t j = 0; j < k; ++j) {
        const double s = 1.0 / std::sqrt(eb.values[j]);
        for (std::size_t i = 0; i < n; ++i) {
            w(i, j) = eb.vectors(i, j) * s;
        }
    }

    if (k < n) {
        DenseMatrix z(n, n - k);
        for (std::size_t j = k; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                z(i, j - k) = eb.vectors(i, j);
            }
        }
        const double leak = (a.to_dense() * z).frobenius_norm();
        const double norm_a = a.frobenius_norm();
        if (leak > kNullLeak * std::max(norm_a, std::numeric_limits<double>::min())) {
            throw PencilDomainError("pencil_eigs: null(B) is not contained in null(A) (leak " +
                                    std::to_string(leak / norm_a) + ")");
        }
    }

    const EigDecomposition reduced = sym_eig(congruence(a, w), rel_tol, false);
    out.finite_eigenvalues.assign(reduced.values.rbegin(), reduced.values.rend());
    return out;
}

PencilSpectrum pencil_eigs_factored(const DenseMatrix& fa, const DenseMatrix& fb,
                                    double rel_tol) {
    if (fa.cols() != fb.cols()) {
        throw DomainError("pencil_eigs_factored: factors have different column counts");
    }
    const std::size_t n = fa.cols();
    // V^+ U = (Fb Fb^T)^+ Fb Fa^T
    const DenseMatrix fbt = fb.transpose();
    const SymmetricDense fb_gram = SymmetricDense::from_dense(fb * fbt);
    const DenseMatrix m = pinv(fb_gram, rel_tol).to_dense() * (fb * fa.transpose());
    const EigDecomposition sv = sym_eig(SymmetricDense::from_dense(gram(m)), rel_tol, false);

    PencilSpectrum out;
    for (double x : sv.values) {
        if (std::abs(x) > sv.tolerance_used) {
            out.finite_eigenvalues.push_back(x);
        }
    }
    std::sort(out.finite_eigenvalues.begin(), out.finite_eigenvalues.end());
    out.common_null_dim = n - out.finite_eigenvalues.size();
    return out;
}

}  // namespace effstiff
