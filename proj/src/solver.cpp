#include "effstiff/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "effstiff/eigen.hpp"
#include "effstiff/errors.hpp"

namespace effstiff {

namespace {

constexpr double kNullAnnihilationTolerance = 1e-8;

// Number of eigenvalues of the symmetric tridiagonal (a, b) below x.
std::size_t sturm_count(const Vector& a, const Vector& b, double x) {
    std::size_t count = 0;
    double q = a[0] - x;
    if (q < 0.0) {
        ++count;
    }
    for (std::size_t i = 1; i < a.size(); ++i) {
        const double denom = q == 0.0 ? std::numeric_limits<double>::epsilon() : q;
        q = a[i] - x - b[i - 1] * b[i - 1] / denom;
        if (q < 0.0) {
            ++count;
        }
    }
    return count;
}

// Eigenvalue number `index` (ascending) of the tridiagonal, by bisection.
double tridiagonal_eigenvalue(const Vector& a, const Vector& b, std::size_t index) {
    double lo = std::numeric_limits<double>::max();
    double hi = std::numeric_limits<double>::lowest();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double r = (i > 0 ? std::abs(b[i - 1]) : 0.0) + (i < b.size() ? std::abs(b[i]) : 0.0);
        lo = std::min(lo, a[i] - r);
        hi = std::max(hi, a[i] + r);
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(std::abs(lo), std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (sturm_count(a, b, mid) > index) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Extreme Ritz values of the Lanczos matrix implied by the CG coefficients.
std::optional<double> lanczos_condition(const Vector& alpha, const Vector& beta) {
    const std::size_t k = alpha.size();
    if (k == 0) {
        return std::nullopt;
    }
    Vector diag(k);
    Vector off(k > 0 ? k - 1 : 0);
    for (std::size_t j = 0; j < k; ++j) {
        diag[j] = 1.0 / alpha[j] + (j > 0 ? beta[j - 1] / alpha[j - 1] : 0.0);
        if (j + 1 < k) {
            off[j] = std::sqrt(beta[j]) / alpha[j];
        }
    }
    const double lmin = tridiagonal_eigenvalue(diag, off, 0);
    const double lmax = tridiagonal_eigenvalue(diag, off, k - 1);
    if (!(lmin > 0.0)) {
        return std::nullopt;
    }
    return lmax / lmin;
}

// Householder reflectors whose product H maps range(N) onto the first d
// coordinates; columns d.. of H span the orthogonal complement.
struct Reflectors {
    std::vector<Vector> v;  // each of length n, v[j][i] = 0 for i < j
};

Reflectors householder_of(const DenseMatrix& nb) {
    const std::size_t n = nb.rows();
    const std::size_t d = nb.cols();
    DenseMatrix a = nb;
    Reflectors h;
    for (std::size_t j = 0; j < d; ++j) {
        double norm = 0.0;
        for (std::size_t i = j; i < n; ++i) {
            norm += a(i, j) * a(i, j);
        }
        norm = std::sqrt(norm);
        Vector v(n, 0.0);
        if (norm == 0.0) {
            throw NullSpaceMismatchError("null basis is rank deficient");
        }
        const double alpha = a(j, j) > 0.0 ? -norm : norm;
        for (std::size_t i = j; i < n; ++i) {
            v[i] = a(i, j);
        }
        v[j] -= alpha;
        const double vn = norm2(v);
        for (double& x : v) {
            x /= vn;
        }
        for (std::size_t c = j; c < d; ++c) {
            double s = 0.0;
            for (std::size_t i = j; i < n; ++i) {
                s += v[i] * a(i, c);
            }
            for (std::size_t i = j; i < n; ++i) {
                a(i, c) -= 2.0 * s * v[i];
            }
        }
        h.v.push_back(std::move(v));
    }
    return h;
}

// H_d ... H_1 A H_1 ... H_d, trailing (n - d) block.
SymmetricDense deflate(const SymmetricDense& a, const Reflectors& h) {
    DenseMatrix m = a.to_dense();
    const std::size_t n = m.rows();
    for (const Vector& v : h.v) {
        // Left: m -= 2 v (v^T m).
        Vector w(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (v[i] == 0.0) {
                continue;
            }
            const auto row = m.row(i);
            for (std::size_t c = 0; c < n; ++c) {
                w[c] += v[i] * row[c];
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (v[i] == 0.0) {
                continue;
            }
            auto row = m.row(i);
            for (std::size_t c = 0; c < n; ++c) {
                row[c] -= 2.0 * v[i] * w[c];
            }
        }
        // Right: m -= 2 (m v) v^T.
        for (std::size_t i = 0; i < n; ++i) {
            auto row = m.row(i);
            const double s = dot(row, v);
            for (std::size_t c = 0; c < n; ++c) {
                row[c] -= 2.0 * s * v[c];
            }
        }
    }
    const std::size_t d = h.v.size();
    SymmetricDense out(n - d);
    for (std::size_t i = d; i < n; ++i) {
        for (std::size_t j = d; j <= i; ++j) {
            out(i - d, j - d) = 0.5 * (m(i, j) + m(j, i));
        }
    }
    return out;
}

}  // namespace

NullProjector::NullProjector(const DenseMatrix& null_basis) : q_(null_basis) {
    const std::size_t n = q_.rows();
    const std::size_t d = q_.cols();
    // Modified Gram-Schmidt, two passes.
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t k = 0; k < j; ++k) {
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    s += q_(i, k) * q_(i, j);
                }
                for (std::size_t i = 0; i < n; ++i) {
                    q_(i, j) -= s * q_(i, k);
                }
            }
            double norm = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                norm += q_(i, j) * q_(i, j);
            }
            norm = std::sqrt(norm);
            if (!(norm > 0.0)) {
                throw DomainError("null basis is rank deficient");
            }
            for (std::size_t i = 0; i < n; ++i) {
                q_(i, j) /= norm;
            }
        }
    }
}

void NullProjector::project(std::span<double> x) const {
    if (dim() == 0) {
        return;
    }
    if (x.size() != q_.rows()) {
        throw DomainError("NullProjector: length mismatch");
    }
    for (std::size_t j = 0; j < dim(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            s += q_(i, j) * x[i];
        }
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] -= s * q_(i, j);
        }
    }
}

double NullProjector::null_component(std::span<const double> x) const {
    double sum = 0.0;
    for (std::size_t j = 0; j < dim(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            s += q_(i, j) * x[i];
        }
        sum += s * s;
    }
    return std::sqrt(sum);
}

Vector apply_pinv(const CholeskyFactor& f, std::span<const double> b, const NullProjector& proj) {
    if (!f.usable()) {
        throw DomainError("apply_pinv: factor has rank deficit " +
                          std::to_string(f.rank_deficit()) + " beyond the expected " +
                          std::to_string(f.null_dim_expected()));
    }
    if (b.size() != f.order()) {
        throw DomainError("apply_pinv: length mismatch");
    }
    const double nb = norm2(b);
    const double leak = proj.null_component(b);
    if (leak > kConsistencyTolerance * nb) {
        throw ConsistencyError("apply_pinv: right-hand side is outside the range (relative null component " +
                               std::to_string(leak / nb) + ")");
    }
    Vector x(b.begin(), b.end());
    proj.project(x);
    f.solve_in_place(x);
    proj.project(x);
    return x;
}

SolveReport pcg(const SparseSymmetric& k, std::span<const double> b, const CholeskyFactor& f,
                double tol, std::size_t maxit, const NullProjector& proj) {
    const std::size_t n = k.order();
    if (b.size() != n || f.order() != n) {
        throw DomainError("pcg: dimension mismatch");
    }
    if (!(tol > 0.0)) {
        throw DomainError("pcg: tolerance must be positive");
    }
    SolveReport rep;
    rep.x.assign(n, 0.0);
    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        rep.residual_history.push_back(0.0);
        rep.converged = true;
        return rep;
    }
    Vector r(b.begin(), b.end());
    proj.project(r);
    rep.residual_history.push_back(norm2(r) / bnorm);
    if (rep.residual_history.back() <= tol) {
        rep.converged = true;
        return rep;
    }

    Vector z = apply_pinv(f, r, proj);
    Vector p = z;
    Vector q(n);
    double rz = dot(r, z);
    if (!(rz > 0.0)) {
        throw NumericalError("pcg: preconditioned residual has non-positive inner product");
    }
    Vector alphas;
    Vector betas;
    for (std::size_t it = 1; it <= maxit; ++it) {
        k.multiply(p, q);
        const double pq = dot(p, q);
        if (!(pq > 0.0)) {
            throw NumericalError("pcg: breakdown, non-positive curvature at iteration " +
                                 std::to_string(it));
        }
        const double alpha = rz / pq;
        axpy(alpha, p, rep.x);
        axpy(-alpha, q, r);
        // K p has no null component in exact arithmetic; drop the roundoff.
        proj.project(r);
        proj.project(rep.x);
        alphas.push_back(alpha);
        rep.iterations = it;

        double rel = norm2(r) / bnorm;
        if (rel <= tol || it == maxit) {
            // Confirm with the true residual b - K x.
            Vector kx = k.multiply(rep.x);
            Vector rt(b.begin(), b.end());
            proj.project(rt);
            axpy(-1.0, kx, rt);
            proj.project(rt);
            const double true_rel = norm2(rt) / bnorm;
            rep.residual_history.push_back(true_rel);
            if (true_rel <= tol) {
                rep.converged = true;
                break;
            }
            if (it == maxit) {
                break;
            }
            r = std::move(rt);
        } else {
            rep.residual_history.push_back(rel);
        }

        z = apply_pinv(f, r, proj);
        const double rz_new = dot(r, z);
        if (!(rz_new > 0.0)) {
            throw NumericalError("pcg: breakdown, non-positive preconditioned inner product at iteration " +
                                 std::to_string(it));
        }
        const double beta = rz_new / rz;
        betas.push_back(beta);
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = z[i] + beta * p[i];
        }
    }
    rep.kappa_estimate = lanczos_condition(alphas, betas);
    return rep;
}

double exact_generalized_condition(const SparseSymmetric& k, const SparseSymmetric& p,
                                   const DenseMatrix& null_basis) {
    const std::size_t n = k.order();
    if (p.order() != n || null_basis.rows() != n) {
        throw DomainError("exact_generalized_condition: dimension mismatch");
    }
    if (n > kDenseConditionMaxOrder) {
        throw DomainError("exact_generalized_condition: order " + std::to_string(n) +
                          " exceeds the dense limit " + std::to_string(kDenseConditionMaxOrder));
    }
    const std::size_t d = null_basis.cols();
    double leak = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
        Vector col(n);
        for (std::size_t i = 0; i < n; ++i) {
            col[i] = null_basis(i, c);
        }
        const Vector pc = p.multiply(col);
        leak += dot(pc, pc);
    }
    if (std::sqrt(leak) >
        kNullAnnihilationTolerance * p.frobenius_norm() * null_basis.frobenius_norm()) {
        throw NullSpaceMismatchError("null(P) does not contain the null space of K");
    }
    const Reflectors h = householder_of(null_basis);
    const SymmetricDense kd = deflate(k.to_dense(), h);
    const SymmetricDense pd = deflate(p.to_dense(), h);
    try {
        return pencil_eigs(kd, pd).condition();
    } catch (const PencilDomainError& e) {
        throw NullSpaceMismatchError(std::string("null(P) differs from the null space of K: ") +
                                     e.what());
    } catch (const ConditioningError& e) {
        throw NullSpaceMismatchError(std::string("null(P) differs from the null space of K: ") +
                                     e.what());
    }
}

std::size_t pcg_iteration_bound(double kappa, double tol) {
    if (!(kappa >= 1.0) || !(tol > 0.0 && tol < 1.0)) {
        throw DomainError("pcg_iteration_bound: need kappa >= 1 and tol in (0, 1)");
    }
    return static_cast<std::size_t>(std::ceil(std::sqrt(kappa) * std::log(2.0 / tol))) + 5;
}

}  // namespace effstiff
