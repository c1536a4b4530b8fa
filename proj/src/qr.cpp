#include "effstiff/qr.hpp"

#include <cmath>
#include <string>

#include "effstiff/errors.hpp"

namespace effstiff {

namespace {

constexpr double kQrRankTolerance = 1e-10;
constexpr double kQrResidualTolerance = 1e-8;

}  // namespace

DenseMatrix ThinQr::block(std::size_t e) const {
    DenseMatrix b(block_rows, q.cols());
    for (std::size_t i = 0; i < block_rows; ++i) {
        auto src = q.row(e * block_rows + i);
        auto dst = b.row(i);
        std::copy(src.begin(), src.end(), dst.begin());
    }
    return b;
}

ThinQr thin_qr(const DenseMatrix& f, std::size_t block_rows, std::size_t rank) {
    const std::size_t m = f.rows();
    const std::size_t n = f.cols();
    if (block_rows == 0 || m % block_rows != 0) {
        throw DomainError("thin_qr: row count is not a multiple of the block height");
    }
    if (rank > n || rank > m) {
        throw NotWellFormedError("thin_qr: requested rank " + std::to_string(rank) +
                                 " exceeds the factor dimensions");
    }
    const double scale = f.frobenius_norm();

    // Columns of F as contiguous rows.
    DenseMatrix at = f.transpose();
    std::vector<Vector> reflectors;
    Vector taus;
    reflectors.reserve(rank);

    for (std::size_t j = 0; j < rank; ++j) {
        auto col = at.row(j);
        double sigma = 0.0;
        for (std::size_t i = j; i < m; ++i) {
            sigma += col[i] * col[i];
        }
        const double norm = std::sqrt(sigma);
        if (norm <= kQrRankTolerance * scale) {
            throw NotWellFormedError("thin_qr: factor rank is below " + std::to_string(rank) +
                                     " (column " + std::to_string(j) + " is dependent)");
        }
        const double alpha = col[j] > 0 ? -norm : norm;
        Vector v(col.begin() + static_cast<std::ptrdiff_t>(j), col.end());
        v[0] -= alpha;
        const double vnorm2 = dot(v, v);
        const double tau = 2.0 / vnorm2;

        col[j] = alpha;
        for (std::size_t i = j + 1; i < m; ++i) {
            col[i] = 0.0;
        }
        for (std::size_t c = j + 1; c < n; ++c) {
            auto x = at.row(c).subspan(j);
            const double s = tau * dot(v, x);
            for (std::size_t i = 0; i < v.size(); ++i) {
                x[i] -= s * v[i];
            }
        }
        reflectors.push_back(std::move(v));
        taus.push_back(tau);
    }

    double residual = 0.0;
    for (std::size_t c = rank; c < n; ++c) {
        auto x = at.row(c);
        for (std::size_t i = rank; i < m; ++i) {
            residual += x[i] * x[i];
        }
    }
    residual = std::sqrt(residual);
    if (residual > kQrResidualTolerance * scale) {
        throw NotWellFormedError("thin_qr: factor rank exceeds " + std::to_string(rank) +
                                 " (trailing residual " + std::to_string(residual / scale) +
                                 ")");
    }

    ThinQr out;
    out.block_rows = block_rows;
    out.r = DenseMatrix(rank, n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t i = 0; i < rank && i <= c; ++i) {
            out.r(i, c) = at(c, i);
        }
    }

    // Q = H_0 ... H_{rank-1} E, built column by column.
    DenseMatrix qt(rank, m);
    for (std::size_t c = 0; c < rank; ++c) {
        auto x = qt.row(c);
        x[c] = 1.0;
        for (std::size_t j = rank; j-- > 0;) {
            if (j > c) {
                continue;  // e_c is zero on rows >= j
            }
            auto xs = x.subspan(j);
            const auto& v = reflectors[j];
            const double s = taus[j] * dot(v, xs);
            for (std::size_t i = 0; i < v.size(); ++i) {
                xs[i] -= s * v[i];
            }
        }
    }
    out.q = qt.transpose();
    return out;
}

}  // namespace effstiff
