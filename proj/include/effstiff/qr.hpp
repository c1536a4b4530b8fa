#pragma once

#include <cstddef>

#include "effstiff/dense.hpp"

namespace effstiff {

// Thin Householder QR of a tall factor stacked from equal-height row blocks,
// keeping only the leading `rank` columns: F = Q R with Q (rows x rank)
// orthonormal and R (rank x cols) upper triangular.
struct ThinQr {
    DenseMatrix q;
    DenseMatrix r;
    std::size_t block_rows = 0;

    std::size_t blocks() const { return block_rows == 0 ? 0 : q.rows() / block_rows; }
    // Rows [e * block_rows, (e + 1) * block_rows) of Q.
    DenseMatrix block(std::size_t e) const;
};

// Unpivoted: the leading `rank` columns of f must be independent and the
// remainder must lie in their span. Either failure raises NotWellFormedError.
ThinQr thin_qr(const DenseMatrix& f, std::size_t block_rows, std::size_t rank);

}  // namespace effstiff
