#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lsqd {

/// Compressed sparse rows, double entries. Column indices are sorted within
/// each row. Row pointers are 64-bit so products of large systems stay safe.
struct CsrMatrix {
    int nrows = 0;
    int ncols = 0;
    std::vector<std::int64_t> row_ptr{0};
    std::vector<std::int32_t> col;
    std::vector<double> val;

    std::int64_t nnz() const { return static_cast<std::int64_t>(val.size()); }

    void resize_rows(int n) {
        nrows = n;
        row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
    }

    // y = A x
    void multiply(std::span<const double> x, std::span<double> y) const;
};

/// Explicit transpose (CSR of A^T) via counting sort; deterministic.
CsrMatrix transpose(const CsrMatrix& a);

/// G = A^T A, full (both triangles), accumulated row-by-row in a fixed order so
/// the result is bitwise symmetric and run-invariant.
CsrMatrix ata(const CsrMatrix& a);

/// rhs = A^T b.
std::vector<double> multiply_transposed(const CsrMatrix& a, std::span<const double> b);

}  // namespace lsqd
