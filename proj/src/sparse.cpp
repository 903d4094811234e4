#include "lsqd/sparse.hpp"

#include <algorithm>

namespace lsqd {

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    for (int r = 0; r < nrows; ++r) {
        double s = 0.0;
        const std::int64_t end = row_ptr[static_cast<std::size_t>(r) + 1];
        for (std::int64_t k = row_ptr[static_cast<std::size_t>(r)]; k < end; ++k)
            s += val[static_cast<std::size_t>(k)] *
                 x[static_cast<std::size_t>(col[static_cast<std::size_t>(k)])];
        y[static_cast<std::size_t>(r)] = s;
    }
}

CsrMatrix transpose(const CsrMatrix& a) {
    CsrMatrix t;
    t.nrows = a.ncols;
    t.ncols = a.nrows;
    t.row_ptr.assign(static_cast<std::size_t>(a.ncols) + 1, 0);
    for (std::int32_t c : a.col) ++t.row_ptr[static_cast<std::size_t>(c) + 1];
    for (std::size_t r = 0; r < static_cast<std::size_t>(a.ncols); ++r)
        t.row_ptr[r + 1] += t.row_ptr[r];
    t.col.resize(a.val.size());
    t.val.resize(a.val.size());
    std::vector<std::int64_t> next(t.row_ptr.begin(), t.row_ptr.end() - 1);
    for (int r = 0; r < a.nrows; ++r) {
        const std::int64_t end = a.row_ptr[static_cast<std::size_t>(r) + 1];
        for (std::int64_t k = a.row_ptr[static_cast<std::size_t>(r)]; k < end; ++k) {
            const auto c = static_cast<std::size_t>(a.col[static_cast<std::size_t>(k)]);
            const auto pos = static_cast<std::size_t>(next[c]++);
            t.col[pos] = static_cast<std::int32_t>(r);
            t.val[pos] = a.val[static_cast<std::size_t>(k)];
        }
    }
    return t;
}

CsrMatrix ata(const CsrMatrix& a) {
    const CsrMatrix at = transpose(a);
    const int n = a.ncols;

    CsrMatrix g;
    g.nrows = n;
    g.ncols = n;
    g.row_ptr.reserve(static_cast<std::size_t>(n) + 1);

    std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
    std::vector<std::int32_t> touched;
    std::vector<std::int32_t> stamp(static_cast<std::size_t>(n), -1);

    for (int r = 0; r < n; ++r) {
        touched.clear();
        const std::int64_t rend = at.row_ptr[static_cast<std::size_t>(r) + 1];
        for (std::int64_t k = at.row_ptr[static_cast<std::size_t>(r)]; k < rend; ++k) {
            const std::int32_t m = at.col[static_cast<std::size_t>(k)];  // row of A
            const double w = at.val[static_cast<std::size_t>(k)];        // A(m, r)
            const std::int64_t mend = a.row_ptr[static_cast<std::size_t>(m) + 1];
            for (std::int64_t j = a.row_ptr[static_cast<std::size_t>(m)]; j < mend; ++j) {
                const std::int32_t c = a.col[static_cast<std::size_t>(j)];
                if (stamp[static_cast<std::size_t>(c)] != r) {
                    stamp[static_cast<std::size_t>(c)] = r;
                    acc[static_cast<std::size_t>(c)] = 0.0;
                    touched.push_back(c);
                }
                acc[static_cast<std::size_t>(c)] += w * a.val[static_cast<std::size_t>(j)];
            }
        }
        std::sort(touched.begin(), touched.end());
        for (std::int32_t c : touched) {
            g.col.push_back(c);
            g.val.push_back(acc[static_cast<std::size_t>(c)]);
        }
        g.row_ptr.push_back(static_cast<std::int64_t>(g.col.size()));
    }
    return g;
}

std::vector<double> multiply_transposed(const CsrMatrix& a, std::span<const double> b) {
    std::vector<double> out(static_cast<std::size_t>(a.ncols), 0.0);
    for (int r = 0; r < a.nrows; ++r) {
        const double br = b[static_cast<std::size_t>(r)];
        const std::int64_t end = a.row_ptr[static_cast<std::size_t>(r) + 1];
        for (std::int64_t k = a.row_ptr[static_cast<std::size_t>(r)]; k < end; ++k)
            out[static_cast<std::size_t>(a.col[static_cast<std::size_t>(k)])] +=
                a.val[static_cast<std::size_t>(k)] * br;
    }
    return out;
}

}  // namespace lsqd
