#include <doctest.h>

#include <cmath>

#include "lsqd/grid.hpp"
#include "lsqd/sparse.hpp"

using namespace lsqd;

namespace {

// Seeded random sparse matrix with sorted column indices per row.
CsrMatrix random_sparse(int rows, int cols, double fill, std::uint64_t seed) {
    CsrMatrix a;
    a.nrows = rows;
    a.ncols = cols;
    a.row_ptr = {0};
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const std::uint64_t h = splitmix64(seed ^ (static_cast<std::uint64_t>(r) * 7919 + c));
            if (unit_double(h) < fill) {
                a.col.push_back(c);
                a.val.push_back(2 * unit_double(splitmix64(h)) - 1);
            }
        }
        a.row_ptr.push_back(static_cast<std::int64_t>(a.col.size()));
    }
    return a;
}

double dense_entry(const CsrMatrix& a, int r, int c) {
    for (std::int64_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
        if (a.col[k] == c) return a.val[k];
    return 0.0;
}

}  // namespace

TEST_SUITE("sparse") {

TEST_CASE("ata matches the dense oracle") {
    const CsrMatrix a = random_sparse(50, 30, 0.2, 99);
    const CsrMatrix g = ata(a);
    REQUIRE(g.nrows == 30);
    REQUIRE(g.ncols == 30);
    for (int r = 0; r < 30; ++r)
        for (int c = 0; c < 30; ++c) {
            double want = 0.0;
            for (int m = 0; m < 50; ++m) want += dense_entry(a, m, r) * dense_entry(a, m, c);
            const double got = dense_entry(g, r, c);
            CHECK(got == doctest::Approx(want).epsilon(1e-13));
        }
}

TEST_CASE("ata is bitwise symmetric") {
    const CsrMatrix a = random_sparse(40, 25, 0.3, 5);
    const CsrMatrix g = ata(a);
    for (int r = 0; r < g.nrows; ++r)
        for (std::int64_t k = g.row_ptr[r]; k < g.row_ptr[r + 1]; ++k) {
            const double v = g.val[k];
            const double vt = dense_entry(g, g.col[k], r);
            CHECK(v == vt);  // exact
        }
}

TEST_CASE("transpose round trip and A^T b") {
    const CsrMatrix a = random_sparse(20, 15, 0.25, 123);
    const CsrMatrix at = transpose(a);
    for (int r = 0; r < a.nrows; ++r)
        for (std::int64_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
            CHECK(dense_entry(at, a.col[k], r) == a.val[k]);

    std::vector<double> b(20);
    for (int r = 0; r < 20; ++r) b[r] = unit_double(splitmix64(1000 + r));
    const std::vector<double> atb = multiply_transposed(a, b);
    for (int c = 0; c < 15; ++c) {
        double want = 0.0;
        for (int r = 0; r < 20; ++r) want += dense_entry(a, r, c) * b[r];
        CHECK(atb[c] == doctest::Approx(want).epsilon(1e-14));
    }
}

TEST_CASE("csr matvec") {
    CsrMatrix a;
    a.nrows = 2;
    a.ncols = 3;
    a.row_ptr = {0, 2, 3};
    a.col = {0, 2, 1};
    a.val = {1.0, 2.0, -3.0};
    std::vector<double> x{1, 10, 100};
    std::vector<double> y(2);
    a.multiply(x, y);
    CHECK(y[0] == 201.0);
    CHECK(y[1] == -30.0);
}

}  // TEST_SUITE
