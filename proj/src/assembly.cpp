#include "lsqd/assembly.hpp"

#include <cmath>

namespace lsqd {

const char* row_kind_name(RowKind k) {
    switch (k) {
        case RowKind::PDE: return "PDE";
        case RowKind::C0: return "C0";
        case RowKind::C1x: return "C1x";
        case RowKind::C1y: return "C1y";
        case RowKind::BC: return "BC";
    }
    return "?";
}

std::vector<LocalBasis> build_bases(const PointCloud& cloud,
                                    const std::vector<Neighborhood>& nbs, int P) {
    std::vector<LocalBasis> bases;
    bases.reserve(nbs.size());
    for (const Neighborhood& nb : nbs)
        bases.push_back(LocalBasis::make(cloud.points[static_cast<std::size_t>(nb.owner)],
                                         nb.extent, P, cloud.dim));
    return bases;
}

namespace {

class RowBuilder {
  public:
    RowBuilder(RectangularSystem& sys, int ncols) : sys_(sys) {
        sys_.A.ncols = ncols;
        sys_.A.row_ptr = {0};
    }

    void push(std::int32_t col, double v) {
        if (v != 0.0) {
            sys_.A.col.push_back(col);
            sys_.A.val.push_back(v);
        }
    }

    void finish_row(RowKind kind, int i, int j, double rhs) {
        sys_.A.row_ptr.push_back(static_cast<std::int64_t>(sys_.A.col.size()));
        sys_.b.push_back(rhs);
        sys_.tags.push_back({kind, i, j});
        ++sys_.A.nrows;
    }

  private:
    RectangularSystem& sys_;
};

}  // namespace

RectangularSystem assemble(const PointCloud& cloud, const std::vector<Neighborhood>& nbs,
                           const std::vector<LocalBasis>& bases, const LevelSetDomain& dom,
                           const ProblemSpec& prob) {
    const int N = cloud.N;
    if (N == 0 || nbs.empty()) throw std::runtime_error("assemble: empty system");
    const int Q = bases.front().Q();
    const int dim = cloud.dim;

    RectangularSystem sys;
    sys.Q = Q;
    RowBuilder rows(sys, Q * N);

    for (int i = 0; i < N; ++i) {
        const Neighborhood& nb = nbs[static_cast<std::size_t>(i)];
        const LocalBasis& bi = bases[static_cast<std::size_t>(i)];
        const std::int32_t bi0 = static_cast<std::int32_t>(i) * Q;

        // PDE evaluated at every member position against the owner's expansion.
        for (int j : nb.members) {
            const Point xj = cloud.points[static_cast<std::size_t>(j)];
            for (int q = 1; q <= Q; ++q)
                rows.push(bi0 + q - 1,
                          prob.a * bi.eval(q, xj) - prob.mu * bi.eval_laplacian(q, xj));
            rows.finish_row(RowKind::PDE, i, j, prob.f(xj));
        }

        // Value and first-derivative continuity against each distinct neighbor.
        for (int j : nb.members) {
            if (j == i) continue;
            const Point xj = cloud.points[static_cast<std::size_t>(j)];
            const LocalBasis& bj = bases[static_cast<std::size_t>(j)];
            const std::int32_t bj0 = static_cast<std::int32_t>(j) * Q;
            const std::int32_t lo0 = std::min(bi0, bj0);
            const bool i_first = bi0 < bj0;

            auto emit_pair = [&](RowKind kind, auto&& fi, auto&& fj) {
                for (int q = 1; q <= Q; ++q)
                    rows.push(lo0 + q - 1, i_first ? fi(q) : -fj(q));
                for (int q = 1; q <= Q; ++q)
                    rows.push(std::max(bi0, bj0) + q - 1, i_first ? -fj(q) : fi(q));
                rows.finish_row(kind, i, j, 0.0);
            };

            emit_pair(
                RowKind::C0, [&](int q) { return bi.eval(q, xj); },
                [&](int q) { return bj.eval(q, xj); });
            emit_pair(
                RowKind::C1x, [&](int q) { return bi.eval_grad(q, xj).x; },
                [&](int q) { return bj.eval_grad(q, xj).x; });
            if (dim == 2)
                emit_pair(
                    RowKind::C1y, [&](int q) { return bi.eval_grad(q, xj).y; },
                    [&](int q) { return bj.eval_grad(q, xj).y; });
        }

        // One boundary row per ghost site.
        const Point xi = cloud.points[static_cast<std::size_t>(i)];
        int ghost_ord = 0;
        for (const Point& g : nb.ghost_sites) {
            const Point xb = locate_boundary_point(dom, xi, g);
            const Vec2 n = outward_normal(dom, xb);
            const double beta = prob.beta(xb);
            const double gamma = prob.gamma(xb);
            for (int q = 1; q <= Q; ++q)
                rows.push(bi0 + q - 1, beta * bi.eval(q, xb) + gamma * bi.eval_grad(q, xb).dot(n));
            rows.finish_row(RowKind::BC, i, ghost_ord++, prob.g(xb));
        }
    }

    if (sys.rows() == 0) throw std::runtime_error("assemble: empty system");
    return sys;
}

void rescale_rows(RectangularSystem& sys) {
    CsrMatrix& A = sys.A;
    for (int r = 0; r < A.nrows; ++r) {
        double l1 = 0.0;
        const std::int64_t end = A.row_ptr[static_cast<std::size_t>(r) + 1];
        for (std::int64_t k = A.row_ptr[static_cast<std::size_t>(r)]; k < end; ++k)
            l1 += std::abs(A.val[static_cast<std::size_t>(k)]);
        if (l1 == 0.0) {
            const RowTag& t = sys.tags[static_cast<std::size_t>(r)];
            throw std::runtime_error(std::string("rescale_rows: zero row (") +
                                     row_kind_name(t.kind) + ", i=" + std::to_string(t.i) +
                                     ", j=" + std::to_string(t.j) + ")");
        }
        const double w = 1.0 / l1;
        for (std::int64_t k = A.row_ptr[static_cast<std::size_t>(r)]; k < end; ++k)
            A.val[static_cast<std::size_t>(k)] *= w;
        sys.b[static_cast<std::size_t>(r)] *= w;
    }
}

std::pair<double, double> gershgorin_bounds(const CsrMatrix& G) {
    double lmax = -std::numeric_limits<double>::infinity();
    double lmin = std::numeric_limits<double>::infinity();
    for (int r = 0; r < G.nrows; ++r) {
        double diag = 0.0, off = 0.0;
        const std::int64_t end = G.row_ptr[static_cast<std::size_t>(r) + 1];
        for (std::int64_t k = G.row_ptr[static_cast<std::size_t>(r)]; k < end; ++k) {
            const double v = G.val[static_cast<std::size_t>(k)];
            if (G.col[static_cast<std::size_t>(k)] == r)
                diag = v;
            else
                off += std::abs(v);
        }
        lmax = std::max(lmax, diag + off);
        lmin = std::min(lmin, diag - off);
    }
    return {lmax, std::max(0.0, lmin)};
}

double stabilization_epsilon(double lambda_max, double lambda_min, double kappa_max) {
    const double eps = (lambda_max - kappa_max * lambda_min) / (kappa_max - 1.0);
    return std::max(0.0, eps);
}

double stabilization_epsilon(const CsrMatrix& G, double kappa_max) {
    const auto [lmax, lmin] = gershgorin_bounds(G);
    return stabilization_epsilon(lmax, lmin, kappa_max);
}

namespace {

// A column of A with no nonzero leaves its G row without a stored diagonal;
// insert explicit zeros there so the stabilizing shift lands everywhere.
void ensure_diagonal(CsrMatrix& g) {
    bool complete = true;
    for (int r = 0; r < g.nrows && complete; ++r) {
        bool found = false;
        const std::int64_t end = g.row_ptr[static_cast<std::size_t>(r) + 1];
        for (std::int64_t k = g.row_ptr[static_cast<std::size_t>(r)]; k < end && !found; ++k)
            found = g.col[static_cast<std::size_t>(k)] == r;
        complete = found;
    }
    if (complete) return;

    CsrMatrix out;
    out.nrows = g.nrows;
    out.ncols = g.ncols;
    out.row_ptr = {0};
    for (int r = 0; r < g.nrows; ++r) {
        bool found = false;
        const std::int64_t end = g.row_ptr[static_cast<std::size_t>(r) + 1];
        for (std::int64_t k = g.row_ptr[static_cast<std::size_t>(r)]; k < end; ++k) {
            const std::int32_t c = g.col[static_cast<std::size_t>(k)];
            if (!found && c > r) {
                out.col.push_back(r);
                out.val.push_back(0.0);
                found = true;
            }
            if (c == r) found = true;
            out.col.push_back(c);
            out.val.push_back(g.val[static_cast<std::size_t>(k)]);
        }
        if (!found) {
            out.col.push_back(r);
            out.val.push_back(0.0);
        }
        out.row_ptr.push_back(static_cast<std::int64_t>(out.col.size()));
    }
    g = std::move(out);
}

}  // namespace

NormalSystem form_normal(const RectangularSystem& sys, double kappa_max) {
    NormalSystem ns;
    ns.G = ata(sys.A);
    ensure_diagonal(ns.G);
    ns.rhs = multiply_transposed(sys.A, sys.b);
    ns.epsilon = stabilization_epsilon(ns.G, kappa_max);
    if (ns.epsilon > 0.0) {
        for (int r = 0; r < ns.G.nrows; ++r) {
            const std::int64_t end = ns.G.row_ptr[static_cast<std::size_t>(r) + 1];
            for (std::int64_t k = ns.G.row_ptr[static_cast<std::size_t>(r)]; k < end; ++k)
                if (ns.G.col[static_cast<std::size_t>(k)] == r)
                    ns.G.val[static_cast<std::size_t>(k)] += ns.epsilon;
        }
    }
    return ns;
}

void dump_system(const RectangularSystem& sys, std::ostream& matrix_out, std::ostream& rhs_out) {
    matrix_out << "%%MatrixMarket matrix coordinate real general\n";
    matrix_out << sys.rows() << ' ' << sys.cols() << ' ' << sys.A.nnz() << '\n';
    for (int r = 0; r < sys.A.nrows; ++r) {
        const std::int64_t end = sys.A.row_ptr[static_cast<std::size_t>(r) + 1];
        for (std::int64_t k = sys.A.row_ptr[static_cast<std::size_t>(r)]; k < end; ++k)
            matrix_out << r + 1 << ' ' << sys.A.col[static_cast<std::size_t>(k)] + 1 << ' '
                       << sys.A.val[static_cast<std::size_t>(k)] << '\n';
    }
    rhs_out << "%%MatrixMarket matrix array real general\n";
    rhs_out << sys.b.size() << " 1\n";
    for (double v : sys.b) rhs_out << v << '\n';
}

}  // namespace lsqd
