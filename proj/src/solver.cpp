#include "lsqd/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace lsqd {

namespace {

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

// Spot-check symmetry on a handful of sampled entries.
void check_symmetric(const CsrMatrix& g) {
    auto entry = [&](int r, std::int32_t c) {
        const std::int64_t end = g.row_ptr[static_cast<std::size_t>(r) + 1];
        for (std::int64_t k = g.row_ptr[static_cast<std::size_t>(r)]; k < end; ++k)
            if (g.col[static_cast<std::size_t>(k)] == c) return g.val[static_cast<std::size_t>(k)];
        return 0.0;
    };
    const int step = std::max(1, g.nrows / 16);
    for (int r = 0; r < g.nrows; r += step) {
        const std::int64_t end = g.row_ptr[static_cast<std::size_t>(r) + 1];
        for (std::int64_t k = g.row_ptr[static_cast<std::size_t>(r)]; k < end; ++k) {
            const std::int32_t c = g.col[static_cast<std::size_t>(k)];
            const double v = g.val[static_cast<std::size_t>(k)];
            const double vt = entry(c, static_cast<std::int32_t>(r));
            const double scale = std::max({std::abs(v), std::abs(vt), 1e-300});
            if (std::abs(v - vt) > 1e-10 * scale)
                throw std::runtime_error("solve: matrix is not symmetric");
            break;  // one off-diagonal sample per sampled row
        }
    }
}

}  // namespace

bool IncompleteCholesky::factor(const CsrMatrix& G, double shift) {
    const int n = G.nrows;
    L.nrows = n;
    L.ncols = n;
    L.row_ptr.assign(1, 0);
    L.col.clear();
    L.val.clear();
    L.row_ptr.reserve(static_cast<std::size_t>(n) + 1);
    L.col.reserve(static_cast<std::size_t>(G.nnz() / 2 + n));
    L.val.reserve(static_cast<std::size_t>(G.nnz() / 2 + n));

    std::vector<double> work(static_cast<std::size_t>(n), 0.0);
    std::vector<std::int32_t> stamp(static_cast<std::size_t>(n), -1);
    std::vector<double> diag(static_cast<std::size_t>(n), 0.0);

    for (int r = 0; r < n; ++r) {
        // Scatter the lower-triangular part of row r of G.
        std::int64_t begin = G.row_ptr[static_cast<std::size_t>(r)];
        std::int64_t end = G.row_ptr[static_cast<std::size_t>(r) + 1];
        for (std::int64_t k = begin; k < end; ++k) {
            const std::int32_t c = G.col[static_cast<std::size_t>(k)];
            if (c > r) break;  // columns sorted
            stamp[static_cast<std::size_t>(c)] = r;
            work[static_cast<std::size_t>(c)] = G.val[static_cast<std::size_t>(k)];
        }
        if (stamp[static_cast<std::size_t>(r)] != r) {
            stamp[static_cast<std::size_t>(r)] = r;
            work[static_cast<std::size_t>(r)] = 0.0;
        }
        work[static_cast<std::size_t>(r)] += shift;

        const std::int64_t lrow_begin = L.row_ptr[static_cast<std::size_t>(r)];
        // Eliminate against prior rows in pattern order.
        for (std::int64_t k = begin; k < end; ++k) {
            const std::int32_t j = G.col[static_cast<std::size_t>(k)];
            if (j >= r) break;
            double s = work[static_cast<std::size_t>(j)];
            // Subtract sum over t < j of L(r,t) L(j,t) restricted to the pattern.
            const std::int64_t jb = L.row_ptr[static_cast<std::size_t>(j)];
            const std::int64_t je = L.row_ptr[static_cast<std::size_t>(j) + 1] - 1;  // skip diag
            for (std::int64_t t = jb; t < je; ++t) {
                const std::int32_t tc = L.col[static_cast<std::size_t>(t)];
                if (stamp[static_cast<std::size_t>(tc)] == r)
                    s -= L.val[static_cast<std::size_t>(t)] * work[static_cast<std::size_t>(tc)];
            }
            const double ljj = diag[static_cast<std::size_t>(j)];
            const double lrj = s / ljj;
            work[static_cast<std::size_t>(j)] = lrj;
            L.col.push_back(j);
            L.val.push_back(lrj);
        }
        // Diagonal pivot.
        double d = work[static_cast<std::size_t>(r)];
        for (std::int64_t t = lrow_begin; t < static_cast<std::int64_t>(L.val.size()); ++t)
            d -= L.val[static_cast<std::size_t>(t)] * L.val[static_cast<std::size_t>(t)];
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        const double lrr = std::sqrt(d);
        diag[static_cast<std::size_t>(r)] = lrr;
        L.col.push_back(static_cast<std::int32_t>(r));
        L.val.push_back(lrr);
        L.row_ptr.push_back(static_cast<std::int64_t>(L.col.size()));
    }
    return true;
}

void IncompleteCholesky::apply(std::span<const double> r, std::span<double> z,
                               std::span<double> work) const {
    const int n = L.nrows;
    // Forward solve L y = r (diagonal is the last entry of each row).
    for (int k = 0; k < n; ++k) {
        double s = r[static_cast<std::size_t>(k)];
        const std::int64_t end = L.row_ptr[static_cast<std::size_t>(k) + 1] - 1;
        for (std::int64_t t = L.row_ptr[static_cast<std::size_t>(k)]; t < end; ++t)
            s -= L.val[static_cast<std::size_t>(t)] *
                 work[static_cast<std::size_t>(L.col[static_cast<std::size_t>(t)])];
        work[static_cast<std::size_t>(k)] = s / L.val[static_cast<std::size_t>(end)];
    }
    // Backward solve L^T z = y by scattering columns.
    for (int k = 0; k < n; ++k) z[static_cast<std::size_t>(k)] = work[static_cast<std::size_t>(k)];
    for (int k = n - 1; k >= 0; --k) {
        const std::int64_t end = L.row_ptr[static_cast<std::size_t>(k) + 1] - 1;
        const double zk = z[static_cast<std::size_t>(k)] / L.val[static_cast<std::size_t>(end)];
        z[static_cast<std::size_t>(k)] = zk;
        for (std::int64_t t = L.row_ptr[static_cast<std::size_t>(k)]; t < end; ++t)
            z[static_cast<std::size_t>(L.col[static_cast<std::size_t>(t)])] -=
                L.val[static_cast<std::size_t>(t)] * zk;
    }
}

SolveReport solve(const NormalSystem& ns, const SolveOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    const CsrMatrix& G = ns.G;
    const int n = G.nrows;
    check_symmetric(G);

    SolveReport rep;
    rep.epsilon_used = ns.epsilon;
    rep.alpha.assign(static_cast<std::size_t>(n), 0.0);

    // Preconditioner setup.
    IncompleteCholesky ic;
    bool have_ic = false;
    std::vector<double> jacobi_inv;
    if (opts.preconditioner == Preconditioner::incomplete_cholesky) {
        double max_diag = 0.0;
        for (int r = 0; r < n; ++r) {
            const std::int64_t end = G.row_ptr[static_cast<std::size_t>(r) + 1];
            for (std::int64_t k = G.row_ptr[static_cast<std::size_t>(r)]; k < end; ++k)
                if (G.col[static_cast<std::size_t>(k)] == r)
                    max_diag = std::max(max_diag, std::abs(G.val[static_cast<std::size_t>(k)]));
        }
        double shift = 0.0;
        have_ic = ic.factor(G, shift);
        for (int attempt = 0; !have_ic && attempt < 4; ++attempt) {
            shift = (shift == 0.0) ? 1e-6 * max_diag : shift * 10.0;
            have_ic = ic.factor(G, shift);
        }
    }
    if (!have_ic && opts.preconditioner != Preconditioner::none) {
        jacobi_inv.assign(static_cast<std::size_t>(n), 1.0);
        for (int r = 0; r < n; ++r) {
            const std::int64_t end = G.row_ptr[static_cast<std::size_t>(r) + 1];
            for (std::int64_t k = G.row_ptr[static_cast<std::size_t>(r)]; k < end; ++k)
                if (G.col[static_cast<std::size_t>(k)] == r) {
                    const double d = G.val[static_cast<std::size_t>(k)];
                    if (d > 0.0) jacobi_inv[static_cast<std::size_t>(r)] = 1.0 / d;
                }
        }
    }

    std::vector<double> r = ns.rhs;
    std::vector<double> z(static_cast<std::size_t>(n));
    std::vector<double> p(static_cast<std::size_t>(n));
    std::vector<double> q(static_cast<std::size_t>(n));
    std::vector<double> work(static_cast<std::size_t>(n));

    const double rhs_inf = inf_norm(ns.rhs);
    const double target = std::max(opts.abs_tol, opts.rel_tol * rhs_inf);

    auto precondition = [&](std::span<const double> in, std::span<double> out) {
        if (have_ic) {
            ic.apply(in, out, work);
        } else if (!jacobi_inv.empty()) {
            for (std::size_t k = 0; k < in.size(); ++k) out[k] = in[k] * jacobi_inv[k];
        } else {
            std::copy(in.begin(), in.end(), out.begin());
        }
    };

    double res_inf = inf_norm(r);
    if (res_inf <= target) {
        rep.converged = true;
        rep.final_residual_inf = res_inf;
        rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return rep;
    }

    precondition(r, z);
    p = z;
    double rz = dot(r, z);

    for (int it = 1; it <= opts.max_iters; ++it) {
        G.multiply(p, q);
        const double pq = dot(p, q);
        if (!std::isfinite(pq) || pq == 0.0) throw std::runtime_error("divergence");
        const double alpha = rz / pq;
        for (std::size_t k = 0; k < r.size(); ++k) {
            rep.alpha[k] += alpha * p[k];
            r[k] -= alpha * q[k];
        }
        rep.iterations = it;
        res_inf = inf_norm(r);
        if (!std::isfinite(res_inf)) throw std::runtime_error("divergence");

        if (it % 100 == 0) {
            G.multiply(rep.alpha, q);
            rep.energy_samples.emplace_back(it, 0.5 * dot(rep.alpha, q) - dot(rep.alpha, ns.rhs));
        }

        if (res_inf <= target) {
            // Recompute the true residual; restart if the recurrence drifted.
            G.multiply(rep.alpha, q);
            for (std::size_t k = 0; k < r.size(); ++k) r[k] = ns.rhs[k] - q[k];
            res_inf = inf_norm(r);
            if (res_inf <= target) {
                rep.converged = true;
                break;
            }
            precondition(r, z);
            p = z;
            rz = dot(r, z);
            continue;
        }

        precondition(r, z);
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t k = 0; k < p.size(); ++k) p[k] = z[k] + beta * p[k];
    }

    if (!rep.converged) {
        // Report the true residual, not the recurrence value.
        G.multiply(rep.alpha, q);
        for (std::size_t k = 0; k < r.size(); ++k) r[k] = ns.rhs[k] - q[k];
        res_inf = inf_norm(r);
    }
    rep.final_residual_inf = res_inf;
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

ConditionEstimate condition_estimate(const NormalSystem& ns) {
    ConditionEstimate est;
    const auto [lmax, lmin] = gershgorin_bounds(ns.G);
    est.gershgorin_max = lmax;
    est.gershgorin_min = lmin;

    const int n = ns.G.nrows;
    std::vector<double> v(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> w(static_cast<std::size_t>(n));
    double lambda = 0.0;
    for (int it = 0; it < 50; ++it) {
        ns.G.multiply(v, w);
        const double nw = std::sqrt(dot(w, w));
        if (nw == 0.0) break;
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = w[k] / nw;
        lambda = nw;
    }
    est.power_lambda_max = lambda;
    return est;
}

}  // namespace lsqd
