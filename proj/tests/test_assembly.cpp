#include <doctest.h>

#include <cmath>

#include "lsqd/assembly.hpp"
#include "lsqd/problems.hpp"

#ifdef LSQD_HAVE_EIGEN
#include <Eigen/Dense>
#endif

using namespace lsqd;

namespace {

// Stacked coefficient vector of a polynomial's local expansions: the Taylor
// coefficients of u around each center, rescaled to the local basis.
std::vector<double> expand_polynomial(const Poly2& u, const PointCloud& cloud,
                                      const std::vector<LocalBasis>& bases) {
    const int Q = bases.front().Q();
    std::vector<double> alpha(static_cast<std::size_t>(Q) * static_cast<std::size_t>(cloud.N));
    for (int i = 0; i < cloud.N; ++i) {
        const LocalBasis& b = bases[static_cast<std::size_t>(i)];
        for (int q = 1; q <= Q; ++q) {
            const auto [px, py] = b.exponents[static_cast<std::size_t>(q - 1)];
            Poly2 d = u;
            for (int k = 0; k < px; ++k) d = d.dx();
            for (int k = 0; k < py; ++k) d = d.dy();
            double fact = 1.0;
            for (int k = 2; k <= px; ++k) fact *= k;
            for (int k = 2; k <= py; ++k) fact *= k;
            alpha[static_cast<std::size_t>(i) * Q + q - 1] = d.eval(b.center) / fact *
                                                             std::pow(b.scale.x, px) *
                                                             std::pow(b.scale.y, py);
        }
    }
    return alpha;
}

double residual_inf(const RectangularSystem& sys, const std::vector<double>& alpha) {
    std::vector<double> r(static_cast<std::size_t>(sys.rows()));
    sys.A.multiply(alpha, r);
    double m = 0.0;
    for (int k = 0; k < sys.rows(); ++k)
        m = std::max(m, std::abs(r[static_cast<std::size_t>(k)] - sys.b[static_cast<std::size_t>(k)]));
    return m;
}

struct SmallCase {
    Quadtree tree;
    PointCloud cloud;
    std::vector<Neighborhood> nbs;
    std::vector<LocalBasis> bases;
};

SmallCase make_case(const LevelSetDomain& dom, int depth, int P) {
    GridConfig cfg;
    cfg.base_depth = depth;
    auto [tree, cloud] = build_quadtree(dom, cfg);
    auto nbs = build_neighborhoods(cloud, tree, dom, P);
    auto bases = build_bases(cloud, nbs, P);
    return {std::move(tree), std::move(cloud), std::move(nbs), std::move(bases)};
}

}  // namespace

TEST_SUITE("assembly") {

TEST_CASE("row counts follow eta(d+2)-d-1 plus boundary rows") {
    const LevelSetDomain sq = LevelSetDomain::square();
    SmallCase c = make_case(sq, 3, 2);
    const ProblemSpec prob = manufacture(ExactSolution::exp_xy(), 1.0, 1.0, BcKind::dirichlet, sq);
    const RectangularSystem sys = assemble(c.cloud, c.nbs, c.bases, sq, prob);

    // Count rows per owner from the tags and compare with the formula.
    std::vector<int> prow(static_cast<std::size_t>(c.cloud.N), 0);
    std::vector<int> brow(static_cast<std::size_t>(c.cloud.N), 0);
    for (const RowTag& t : sys.tags) {
        if (t.kind == RowKind::BC)
            ++brow[static_cast<std::size_t>(t.i)];
        else
            ++prow[static_cast<std::size_t>(t.i)];
    }
    int expected = 0;
    for (int i = 0; i < c.cloud.N; ++i) {
        const int eta = c.nbs[static_cast<std::size_t>(i)].eta();
        CHECK(prow[static_cast<std::size_t>(i)] == eta * 4 - 3);
        CHECK(brow[static_cast<std::size_t>(i)] ==
              static_cast<int>(c.nbs[static_cast<std::size_t>(i)].ghost_sites.size()));
        expected += eta * 4 - 3 +
                    static_cast<int>(c.nbs[static_cast<std::size_t>(i)].ghost_sites.size());
    }
    CHECK(sys.rows() == expected);

    // A ghost-free interior neighborhood with eta=5 contributes 17 rows.
    for (int i = 0; i < c.cloud.N; ++i)
        if (c.nbs[static_cast<std::size_t>(i)].ghost_sites.empty() &&
            c.nbs[static_cast<std::size_t>(i)].eta() == 5)
            CHECK(prow[static_cast<std::size_t>(i)] == 17);
}

TEST_CASE("rows touch only the two column blocks of their pair") {
    const LevelSetDomain octo = LevelSetDomain::octofoil();
    SmallCase c = make_case(octo, 3, 3);
    const ProblemSpec prob = manufacture(ExactSolution::exp_xy(), 1.0, 1.0, BcKind::robin, octo);
    const RectangularSystem sys = assemble(c.cloud, c.nbs, c.bases, octo, prob);
    const int Q = sys.Q;
    for (int r = 0; r < sys.rows(); ++r) {
        const RowTag& t = sys.tags[static_cast<std::size_t>(r)];
        for (std::int64_t k = sys.A.row_ptr[static_cast<std::size_t>(r)];
             k < sys.A.row_ptr[static_cast<std::size_t>(r) + 1]; ++k) {
            const int block = sys.A.col[static_cast<std::size_t>(k)] / Q;
            const bool ok = block == t.i || (t.kind != RowKind::BC && block == t.j);
            CHECK(ok);
        }
    }
}

TEST_CASE("constant solutions satisfy every row exactly") {
    const LevelSetDomain sq = LevelSetDomain::square();
    SmallCase c = make_case(sq, 3, 2);
    const double value = 2.5;
    ProblemSpec prob;
    prob.a = 1.0;
    prob.mu = 3.0;
    prob.beta = [](const Point&) { return 1.0; };
    prob.gamma = [](const Point&) { return 0.0; };
    prob.f = [&](const Point&) { return value; };  // a*c - mu*0
    prob.g = [&](const Point&) { return value; };
    const RectangularSystem sys = assemble(c.cloud, c.nbs, c.bases, sq, prob);

    std::vector<double> alpha(static_cast<std::size_t>(sys.cols()), 0.0);
    for (int i = 0; i < c.cloud.N; ++i)
        alpha[static_cast<std::size_t>(i) * static_cast<std::size_t>(sys.Q)] = value;
    CHECK(residual_inf(sys, alpha) < 1e-13);
}

TEST_CASE("polynomial solutions of degree P give zero residual after rescaling") {
    for (int P : {2, 3}) {
        const LevelSetDomain dom = LevelSetDomain::octofoil();
        SmallCase c = make_case(dom, 3, P);
        const Poly2 u = Poly2::seeded(P, 17);
        const ProblemSpec prob =
            manufacture(ExactSolution::polynomial(u), 1.0, 1.0, BcKind::robin, dom);
        RectangularSystem sys = assemble(c.cloud, c.nbs, c.bases, dom, prob);
        rescale_rows(sys);
        const std::vector<double> alpha = expand_polynomial(u, c.cloud, c.bases);
        CHECK(residual_inf(sys, alpha) < 1e-12);
    }
}

TEST_CASE("1d dirichlet endpoint rows reproduce the boundary data") {
    const LevelSetDomain iv = LevelSetDomain::interval(0.0, 1.0);
    const PointCloud cloud = build_1d_cloud(10, 3, 0, 0.0, 1.0);
    Quadtree dummy(iv.bounding_box);
    const auto nbs = build_1d_neighborhoods(cloud, 2);
    const auto bases = build_bases(cloud, nbs, 2);
    ProblemSpec prob = manufacture(ExactSolution::sincos7_1d(), 0.0, 1.0, BcKind::dirichlet, iv);
    const RectangularSystem sys = assemble(cloud, nbs, bases, iv, prob);

    // Boundary rows: beta=1, gamma=0, so row values are basis evaluations at
    // the endpoint and the rhs is g there.
    bool saw_left = false;
    for (int r = 0; r < sys.rows(); ++r) {
        const RowTag& t = sys.tags[static_cast<std::size_t>(r)];
        if (t.kind != RowKind::BC || t.i != 0) continue;
        saw_left = true;
        const LocalBasis& b = bases[0];
        std::size_t k = static_cast<std::size_t>(sys.A.row_ptr[static_cast<std::size_t>(r)]);
        for (int q = 1; q <= sys.Q; ++q) {
            const double want = b.eval(q, {0.0, 0.0});
            if (want == 0.0) continue;
            CHECK(sys.A.col[k] == (q - 1));
            CHECK(sys.A.val[k] == doctest::Approx(want));
            ++k;
        }
        CHECK(sys.b[static_cast<std::size_t>(r)] ==
              doctest::Approx(std::sin(0.0) + std::cos(0.0)));
    }
    CHECK(saw_left);

    // Row-count identity in 1D: eta(d+2)-d-1 = 3 eta - 2 plus boundary rows.
    std::vector<int> prow(static_cast<std::size_t>(cloud.N), 0);
    for (const RowTag& t : sys.tags)
        if (t.kind != RowKind::BC) ++prow[static_cast<std::size_t>(t.i)];
    for (int i = 0; i < cloud.N; ++i)
        CHECK(prow[static_cast<std::size_t>(i)] == 3 * nbs[static_cast<std::size_t>(i)].eta() - 2);
}

TEST_CASE("row rescaling normalizes L1 norms and reports zero rows") {
    RectangularSystem sys;
    sys.Q = 1;
    sys.A.nrows = 2;
    sys.A.ncols = 2;
    sys.A.row_ptr = {0, 2, 4};
    sys.A.col = {0, 1, 0, 1};
    sys.A.val = {3.0, -1.0, 0.75, -0.25};
    sys.b = {8.0, 2.0};
    sys.tags = {{RowKind::PDE, 0, 0}, {RowKind::PDE, 1, 1}};
    rescale_rows(sys);
    CHECK(sys.A.val[0] == doctest::Approx(0.75));
    CHECK(sys.A.val[1] == doctest::Approx(-0.25));
    CHECK(sys.b[0] == doctest::Approx(2.0));
    // Already-normalized rows are unchanged.
    CHECK(sys.A.val[2] == doctest::Approx(0.75));
    CHECK(sys.A.val[3] == doctest::Approx(-0.25));
    CHECK(sys.b[1] == doctest::Approx(2.0));

    RectangularSystem zero;
    zero.Q = 1;
    zero.A.nrows = 1;
    zero.A.ncols = 1;
    zero.A.row_ptr = {0, 0};
    zero.b = {1.0};
    zero.tags = {{RowKind::C0, 3, 7}};
    CHECK_THROWS_WITH(rescale_rows(zero), "rescale_rows: zero row (C0, i=3, j=7)");
}

TEST_CASE("stabilization epsilon from Gershgorin bounds") {
    // Paper-scale bounds.
    const double eps = stabilization_epsilon(100.0, 0.0, 1e40);
    CHECK(eps == doctest::Approx(1e-38).epsilon(0.01));

    // Identity: bracket collapses to [1,1], shift clamps to zero.
    CsrMatrix id;
    id.nrows = id.ncols = 3;
    id.row_ptr = {0, 1, 2, 3};
    id.col = {0, 1, 2};
    id.val = {1.0, 1.0, 1.0};
    CHECK(stabilization_epsilon(id, 1e40) == 0.0);
    const auto [lmax, lmin] = gershgorin_bounds(id);
    CHECK(lmax == 1.0);
    CHECK(lmin == 1.0);

    // diag(4, 1): exact eigenvalues, negative formula value clamps to zero.
    CsrMatrix d;
    d.nrows = d.ncols = 2;
    d.row_ptr = {0, 1, 2};
    d.col = {0, 1};
    d.val = {4.0, 1.0};
    const auto [dmax, dmin] = gershgorin_bounds(d);
    CHECK(dmax == 4.0);
    CHECK(dmin == 1.0);
    CHECK(stabilization_epsilon(d, 1e40) == 0.0);
}

#ifdef LSQD_HAVE_EIGEN
TEST_CASE("gershgorin bounds bracket true eigenvalues") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const int n = 12;
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        CsrMatrix g;
        g.nrows = g.ncols = n;
        g.row_ptr = {0};
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) {
                double v = 0.0;
                if (r == c) {
                    v = 2.0 + unit_double(splitmix64(seed * 100 + static_cast<std::uint64_t>(r)));
                } else {
                    const auto lo = static_cast<std::uint64_t>(std::min(r, c));
                    const auto hi = static_cast<std::uint64_t>(std::max(r, c));
                    const std::uint64_t h = splitmix64(seed ^ (lo * 131 + hi));
                    if (unit_double(h) < 0.3) v = 0.2 * (2 * unit_double(splitmix64(h)) - 1);
                }
                if (v != 0.0) {
                    m(r, c) = v;
                    g.col.push_back(c);
                    g.val.push_back(v);
                }
            }
            g.row_ptr.push_back(static_cast<std::int64_t>(g.col.size()));
        }
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
        const auto [lmax, lmin] = gershgorin_bounds(g);
        CHECK(lmax >= es.eigenvalues().maxCoeff() - 1e-12);
        CHECK(lmin <= std::max(0.0, es.eigenvalues().minCoeff()) + 1e-12);
    }
}
#endif

TEST_CASE("form_normal assembles the stabilized system") {
    RectangularSystem sys;
    sys.Q = 1;
    sys.A.nrows = 3;
    sys.A.ncols = 2;
    sys.A.row_ptr = {0, 1, 2, 4};
    sys.A.col = {0, 1, 0, 1};
    sys.A.val = {1.0, 2.0, 1.0, 1.0};
    sys.b = {1.0, 2.0, 3.0};
    sys.tags.assign(3, {RowKind::PDE, 0, 0});
    const NormalSystem ns = form_normal(sys, 1e40);
    // A^T A = [[2, 1], [1, 5]]; Gershgorin keeps it unshifted.
    CHECK(ns.epsilon == 0.0);
    REQUIRE(ns.G.nnz() == 4);
    CHECK(ns.G.val[0] == doctest::Approx(2.0));
    CHECK(ns.G.val[1] == doctest::Approx(1.0));
    CHECK(ns.G.val[2] == doctest::Approx(1.0));
    CHECK(ns.G.val[3] == doctest::Approx(5.0));
    CHECK(ns.rhs[0] == doctest::Approx(4.0));
    CHECK(ns.rhs[1] == doctest::Approx(7.0));
}

}  // TEST_SUITE
