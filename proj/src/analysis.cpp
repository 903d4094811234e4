#include "lsqd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <unordered_map>

namespace lsqd {

double evaluate_solution(std::span<const double> alpha, const std::vector<LocalBasis>& bases,
                         const Point& p, int owner) {
    const LocalBasis& b = bases[static_cast<std::size_t>(owner)];
    const int Q = b.Q();
    const std::size_t base = static_cast<std::size_t>(owner) * static_cast<std::size_t>(Q);
    double s = 0.0;
    for (int q = 1; q <= Q; ++q) s += alpha[base + static_cast<std::size_t>(q) - 1] * b.eval(q, p);
    return s;
}

ErrorReport compute_errors(const PointCloud& cloud, std::span<const double> alpha,
                           const std::vector<LocalBasis>& bases, const ScalarField& exact) {
    ErrorReport rep;
    rep.local_abs.reserve(static_cast<std::size_t>(cloud.N));
    for (int i = 0; i < cloud.N; ++i) {
        const Point xi = cloud.points[static_cast<std::size_t>(i)];
        const double e = std::abs(exact(xi) - evaluate_solution(alpha, bases, xi, i));
        rep.local_abs.push_back(e);
        rep.linf = std::max(rep.linf, e);
    }
    return rep;
}

namespace {

struct PointKey {
    std::uint64_t bx, by;
    bool operator==(const PointKey&) const = default;
};
struct PointKeyHash {
    std::size_t operator()(const PointKey& k) const {
        return std::hash<std::uint64_t>()(k.bx * 0x9E3779B97F4A7C15ULL ^ k.by);
    }
};

PointKey key_of(const Point& p) {
    PointKey k{};
    std::memcpy(&k.bx, &p.x, sizeof(double));
    std::memcpy(&k.by, &p.y, sizeof(double));
    return k;
}

}  // namespace

EstimatorReport error_estimate(const PointCloud& cloud, const Quadtree& tree,
                               std::span<const double> alpha,
                               const std::vector<LocalBasis>& bases,
                               [[maybe_unused]] const LevelSetDomain& dom) {
    if (cloud.dim != 2)
        throw std::invalid_argument("error_estimate: node-based estimator is 2D only");

    // Corner nodes of inside leaves, deduplicated; cell centers are dyadic so
    // shared corners compare bitwise equal. A boundary cell's outward corner
    // may lie outside the zero level set; it still carries the extrapolated
    // disagreement signal, so it stays in the node set.
    std::vector<Point> nodes;
    std::unordered_map<PointKey, int, PointKeyHash> seen;
    for (int i = 0; i < cloud.N; ++i) {
        const QuadtreeCell& c = tree.cell(cloud.cell_id[static_cast<std::size_t>(i)]);
        for (int sx = -1; sx <= 1; sx += 2)
            for (int sy = -1; sy <= 1; sy += 2) {
                const Point corner{c.center.x + sx * c.half.x, c.center.y + sy * c.half.y};
                if (seen.emplace(key_of(corner), static_cast<int>(nodes.size())).second)
                    nodes.push_back(corner);
            }
    }

    EstimatorReport rep;
    const double delta = 1e-3 * tree.min_leaf_half();
    std::vector<int> touching;
    for (const Point& node : nodes) {
        touching.clear();
        for (int sx = -1; sx <= 1; sx += 2)
            for (int sy = -1; sy <= 1; sy += 2) {
                const int id = tree.locate({node.x + sx * delta, node.y + sy * delta});
                if (id < 0) continue;
                const int pi = tree.cell(id).leaf_index;
                if (pi < 0) continue;
                if (std::find(touching.begin(), touching.end(), pi) == touching.end())
                    touching.push_back(pi);
            }
        if (touching.size() < 2) continue;
        double est = 0.0;
        for (std::size_t a = 0; a < touching.size(); ++a)
            for (std::size_t b = a + 1; b < touching.size(); ++b) {
                const double ua = evaluate_solution(alpha, bases, node, touching[a]);
                const double ub = evaluate_solution(alpha, bases, node, touching[b]);
                est = std::max(est, std::abs(ua - ub));
            }
        rep.per_node.push_back({node, est});
        rep.global = std::max(rep.global, est);
    }
    return rep;
}

double fit_eoc(const std::vector<double>& h, const std::vector<double>& err) {
    if (h.size() < 2) throw std::invalid_argument("fit_eoc: need at least two entries");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) {
        if (!(err[k] > 0.0)) throw std::invalid_argument("fit_eoc: errors must be positive");
        const double x = std::log(h[k]);
        const double y = std::log(err[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit_eoc: degenerate abscissae");
    return (n * sxy - sx * sy) / denom;
}

double fit_eoc(const ConvergenceSeries& series) {
    std::vector<double> h, err;
    for (const ConvergenceEntry& e : series.entries) {
        h.push_back(e.h);
        err.push_back(e.linf);
    }
    return fit_eoc(h, err);
}

void dump_solution_csv(const PointCloud& cloud, std::span<const double> alpha,
                       const std::vector<LocalBasis>& bases, const ScalarField& exact,
                       std::ostream& out) {
    out << "x,y,u_num,u_exact,abs_err\n";
    for (int i = 0; i < cloud.N; ++i) {
        const Point xi = cloud.points[static_cast<std::size_t>(i)];
        const double un = evaluate_solution(alpha, bases, xi, i);
        const double ue = exact(xi);
        out << xi.x << ',' << xi.y << ',' << un << ',' << ue << ',' << std::abs(un - ue) << '\n';
    }
}

void dump_estimator_csv(const EstimatorReport& est, std::ostream& out) {
    out << "x,y,est\n";
    for (const NodeEstimate& n : est.per_node)
        out << n.node.x << ',' << n.node.y << ',' << n.estimate << '\n';
}

}  // namespace lsqd
