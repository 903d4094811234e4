#pragma once

#include <map>
#include <ostream>
#include <vector>

#include "lsqd/assembly.hpp"

namespace lsqd {

struct ErrorReport {
    std::vector<double> local_abs;  // per inside point
    double linf = 0.0;
};

struct NodeEstimate {
    Point node;
    double estimate = 0.0;
};

struct EstimatorReport {
    std::vector<NodeEstimate> per_node;
    double global = 0.0;
};

struct ConvergenceEntry {
    int splits = 0;
    double h = 0.0;
    double linf = 0.0;
    double estimator_global = 0.0;
    int N = 0;
    double wall_time = 0.0;
};

struct ConvergenceSeries {
    std::vector<ConvergenceEntry> entries;
};

/// Value of the expansion owned by point `owner` at p.
double evaluate_solution(std::span<const double> alpha, const std::vector<LocalBasis>& bases,
                         const Point& p, int owner);

/// Pointwise absolute error of each local expansion at its own center.
ErrorReport compute_errors(const PointCloud& cloud, std::span<const double> alpha,
                           const std::vector<LocalBasis>& bases, const ScalarField& exact);

/// Node-based discontinuity estimator: at every inside leaf corner, the maximum
/// pairwise disagreement of the touching cells' expansions. Corners touched by
/// fewer than two inside cells are skipped.
EstimatorReport error_estimate(const PointCloud& cloud, const Quadtree& tree,
                               std::span<const double> alpha,
                               const std::vector<LocalBasis>& bases,
                               const LevelSetDomain& dom);

/// Least-squares slope of log(error) against log(h); positive means convergence.
double fit_eoc(const ConvergenceSeries& series);
double fit_eoc(const std::vector<double>& h, const std::vector<double>& err);

void dump_solution_csv(const PointCloud& cloud, std::span<const double> alpha,
                       const std::vector<LocalBasis>& bases, const ScalarField& exact,
                       std::ostream& out);
void dump_estimator_csv(const EstimatorReport& est, std::ostream& out);

}  // namespace lsqd
