#pragma once

#include <ostream>
#include <vector>

#include "lsqd/grid.hpp"

namespace lsqd {

/// Per-point neighbor set. Members are cloud indices of inside points, owner
/// first; ghost_sites are the centers of adjacent outside cells (or mirror
/// points past a domain-edge face) used to locate boundary evaluation points.
struct Neighborhood {
    int owner = -1;
    std::vector<int> members;
    std::vector<Point> ghost_sites;
    Vec2 extent{0.0, 0.0};
    bool under_resolved = false;

    int eta() const { return static_cast<int>(members.size()); }
};

/// Smallest neighbor count admitting a determined local system: in 2D the
/// ceiling of ((P+1)(P+2)+6)/8; in 1D max(3, P+1).
int min_neighbors(int P, int dim);

/// Layered candidate expansion around inside point i. Candidates are the direct
/// neighbors of current members, sorted counterclockwise starting to the right;
/// the first pass adds every inside candidate, later passes add only what the
/// size or coordinate-independence conditions still require. Gives up (flagging
/// under_resolved) after P+4 passes.
Neighborhood build_neighborhood(int i, const PointCloud& cloud, const Quadtree& tree,
                                const LevelSetDomain& dom, int P);

/// All neighborhoods of a cloud; dispatches on cloud.dim (the tree is ignored
/// for 1D clouds).
std::vector<Neighborhood> build_neighborhoods(const PointCloud& cloud, const Quadtree& tree,
                                              const LevelSetDomain& dom, int P);

std::vector<Neighborhood> build_1d_neighborhoods(const PointCloud& cloud, int P);

/// Weak connectivity of the neighbor graph over all N inside points.
bool connectivity_check(const std::vector<Neighborhood>& all, int N);

/// CSV dump: i, eta, ghost_count, under_resolved.
void dump_neighborhood_csv(const std::vector<Neighborhood>& all, std::ostream& out);

}  // namespace lsqd
