#include "lsqd/neighborhood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "lsqd/basis.hpp"

namespace lsqd {

int min_neighbors(int P, int dim) {
    if (dim == 1) return std::max(3, P + 1);
    const int q2 = (P + 1) * (P + 2) + 6;
    return (q2 + 7) / 8;
}

namespace {

// Distinct-coordinate bookkeeping for the independence condition. Coordinates
// closer than tol count as equal.
class CoordSet {
  public:
    explicit CoordSet(double tol) : tol_(tol) {}

    bool contains(double c) const {
        auto it = std::lower_bound(vals_.begin(), vals_.end(), c - tol_);
        return it != vals_.end() && std::abs(*it - c) <= tol_;
    }

    void insert(double c) {
        if (contains(c)) return;
        vals_.insert(std::upper_bound(vals_.begin(), vals_.end(), c), c);
    }

    int size() const { return static_cast<int>(vals_.size()); }

  private:
    double tol_;
    std::vector<double> vals_;
};

struct Candidate {
    int cell_id;       // -1 for mirror ghost sites
    Point site;        // cell center or mirror point
    double angle;      // ccw angle from +x around the owner
    double dist2;
};

}  // namespace

Neighborhood build_neighborhood(int i, const PointCloud& cloud, const Quadtree& tree,
                                const LevelSetDomain& dom, int P) {
    if (i < 0 || i >= cloud.N || !cloud.inside[static_cast<std::size_t>(i)])
        throw std::invalid_argument("build_neighborhood: point is not inside the domain");

    const Point xi = cloud.points[static_cast<std::size_t>(i)];
    const double coord_tol = 1e-9 * dom.bounding_box.width();
    const int eta_min = min_neighbors(P, 2);
    const int max_passes = P + 4;

    Neighborhood nb;
    nb.owner = i;
    nb.members.push_back(i);

    CoordSet xs(coord_tol), ys(coord_tol);
    xs.insert(xi.x);
    ys.insert(xi.y);

    std::unordered_set<int> member_cells{cloud.cell_id[static_cast<std::size_t>(i)]};
    std::unordered_set<int> ghost_cells;
    std::unordered_set<std::uint64_t> mirror_keys;  // (cell_id, dir) already mirrored

    auto size_met = [&] { return nb.eta() >= eta_min; };
    auto indep_met_x = [&] { return xs.size() >= P + 1; };
    auto indep_met_y = [&] { return ys.size() >= P + 1; };
    auto all_met = [&] { return size_met() && indep_met_x() && indep_met_y(); };

    int pass = 0;
    while (!all_met() && pass < max_passes) {
        ++pass;
        // Collect direct neighbors of the current members (snapshot of this layer).
        std::vector<Candidate> cands;
        std::unordered_set<int> seen_this_pass;
        const std::vector<int> snapshot = nb.members;
        for (int m : snapshot) {
            const int mc = cloud.cell_id[static_cast<std::size_t>(m)];
            for (Dir dir : kDirsCcw) {
                const auto n = direct_neighbor(tree, mc, dir);
                if (n) {
                    const int id = *n;
                    if (member_cells.count(id) || ghost_cells.count(id) ||
                        seen_this_pass.count(id))
                        continue;
                    seen_this_pass.insert(id);
                    const Point c = tree.cell(id).center;
                    cands.push_back({id, c, 0.0, 0.0});
                } else {
                    // The probe exited the root box: the domain edge is the
                    // interface here, so mirror the cell across the face and
                    // keep the image as a ghost site.
                    const std::uint64_t key =
                        (static_cast<std::uint64_t>(mc) << 2) | static_cast<std::uint64_t>(dir);
                    if (mirror_keys.count(key)) continue;
                    mirror_keys.insert(key);
                    const QuadtreeCell& cell = tree.cell(mc);
                    Point g = cell.center;
                    switch (dir) {
                        case Dir::plus_x: g.x += 2 * cell.half.x; break;
                        case Dir::minus_x: g.x -= 2 * cell.half.x; break;
                        case Dir::plus_y: g.y += 2 * cell.half.y; break;
                        case Dir::minus_y: g.y -= 2 * cell.half.y; break;
                    }
                    if (dom.value(g) >= 0.0) nb.ghost_sites.push_back(g);
                }
            }
        }

        for (Candidate& c : cands) {
            const Vec2 d = c.site - xi;
            double a = std::atan2(d.y, d.x);
            if (a < 0.0) a += 2.0 * std::acos(-1.0);
            c.angle = a;
            c.dist2 = d.dot(d);
        }
        std::sort(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
            if (a.angle != b.angle) return a.angle < b.angle;
            if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
            return tree.cell(a.cell_id).path < tree.cell(b.cell_id).path;
        });

        for (const Candidate& c : cands) {
            const QuadtreeCell& cell = tree.cell(c.cell_id);
            if (cell.leaf_index < 0) {
                ghost_cells.insert(c.cell_id);
                nb.ghost_sites.push_back(c.site);
                continue;
            }
            bool add = false;
            if (pass == 1) {
                add = true;
            } else if (!size_met()) {
                add = true;
            } else {
                if (!indep_met_x() && !xs.contains(c.site.x)) add = true;
                if (!indep_met_y() && !ys.contains(c.site.y)) add = true;
            }
            if (add) {
                nb.members.push_back(cell.leaf_index);
                member_cells.insert(c.cell_id);
                xs.insert(c.site.x);
                ys.insert(c.site.y);
            }
        }
    }

    nb.under_resolved = !all_met();

    for (int m : nb.members) {
        const Point xm = cloud.points[static_cast<std::size_t>(m)];
        nb.extent.x = std::max(nb.extent.x, std::abs(xm.x - xi.x));
        nb.extent.y = std::max(nb.extent.y, std::abs(xm.y - xi.y));
    }
    // Degenerate (under-resolved) neighborhoods can collapse in a direction;
    // fall back to the owner's cell half-width so basis scales stay positive.
    const Vec2 h = cloud.cell_extent[static_cast<std::size_t>(i)];
    if (!(nb.extent.x > 0.0)) nb.extent.x = h.x;
    if (!(nb.extent.y > 0.0)) nb.extent.y = h.y;
    return nb;
}

std::vector<Neighborhood> build_1d_neighborhoods(const PointCloud& cloud, int P) {
    const int N = cloud.N;
    const int eta = std::min(min_neighbors(P, 1), N);
    std::vector<Neighborhood> out;
    out.reserve(static_cast<std::size_t>(N));

    // Interior points are sorted ascending; markers sit at indices N and N+1.
    const double lo = cloud.points[static_cast<std::size_t>(N)].x;
    const double hi = cloud.points[static_cast<std::size_t>(N) + 1].x;

    for (int i = 0; i < N; ++i) {
        Neighborhood nb;
        nb.owner = i;
        nb.members.push_back(i);
        // Grow symmetric-by-distance from the owner: closest left and right
        // first, then whichever unused point is nearer.
        int l = i - 1, r = i + 1;
        const double xi = cloud.points[static_cast<std::size_t>(i)].x;
        while (nb.eta() < eta && (l >= 0 || r < N)) {
            const double dl = l >= 0 ? xi - cloud.points[static_cast<std::size_t>(l)].x
                                     : std::numeric_limits<double>::infinity();
            const double dr = r < N ? cloud.points[static_cast<std::size_t>(r)].x - xi
                                    : std::numeric_limits<double>::infinity();
            if (dl <= dr) {
                nb.members.push_back(l--);
            } else {
                nb.members.push_back(r++);
            }
        }
        // Endpoint markers adjacent to the member span become boundary sites.
        if (l < 0) nb.ghost_sites.push_back({lo, 0.0});
        if (r >= N) nb.ghost_sites.push_back({hi, 0.0});

        for (int m : nb.members)
            nb.extent.x =
                std::max(nb.extent.x, std::abs(cloud.points[static_cast<std::size_t>(m)].x - xi));
        nb.extent.y = 1.0;
        nb.under_resolved = nb.eta() < min_neighbors(P, 1) || nb.eta() < P + 1;
        out.push_back(std::move(nb));
    }
    return out;
}

std::vector<Neighborhood> build_neighborhoods(const PointCloud& cloud, const Quadtree& tree,
                                              const LevelSetDomain& dom, int P) {
    if (cloud.dim == 1) return build_1d_neighborhoods(cloud, P);
    std::vector<Neighborhood> out;
    out.reserve(static_cast<std::size_t>(cloud.N));
    for (int i = 0; i < cloud.N; ++i) out.push_back(build_neighborhood(i, cloud, tree, dom, P));
    return out;
}

bool connectivity_check(const std::vector<Neighborhood>& all, int N) {
    if (N <= 1) return true;
    std::vector<int> parent(static_cast<std::size_t>(N));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
        while (parent[static_cast<std::size_t>(a)] != a) {
            parent[static_cast<std::size_t>(a)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
            a = parent[static_cast<std::size_t>(a)];
        }
        return a;
    };
    for (const Neighborhood& nb : all)
        for (int m : nb.members) {
            const int ra = find(nb.owner), rb = find(m);
            if (ra != rb) parent[static_cast<std::size_t>(ra)] = rb;
        }
    const int root = find(0);
    for (int i = 1; i < N; ++i)
        if (find(i) != root) return false;
    return true;
}

void dump_neighborhood_csv(const std::vector<Neighborhood>& all, std::ostream& out) {
    out << "i,eta,ghost_count,under_resolved\n";
    for (const Neighborhood& nb : all)
        out << nb.owner << ',' << nb.eta() << ',' << nb.ghost_sites.size() << ','
            << (nb.under_resolved ? 1 : 0) << '\n';
}

}  // namespace lsqd
