#include "lsqd/grid.hpp"

#include <algorithm>
#include <limits>

namespace lsqd {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double unit_double(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

Quadtree::Quadtree(const Box& b) : box_(b) {
    QuadtreeCell root;
    root.center = b.center();
    root.half = b.half();
    root.depth = 0;
    root.path = 1;
    cells_.push_back(root);
    min_leaf_half_ = std::min(root.half.x, root.half.y);
}

void Quadtree::split_leaf(int id) {
    QuadtreeCell& c = cells_[id];
    const int first = static_cast<int>(cells_.size());
    c.child = first;
    const Point pc = c.center;
    const Vec2 h{c.half.x / 2, c.half.y / 2};
    const int depth = c.depth + 1;
    const std::uint64_t path = c.path;
    for (int k = 0; k < 4; ++k) {
        QuadtreeCell ch;
        ch.center = {pc.x + (k & 1 ? h.x : -h.x), pc.y + (k & 2 ? h.y : -h.y)};
        ch.half = h;
        ch.depth = depth;
        ch.path = (path << 2) | static_cast<std::uint64_t>(k);
        cells_.push_back(ch);
    }
    min_leaf_half_ = std::min(min_leaf_half_, std::min(h.x, h.y));
}

int Quadtree::locate(const Point& p) const {
    if (!box_.contains(p)) return -1;
    int id = 0;
    while (!cells_[id].is_leaf()) {
        const QuadtreeCell& c = cells_[id];
        const int k = (p.x > c.center.x ? 1 : 0) + (p.y > c.center.y ? 2 : 0);
        id = c.child + k;
    }
    return id;
}

std::vector<int> Quadtree::leaf_ids() const {
    std::vector<int> out;
    std::vector<int> stack{0};
    while (!stack.empty()) {
        const int id = stack.back();
        stack.pop_back();
        const QuadtreeCell& c = cells_[id];
        if (c.is_leaf()) {
            out.push_back(id);
        } else {
            for (int k = 3; k >= 0; --k) stack.push_back(c.child + k);
        }
    }
    return out;
}

std::optional<int> direct_neighbor(const Quadtree& tree, int cell_id, Dir dir) {
    const QuadtreeCell& c = tree.cell(cell_id);
    const double delta = 1e-3 * tree.min_leaf_half();
    Point probe = c.center;
    switch (dir) {
        case Dir::plus_x: probe.x += c.half.x + delta; break;
        case Dir::minus_x: probe.x -= c.half.x + delta; break;
        case Dir::plus_y: probe.y += c.half.y + delta; break;
        case Dir::minus_y: probe.y -= c.half.y + delta; break;
    }
    const int id = tree.locate(probe);
    if (id < 0) return std::nullopt;
    return id;
}

PointCloud build_1d_cloud(int n0, std::uint64_t seed, int splits, double lo, double hi) {
    if (n0 < 3) throw std::invalid_argument("build_1d_cloud: n0 must be at least 3");

    std::vector<double> xs(static_cast<std::size_t>(n0));
    for (int k = 0; k < n0; ++k)
        xs[static_cast<std::size_t>(k)] =
            lo + (hi - lo) * unit_double(splitmix64(seed + static_cast<std::uint64_t>(k)));
    std::sort(xs.begin(), xs.end());

    // Midpoint insertion treats the endpoints as part of the adjacency.
    std::vector<double> all;
    all.reserve(xs.size() + 2);
    all.push_back(lo);
    all.insert(all.end(), xs.begin(), xs.end());
    all.push_back(hi);
    for (int s = 0; s < splits; ++s) {
        std::vector<double> next;
        next.reserve(all.size() * 2);
        for (std::size_t k = 0; k + 1 < all.size(); ++k) {
            next.push_back(all[k]);
            next.push_back(0.5 * (all[k] + all[k + 1]));
        }
        next.push_back(all.back());
        all.swap(next);
    }

    PointCloud cloud;
    cloud.dim = 1;
    const int n = static_cast<int>(all.size());
    cloud.N = n - 2;
    for (int k = 1; k + 1 < n; ++k) cloud.points.push_back({all[static_cast<std::size_t>(k)], 0.0});
    cloud.points.push_back({lo, 0.0});
    cloud.points.push_back({hi, 0.0});
    cloud.inside.assign(cloud.points.size(), 1);
    cloud.inside[static_cast<std::size_t>(cloud.N)] = 0;
    cloud.inside[static_cast<std::size_t>(cloud.N) + 1] = 0;

    cloud.cell_extent.resize(cloud.points.size());
    for (int k = 0; k < cloud.N; ++k) {
        const double left = (k == 0) ? lo : cloud.points[static_cast<std::size_t>(k) - 1].x;
        const double right =
            (k + 1 == cloud.N) ? hi : cloud.points[static_cast<std::size_t>(k) + 1].x;
        const double xk = cloud.points[static_cast<std::size_t>(k)].x;
        cloud.cell_extent[static_cast<std::size_t>(k)] = {(xk - left) / 2, (right - xk) / 2};
    }
    cloud.cell_extent[static_cast<std::size_t>(cloud.N)] = {0.0, 0.0};
    cloud.cell_extent[static_cast<std::size_t>(cloud.N) + 1] = {0.0, 0.0};
    return cloud;
}

std::pair<Quadtree, PointCloud> build_quadtree(const LevelSetDomain& dom,
                                               const GridConfig& cfg) {
    Quadtree tree(dom.bounding_box);

    // Full refinement to base_depth.
    for (int d = 0; d < cfg.base_depth; ++d)
        for (int id : tree.leaf_ids())
            if (tree.cell(id).depth == d) tree.split_leaf(id);

    if (cfg.mode == GridMode::random) {
        const std::uint64_t key = splitmix64(cfg.random_seed);
        for (int extra = 0; extra < cfg.max_extra_depth; ++extra) {
            const int depth = cfg.base_depth + extra;
            for (int id : tree.leaf_ids()) {
                if (tree.cell(id).depth != depth) continue;
                const double u = unit_double(splitmix64(key ^ tree.cell(id).path));
                if (u < cfg.split_probability) tree.split_leaf(id);
            }
        }
    }

    for (int s = 0; s < cfg.splits; ++s)
        for (int id : tree.leaf_ids()) tree.split_leaf(id);

    PointCloud cloud;
    cloud.dim = 2;
    for (int id : tree.leaf_ids()) {
        QuadtreeCell& c = tree.cell(id);
        if (dom.value(c.center) < 0.0) {
            c.leaf_index = cloud.N++;
            cloud.points.push_back(c.center);
            cloud.cell_extent.push_back(c.half);
            cloud.cell_id.push_back(id);
        }
    }
    cloud.inside.assign(cloud.points.size(), 1);
    return {std::move(tree), std::move(cloud)};
}

void dump_grid_csv(const Quadtree& tree, std::ostream& out) {
    out << "cell_id,depth,cx,cy,hx,hy,inside\n";
    for (int id : tree.leaf_ids()) {
        const QuadtreeCell& c = tree.cell(id);
        out << id << ',' << c.depth << ',' << c.center.x << ',' << c.center.y << ','
            << c.half.x << ',' << c.half.y << ',' << (c.leaf_index >= 0 ? 1 : 0) << '\n';
    }
}

}  // namespace lsqd
