#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "lsqd/geometry.hpp"

namespace lsqd {

enum class GridMode { uniform, random };

struct GridConfig {
    GridMode mode = GridMode::uniform;
    int base_depth = 4;
    std::uint64_t random_seed = 0;
    double split_probability = 0.5;
    int max_extra_depth = 3;
    int splits = 0;
};

/// Probe directions, counterclockwise starting to the right.
enum class Dir { plus_x = 0, plus_y = 1, minus_x = 2, minus_y = 3 };
inline constexpr Dir kDirsCcw[4] = {Dir::plus_x, Dir::plus_y, Dir::minus_x, Dir::minus_y};

struct QuadtreeCell {
    Point center;
    Vec2 half;
    int depth = 0;
    int child = -1;       // index of the first of 4 contiguous children; -1 for leaves
    int leaf_index = -1;  // cloud index for leaves strictly inside the domain
    std::uint64_t path = 1;

    bool is_leaf() const { return child < 0; }
};

/// Cell-centered quadtree over a rectangular root box. Cells are stored in a flat
/// array; children of a split cell are contiguous in (-,-),(+,-),(-,+),(+,+) order.
class Quadtree {
  public:
    explicit Quadtree(const Box& b);

    const Box& box() const { return box_; }
    const std::vector<QuadtreeCell>& cells() const { return cells_; }
    const QuadtreeCell& cell(int id) const { return cells_[id]; }
    QuadtreeCell& cell(int id) { return cells_[id]; }
    double min_leaf_half() const { return min_leaf_half_; }

    void split_leaf(int id);

    /// Leaf containing p, or -1 when p lies outside the root box. Points on an
    /// internal cell boundary resolve to the lower/left child.
    int locate(const Point& p) const;

    /// Leaf ids in depth-first order.
    std::vector<int> leaf_ids() const;

  private:
    Box box_;
    std::vector<QuadtreeCell> cells_;
    double min_leaf_half_ = 0.0;
};

/// The leaf across the given face of a leaf cell, chosen as the leaf containing
/// the axis probe just beyond the face; absent when the probe exits the root box.
std::optional<int> direct_neighbor(const Quadtree& tree, int cell_id, Dir dir);

/// Scattered points with per-point cell extents. Inside points occupy indices
/// 0..N-1; any boundary-marker points (1D endpoints) follow with inside = false.
struct PointCloud {
    std::vector<Point> points;
    std::vector<Vec2> cell_extent;
    std::vector<std::uint8_t> inside;
    std::vector<int> cell_id;  // owning leaf per inside point (2D only)
    int N = 0;
    int dim = 2;
};

/// 1D cloud: n0 seeded-random interior points plus the interval endpoints as
/// boundary markers; each split inserts the midpoint of every adjacent pair.
PointCloud build_1d_cloud(int n0, std::uint64_t seed, int splits, double lo, double hi);

std::pair<Quadtree, PointCloud> build_quadtree(const LevelSetDomain& dom,
                                               const GridConfig& cfg);

/// CSV dump: cell_id, depth, cx, cy, hx, hy, inside.
void dump_grid_csv(const Quadtree& tree, std::ostream& out);

// Deterministic counter-based hashing used for grid randomness.
std::uint64_t splitmix64(std::uint64_t z);
double unit_double(std::uint64_t h);

}  // namespace lsqd
