#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace lsqd {

/// 2-component vector; doubles as a spatial point. 1D problems use x only.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    double operator[](int axis) const { return axis == 0 ? x : y; }
};

using Point = Vec2;

/// Axis-aligned rectangle; the root cell of the grid hierarchy.
struct Box {
    Vec2 lo{-1.0, -1.0};
    Vec2 hi{1.0, 1.0};

    Vec2 center() const { return {(lo.x + hi.x) / 2, (lo.y + hi.y) / 2}; }
    Vec2 half() const { return {(hi.x - lo.x) / 2, (hi.y - lo.y) / 2}; }
    double width() const { return std::max(hi.x - lo.x, hi.y - lo.y); }
    bool contains(const Point& p) const {
        return p.x > lo.x && p.x < hi.x && p.y > lo.y && p.y < hi.y;
    }
};

enum class DomainKind { square, octofoil, custom };

/// Octofoil level set: signed radius defect against r(theta) = 4/5 + 4/25 sin(8 theta).
/// The angular term uses the full polar angle, with theta := 0 at the origin.
double octofoil_value(const Point& p);

/// Closed-form gradient of octofoil_value. Throws at the origin.
Vec2 octofoil_gradient(const Point& p);

/// Implicit domain: negative inside, positive outside, zero on the boundary.
class LevelSetDomain {
  public:
    DomainKind kind = DomainKind::custom;
    Box bounding_box;

    double value(const Point& p) const { return value_fn_(p); }
    Vec2 gradient(const Point& p) const { return grad_fn_(p); }
    bool inside(const Point& p) const { return value(p) < 0.0; }

    /// The box itself as a level set (max-coordinate form); its zero set is the box edge.
    static LevelSetDomain square(const Box& b = Box{});

    /// Eight-lobed star inscribed in the default box.
    static LevelSetDomain octofoil(const Box& b = Box{});

    /// 1D interval [lo, hi] embedded on the x-axis.
    static LevelSetDomain interval(double lo, double hi);

    static LevelSetDomain custom(std::function<double(const Point&)> value,
                                 std::function<Vec2(const Point&)> gradient,
                                 const Box& b = Box{});

  private:
    std::function<double(const Point&)> value_fn_;
    std::function<Vec2(const Point&)> grad_fn_;
};

/// Bisection for a boundary point on the segment [a, b]; endpoints must bracket
/// (or touch) the zero level. tol is relative to the segment length.
Point locate_boundary_point(const LevelSetDomain& dom, const Point& a, const Point& b,
                            double tol = 1e-12);

/// Unit outward normal from the level-set gradient. Throws on a vanishing gradient.
Vec2 outward_normal(const LevelSetDomain& dom, const Point& p);

}  // namespace lsqd
