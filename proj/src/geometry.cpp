#include "lsqd/geometry.hpp"

namespace lsqd {

namespace {
constexpr double kBaseRadius = 4.0 / 5.0;
constexpr double kLobeAmplitude = 4.0 / 25.0;

double sign_of(double t) { return t >= 0.0 ? 1.0 : -1.0; }
}  // namespace

double octofoil_value(const Point& p) {
    const double r = std::hypot(p.x, p.y);
    const double theta = (p.x == 0.0 && p.y == 0.0) ? 0.0 : std::atan2(p.y, p.x);
    return -(kBaseRadius + kLobeAmplitude * std::sin(8.0 * theta)) + r;
}

Vec2 octofoil_gradient(const Point& p) {
    const double r2 = p.x * p.x + p.y * p.y;
    if (r2 == 0.0) throw std::runtime_error("gradient singular at origin");
    const double r = std::sqrt(r2);
    const double theta = std::atan2(p.y, p.x);
    // d/dtheta of the lobe term, chained through dtheta/dx = -y/r^2, dtheta/dy = x/r^2.
    const double c = 8.0 * kLobeAmplitude * std::cos(8.0 * theta);
    return {p.x / r + c * p.y / r2, p.y / r - c * p.x / r2};
}

LevelSetDomain LevelSetDomain::square(const Box& b) {
    LevelSetDomain d;
    d.kind = DomainKind::square;
    d.bounding_box = b;
    const Vec2 c = b.center();
    const Vec2 h = b.half();
    d.value_fn_ = [c, h](const Point& p) {
        return std::max(std::abs(p.x - c.x) - h.x, std::abs(p.y - c.y) - h.y);
    };
    // Gradient of the active coordinate; ties prefer x.
    d.grad_fn_ = [c, h](const Point& p) -> Vec2 {
        const double vx = std::abs(p.x - c.x) - h.x;
        const double vy = std::abs(p.y - c.y) - h.y;
        if (vx >= vy) return {sign_of(p.x - c.x), 0.0};
        return {0.0, sign_of(p.y - c.y)};
    };
    return d;
}

LevelSetDomain LevelSetDomain::octofoil(const Box& b) {
    LevelSetDomain d;
    d.kind = DomainKind::octofoil;
    d.bounding_box = b;
    d.value_fn_ = [](const Point& p) { return octofoil_value(p); };
    d.grad_fn_ = [](const Point& p) { return octofoil_gradient(p); };
    return d;
}

LevelSetDomain LevelSetDomain::interval(double lo, double hi) {
    LevelSetDomain d;
    d.kind = DomainKind::custom;
    d.bounding_box = Box{{lo, -1.0}, {hi, 1.0}};
    d.value_fn_ = [lo, hi](const Point& p) { return std::max(lo - p.x, p.x - hi); };
    d.grad_fn_ = [lo, hi](const Point& p) -> Vec2 {
        return {(p.x - hi >= lo - p.x) ? 1.0 : -1.0, 0.0};
    };
    return d;
}

LevelSetDomain LevelSetDomain::custom(std::function<double(const Point&)> value,
                                      std::function<Vec2(const Point&)> gradient,
                                      const Box& b) {
    LevelSetDomain d;
    d.kind = DomainKind::custom;
    d.bounding_box = b;
    d.value_fn_ = std::move(value);
    d.grad_fn_ = std::move(gradient);
    return d;
}

Point locate_boundary_point(const LevelSetDomain& dom, const Point& a, const Point& b,
                            double tol) {
    double fa = dom.value(a);
    double fb = dom.value(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw std::runtime_error("no sign change on segment");

    double ta = 0.0, tb = 1.0;
    const Vec2 d = b - a;
    for (int it = 0; it < 200 && (tb - ta) > tol; ++it) {
        const double tm = 0.5 * (ta + tb);
        const double fm = dom.value(a + d * tm);
        if (fm == 0.0) return a + d * tm;
        if (fa * fm < 0.0) {
            tb = tm;
        } else {
            ta = tm;
            fa = fm;
        }
    }
    return a + d * (0.5 * (ta + tb));
}

Vec2 outward_normal(const LevelSetDomain& dom, const Point& p) {
    const Vec2 g = dom.gradient(p);
    const double n = g.norm();
    if (!(n > 1e-30)) throw std::runtime_error("degenerate normal");
    return g * (1.0 / n);
}

}  // namespace lsqd
