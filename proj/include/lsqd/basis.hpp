#pragma once

#include <array>
#include <vector>

#include "lsqd/geometry.hpp"

namespace lsqd {

/// Centered, rescaled monomial basis attached to one point. 2D bases hold all
/// (p_x, p_y) with p_x + p_y <= P in graded order (total degree ascending, p_x
/// descending within a degree); 1D bases hold powers 0..P of x. The convention
/// 0^0 = 1 makes the first function the constant.
struct LocalBasis {
    Point center;
    Vec2 scale{1.0, 1.0};
    int degree = 0;
    std::vector<std::array<int, 2>> exponents;

    int Q() const { return static_cast<int>(exponents.size()); }

    static LocalBasis make(const Point& center, const Vec2& scale, int P, int dim);

    // q is 1-based, matching the coefficient layout.
    double eval(int q, const Point& p) const;
    Vec2 eval_grad(int q, const Point& p) const;
    double eval_laplacian(int q, const Point& p) const;
};

/// Basis size for total degree P: (P+1)(P+2)/2 in 2D, P+1 in 1D.
int basis_size(int P, int dim);

namespace detail {
// t^p with 0^0 = 1; p is small and nonnegative.
inline double ipow(double t, int p) {
    double r = 1.0;
    for (int k = 0; k < p; ++k) r *= t;
    return r;
}
}  // namespace detail

inline double LocalBasis::eval(int q, const Point& p) const {
    const auto [px, py] = exponents[static_cast<std::size_t>(q - 1)];
    const double X = (p.x - center.x) / scale.x;
    const double Y = (p.y - center.y) / scale.y;
    return detail::ipow(X, px) * detail::ipow(Y, py);
}

inline Vec2 LocalBasis::eval_grad(int q, const Point& p) const {
    const auto [px, py] = exponents[static_cast<std::size_t>(q - 1)];
    const double X = (p.x - center.x) / scale.x;
    const double Y = (p.y - center.y) / scale.y;
    Vec2 g{0.0, 0.0};
    if (px > 0) g.x = px * detail::ipow(X, px - 1) / scale.x * detail::ipow(Y, py);
    if (py > 0) g.y = py * detail::ipow(Y, py - 1) / scale.y * detail::ipow(X, px);
    return g;
}

inline double LocalBasis::eval_laplacian(int q, const Point& p) const {
    const auto [px, py] = exponents[static_cast<std::size_t>(q - 1)];
    const double X = (p.x - center.x) / scale.x;
    const double Y = (p.y - center.y) / scale.y;
    double lap = 0.0;
    if (px > 1)
        lap += px * (px - 1) * detail::ipow(X, px - 2) / (scale.x * scale.x) *
               detail::ipow(Y, py);
    if (py > 1)
        lap += py * (py - 1) * detail::ipow(Y, py - 2) / (scale.y * scale.y) *
               detail::ipow(X, px);
    return lap;
}

}  // namespace lsqd
