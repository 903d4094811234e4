#include "lsqd/basis.hpp"

namespace lsqd {

int basis_size(int P, int dim) {
    return dim == 1 ? P + 1 : (P + 1) * (P + 2) / 2;
}

LocalBasis LocalBasis::make(const Point& center, const Vec2& scale, int P, int dim) {
    if (!(scale.x > 0.0) || (dim == 2 && !(scale.y > 0.0)))
        throw std::invalid_argument("LocalBasis: scale components must be positive");
    LocalBasis b;
    b.center = center;
    b.scale = dim == 1 ? Vec2{scale.x, 1.0} : scale;
    b.degree = P;
    if (dim == 1) {
        for (int p = 0; p <= P; ++p) b.exponents.push_back({p, 0});
    } else {
        for (int t = 0; t <= P; ++t)
            for (int px = t; px >= 0; --px) b.exponents.push_back({px, t - px});
    }
    return b;
}

}  // namespace lsqd
