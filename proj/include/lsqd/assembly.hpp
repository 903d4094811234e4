#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>

#include "lsqd/basis.hpp"
#include "lsqd/neighborhood.hpp"
#include "lsqd/sparse.hpp"

namespace lsqd {

using ScalarField = std::function<double(const Point&)>;

/// Continuous problem data: a u - mu lap(u) = f in the domain, with
/// beta u + gamma du/dn = g on the boundary. beta/gamma may vary along the
/// boundary for mixed conditions.
struct ProblemSpec {
    double a = 1.0;
    double mu = 1.0;
    ScalarField beta;
    ScalarField gamma;
    ScalarField f;
    ScalarField g;
    std::optional<ScalarField> exact;
};

enum class RowKind : std::uint8_t { PDE, C0, C1x, C1y, BC };

/// Provenance of one equation: the owning expansion i and, for pairwise rows,
/// the neighbor j (ghost ordinal for BC rows, -1 when not applicable).
struct RowTag {
    RowKind kind;
    int i;
    int j;
};

const char* row_kind_name(RowKind k);

/// Overdetermined system A alpha = b. Column block i spans [i*Q, (i+1)*Q).
struct RectangularSystem {
    CsrMatrix A;
    std::vector<double> b;
    std::vector<RowTag> tags;
    int Q = 0;

    int rows() const { return A.nrows; }
    int cols() const { return A.ncols; }
};

/// Stabilized normal equations (A^T A + eps I) alpha = A^T b.
struct NormalSystem {
    CsrMatrix G;
    std::vector<double> rhs;
    double epsilon = 0.0;
};

/// Pointwise equation families per neighborhood: a PDE row at every member, a
/// value- and a derivative-continuity row per distinct neighbor, and a boundary
/// row per ghost site (evaluated where the segment to the ghost crosses the
/// boundary).
RectangularSystem assemble(const PointCloud& cloud, const std::vector<Neighborhood>& nbs,
                           const std::vector<LocalBasis>& bases, const LevelSetDomain& dom,
                           const ProblemSpec& prob);

/// Scales every equation by the inverse of its L1 norm. Throws on a zero row,
/// naming its provenance.
void rescale_rows(RectangularSystem& sys);

/// Minimal diagonal shift keeping the Gershgorin condition estimate of G below
/// kappa_max; clamped at zero so well-conditioned systems are untouched.
double stabilization_epsilon(const CsrMatrix& G, double kappa_max);
double stabilization_epsilon(double lambda_max, double lambda_min, double kappa_max);

/// Gershgorin bounds (lambda_min clamped at zero) of a symmetric matrix.
std::pair<double, double> gershgorin_bounds(const CsrMatrix& G);

NormalSystem form_normal(const RectangularSystem& sys, double kappa_max = 1e40);

/// Matrix-market-style dump of A plus a companion array for b.
void dump_system(const RectangularSystem& sys, std::ostream& matrix_out,
                 std::ostream& rhs_out);

/// Per-point local bases: centered at each inside point and rescaled by its
/// neighborhood extent.
std::vector<LocalBasis> build_bases(const PointCloud& cloud,
                                    const std::vector<Neighborhood>& nbs, int P);

}  // namespace lsqd
