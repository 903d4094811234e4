#pragma once

#include <string>
#include <vector>

#include "lsqd/assembly.hpp"

namespace lsqd {

/// Dense-coefficient bivariate polynomial, used for manufactured solutions that
/// the discretization must reproduce exactly.
class Poly2 {
  public:
    Poly2() : deg_(0), c_(1, 0.0) {}
    explicit Poly2(int degree) : deg_(degree), c_(sq(degree + 1), 0.0) {}

    int degree() const { return deg_; }
    double& coeff(int px, int py) { return c_[idx(px, py)]; }
    double coeff(int px, int py) const { return c_[idx(px, py)]; }

    double eval(const Point& p) const;
    Poly2 dx() const;
    Poly2 dy() const;

    /// Deterministic full polynomial of the given total degree; every admissible
    /// coefficient is nonzero.
    static Poly2 seeded(int degree, std::uint64_t seed);

  private:
    static std::size_t sq(int n) { return static_cast<std::size_t>(n) * static_cast<std::size_t>(n); }
    std::size_t idx(int px, int py) const {
        return static_cast<std::size_t>(px) + static_cast<std::size_t>(py) * static_cast<std::size_t>(deg_ + 1);
    }
    int deg_;
    std::vector<double> c_;
};

/// Closed-form exact solution with the derivatives manufacturing needs.
struct ExactSolution {
    ScalarField u;
    std::function<Vec2(const Point&)> grad;
    ScalarField lap;

    static ExactSolution exp_xy();       // e^{x+y}
    static ExactSolution sincos7_1d();   // sin(7x) + cos(7x)
    static ExactSolution polynomial(const Poly2& p);
};

enum class BcKind {
    dirichlet,
    neumann,
    robin,
    mixed_dir_robin,
    degenerate_robin,
    helmholtz_dirichlet
};

/// beta/gamma weight fields for a boundary-condition preset. Mixed presets are
/// Dirichlet for x < 0 and Robin for x >= 0.
std::pair<ScalarField, ScalarField> bc_weights(BcKind bc);

/// Derives f and g from an exact solution so it solves
/// a u - mu lap(u) = f with beta u + gamma du/dn = g on the given domain.
ProblemSpec manufacture(const ExactSolution& exact, double a, double mu, BcKind bc,
                        const LevelSetDomain& dom);

/// Fully-specified run configuration resolved from a preset name.
struct PresetCase {
    std::string name;
    int dim = 2;
    LevelSetDomain domain;
    GridConfig grid;
    BcKind bc = BcKind::dirichlet;
    double a = 1.0;
    double mu = 1.0;
    bool polynomial_exact = false;  // degree-P manufactured polynomial
    std::vector<int> default_p;
    std::vector<int> default_splits;
    int n0_1d = 10;  // 1D initial point count
};

/// Resolve a path-like preset name, e.g. "dirichlet/octofoil/adaptive",
/// "neumann/octofoil/uniform/ratio1000", "poly/robin/square/uniform",
/// "degenerate/robin", "helmholtz/octofoil/uniform", "demo1d".
/// Throws on unknown names.
PresetCase preset(const std::string& name, std::uint64_t seed = 7);

/// Problem data for a preset at polynomial order P (the polynomial exact
/// solution has total degree P).
ProblemSpec preset_problem(const PresetCase& pc, int P);

std::vector<std::string> preset_names();

}  // namespace lsqd
