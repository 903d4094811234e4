#include "lsqd/problems.hpp"

#include <cmath>
#include <sstream>

#include "lsqd/grid.hpp"

namespace lsqd {

double Poly2::eval(const Point& p) const {
    // Horner in y of Horner-in-x rows.
    double s = 0.0;
    for (int py = deg_; py >= 0; --py) {
        double row = 0.0;
        for (int px = deg_ - py; px >= 0; --px) row = row * p.x + coeff(px, py);
        s = s * p.y + row;
    }
    return s;
}

Poly2 Poly2::dx() const {
    Poly2 d(std::max(0, deg_ - 1));
    for (int py = 0; py <= d.deg_; ++py)
        for (int px = 0; px <= d.deg_ - py; ++px) d.coeff(px, py) = (px + 1) * coeff(px + 1, py);
    return d;
}

Poly2 Poly2::dy() const {
    Poly2 d(std::max(0, deg_ - 1));
    for (int py = 0; py <= d.deg_; ++py)
        for (int px = 0; px <= d.deg_ - py; ++px) d.coeff(px, py) = (py + 1) * coeff(px, py + 1);
    return d;
}

Poly2 Poly2::seeded(int degree, std::uint64_t seed) {
    Poly2 p(degree);
    for (int py = 0; py <= degree; ++py)
        for (int px = 0; px + py <= degree; ++px) {
            const std::uint64_t h = splitmix64(seed ^ (static_cast<std::uint64_t>(px) * 131 +
                                                       static_cast<std::uint64_t>(py) * 977));
            // Coefficients in [0.25, 1.25) with alternating-ish signs; kept O(1)
            // so manufactured data stays well scaled on the unit box.
            const double m = 0.25 + unit_double(h);
            p.coeff(px, py) = (h & 1) ? m : -m;
        }
    return p;
}

ExactSolution ExactSolution::exp_xy() {
    ExactSolution e;
    e.u = [](const Point& p) { return std::exp(p.x + p.y); };
    e.grad = [](const Point& p) -> Vec2 {
        const double v = std::exp(p.x + p.y);
        return {v, v};
    };
    e.lap = [](const Point& p) { return 2.0 * std::exp(p.x + p.y); };
    return e;
}

ExactSolution ExactSolution::sincos7_1d() {
    ExactSolution e;
    e.u = [](const Point& p) { return std::sin(7 * p.x) + std::cos(7 * p.x); };
    e.grad = [](const Point& p) -> Vec2 {
        return {7 * std::cos(7 * p.x) - 7 * std::sin(7 * p.x), 0.0};
    };
    e.lap = [](const Point& p) { return -49.0 * (std::sin(7 * p.x) + std::cos(7 * p.x)); };
    return e;
}

ExactSolution ExactSolution::polynomial(const Poly2& p) {
    const Poly2 px = p.dx();
    const Poly2 py = p.dy();
    const Poly2 lap_xx = px.dx();
    const Poly2 lap_yy = py.dy();
    ExactSolution e;
    e.u = [p](const Point& q) { return p.eval(q); };
    e.grad = [px, py](const Point& q) -> Vec2 { return {px.eval(q), py.eval(q)}; };
    e.lap = [lap_xx, lap_yy](const Point& q) { return lap_xx.eval(q) + lap_yy.eval(q); };
    return e;
}

std::pair<ScalarField, ScalarField> bc_weights(BcKind bc) {
    switch (bc) {
        case BcKind::dirichlet:
        case BcKind::helmholtz_dirichlet:
            return {[](const Point&) { return 1.0; }, [](const Point&) { return 0.0; }};
        case BcKind::neumann:
            return {[](const Point&) { return 0.0; }, [](const Point&) { return 1.0; }};
        case BcKind::robin:
            return {[](const Point&) { return 1.0; }, [](const Point&) { return 1.0; }};
        case BcKind::mixed_dir_robin:
            return {[](const Point&) { return 1.0; },
                    [](const Point& p) { return p.x < 0.0 ? 0.0 : 1.0; }};
        case BcKind::degenerate_robin:
            return {[](const Point&) { return 1.0; },
                    [](const Point& p) { return p.x < 0.0 ? 0.0 : -1.0; }};
    }
    throw std::invalid_argument("bc_weights: unknown kind");
}

ProblemSpec manufacture(const ExactSolution& exact, double a, double mu, BcKind bc,
                        const LevelSetDomain& dom) {
    ProblemSpec prob;
    prob.a = a;
    prob.mu = mu;
    auto [beta, gamma] = bc_weights(bc);
    prob.beta = beta;
    prob.gamma = gamma;
    const ExactSolution ex = exact;
    prob.f = [ex, a, mu](const Point& p) { return a * ex.u(p) - mu * ex.lap(p); };
    prob.g = [ex, beta, gamma, dom](const Point& p) {
        const double b = beta(p);
        const double c = gamma(p);
        double flux = 0.0;
        if (c != 0.0) flux = c * ex.grad(p).dot(outward_normal(dom, p));
        return b * ex.u(p) + flux;
    };
    prob.exact = ex.u;
    return prob;
}

namespace {

std::vector<std::string> split_path(const std::string& name) {
    std::vector<std::string> out;
    std::stringstream ss(name);
    std::string part;
    while (std::getline(ss, part, '/'))
        if (!part.empty()) out.push_back(part);
    return out;
}

GridConfig uniform_grid() {
    GridConfig g;
    g.mode = GridMode::uniform;
    g.base_depth = 4;
    return g;
}

// Adaptive grids: random refinement over a uniform base, one level shy of the
// uniform grids' depth, with up to two extra levels. Leaves span three depths,
// so adjacent cells can differ by two levels (non-graded).
GridConfig adaptive_grid(std::uint64_t seed) {
    GridConfig g;
    g.mode = GridMode::random;
    g.base_depth = 3;
    g.max_extra_depth = 2;
    g.split_probability = 0.5;
    g.random_seed = seed;
    return g;
}

}  // namespace

PresetCase preset(const std::string& name, std::uint64_t seed) {
    PresetCase pc;
    pc.name = name;
    pc.default_p = {2, 3, 4, 5};
    pc.default_splits = {0, 1, 2, 3};

    if (name == "demo1d") {
        pc.dim = 1;
        pc.domain = LevelSetDomain::interval(0.0, 1.0);
        pc.bc = BcKind::dirichlet;
        pc.a = 0.0;
        pc.mu = 1.0;
        pc.default_p = {2, 3, 4};
        pc.default_splits = {0, 1, 2, 3, 4, 5};
        pc.grid.random_seed = seed;
        return pc;
    }

    std::vector<std::string> parts = split_path(name);
    if (parts.empty()) throw std::invalid_argument("preset: empty name");

    if (parts.front() == "poly") {
        pc.polynomial_exact = true;
        parts.erase(parts.begin());
    }
    if (parts.empty()) throw std::invalid_argument("preset: missing boundary condition: " + name);

    const std::string bc = parts.front();
    if (bc == "dirichlet") {
        pc.bc = BcKind::dirichlet;
    } else if (bc == "neumann") {
        pc.bc = BcKind::neumann;
    } else if (bc == "robin") {
        pc.bc = BcKind::robin;
    } else if (bc == "mixed") {
        pc.bc = BcKind::mixed_dir_robin;
    } else if (bc == "degenerate") {
        pc.bc = BcKind::degenerate_robin;
    } else if (bc == "helmholtz") {
        pc.bc = BcKind::helmholtz_dirichlet;
        pc.mu = -100.0;
    } else {
        throw std::invalid_argument("preset: unknown boundary condition: " + name);
    }
    parts.erase(parts.begin());

    // "degenerate/robin" names the degenerate Robin weights on the default
    // configuration (octofoil, uniform).
    if (pc.bc == BcKind::degenerate_robin && parts.size() == 1 && parts.front() == "robin")
        parts.clear();

    std::string domain = "octofoil";
    std::string grid = "uniform";
    if (!parts.empty()) {
        domain = parts.front();
        parts.erase(parts.begin());
    }
    if (!parts.empty()) {
        grid = parts.front();
        parts.erase(parts.begin());
    }
    if (!parts.empty()) {
        const std::string& ratio = parts.front();
        if (ratio.rfind("ratio", 0) == 0) {
            pc.a = std::stod(ratio.substr(5));
            pc.mu = 1.0;
        } else {
            throw std::invalid_argument("preset: unknown suffix: " + name);
        }
        parts.erase(parts.begin());
    }
    if (!parts.empty()) throw std::invalid_argument("preset: trailing segments: " + name);

    if (domain == "square") {
        pc.domain = LevelSetDomain::square();
    } else if (domain == "octofoil") {
        pc.domain = LevelSetDomain::octofoil();
    } else {
        throw std::invalid_argument("preset: unknown domain: " + name);
    }

    if (grid == "uniform") {
        pc.grid = uniform_grid();
    } else if (grid == "adaptive") {
        pc.grid = adaptive_grid(seed);
    } else {
        throw std::invalid_argument("preset: unknown grid: " + name);
    }
    return pc;
}

ProblemSpec preset_problem(const PresetCase& pc, int P) {
    ExactSolution exact;
    if (pc.dim == 1) {
        exact = ExactSolution::sincos7_1d();
    } else if (pc.polynomial_exact) {
        exact = ExactSolution::polynomial(Poly2::seeded(P, 23 + static_cast<std::uint64_t>(P)));
    } else {
        exact = ExactSolution::exp_xy();
    }
    return manufacture(exact, pc.a, pc.mu, pc.bc, pc.domain);
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names{"demo1d", "degenerate/robin"};
    for (const char* bc : {"dirichlet", "neumann", "robin", "mixed", "degenerate", "helmholtz"})
        for (const char* dom : {"square", "octofoil"})
            for (const char* grid : {"uniform", "adaptive"}) {
                names.push_back(std::string(bc) + "/" + dom + "/" + grid);
                names.push_back(std::string("poly/") + bc + "/" + dom + "/" + grid);
            }
    for (const char* r : {"ratio1", "ratio10", "ratio100", "ratio1000"})
        names.push_back(std::string("neumann/octofoil/uniform/") + r);
    return names;
}

}  // namespace lsqd
