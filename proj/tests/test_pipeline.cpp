#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lsqd/runner.hpp"

using namespace lsqd;

namespace {

struct PipelineOut {
    double linf = 0.0;
    double estimator = 0.0;
    bool converged = false;
    std::vector<double> alpha;
};

// Direct pipeline without the runner, for targeted checks.
PipelineOut solve_case(const PresetCase& pc, int P, int splits) {
    PipelineOut out;
    GridConfig g = pc.grid;
    g.splits = splits;
    auto [tree, cloud] = build_quadtree(pc.domain, g);
    const auto nbs = build_neighborhoods(cloud, tree, pc.domain, P);
    const auto bases = build_bases(cloud, nbs, P);
    const ProblemSpec prob = preset_problem(pc, P);
    RectangularSystem sys = assemble(cloud, nbs, bases, pc.domain, prob);
    rescale_rows(sys);
    const NormalSystem ns = form_normal(sys);
    const SolveReport rep = solve(ns);
    out.converged = rep.converged;
    out.alpha = rep.alpha;
    out.linf = compute_errors(cloud, rep.alpha, bases, *prob.exact).linf;
    out.estimator = error_estimate(cloud, tree, rep.alpha, bases, pc.domain).global;
    return out;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("polynomial manufactured solutions are reproduced to solver accuracy") {
    for (const char* name : {"poly/dirichlet/square/uniform", "poly/robin/octofoil/uniform"}) {
        PresetCase pc = preset(name);
        pc.grid.base_depth = 3;
        for (int P : {2, 3}) {
            const PipelineOut out = solve_case(pc, P, 0);
            CAPTURE(name);
            CAPTURE(P);
            CHECK(out.converged);
            CHECK(out.linf < 1e-8);
            // All local expansions agree on a global polynomial, so the
            // discontinuity estimator collapses too.
            CHECK(out.estimator < 1e-7);
        }
    }
}

TEST_CASE("exp(x+y) error shrinks with refinement") {
    PresetCase pc = preset("dirichlet/octofoil/uniform");
    pc.grid.base_depth = 3;
    const PipelineOut c0 = solve_case(pc, 3, 0);
    const PipelineOut c2 = solve_case(pc, 3, 2);
    CHECK(c0.converged);
    CHECK(c2.converged);
    CHECK(c2.linf < c0.linf / 4);
}

TEST_CASE("1d demo pipeline solves the oscillatory problem") {
    const PresetCase pc = preset("demo1d");
    const PointCloud cloud = build_1d_cloud(pc.n0_1d, pc.grid.random_seed, 3, 0.0, 1.0);
    Quadtree dummy(pc.domain.bounding_box);
    const auto nbs = build_neighborhoods(cloud, dummy, pc.domain, 3);
    const auto bases = build_bases(cloud, nbs, 3);
    const ProblemSpec prob = preset_problem(pc, 3);
    RectangularSystem sys = assemble(cloud, nbs, bases, pc.domain, prob);
    rescale_rows(sys);
    const SolveReport rep = solve(form_normal(sys));
    CHECK(rep.converged);
    const ErrorReport err = compute_errors(cloud, rep.alpha, bases, *prob.exact);
    CHECK(err.linf < 1e-2);
}

TEST_CASE("runner writes deterministic results") {
    RunConfig cfg;
    cfg.preset_name = "dirichlet/octofoil/adaptive";
    cfg.p_list = {2};
    cfg.splits_list = {0, 1};
    cfg.seed = 7;
    cfg.out_dir = "pipeline_out_a";
    REQUIRE(run(cfg) == 0);
    cfg.out_dir = "pipeline_out_b";
    REQUIRE(run(cfg) == 0);

    auto strip_timing = [](const std::string& path) {
        std::ifstream f(path);
        REQUIRE(f.good());
        std::stringstream out;
        std::string line;
        while (std::getline(f, line)) {
            const auto pos = line.rfind(',');
            out << line.substr(0, pos) << '\n';
        }
        return out.str();
    };
    CHECK(strip_timing("pipeline_out_a/results.csv") == strip_timing("pipeline_out_b/results.csv"));

    std::filesystem::remove_all("pipeline_out_a");
    std::filesystem::remove_all("pipeline_out_b");
}

TEST_CASE("runner exit codes") {
    RunConfig bad;
    bad.preset_name = "definitely/not/real";
    bad.out_dir = "pipeline_out_bad";
    CHECK(run(bad) == 1);
    CHECK(!std::filesystem::exists("pipeline_out_bad/results.csv"));
    std::filesystem::remove_all("pipeline_out_bad");

    // Starved iteration budget: cases complete but report non-convergence.
    RunConfig starved;
    starved.preset_name = "dirichlet/square/uniform";
    starved.p_list = {2};
    starved.splits_list = {0};
    starved.solver.max_iters = 1;
    starved.out_dir = "pipeline_out_starved";
    CHECK(run(starved) == 2);
    CHECK(std::filesystem::exists("pipeline_out_starved/results.csv"));
    std::filesystem::remove_all("pipeline_out_starved");
}

}  // TEST_SUITE
