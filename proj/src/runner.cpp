#include "lsqd/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include <json.hpp>

namespace lsqd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string case_id(const std::string& preset, int P, int splits) {
    return preset + ":P" + std::to_string(P) + ":s" + std::to_string(splits);
}

}  // namespace

CaseResult run_case(const PresetCase& pc, int P, int splits, const SolveOptions& solver,
                    const DumpFlags& dump, const std::string& out_dir, double kappa_max) {
    const auto t_start = Clock::now();
    CaseResult res;
    res.run_id = case_id(pc.name, P, splits);
    res.preset = pc.name;
    res.P = P;
    res.splits = splits;

    auto tag = [&](const std::string& stem) {
        return out_dir + "/" + stem + "_P" + std::to_string(P) + "_s" + std::to_string(splits) +
               ".csv";
    };

    // Grid.
    auto t0 = Clock::now();
    PointCloud cloud;
    std::optional<Quadtree> tree;
    if (pc.dim == 1) {
        const double lo = pc.domain.bounding_box.lo.x;
        const double hi = pc.domain.bounding_box.hi.x;
        cloud = build_1d_cloud(pc.n0_1d, pc.grid.random_seed, splits, lo, hi);
        tree.emplace(pc.domain.bounding_box);
    } else {
        GridConfig g = pc.grid;
        g.splits = splits;
        auto [t, c] = build_quadtree(pc.domain, g);
        tree.emplace(std::move(t));
        cloud = std::move(c);
    }
    res.phases.grid = seconds_since(t0);
    res.N = cloud.N;
    if (dump.grid && pc.dim == 2) {
        std::ofstream f(tag("grid"));
        dump_grid_csv(*tree, f);
    }

    // Neighborhoods.
    t0 = Clock::now();
    const std::vector<Neighborhood> nbs = build_neighborhoods(cloud, *tree, pc.domain, P);
    res.connected = connectivity_check(nbs, cloud.N);
    res.eta_min = cloud.N > 0 ? nbs.front().eta() : 0;
    for (const Neighborhood& nb : nbs) {
        res.eta_min = std::min(res.eta_min, nb.eta());
        res.under_resolved += nb.under_resolved ? 1 : 0;
    }
    res.phases.neighborhoods = seconds_since(t0);
    if (dump.grid && !out_dir.empty()) {
        std::ofstream f(tag("neighborhoods"));
        dump_neighborhood_csv(nbs, f);
    }
    if (res.under_resolved > 0)
        std::cerr << "[warn] " << res.run_id << ": " << res.under_resolved
                  << " under-resolved neighborhoods\n";
    if (!res.connected)
        std::cerr << "[warn] " << res.run_id << ": neighbor graph is disconnected\n";

    // Assembly.
    t0 = Clock::now();
    const std::vector<LocalBasis> bases = build_bases(cloud, nbs, P);
    const ProblemSpec prob = preset_problem(pc, P);
    RectangularSystem sys = assemble(cloud, nbs, bases, pc.domain, prob);
    rescale_rows(sys);
    res.M = sys.rows();
    if (dump.system && !out_dir.empty()) {
        std::ofstream fa(out_dir + "/system_A_P" + std::to_string(P) + "_s" +
                         std::to_string(splits) + ".mtx");
        std::ofstream fb(out_dir + "/system_b_P" + std::to_string(P) + "_s" +
                         std::to_string(splits) + ".mtx");
        dump_system(sys, fa, fb);
    }
    NormalSystem ns = form_normal(sys, kappa_max);
    res.epsilon = ns.epsilon;
    res.phases.assembly = seconds_since(t0);

    // Solve.
    t0 = Clock::now();
    const SolveReport rep = solve(ns, solver);
    res.phases.solve = seconds_since(t0);
    res.iterations = rep.iterations;
    res.residual_inf = rep.final_residual_inf;
    res.converged = rep.converged;

    // Analysis.
    t0 = Clock::now();
    if (prob.exact) {
        const ErrorReport err = compute_errors(cloud, rep.alpha, bases, *prob.exact);
        res.linf_error = err.linf;
        if (dump.solution && !out_dir.empty()) {
            std::ofstream f(tag("solution"));
            dump_solution_csv(cloud, rep.alpha, bases, *prob.exact, f);
        }
    }
    if (pc.dim == 2) {
        const EstimatorReport est = error_estimate(cloud, *tree, rep.alpha, bases, pc.domain);
        res.estimator_global = est.global;
        if (dump.estimator && !out_dir.empty()) {
            std::ofstream f(tag("estimator"));
            dump_estimator_csv(est, f);
        }
    } else {
        res.estimator_global = std::numeric_limits<double>::quiet_NaN();
    }
    res.phases.analysis = seconds_since(t0);

    res.wall_time_s = seconds_since(t_start);
    std::cout << "solve," << res.N << ',' << sys.Q << ',' << res.M << ',' << res.epsilon << ','
              << res.iterations << ',' << res.residual_inf << ',' << res.phases.solve << '\n';
    return res;
}

namespace {

void write_results_csv(const std::string& path, const std::vector<CaseResult>& rows) {
    std::ofstream f(path);
    f << std::setprecision(17);
    f << "run_id,preset,P,splits,N,M,eta_min,epsilon,iterations,residual_inf,"
         "linf_error,estimator_global,eoc_running,wall_time_s\n";
    for (const CaseResult& r : rows) {
        // Running EOC over this preset's completed splits at the same P.
        std::vector<double> h, e;
        for (const CaseResult& s : rows)
            if (s.P == r.P && s.splits <= r.splits && s.linf_error > 0.0) {
                h.push_back(std::pow(2.0, -s.splits));
                e.push_back(s.linf_error);
            }
        double eoc = std::numeric_limits<double>::quiet_NaN();
        if (h.size() >= 2) {
            try {
                eoc = fit_eoc(h, e);
            } catch (const std::exception&) {
            }
        }
        f << r.run_id << ',' << r.preset << ',' << r.P << ',' << r.splits << ',' << r.N << ','
          << r.M << ',' << r.eta_min << ',' << r.epsilon << ',' << r.iterations << ','
          << r.residual_inf << ',' << r.linf_error << ',' << r.estimator_global << ',' << eoc
          << ',' << r.wall_time_s << '\n';
    }
}

void write_summary_json(const std::string& path, const RunConfig& cfg,
                        const std::vector<CaseResult>& rows) {
    nlohmann::json j;
    j["preset"] = cfg.explicit_case ? cfg.explicit_case->name : cfg.preset_name;
    j["seed"] = cfg.seed;
    nlohmann::json cases = nlohmann::json::array();
    std::map<int, std::pair<std::vector<double>, std::vector<double>>> per_p;
    for (const CaseResult& r : rows) {
        nlohmann::json c;
        c["run_id"] = r.run_id;
        c["P"] = r.P;
        c["splits"] = r.splits;
        c["N"] = r.N;
        c["M"] = r.M;
        c["eta_min"] = r.eta_min;
        c["epsilon"] = r.epsilon;
        c["iterations"] = r.iterations;
        c["residual_inf"] = r.residual_inf;
        c["linf_error"] = r.linf_error;
        c["estimator_global"] = r.estimator_global;
        c["converged"] = r.converged;
        c["under_resolved"] = r.under_resolved;
        c["connected"] = r.connected;
        c["wall_time_s"] = r.wall_time_s;
        c["phase_times"] = {{"grid", r.phases.grid},
                            {"neighborhoods", r.phases.neighborhoods},
                            {"assembly", r.phases.assembly},
                            {"solve", r.phases.solve},
                            {"analysis", r.phases.analysis}};
        cases.push_back(c);
        if (r.linf_error > 0.0) {
            per_p[r.P].first.push_back(std::pow(2.0, -r.splits));
            per_p[r.P].second.push_back(r.linf_error);
        }
    }
    j["cases"] = cases;
    nlohmann::json eoc;
    for (const auto& [P, he] : per_p) {
        if (he.first.size() >= 2) {
            try {
                eoc[std::to_string(P)] = fit_eoc(he.first, he.second);
            } catch (const std::exception&) {
            }
        }
    }
    j["eoc_per_P"] = eoc;
    std::ofstream f(path);
    f << j.dump(2) << '\n';
}

}  // namespace

int run(const RunConfig& cfg) {
    PresetCase pc;
    try {
        pc = cfg.explicit_case ? *cfg.explicit_case : preset(cfg.preset_name, cfg.seed);
        std::filesystem::create_directories(cfg.out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    const std::vector<int> p_list = cfg.p_list.empty() ? pc.default_p : cfg.p_list;
    const std::vector<int> splits_list =
        cfg.splits_list.empty() ? pc.default_splits : cfg.splits_list;
    if (p_list.empty() || splits_list.empty()) {
        std::cerr << "error: empty sweep lists\n";
        return 1;
    }

    struct Job {
        int P, splits;
    };
    std::vector<Job> jobs;
    for (int P : p_list)
        for (int s : splits_list) jobs.push_back({P, s});

    std::vector<CaseResult> rows;
    std::mutex mtx;
    bool any_failed = false;
    bool config_error = false;
    const std::string csv_path = cfg.out_dir + "/results.csv";

    auto worker_body = [&](const Job& job) {
        try {
            CaseResult r = run_case(pc, job.P, job.splits, cfg.solver, cfg.dump, cfg.out_dir,
                                    cfg.kappa_max);
            const bool ok = r.converged;
            std::lock_guard<std::mutex> lock(mtx);
            rows.push_back(std::move(r));
            std::sort(rows.begin(), rows.end(), [](const CaseResult& a, const CaseResult& b) {
                return std::tie(a.P, a.splits) < std::tie(b.P, b.splits);
            });
            write_results_csv(csv_path, rows);  // partial results flushed per case
            any_failed = any_failed || !ok;
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(mtx);
            std::cerr << "error in case P=" << job.P << " splits=" << job.splits << ": " << e.what()
                      << '\n';
            config_error = true;
        }
    };

    const int nthreads = std::max(1, cfg.threads);
    if (nthreads == 1) {
        for (const Job& job : jobs) worker_body(job);
    } else {
        std::vector<std::thread> pool;
        std::size_t next = 0;
        std::mutex qmtx;
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&] {
                for (;;) {
                    Job job{};
                    {
                        std::lock_guard<std::mutex> lock(qmtx);
                        if (next >= jobs.size()) return;
                        job = jobs[next++];
                    }
                    worker_body(job);
                }
            });
        for (std::thread& t : pool) t.join();
    }

    std::sort(rows.begin(), rows.end(), [](const CaseResult& a, const CaseResult& b) {
        return std::tie(a.P, a.splits) < std::tie(b.P, b.splits);
    });
    write_results_csv(csv_path, rows);
    write_summary_json(cfg.out_dir + "/summary.json", cfg, rows);

    if (config_error) return 1;
    return any_failed ? 2 : 0;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config: " + path);
    nlohmann::json j;
    f >> j;

    RunConfig cfg;
    if (j.contains("preset")) cfg.preset_name = j["preset"].get<std::string>();
    if (j.contains("p")) cfg.p_list = j["p"].get<std::vector<int>>();
    if (j.contains("splits")) cfg.splits_list = j["splits"].get<std::vector<int>>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
    if (j.contains("dump")) {
        for (const auto& d : j["dump"]) {
            const std::string s = d.get<std::string>();
            if (s == "solution") cfg.dump.solution = true;
            else if (s == "estimator") cfg.dump.estimator = true;
            else if (s == "grid") cfg.dump.grid = true;
            else if (s == "system") cfg.dump.system = true;
            else throw std::runtime_error("unknown dump flag: " + s);
        }
    }
    if (j.contains("solver")) {
        const auto& s = j["solver"];
        if (s.contains("abs_tol")) cfg.solver.abs_tol = s["abs_tol"].get<double>();
        if (s.contains("rel_tol")) cfg.solver.rel_tol = s["rel_tol"].get<double>();
        if (s.contains("max_iters")) cfg.solver.max_iters = s["max_iters"].get<int>();
        if (s.contains("kappa_max")) cfg.kappa_max = s["kappa_max"].get<double>();
        if (s.contains("preconditioner")) {
            const std::string p = s["preconditioner"].get<std::string>();
            if (p == "incomplete_cholesky" || p == "ic0")
                cfg.solver.preconditioner = Preconditioner::incomplete_cholesky;
            else if (p == "jacobi")
                cfg.solver.preconditioner = Preconditioner::jacobi;
            else if (p == "none")
                cfg.solver.preconditioner = Preconditioner::none;
            else
                throw std::runtime_error("unknown preconditioner: " + p);
        }
    }

    // Explicit domain/grid/problem block instead of a named preset.
    if (j.contains("domain")) {
        PresetCase pc;
        pc.name = "custom";
        const std::string dom = j["domain"].get<std::string>();
        if (dom == "square") pc.domain = LevelSetDomain::square();
        else if (dom == "octofoil") pc.domain = LevelSetDomain::octofoil();
        else throw std::runtime_error("unknown domain: " + dom);
        pc.default_p = {2, 3, 4, 5};
        pc.default_splits = {0, 1, 2, 3};
        if (j.contains("grid")) {
            const auto& g = j["grid"];
            if (g.contains("mode")) {
                const std::string m = g["mode"].get<std::string>();
                if (m == "uniform") pc.grid.mode = GridMode::uniform;
                else if (m == "random") pc.grid.mode = GridMode::random;
                else throw std::runtime_error("unknown grid mode: " + m);
            }
            if (g.contains("base_depth")) pc.grid.base_depth = g["base_depth"].get<int>();
            if (g.contains("split_probability"))
                pc.grid.split_probability = g["split_probability"].get<double>();
            if (g.contains("max_extra_depth"))
                pc.grid.max_extra_depth = g["max_extra_depth"].get<int>();
            pc.grid.random_seed = cfg.seed;
        }
        if (j.contains("problem")) {
            const auto& p = j["problem"];
            if (p.contains("bc")) {
                const std::string b = p["bc"].get<std::string>();
                if (b == "dirichlet") pc.bc = BcKind::dirichlet;
                else if (b == "neumann") pc.bc = BcKind::neumann;
                else if (b == "robin") pc.bc = BcKind::robin;
                else if (b == "mixed") pc.bc = BcKind::mixed_dir_robin;
                else if (b == "degenerate") pc.bc = BcKind::degenerate_robin;
                else if (b == "helmholtz") pc.bc = BcKind::helmholtz_dirichlet;
                else throw std::runtime_error("unknown bc: " + b);
            }
            if (p.contains("a")) pc.a = p["a"].get<double>();
            if (p.contains("mu")) pc.mu = p["mu"].get<double>();
            if (p.contains("exact") && p["exact"].get<std::string>() == "poly")
                pc.polynomial_exact = true;
        }
        cfg.explicit_case = pc;
    }
    return cfg;
}

}  // namespace lsqd
