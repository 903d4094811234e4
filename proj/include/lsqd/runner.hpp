#pragma once

#include <optional>
#include <string>

#include "lsqd/analysis.hpp"
#include "lsqd/problems.hpp"
#include "lsqd/solver.hpp"

namespace lsqd {

struct DumpFlags {
    bool solution = false;
    bool estimator = false;
    bool grid = false;
    bool system = false;
};

struct RunConfig {
    std::string preset_name;
    std::optional<PresetCase> explicit_case;  // overrides preset_name when set
    std::vector<int> p_list;                  // empty: preset defaults
    std::vector<int> splits_list;
    SolveOptions solver;
    double kappa_max = 1e40;  // stabilization condition-number cap
    std::string out_dir = "lsqd_out";
    DumpFlags dump;
    std::uint64_t seed = 7;
    int threads = 1;
};

struct PhaseTimes {
    double grid = 0.0;
    double neighborhoods = 0.0;
    double assembly = 0.0;
    double solve = 0.0;
    double analysis = 0.0;
};

struct CaseResult {
    std::string run_id;
    std::string preset;
    int P = 0;
    int splits = 0;
    int N = 0;
    int M = 0;
    int eta_min = 0;  // smallest neighborhood actually built
    double epsilon = 0.0;
    int iterations = 0;
    double residual_inf = 0.0;
    double linf_error = 0.0;
    double estimator_global = 0.0;  // nan for 1D runs
    double wall_time_s = 0.0;
    bool converged = false;
    int under_resolved = 0;
    bool connected = true;
    PhaseTimes phases;
};

/// One grid-build/solve/analyze pipeline pass.
CaseResult run_case(const PresetCase& pc, int P, int splits, const SolveOptions& solver,
                    const DumpFlags& dump = {}, const std::string& out_dir = "",
                    double kappa_max = 1e40);

/// Full (P, splits) sweep with results.csv and summary.json under cfg.out_dir.
/// Returns 0 on success, 2 when any case failed to converge, 1 on bad config.
int run(const RunConfig& cfg);

/// Parse a JSON run configuration (flat schema; see README).
RunConfig load_config(const std::string& path);

}  // namespace lsqd
