#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lsqd/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"lsqd: meshless least-squares elliptic PDE solver and convergence harness"};

    std::string config_path;
    std::string preset_name;
    std::string out_dir;
    std::vector<int> p_list;
    std::vector<int> splits_list;
    std::int64_t seed = -1;
    std::vector<std::string> dumps;
    int threads = 0;
    bool list_presets = false;

    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--preset", preset_name, "preset name, e.g. dirichlet/octofoil/adaptive");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--p", p_list, "polynomial orders to sweep")->delimiter(',');
    app.add_option("--splits", splits_list, "global refinement counts to sweep")->delimiter(',');
    app.add_option("--seed", seed, "grid random seed");
    app.add_option("--dump", dumps, "artifacts to dump: solution, estimator, grid, system")
        ->delimiter(',');
    app.add_option("--threads", threads, "concurrent cases");
    app.add_flag("--list-presets", list_presets, "print known preset names and exit");

    CLI11_PARSE(app, argc, argv);

    if (list_presets) {
        for (const std::string& n : lsqd::preset_names()) std::cout << n << '\n';
        return 0;
    }

    lsqd::RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = lsqd::load_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    if (!preset_name.empty()) {
        cfg.preset_name = preset_name;
        cfg.explicit_case.reset();
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!p_list.empty()) cfg.p_list = p_list;
    if (!splits_list.empty()) cfg.splits_list = splits_list;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (threads > 0) cfg.threads = threads;
    for (const std::string& d : dumps) {
        if (d == "solution") cfg.dump.solution = true;
        else if (d == "estimator") cfg.dump.estimator = true;
        else if (d == "grid") cfg.dump.grid = true;
        else if (d == "system") cfg.dump.system = true;
        else {
            std::cerr << "error: unknown dump flag: " << d << '\n';
            return 1;
        }
    }
    if (cfg.preset_name.empty() && !cfg.explicit_case) {
        std::cerr << "error: no preset or config given (try --list-presets)\n";
        return 1;
    }
    return lsqd::run(cfg);
}
