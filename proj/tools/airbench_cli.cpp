#include <cstdio>
#include <exception>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "airbench/agents.hpp"
#include "airbench/bench.hpp"

namespace {

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> out;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"airbench: information-ratio bandit benchmark harness"};

    std::string config_path, agent, env, out_dir, sweep_grid, benchmark, bound;
    double eta = -1.0, gamma = -1.0, ts_prior = -1.0;
    long seeds = 0, horizon = 0;
    bool svg = false, diagnostics = false, anytime = false;

    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--agent", agent, "agent: aps, exp3, ucb1, ts, uniform, oracle, glb");
    app.add_option("--env", env, "environment preset: stochastic16, changepoint4, sine4, linear2d");
    app.add_option("--eta", eta, "learning rate (0 = schedule default)");
    app.add_option("--gamma", gamma, "forced-exploration rate");
    app.add_option("--seeds", seeds, "run seeds 1..N");
    app.add_option("--horizon", horizon, "override the environment horizon");
    app.add_option("--benchmark", benchmark, "single-best, per-round-best, or per-batch-best");
    app.add_option("--out", out_dir, "directory for trace.csv and summary.csv");
    app.add_flag("--svg", svg, "also write SVG plots to the output directory");
    app.add_flag("--diagnostics", diagnostics, "record per-round objective diagnostics");
    app.add_flag("--anytime", anytime, "use the anytime learning-rate schedule");
    app.add_option("--ts-prior", ts_prior, "Beta(c, 1) prior parameter for ts");
    app.add_option("--sweep-grid", sweep_grid, "comma-separated etas; sweep instead of a single run");
    app.add_option("--bound", bound, "check a regret bound: thm4_1, thm3_4, or thm7_2");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        airbench::ExperimentConfig config;
        if (!config_path.empty()) config = airbench::load_config(config_path);
        else if (env.empty())
            throw std::invalid_argument("either --config or --env is required");
        if (!env.empty()) config.env = airbench::env_preset(env);
        if (!agent.empty()) config.agent.name = agent;
        if (eta >= 0.0) config.agent.eta = eta;
        if (gamma >= 0.0) config.agent.gamma = gamma;
        if (ts_prior >= 0.0) config.agent.ts_prior = ts_prior;
        if (diagnostics) config.agent.diagnostics = true;
        if (anytime) config.agent.anytime = true;
        if (horizon > 0) config.env.T = horizon;
        if (!benchmark.empty()) config.benchmark = benchmark;
        if (!out_dir.empty()) config.out_dir = out_dir;
        if (svg) config.svg = true;
        if (seeds > 0) {
            config.seeds.clear();
            for (long s = 1; s <= seeds; ++s)
                config.seeds.push_back(static_cast<std::uint64_t>(s));
        }
        if (!bound.empty() && (bound == "thm3_4" || bound == "thm7_2"))
            config.agent.diagnostics = true;

        if (!sweep_grid.empty()) {
            airbench::SweepResult result = airbench::sweep(config, parse_grid(sweep_grid));
            std::printf("eta,mean_final_regret,stderr\n");
            for (const auto& row : result.rows)
                std::printf("%.10g,%.10g,%.10g\n", row.eta, row.mean_final_regret,
                            row.stderr_final_regret);
            std::printf("envelope_min,%.10g\n", result.envelope_min);
            if (!config.out_dir.empty()) {
                std::filesystem::create_directories(config.out_dir);
                std::filesystem::path dir(config.out_dir);
                airbench::write_sweep_csv((dir / "sweep.csv").string(), result);
                if (config.svg)
                    airbench::write_sweep_svg((dir / "sweep.svg").string(), result,
                                              config.agent.name + " eta sweep");
            }
            return 0;
        }

        airbench::ExperimentResult result = airbench::run_experiment(config);
        std::printf("agent=%s env=%s seeds=%zu horizon=%zu\n", config.agent.name.c_str(),
                    config.env.kind.c_str(), result.traces.size(),
                    result.traces[0].records.size());
        std::printf("mean_final_regret=%.6f stderr=%.6f\n", result.summary.mean_final_regret,
                    result.summary.stderr_final_regret);

        if (!bound.empty()) {
            double used_eta = config.agent.eta;
            if (used_eta <= 0.0) {
                int K = config.env.kind == "gaussian_linear"
                            ? static_cast<int>(config.env.actions.size())
                            : config.env.K;
                used_eta = airbench::eta_horizon(K, config.env.T);
            }
            airbench::BoundReport report = airbench::theorem_bound_check(
                result.traces, bound, config.env.K, used_eta);
            std::printf("%s: mean_regret=%.4f rhs=%.4f (%s) -> %s\n", report.bound.c_str(),
                        report.mean_regret, report.rhs, report.note.c_str(),
                        report.pass ? "PASS" : "FAIL");
            if (!report.pass) return 3;
        }
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
