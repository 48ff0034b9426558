#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "airbench/core.hpp"
#include "airbench/envs.hpp"

namespace airbench {

struct AgentSpec {
    std::string name = "aps";  // aps|exp3|ucb1|ts|uniform|oracle|glb
    double eta = 0.0;          // 0 = schedule default for the env/horizon
    double gamma = 0.001;      // forced-exploration rate
    bool anytime = false;      // eta_t = sqrt(log K/((2K+4)t)) instead of fixed
    double ts_prior = 1.0;     // Beta(c, 1) prior
    bool diagnostics = false;  // record per-round AIR terms (slower)
};

struct ExperimentConfig {
    EnvConfig env;
    AgentSpec agent;
    std::vector<std::uint64_t> seeds = {1};
    std::string benchmark = "single-best";  // single-best|per-round-best|per-batch-best
    std::string out_dir;                    // empty = no files
    bool svg = false;
};

struct RoundRecord {
    long round = 0;
    int decision = 0;
    double observation = 0.0;
    double inst_regret = 0.0;
    double cum_regret = 0.0;
};

struct ExperimentTrace {
    std::uint64_t seed = 0;
    std::vector<RoundRecord> records;
    // Optional per-round diagnostics (filled when agent.diagnostics is set).
    std::vector<double> air_values;
    std::vector<double> bound_terms;  // AIR_t plus the gradient inner-product slack
    double log_cardinality = 0.0;
};

struct ExperimentSummary {
    std::vector<double> mean_cum_regret;
    std::vector<double> stderr_cum_regret;
    double mean_final_regret = 0.0;
    double stderr_final_regret = 0.0;
};

struct ExperimentResult {
    std::vector<ExperimentTrace> traces;
    ExperimentSummary summary;
};

// Parses the JSON config document (see README for the schema).
ExperimentConfig parse_config_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Named environment presets used by the CLI and the acceptance checks.
EnvConfig env_preset(const std::string& name);

ExperimentResult run_experiment(const ExperimentConfig& config);

// Cumulative expected regret of a trace against the requested benchmark,
// computed from the mean schedule (never from realized noise).
double dynamic_regret(const ExperimentTrace& trace, const EnvironmentScript& env,
                      const std::string& mode);

struct BoundReport {
    std::string bound;
    double mean_regret = 0.0;
    double stderr_regret = 0.0;
    double rhs = 0.0;
    bool pass = false;
    std::string note;
};

// bound: thm4_1 (closed-form RHS 2 sqrt(2(K+2)T log K)), thm3_4 or thm7_2
// (log N/eta plus summed per-round diagnostic terms). N is the decision count
// for thm3_4/thm4_1 and the model count for thm7_2.
BoundReport theorem_bound_check(const std::vector<ExperimentTrace>& traces,
                                const std::string& bound, int N, double eta);

struct SweepRow {
    double eta = 0.0;
    double mean_final_regret = 0.0;
    double stderr_final_regret = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double envelope_min = 0.0;
};

SweepResult sweep(const ExperimentConfig& config, const std::vector<double>& etas);

// CSV / SVG emission. Writers format deterministically.
void write_trace_csv(const std::string& path, const std::vector<ExperimentTrace>& traces);
void write_summary_csv(const std::string& path, const ExperimentSummary& summary);
void write_regret_svg(const std::string& path, const ExperimentSummary& summary,
                      const std::string& title);
void write_sweep_csv(const std::string& path, const SweepResult& sweep_result);
void write_sweep_svg(const std::string& path, const SweepResult& sweep_result,
                     const std::string& title);

}  // namespace airbench
