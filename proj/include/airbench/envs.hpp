#pragma once

#include <string>
#include <vector>

#include "airbench/core.hpp"
#include "airbench/rng.hpp"

namespace airbench {

enum class EnvKind { Stochastic, Scripted, Changepoint, Sine, GaussianLinear };

struct SineArm {
    double amp = 0.5;
    double offset = 0.5;
    double period = 2000.0;
    double phase = 0.0;
};

// Deterministic schedule of per-round mean rewards plus a noise family.
struct EnvironmentScript {
    EnvKind kind = EnvKind::Stochastic;
    int K = 0;
    long T = 0;
    RewardFamily noise = RewardFamily::Bernoulli;

    std::vector<double> means;                      // stochastic
    std::vector<std::vector<double>> table;         // scripted / changepoint (T x K)
    std::vector<SineArm> sine;                      // sine
    std::vector<std::vector<double>> actions;       // gaussian_linear (K x d)
    std::vector<double> theta;                      // gaussian_linear (d)

    std::vector<double> mean_schedule(long t) const;
};

struct ChangeBatch {
    long length = 0;
    std::vector<double> means;
};

// Declarative environment description (parsed from the harness config).
struct EnvConfig {
    std::string kind = "stochastic";  // stochastic|scripted|changepoint|sine|gaussian_linear
    int K = 2;
    long T = 1000;
    std::vector<double> means;                 // stochastic
    std::string csv_path;                      // scripted
    std::vector<ChangeBatch> batches;          // changepoint
    std::vector<SineArm> sine;                 // sine (empty -> defaults)
    std::vector<std::vector<double>> actions;  // gaussian_linear
    std::vector<double> theta;                 // gaussian_linear
};

EnvironmentScript build_env(const EnvConfig& spec);

// CSV with header "arm1..armK", one round per row, rounds indexed from 0.
EnvironmentScript load_scripted_csv(const std::string& path);
void write_scripted_csv(const std::string& path, const EnvironmentScript& env);

// Bundled stand-in for file-based adversarial sequences: piecewise linear
// trends with periodic swaps of the best arm; deterministic in the seed.
EnvironmentScript synthetic_adversarial_script(int K, long T, std::uint64_t seed);

// Draws o_t for decision pi at round t from the (seed, t, "env") stream.
Observation env_sample(const EnvironmentScript& env, long t, int pi, std::uint64_t seed);

// Benchmarks derived from the schedule.
int single_best_arm(const EnvironmentScript& env);
std::vector<double> per_round_best_means(const EnvironmentScript& env);

}  // namespace airbench
