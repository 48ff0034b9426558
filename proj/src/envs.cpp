#include "airbench/envs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace airbench {

std::vector<double> EnvironmentScript::mean_schedule(long t) const {
    if (t < 0 || t >= T) throw std::invalid_argument("round out of range");
    switch (kind) {
        case EnvKind::Stochastic:
            return means;
        case EnvKind::Scripted:
        case EnvKind::Changepoint:
            return table[static_cast<std::size_t>(t)];
        case EnvKind::Sine: {
            std::vector<double> out(K);
            for (int i = 0; i < K; ++i) {
                const SineArm& s = sine[i];
                double v = s.offset +
                           s.amp * std::sin(2.0 * std::numbers::pi * t / s.period + s.phase);
                out[i] = std::clamp(v, 0.0, 1.0);
            }
            return out;
        }
        case EnvKind::GaussianLinear: {
            std::vector<double> out(K);
            for (int i = 0; i < K; ++i) {
                double v = 0.0;
                for (std::size_t j = 0; j < theta.size(); ++j) v += theta[j] * actions[i][j];
                out[i] = v;
            }
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

namespace {

void check_bernoulli_means(const std::vector<double>& m, const std::string& where) {
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i] < 0.0 || m[i] > 1.0)
            throw std::invalid_argument(where + ": mean " + std::to_string(m[i]) +
                                        " for arm " + std::to_string(i + 1) +
                                        " outside [0, 1]");
}

}  // namespace

EnvironmentScript build_env(const EnvConfig& spec) {
    if (spec.T < 1) throw std::invalid_argument("horizon must be at least 1");
    EnvironmentScript env;
    env.T = spec.T;

    if (spec.kind == "stochastic") {
        env.kind = EnvKind::Stochastic;
        env.means = spec.means;
        if (env.means.empty()) throw std::invalid_argument("stochastic env needs means");
        env.K = static_cast<int>(env.means.size());
        check_bernoulli_means(env.means, "stochastic env");
    } else if (spec.kind == "scripted") {
        if (spec.csv_path.empty())
            throw std::invalid_argument("scripted env needs csv_path");
        env = load_scripted_csv(spec.csv_path);
    } else if (spec.kind == "changepoint") {
        env.kind = EnvKind::Changepoint;
        if (spec.batches.empty()) throw std::invalid_argument("changepoint env needs batches");
        env.K = static_cast<int>(spec.batches[0].means.size());
        for (const ChangeBatch& b : spec.batches) {
            if (b.length < 1) throw std::invalid_argument("batch length must be at least 1");
            if (static_cast<int>(b.means.size()) != env.K)
                throw std::invalid_argument("all batches must share the arm count");
            check_bernoulli_means(b.means, "changepoint env");
            for (long i = 0; i < b.length; ++i) env.table.push_back(b.means);
        }
        env.T = static_cast<long>(env.table.size());
        if (spec.T != env.T)
            throw std::invalid_argument("batch lengths sum to " + std::to_string(env.T) +
                                        " but horizon is " + std::to_string(spec.T));
    } else if (spec.kind == "sine") {
        env.kind = EnvKind::Sine;
        env.sine = spec.sine;
        if (env.sine.empty()) {
            // default: 4 arms, period 2000, quarter-turn phase offsets
            for (int i = 0; i < 4; ++i)
                env.sine.push_back({0.5, 0.5, 2000.0, i * std::numbers::pi / 2.0});
        }
        env.K = static_cast<int>(env.sine.size());
        for (const SineArm& s : env.sine)
            if (!(std::isfinite(s.amp) && std::isfinite(s.offset) && std::isfinite(s.phase)) ||
                !(s.period > 0.0))
                throw std::invalid_argument("sine parameters must be finite with period > 0");
    } else if (spec.kind == "gaussian_linear") {
        env.kind = EnvKind::GaussianLinear;
        env.noise = RewardFamily::GaussianUnitVariance;
        env.actions = spec.actions;
        env.theta = spec.theta;
        if (env.actions.empty() || env.theta.empty())
            throw std::invalid_argument("gaussian_linear env needs actions and theta");
        for (const auto& a : env.actions)
            if (a.size() != env.theta.size())
                throw std::invalid_argument("action dimension does not match theta");
        env.K = static_cast<int>(env.actions.size());
        std::vector<double> m = env.mean_schedule(0);
        for (double v : m)
            if (v < -1.0 || v > 1.0)
                throw std::invalid_argument("gaussian_linear mean rewards must lie in [-1, 1]");
    } else {
        throw std::invalid_argument("unknown environment kind: " + spec.kind);
    }
    return env;
}

EnvironmentScript load_scripted_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open scripted CSV: " + path);
    std::string line;
    // Leading '#' lines carry comments (e.g. the 0-based round convention).
    do {
        if (!std::getline(in, line)) throw std::invalid_argument("empty scripted CSV: " + path);
    } while (!line.empty() && line[0] == '#');
    int k = 0;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            ++k;
            if (cell != "arm" + std::to_string(k))
                throw std::invalid_argument("scripted CSV header must be arm1..armK, got '" +
                                            cell + "' at column " + std::to_string(k));
        }
    }
    EnvironmentScript env;
    env.kind = EnvKind::Scripted;
    env.K = k;
    long row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> means;
        int col = 0;
        while (std::getline(ss, cell, ',')) {
            ++col;
            double v;
            try {
                v = std::stod(cell);
            } catch (const std::exception&) {
                throw std::invalid_argument("row " + std::to_string(row) + ", arm" +
                                            std::to_string(col) + ": not a number");
            }
            if (v < 0.0 || v > 1.0)
                throw std::invalid_argument("row " + std::to_string(row) + ", arm" +
                                            std::to_string(col) + ": value " +
                                            std::to_string(v) + " outside [0, 1]");
            means.push_back(v);
        }
        if (col != k)
            throw std::invalid_argument("row " + std::to_string(row) + " has " +
                                        std::to_string(col) + " columns, expected " +
                                        std::to_string(k));
        env.table.push_back(std::move(means));
    }
    if (env.table.empty()) throw std::invalid_argument("scripted CSV has no data rows: " + path);
    env.T = static_cast<long>(env.table.size());
    return env;
}

void write_scripted_csv(const std::string& path, const EnvironmentScript& env) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write scripted CSV: " + path);
    out << "# per-round Bernoulli means; rows are rounds t = 0.." << (env.T - 1) << "\n";
    for (int j = 0; j < env.K; ++j) out << (j ? ",arm" : "arm") << (j + 1);
    out << "\n";
    out.precision(17);
    for (long t = 0; t < env.T; ++t) {
        std::vector<double> m = env.mean_schedule(t);
        for (int j = 0; j < env.K; ++j) out << (j ? "," : "") << m[j];
        out << "\n";
    }
}

EnvironmentScript synthetic_adversarial_script(int K, long T, std::uint64_t seed) {
    if (K < 1 || T < 1) throw std::invalid_argument("K and T must be positive");
    EnvironmentScript env;
    env.kind = EnvKind::Scripted;
    env.K = K;
    env.T = T;
    env.table.assign(static_cast<std::size_t>(T), std::vector<double>(K, 0.5));

    long segment = std::max<long>(T / 8, 1);
    for (long t = 0; t < T; ++t) {
        CounterRng rng(seed, t / segment, "adv-script");
        long phase = t / segment;
        int best = static_cast<int>(phase % K);
        double drift = static_cast<double>(t % segment) / segment;  // within-segment trend
        for (int i = 0; i < K; ++i) {
            double base = 0.25 + 0.1 * rng.next_double();
            double v = i == best ? 0.65 + 0.2 * drift : base + 0.1 * std::sin(drift * 6.0 + i);
            env.table[t][i] = std::clamp(v, 0.0, 1.0);
        }
    }
    return env;
}

Observation env_sample(const EnvironmentScript& env, long t, int pi, std::uint64_t seed) {
    if (pi < 0 || pi >= env.K) throw std::invalid_argument("decision index out of range");
    std::vector<double> m = env.mean_schedule(t);
    CounterRng rng(seed, t, "env");
    if (env.noise == RewardFamily::Bernoulli)
        return {rng.bernoulli(m[pi]) ? 1.0 : 0.0};
    return {m[pi] + rng.gaussian()};
}

int single_best_arm(const EnvironmentScript& env) {
    std::vector<double> total(env.K, 0.0);
    for (long t = 0; t < env.T; ++t) {
        std::vector<double> m = env.mean_schedule(t);
        for (int i = 0; i < env.K; ++i) total[i] += m[i];
    }
    return static_cast<int>(std::max_element(total.begin(), total.end()) - total.begin());
}

std::vector<double> per_round_best_means(const EnvironmentScript& env) {
    std::vector<double> out(static_cast<std::size_t>(env.T));
    for (long t = 0; t < env.T; ++t) {
        std::vector<double> m = env.mean_schedule(t);
        out[t] = *std::max_element(m.begin(), m.end());
    }
    return out;
}

}  // namespace airbench
