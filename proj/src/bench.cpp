#include "airbench/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "airbench/agents.hpp"
#include "airbench/air.hpp"
#include "airbench/linear.hpp"
#include "airbench/rng.hpp"

namespace airbench {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Config parsing

std::vector<double> as_doubles(const json& j, const std::string& where) {
    if (!j.is_array()) throw std::invalid_argument(where + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw std::invalid_argument(where + " must be an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

EnvConfig parse_env(const json& j) {
    EnvConfig env;
    if (j.contains("preset")) {
        env = env_preset(j.at("preset").get<std::string>());
    }
    if (j.contains("kind")) env.kind = j.at("kind").get<std::string>();
    if (j.contains("K")) env.K = j.at("K").get<int>();
    if (j.contains("T")) env.T = j.at("T").get<long>();
    if (j.contains("means")) env.means = as_doubles(j.at("means"), "env.means");
    if (j.contains("csv")) env.csv_path = j.at("csv").get<std::string>();
    if (j.contains("batches")) {
        env.batches.clear();
        for (const auto& b : j.at("batches")) {
            ChangeBatch batch;
            batch.length = b.at("length").get<long>();
            batch.means = as_doubles(b.at("means"), "env.batches[].means");
            env.batches.push_back(std::move(batch));
        }
    }
    if (j.contains("sine")) {
        env.sine.clear();
        for (const auto& s : j.at("sine")) {
            SineArm arm;
            if (s.contains("amp")) arm.amp = s.at("amp").get<double>();
            if (s.contains("offset")) arm.offset = s.at("offset").get<double>();
            if (s.contains("period")) arm.period = s.at("period").get<double>();
            if (s.contains("phase")) arm.phase = s.at("phase").get<double>();
            env.sine.push_back(arm);
        }
    }
    if (j.contains("actions")) {
        env.actions.clear();
        for (const auto& a : j.at("actions"))
            env.actions.push_back(as_doubles(a, "env.actions[]"));
    }
    if (j.contains("theta")) env.theta = as_doubles(j.at("theta"), "env.theta");
    return env;
}

std::vector<std::uint64_t> parse_seeds(const json& j) {
    std::vector<std::uint64_t> seeds;
    if (j.is_number_integer()) {
        long n = j.get<long>();
        if (n <= 0) throw std::invalid_argument("seeds count must be positive");
        for (long s = 1; s <= n; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
    } else if (j.is_array()) {
        for (const auto& v : j) seeds.push_back(v.get<std::uint64_t>());
    } else {
        throw std::invalid_argument("seeds must be an integer count or an array");
    }
    return seeds;
}

void normalize_seeds(std::vector<std::uint64_t>& seeds) {
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
}

// ---------------------------------------------------------------------------
// Agent runners

class Runner {
public:
    virtual ~Runner() = default;
    virtual int act(std::uint64_t seed, long t) = 0;
    virtual void update(long t, int chosen, double obs) = 0;
    // Called after act and before update; fills per-round diagnostics.
    virtual void record_diag(long t, ExperimentTrace& trace) { (void)t, (void)trace; }
};

int sample_policy(const Policy& p, std::uint64_t seed, long t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t), "decide");
    return rng.categorical(p.weights());
}

struct EtaSchedule {
    double fixed = 0.0;  // 0 = automatic
    bool anytime = false;
    int K = 2;
    long T = 1;
    double at(long t) const {  // t is 0-based
        if (fixed > 0.0) return fixed;
        return anytime ? eta_anytime(K, t + 1) : eta_horizon(K, T);
    }
};

class ApsRunner : public Runner {
public:
    ApsRunner(int K, EtaSchedule eta, double gamma, bool diagnostics)
        : p_(Policy::uniform(K)), eta_(eta), gamma_(gamma), diagnostics_(diagnostics) {}
    int act(std::uint64_t seed, long t) override { return sample_policy(p_, seed, t); }
    void update(long t, int chosen, double obs) override {
        p_ = simplified_aps_update(p_, chosen, obs > 0.5 ? 1 : 0, eta_.at(t));
        if (gamma_ > 0.0) p_ = p_.mixed_with_uniform(gamma_);
    }
    void record_diag(long t, ExperimentTrace& trace) override {
        if (!diagnostics_) return;
        double eta = eta_.at(t);
        JointBelief belief = algorithm4_belief(p_, eta);
        double air = air_eval(p_, p_, eta, belief);
        AirGradient grad = air_grad(p_, p_, eta, belief);
        int K = p_.size();
        // sup over vertex beliefs (point mass on a decision, free means) of
        // <grad, nu*> minus <grad, nu>; the alpha parts both sum to one, so
        // the additive constant in d_alpha cancels.
        double at_nu = 0.0;
        for (int i = 0; i < K; ++i) {
            at_nu += belief.alpha[i] * grad.d_alpha[i];
            for (int j = 0; j < K; ++j) at_nu += belief.beta[i][j] * grad.d_beta[i][j];
        }
        double best = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < K; ++i) {
            double v = grad.d_alpha[i];
            for (int j = 0; j < K; ++j) v += std::max(grad.d_beta[i][j], 0.0);
            best = std::max(best, v);
        }
        double slack = std::max(best - at_nu, 0.0);
        trace.air_values.push_back(air);
        trace.bound_terms.push_back(air + slack);
        trace.log_cardinality = std::log(static_cast<double>(std::max(K, 2)));
    }

private:
    Policy p_;
    EtaSchedule eta_;
    double gamma_;
    bool diagnostics_;
};

class Exp3Runner : public Runner {
public:
    Exp3Runner(int K, EtaSchedule eta, double gamma)
        : p_(Policy::uniform(K)), eta_(eta), gamma_(gamma) {}
    int act(std::uint64_t seed, long t) override { return sample_policy(p_, seed, t); }
    void update(long t, int chosen, double obs) override {
        p_ = exp3_update(p_, chosen, obs, eta_.at(t));
        if (gamma_ > 0.0) p_ = p_.mixed_with_uniform(gamma_);
    }

private:
    Policy p_;
    EtaSchedule eta_;
    double gamma_;
};

class Ucb1Runner : public Runner {
public:
    explicit Ucb1Runner(int K) : counts_(K, 0), means_(K, 0.0) {}
    int act(std::uint64_t /*seed*/, long t) override {
        return ucb1_select(counts_, means_, t + 1);
    }
    void update(long /*t*/, int chosen, double obs) override {
        ++counts_[chosen];
        means_[chosen] += (obs - means_[chosen]) / static_cast<double>(counts_[chosen]);
    }

private:
    std::vector<long> counts_;
    std::vector<double> means_;
};

class TsRunner : public Runner {
public:
    TsRunner(int K, double prior) {
        betas_.a.assign(K, prior);
        betas_.b.assign(K, 1.0);
    }
    int act(std::uint64_t seed, long t) override {
        CounterRng rng(seed, static_cast<std::uint64_t>(t), "decide");
        return thompson_select(betas_, rng);
    }
    void update(long /*t*/, int chosen, double obs) override {
        thompson_update(betas_, chosen, obs > 0.5 ? 1 : 0);
    }

private:
    BetaParams betas_;
};

class UniformRunner : public Runner {
public:
    explicit UniformRunner(int K) : p_(Policy::uniform(K)) {}
    int act(std::uint64_t seed, long t) override { return sample_policy(p_, seed, t); }
    void update(long, int, double) override {}

private:
    Policy p_;
};

class OracleRunner : public Runner {
public:
    explicit OracleRunner(const EnvironmentScript& env) : env_(&env) {}
    int act(std::uint64_t /*seed*/, long t) override {
        std::vector<double> m = env_->mean_schedule(t);
        return static_cast<int>(std::max_element(m.begin(), m.end()) - m.begin());
    }
    void update(long, int, double) override {}

private:
    const EnvironmentScript* env_;
};

class GlbRunner : public Runner {
public:
    GlbRunner(LinearActionSet actions, EtaSchedule eta, double gamma)
        : actions_(std::move(actions)), state_(glb_init(actions_)), eta_(eta), gamma_(gamma) {}
    int act(std::uint64_t seed, long t) override { return sample_policy(state_.policy, seed, t); }
    void update(long t, int chosen, double obs) override {
        state_ = glb_step(state_, actions_, chosen, obs, eta_.at(t), gamma_);
    }

private:
    LinearActionSet actions_;
    GlbState state_;
    EtaSchedule eta_;
    double gamma_;
};

std::unique_ptr<Runner> make_runner(const ExperimentConfig& config,
                                    const EnvironmentScript& env) {
    const AgentSpec& a = config.agent;
    EtaSchedule eta{a.eta, a.anytime, env.K, env.T};
    bool bernoulli_agent =
        a.name == "aps" || a.name == "exp3" || a.name == "ucb1" || a.name == "ts";
    if (bernoulli_agent && env.noise != RewardFamily::Bernoulli)
        throw std::invalid_argument("agent '" + a.name + "' requires a Bernoulli-reward environment");
    if (a.diagnostics && a.name != "aps")
        throw std::invalid_argument("diagnostics are only available for agent 'aps'");
    if (a.name == "aps") return std::make_unique<ApsRunner>(env.K, eta, a.gamma, a.diagnostics);
    if (a.name == "exp3") return std::make_unique<Exp3Runner>(env.K, eta, a.gamma);
    if (a.name == "ucb1") return std::make_unique<Ucb1Runner>(env.K);
    if (a.name == "ts") return std::make_unique<TsRunner>(env.K, a.ts_prior);
    if (a.name == "uniform") return std::make_unique<UniformRunner>(env.K);
    if (a.name == "oracle") return std::make_unique<OracleRunner>(env);
    if (a.name == "glb") {
        if (env.kind != EnvKind::GaussianLinear)
            throw std::invalid_argument("agent 'glb' requires the gaussian_linear environment");
        std::vector<Eigen::VectorXd> acts;
        for (const auto& row : env.actions) {
            Eigen::VectorXd v(static_cast<int>(row.size()));
            for (int i = 0; i < v.size(); ++i) v[i] = row[i];
            acts.push_back(std::move(v));
        }
        return std::make_unique<GlbRunner>(make_action_set(std::move(acts)), eta, a.gamma);
    }
    throw std::invalid_argument("unknown agent '" + a.name +
                                "' (expected aps, exp3, ucb1, ts, uniform, oracle, or glb)");
}

// Benchmark mean at each round under the requested comparator.
std::vector<double> benchmark_schedule(const EnvironmentScript& env, const std::string& mode) {
    std::vector<double> bench(env.T, 0.0);
    if (mode == "single-best") {
        int b = single_best_arm(env);
        for (long t = 0; t < env.T; ++t) bench[t] = env.mean_schedule(t)[b];
    } else if (mode == "per-round-best") {
        bench = per_round_best_means(env);
    } else if (mode == "per-batch-best") {
        if (env.kind != EnvKind::Changepoint)
            throw std::invalid_argument("per-batch-best requires a changepoint environment");
        // Means are constant within a batch, so the best fixed arm of each
        // batch attains the per-round best throughout the batch.
        bench = per_round_best_means(env);
    } else {
        throw std::invalid_argument("unknown benchmark '" + mode +
                                    "' (expected single-best, per-round-best, or per-batch-best)");
    }
    return bench;
}

// ---------------------------------------------------------------------------
// Deterministic number formatting for CSV/SVG output

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

void require_open(const std::ofstream& out, const std::string& path) {
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
}

struct SvgFrame {
    double width = 720, height = 440;
    double left = 70, right = 20, top = 40, bottom = 50;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    double sx(double x) const {
        return left + (x - xmin) / (xmax - xmin) * (width - left - right);
    }
    double sy(double y) const {
        return height - bottom - (y - ymin) / (ymax - ymin) * (height - top - bottom);
    }
};

void svg_header(std::ostream& out, const SvgFrame& f, const std::string& title,
                const std::string& xlabel, const std::string& ylabel) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\""
        << f.height << "\" viewBox=\"0 0 " << f.width << " " << f.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << f.width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
    // axes
    out << "<line x1=\"" << f.left << "\" y1=\"" << f.height - f.bottom << "\" x2=\""
        << f.width - f.right << "\" y2=\"" << f.height - f.bottom
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << f.left << "\" y1=\"" << f.top << "\" x2=\"" << f.left << "\" y2=\""
        << f.height - f.bottom << "\" stroke=\"black\"/>\n";
    // tick labels at the extremes
    out << "<text x=\"" << f.left << "\" y=\"" << f.height - f.bottom + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(f.xmin) << "</text>\n";
    out << "<text x=\"" << f.width - f.right << "\" y=\"" << f.height - f.bottom + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(f.xmax) << "</text>\n";
    out << "<text x=\"" << f.left - 8 << "\" y=\"" << f.height - f.bottom + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(f.ymin)
        << "</text>\n";
    out << "<text x=\"" << f.left - 8 << "\" y=\"" << f.top + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(f.ymax)
        << "</text>\n";
    out << "<text x=\"" << (f.left + f.width - f.right) / 2 << "\" y=\"" << f.height - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xlabel
        << "</text>\n";
    out << "<text x=\"16\" y=\"" << (f.top + f.height - f.bottom) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 16 " << (f.top + f.height - f.bottom) / 2 << ")\">" << ylabel
        << "</text>\n";
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig config;
    try {
        if (j.contains("env")) config.env = parse_env(j.at("env"));
        if (j.contains("agent")) {
            const json& a = j.at("agent");
            if (a.contains("name")) config.agent.name = a.at("name").get<std::string>();
            if (a.contains("eta")) config.agent.eta = a.at("eta").get<double>();
            if (a.contains("gamma")) config.agent.gamma = a.at("gamma").get<double>();
            if (a.contains("anytime")) config.agent.anytime = a.at("anytime").get<bool>();
            if (a.contains("ts_prior")) config.agent.ts_prior = a.at("ts_prior").get<double>();
            if (a.contains("diagnostics"))
                config.agent.diagnostics = a.at("diagnostics").get<bool>();
        }
        if (j.contains("seeds")) config.seeds = parse_seeds(j.at("seeds"));
        if (j.contains("benchmark")) config.benchmark = j.at("benchmark").get<std::string>();
        if (j.contains("out")) config.out_dir = j.at("out").get<std::string>();
        if (j.contains("svg")) config.svg = j.at("svg").get<bool>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config field has the wrong type: ") + e.what());
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_json(buf.str());
}

EnvConfig env_preset(const std::string& name) {
    EnvConfig env;
    if (name == "stochastic16") {
        env.kind = "stochastic";
        env.K = 16;
        env.T = 2000;
        env.means.assign(16, 0.0);
        env.means[0] = 0.6;
        for (int i = 1; i < 16; ++i)
            env.means[i] = 0.3 + 0.2 * (i - 1) / 14.0;
    } else if (name == "changepoint4") {
        env.kind = "changepoint";
        env.K = 2;
        env.T = 4000;
        for (int b = 0; b < 4; ++b) {
            ChangeBatch batch;
            batch.length = 1000;
            batch.means = (b % 2 == 0) ? std::vector<double>{0.9, 0.1}
                                       : std::vector<double>{0.1, 0.9};
            env.batches.push_back(std::move(batch));
        }
    } else if (name == "sine4") {
        env.kind = "sine";
        env.K = 4;
        env.T = 4000;
    } else if (name == "linear2d") {
        env.kind = "gaussian_linear";
        env.T = 2000;
        env.theta = {0.5, 0.3};
        for (int k = 0; k < 8; ++k) {
            double a = 2.0 * 3.14159265358979323846 * k / 8.0;
            env.actions.push_back({std::cos(a), std::sin(a)});
        }
        env.K = static_cast<int>(env.actions.size());
    } else {
        throw std::invalid_argument("unknown environment preset '" + name +
                                    "' (expected stochastic16, changepoint4, sine4, or linear2d)");
    }
    return env;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    EnvironmentScript env = config.env.kind == "scripted" && !config.env.csv_path.empty()
                                ? load_scripted_csv(config.env.csv_path)
                                : build_env(config.env);
    std::vector<std::uint64_t> seeds = config.seeds;
    normalize_seeds(seeds);
    std::vector<double> bench = benchmark_schedule(env, config.benchmark);
    make_runner(config, env);  // fail fast on agent/env mismatches

    ExperimentResult result;
    for (std::uint64_t seed : seeds) {
        std::unique_ptr<Runner> runner = make_runner(config, env);
        ExperimentTrace trace;
        trace.seed = seed;
        trace.records.reserve(env.T);
        double cum = 0.0;
        for (long t = 0; t < env.T; ++t) {
            int a = runner->act(seed, t);
            runner->record_diag(t, trace);
            Observation obs = env_sample(env, t, a, seed);
            double inst = bench[t] - env.mean_schedule(t)[a];
            cum += inst;
            trace.records.push_back({t, a, obs.value, inst, cum});
            runner->update(t, a, obs.value);
        }
        result.traces.push_back(std::move(trace));
    }

    long T = env.T;
    int n = static_cast<int>(result.traces.size());
    result.summary.mean_cum_regret.assign(T, 0.0);
    result.summary.stderr_cum_regret.assign(T, 0.0);
    for (long t = 0; t < T; ++t) {
        double mean = 0.0;
        for (const auto& tr : result.traces) mean += tr.records[t].cum_regret;
        mean /= n;
        double var = 0.0;
        for (const auto& tr : result.traces) {
            double d = tr.records[t].cum_regret - mean;
            var += d * d;
        }
        double se = n > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
        result.summary.mean_cum_regret[t] = mean;
        result.summary.stderr_cum_regret[t] = se;
    }
    result.summary.mean_final_regret = result.summary.mean_cum_regret[T - 1];
    result.summary.stderr_final_regret = result.summary.stderr_cum_regret[T - 1];

    if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        std::filesystem::path dir(config.out_dir);
        write_trace_csv((dir / "trace.csv").string(), result.traces);
        write_summary_csv((dir / "summary.csv").string(), result.summary);
        if (config.svg) {
            write_regret_svg((dir / "regret.svg").string(), result.summary,
                             config.agent.name + " / " + config.env.kind);
        }
    }
    return result;
}

double dynamic_regret(const ExperimentTrace& trace, const EnvironmentScript& env,
                      const std::string& mode) {
    if (static_cast<long>(trace.records.size()) != env.T)
        throw std::invalid_argument("trace length does not match the environment horizon");
    std::vector<double> bench = benchmark_schedule(env, mode);
    double cum = 0.0;
    for (long t = 0; t < env.T; ++t)
        cum += bench[t] - env.mean_schedule(t)[trace.records[t].decision];
    return cum;
}

BoundReport theorem_bound_check(const std::vector<ExperimentTrace>& traces,
                                const std::string& bound, int N, double eta) {
    if (traces.empty()) throw std::invalid_argument("theorem_bound_check needs at least one trace");
    if (N < 1) throw std::invalid_argument("N must be positive");
    int n = static_cast<int>(traces.size());
    long T = static_cast<long>(traces[0].records.size());
    double mean = 0.0, se = 0.0;
    if (T > 0) {
        for (const auto& tr : traces) mean += tr.records.back().cum_regret;
        mean /= n;
        double var = 0.0;
        for (const auto& tr : traces) {
            double d = tr.records.back().cum_regret - mean;
            var += d * d;
        }
        se = n > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
    }

    BoundReport report;
    report.bound = bound;
    report.mean_regret = mean;
    report.stderr_regret = se;
    double logN = std::log(static_cast<double>(std::max(N, 2)));
    if (bound == "thm4_1") {
        report.rhs = 2.0 * std::sqrt(2.0 * (N + 2) * static_cast<double>(T) * logN);
        report.note = "closed-form rate, N = decision count";
    } else if (bound == "thm3_4" || bound == "thm7_2") {
        if (eta <= 0.0) throw std::invalid_argument("eta must be positive for this bound");
        for (const auto& tr : traces) {
            if (tr.bound_terms.size() != static_cast<std::size_t>(T))
                throw std::invalid_argument(
                    "traces lack per-round diagnostics; rerun with \"diagnostics\": true "
                    "(or --diagnostics)");
        }
        double terms = 0.0;
        for (const auto& tr : traces)
            for (double v : tr.bound_terms) terms += v;
        terms /= n;
        report.rhs = logN / eta + terms;
        report.note = bound == "thm3_4" ? "log N/eta plus summed objective-plus-slack terms"
                                        : "log N/eta plus summed per-round objective terms";
    } else {
        throw std::invalid_argument("unknown bound '" + bound +
                                    "' (expected thm4_1, thm3_4, or thm7_2)");
    }
    report.pass = mean <= report.rhs + 3.0 * se;
    return report;
}

SweepResult sweep(const ExperimentConfig& config, const std::vector<double>& etas) {
    if (etas.empty()) throw std::invalid_argument("sweep needs at least one eta");
    SweepResult out;
    out.envelope_min = std::numeric_limits<double>::infinity();
    for (double eta : etas) {
        if (eta <= 0.0) throw std::invalid_argument("sweep etas must be positive");
        ExperimentConfig point = config;
        point.agent.eta = eta;
        point.out_dir.clear();  // per-point runs write nothing
        ExperimentResult r = run_experiment(point);
        out.rows.push_back({eta, r.summary.mean_final_regret, r.summary.stderr_final_regret});
        out.envelope_min = std::min(out.envelope_min, r.summary.mean_final_regret);
    }
    return out;
}

void write_trace_csv(const std::string& path, const std::vector<ExperimentTrace>& traces) {
    std::ofstream out(path);
    require_open(out, path);
    out << "round,seed,decision,observation,inst_regret,cum_regret\n";
    for (const auto& tr : traces) {
        for (const auto& rec : tr.records) {
            out << rec.round << ',' << tr.seed << ',' << rec.decision << ','
                << fmt(rec.observation) << ',' << fmt(rec.inst_regret) << ','
                << fmt(rec.cum_regret) << '\n';
        }
    }
}

void write_summary_csv(const std::string& path, const ExperimentSummary& summary) {
    std::ofstream out(path);
    require_open(out, path);
    out << "round,mean_cum_regret,stderr\n";
    for (std::size_t t = 0; t < summary.mean_cum_regret.size(); ++t) {
        out << t << ',' << fmt(summary.mean_cum_regret[t]) << ','
            << fmt(summary.stderr_cum_regret[t]) << '\n';
    }
}

void write_regret_svg(const std::string& path, const ExperimentSummary& summary,
                      const std::string& title) {
    long T = static_cast<long>(summary.mean_cum_regret.size());
    if (T == 0) throw std::invalid_argument("summary is empty");
    std::ofstream out(path);
    require_open(out, path);
    SvgFrame f;
    f.xmin = 0;
    f.xmax = static_cast<double>(T - 1 > 0 ? T - 1 : 1);
    f.ymin = 0.0;
    f.ymax = 1e-9;
    for (long t = 0; t < T; ++t) {
        double hi = summary.mean_cum_regret[t] + summary.stderr_cum_regret[t];
        double lo = summary.mean_cum_regret[t] - summary.stderr_cum_regret[t];
        f.ymax = std::max(f.ymax, hi);
        f.ymin = std::min(f.ymin, lo);
    }
    svg_header(out, f, title, "round", "mean cumulative regret");
    // +-1 standard-error band
    out << "<polygon fill=\"#aaccee\" stroke=\"none\" points=\"";
    for (long t = 0; t < T; ++t)
        out << fmt(f.sx(t)) << ',' << fmt(f.sy(summary.mean_cum_regret[t] + summary.stderr_cum_regret[t])) << ' ';
    for (long t = T - 1; t >= 0; --t)
        out << fmt(f.sx(t)) << ',' << fmt(f.sy(summary.mean_cum_regret[t] - summary.stderr_cum_regret[t])) << ' ';
    out << "\"/>\n<polyline fill=\"none\" stroke=\"#2255aa\" stroke-width=\"1.5\" points=\"";
    for (long t = 0; t < T; ++t)
        out << fmt(f.sx(t)) << ',' << fmt(f.sy(summary.mean_cum_regret[t])) << ' ';
    out << "\"/>\n</svg>\n";
}

void write_sweep_csv(const std::string& path, const SweepResult& sweep_result) {
    std::ofstream out(path);
    require_open(out, path);
    out << "eta,mean_final_regret,stderr\n";
    for (const auto& row : sweep_result.rows) {
        out << fmt(row.eta) << ',' << fmt(row.mean_final_regret) << ','
            << fmt(row.stderr_final_regret) << '\n';
    }
}

void write_sweep_svg(const std::string& path, const SweepResult& sweep_result,
                     const std::string& title) {
    if (sweep_result.rows.empty()) throw std::invalid_argument("sweep result is empty");
    std::ofstream out(path);
    require_open(out, path);
    SvgFrame f;
    f.xmin = std::numeric_limits<double>::infinity();
    f.xmax = -f.xmin;
    f.ymin = std::numeric_limits<double>::infinity();
    f.ymax = -f.ymin;
    for (const auto& row : sweep_result.rows) {
        f.xmin = std::min(f.xmin, row.eta);
        f.xmax = std::max(f.xmax, row.eta);
        f.ymin = std::min(f.ymin, row.mean_final_regret - row.stderr_final_regret);
        f.ymax = std::max(f.ymax, row.mean_final_regret + row.stderr_final_regret);
    }
    if (f.xmax == f.xmin) f.xmax = f.xmin + 1.0;
    if (f.ymax == f.ymin) f.ymax = f.ymin + 1.0;
    svg_header(out, f, title, "eta", "mean final regret");
    out << "<polyline fill=\"none\" stroke=\"#2255aa\" stroke-width=\"1.5\" points=\"";
    for (const auto& row : sweep_result.rows)
        out << fmt(f.sx(row.eta)) << ',' << fmt(f.sy(row.mean_final_regret)) << ' ';
    out << "\"/>\n";
    for (const auto& row : sweep_result.rows) {
        out << "<line stroke=\"#2255aa\" x1=\"" << fmt(f.sx(row.eta)) << "\" y1=\""
            << fmt(f.sy(row.mean_final_regret - row.stderr_final_regret)) << "\" x2=\""
            << fmt(f.sx(row.eta)) << "\" y2=\""
            << fmt(f.sy(row.mean_final_regret + row.stderr_final_regret)) << "\"/>\n";
        out << "<circle fill=\"#2255aa\" r=\"3\" cx=\"" << fmt(f.sx(row.eta)) << "\" cy=\""
            << fmt(f.sy(row.mean_final_regret)) << "\"/>\n";
    }
    // envelope: best tuned value across the grid
    out << "<line stroke=\"#aa3322\" stroke-dasharray=\"5,4\" x1=\"" << fmt(f.left) << "\" y1=\""
        << fmt(f.sy(sweep_result.envelope_min)) << "\" x2=\"" << fmt(f.width - f.right)
        << "\" y2=\"" << fmt(f.sy(sweep_result.envelope_min)) << "\"/>\n";
    out << "</svg>\n";
}

}  // namespace airbench
