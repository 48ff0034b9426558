#include "airbench/agents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "airbench/detail/saddle.hpp"

namespace airbench {

namespace {

Policy rescale_others(const Policy& p, int chosen, double new_chosen) {
    int k = p.size();
    std::vector<double> w(k);
    // Sum the other weights directly: 1 - p[chosen] cancels catastrophically
    // when p[chosen] is close to 1 and the drift breaks the simplex invariant
    // over long runs.
    double rest = 0.0;
    for (int i = 0; i < k; ++i)
        if (i != chosen) rest += p[i];
    if (rest <= kEpsMin) {
        for (int i = 0; i < k; ++i) w[i] = i == chosen ? 1.0 : 0.0;
        return Policy(w);
    }
    double scale = (1.0 - new_chosen) / rest;
    double total = new_chosen + scale * rest;
    for (int i = 0; i < k; ++i) w[i] = (i == chosen ? new_chosen : p[i] * scale) / total;
    return Policy(w);
}

void check_update_args(const Policy& p, int chosen, double eta) {
    if (chosen < 0 || chosen >= p.size())
        throw std::invalid_argument("chosen arm out of range");
    if (eta <= 0.0) throw std::invalid_argument("eta must be positive");
    if (p[chosen] < kEpsMin)
        throw std::domain_error("p(chosen) below the interior floor; apply forced exploration");
}

}  // namespace

Policy simplified_aps_update(const Policy& p, int chosen, int r, double eta) {
    check_update_args(p, chosen, eta);
    if (r != 0 && r != 1) throw std::invalid_argument("reward must be 0 or 1");
    if (p.size() == 1) return p;
    double pc = p[chosen];
    double v = r == 1 ? std::expm1(-eta) / std::expm1(-eta / pc)
                      : std::expm1(eta) / std::expm1(eta / pc);
    return rescale_others(p, chosen, v);
}

Policy simplified_aps_loss_update(const Policy& p, int chosen, int loss, double eta) {
    check_update_args(p, chosen, eta);
    if (loss != 0 && loss != 1) throw std::invalid_argument("loss must be 0 or 1");
    if (p.size() == 1) return p;
    double pc = p[chosen];
    double v = loss == 1 ? std::expm1(eta) / std::expm1(eta / pc)
                         : std::expm1(-eta) / std::expm1(-eta / pc);
    return rescale_others(p, chosen, v);
}

AgentState aps_step(const AgentState& state, int chosen, const Observation& obs, double eta) {
    AgentState next = state;
    const Policy& p = state.policy;
    JointBelief belief;
    if (state.models) {
        ClassMaximizeResult res = air_maximize_class(*state.models, p, p, eta);
        belief = res.belief;
        next.last_air = res.value;
        next.last_residual = res.grad_residual;
        next.last_converged = res.converged;
    } else {
        AirMaximizeOptions opt;
        opt.family = state.family;
        AirMaximizeResult res = air_maximize(p, p, eta, opt);
        belief = res.belief;
        next.last_air = res.value;
        next.last_residual = res.grad_residual;
        next.last_converged = res.converged;
    }
    Policy posterior = marginal_posterior(belief, chosen, obs);
    next.last_belief = std::move(belief);
    next.policy = posterior;
    next.reference = posterior;
    next.round = state.round + 1;
    return next;
}

SaddleResult air_saddle(const Policy& q, double eta,
                        const std::optional<ModelClass>& models,
                        RewardFamily family, double tol, int max_outer) {
    int k = q.size();
    std::optional<JointBelief> warm;

    auto p_coefficients = [&](const JointBelief& belief) {
        // AIR(p, nu) = sum_i beta_ii - KL(alpha, q)/eta + sum_j p_j c_j(nu)
        std::vector<double> c(k, 0.0);
        for (int j = 0; j < k; ++j) {
            double bar = belief.theta_avg(j);
            double info = 0.0;
            for (int i = 0; i < k; ++i) {
                if (belief.alpha[i] <= kEpsMin) continue;
                double t = belief.theta(i, j);
                if (belief.family == RewardFamily::Bernoulli)
                    info += belief.alpha[i] * kl_bernoulli(t, clamp_prob(bar));
                else
                    info += belief.alpha[i] * 0.5 * (t - bar) * (t - bar);
            }
            double mass = 0.0;
            for (int i = 0; i < k; ++i) mass += belief.beta[i][j];
            c[j] = -mass - info / eta;
        }
        return c;
    };

    auto inner = [&](const Policy& p) {
        detail::InnerValue iv;
        JointBelief belief;
        if (models) {
            ClassMaximizeResult res = air_maximize_class(*models, p, q, eta, 1e-8, 4000);
            belief = std::move(res.belief);
            iv.value = res.value;
        } else {
            // A warm start can be captured by the wrong corner basin near a
            // kink of t -> sup, flipping the slope sign; always run a cold
            // start as well and keep the better value.
            AirMaximizeOptions opt;
            opt.family = family;
            opt.tol = 1e-8;
            AirMaximizeResult res = air_maximize(p, q, eta, opt);
            if (warm) {
                opt.warm_start = warm;
                AirMaximizeResult res2 = air_maximize(p, q, eta, opt);
                if (res2.value > res.value) res = std::move(res2);
            }
            belief = std::move(res.belief);
            iv.value = res.value;
            warm = belief;
        }
        iv.coeffs = p_coefficients(belief);
        iv.const_term = iv.value;
        for (int j = 0; j < k; ++j) iv.const_term -= p[j] * iv.coeffs[j];
        iv.state = std::make_shared<JointBelief>(std::move(belief));
        return iv;
    };

    // Evaluates a convex combination of two stored maximizing beliefs; the
    // (alpha, beta) parameterization mixes linearly.
    auto mixer = [&](const Policy& p, const std::shared_ptr<const void>& a,
                     const std::shared_ptr<const void>& b, double lam) {
        const auto& ba = *static_cast<const JointBelief*>(a.get());
        const auto& bb = *static_cast<const JointBelief*>(b.get());
        JointBelief m = ba;
        for (int i = 0; i < k; ++i) {
            m.alpha[i] = lam * ba.alpha[i] + (1.0 - lam) * bb.alpha[i];
            for (int j = 0; j < k; ++j)
                m.beta[i][j] = lam * ba.beta[i][j] + (1.0 - lam) * bb.beta[i][j];
        }
        detail::InnerValue iv;
        iv.value = air_eval(p, q, eta, m);
        iv.coeffs = p_coefficients(m);
        iv.const_term = iv.value;
        for (int j = 0; j < k; ++j) iv.const_term -= p[j] * iv.coeffs[j];
        if (!models) warm = m;  // seed the next sup run from the mixture
        iv.state = std::make_shared<JointBelief>(std::move(m));
        return iv;
    };

    detail::SaddlePlan plan = detail::solve_saddle(k, inner, tol, max_outer, mixer);

    SaddleResult out;
    out.p = plan.p;
    out.value = plan.value;
    out.gap = plan.gap;
    out.iterations = plan.iterations;
    out.converged = plan.converged;
    if (models) {
        out.belief = air_maximize_class(*models, plan.p, q, eta, 1e-8, 4000).belief;
    } else {
        AirMaximizeOptions opt;
        opt.family = family;
        opt.tol = 1e-8;
        if (warm) opt.warm_start = warm;
        out.belief = air_maximize(plan.p, q, eta, opt).belief;
    }
    return out;
}

AgentState ams_init(int K, double eta, std::optional<ModelClass> models, RewardFamily family) {
    AgentState state;
    state.reference = Policy::uniform(K);
    state.models = std::move(models);
    state.family = family;
    SaddleResult saddle = air_saddle(state.reference, eta, state.models, family);
    state.policy = saddle.p;
    state.last_belief = std::move(saddle.belief);
    state.last_air = saddle.value;
    state.last_gap = saddle.gap;
    state.last_converged = saddle.converged;
    return state;
}

AgentState ams_step(const AgentState& state, int chosen, const Observation& obs, double eta) {
    AgentState next = state;
    JointBelief belief;
    if (state.last_belief) {
        belief = *state.last_belief;
    } else {
        belief = air_saddle(state.reference, eta, state.models, state.family).belief;
    }
    next.reference = marginal_posterior(belief, chosen, obs);
    SaddleResult saddle = air_saddle(next.reference, eta, state.models, state.family);
    next.policy = saddle.p;
    next.last_belief = std::move(saddle.belief);
    next.last_air = saddle.value;
    next.last_gap = saddle.gap;
    next.last_converged = saddle.converged;
    next.round = state.round + 1;
    return next;
}

Policy exp3_update(const Policy& p, int chosen, double r, double eta) {
    check_update_args(p, chosen, eta);
    if (r < 0.0 || r > 1.0) throw std::invalid_argument("reward must lie in [0, 1]");
    int k = p.size();
    std::vector<double> w(k);
    // Log-domain update with max subtraction: the inverse-propensity bump can
    // reach hundreds when the chosen probability sits at the exploration
    // floor, and exp() of that overflows.
    double bump = eta * r / p[chosen];
    double mx = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) {
        w[i] = std::log(std::max(p[i], kEpsMin)) + (i == chosen ? bump : 0.0);
        mx = std::max(mx, w[i]);
    }
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        w[i] = std::exp(w[i] - mx);
        total += w[i];
    }
    for (double& v : w) v /= total;
    return Policy(w);
}

int ucb1_select(const std::vector<long>& counts, const std::vector<double>& means, long t) {
    if (counts.size() != means.size() || counts.empty())
        throw std::invalid_argument("counts and means must be non-empty and equal length");
    if (t < 1) throw std::invalid_argument("t must be at least 1");
    int k = static_cast<int>(counts.size());
    for (int i = 0; i < k; ++i)
        if (counts[i] == 0) return i;
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) {
        double score = means[i] + std::sqrt(2.0 * std::log(static_cast<double>(t)) / counts[i]);
        if (score > best_score + 1e-15) {
            best_score = score;
            best = i;
        }
    }
    return best;
}

double beta_sample(double a, double b, CounterRng& rng) {
    // Marsaglia-Tsang gamma sampling; shapes below 1 use the boost
    // Gamma(a) = Gamma(a+1) * U^{1/a}.
    auto gamma_sample = [&rng](double shape) {
        double boost = 1.0;
        if (shape < 1.0) {
            boost = std::pow(std::max(rng.next_double(), kEpsMin), 1.0 / shape);
            shape += 1.0;
        }
        double d = shape - 1.0 / 3.0;
        double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = rng.gaussian();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = rng.next_double();
            if (u < 1.0 - 0.0331 * x * x * x * x) return boost * d * v;
            if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
                return boost * d * v;
        }
    };
    double x = gamma_sample(a);
    double y = gamma_sample(b);
    double s = x + y;
    return s > 0.0 ? x / s : 0.5;
}

void thompson_update(BetaParams& betas, int chosen, int r) {
    if (chosen < 0 || chosen >= static_cast<int>(betas.a.size()))
        throw std::invalid_argument("chosen arm out of range");
    if (r != 0 && r != 1) throw std::invalid_argument("reward must be 0 or 1");
    if (r == 1)
        betas.a[chosen] += 1.0;
    else
        betas.b[chosen] += 1.0;
}

int thompson_select(const BetaParams& betas, CounterRng& rng) {
    if (betas.a.empty() || betas.a.size() != betas.b.size())
        throw std::invalid_argument("beta parameter vectors must be non-empty and equal length");
    int best = 0;
    double best_sample = -1.0;
    for (int i = 0; i < static_cast<int>(betas.a.size()); ++i) {
        double s = beta_sample(betas.a[i], betas.b[i], rng);
        if (s > best_sample) {
            best_sample = s;
            best = i;
        }
    }
    return best;
}

int bernoulli_reduce(double r, double lo, double hi, CounterRng& rng) {
    if (!(lo < hi)) throw std::invalid_argument("need lo < hi");
    if (r < lo || r > hi) throw std::invalid_argument("reward outside [lo, hi]");
    return rng.bernoulli((r - lo) / (hi - lo)) ? 1 : 0;
}

double eta_horizon(int K, long T) {
    if (K < 1 || T < 1) throw std::invalid_argument("K and T must be positive");
    double logk = std::log(std::max(K, 2));
    return std::sqrt(logk / (2.0 * K * T + 4.0 * T));
}

double eta_anytime(int K, long t) {
    if (K < 1 || t < 1) throw std::invalid_argument("K and t must be positive");
    double logk = std::log(std::max(K, 2));
    return std::sqrt(logk / ((2.0 * K + 4.0) * t));
}

}  // namespace airbench
