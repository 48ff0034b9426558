#include "airbench/air.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace airbench {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double family_lo(RewardFamily family) {
    return family == RewardFamily::Bernoulli ? 0.0 : -1.0;
}

double family_hi(RewardFamily family) {
    return family == RewardFamily::Bernoulli ? 1.0 : 1.0;
}

double family_mid(RewardFamily family) {
    return family == RewardFamily::Bernoulli ? 0.5 : 0.0;
}

double clamp_mean(RewardFamily family, double x) {
    if (family == RewardFamily::Bernoulli) return clamp_prob(x);
    return std::clamp(x, -1.0, 1.0);
}

double sigmoid(double g) {
    if (g >= 0.0) return 1.0 / (1.0 + std::exp(-g));
    double e = std::exp(g);
    return e / (1.0 + e);
}

void check_sizes(const Policy& p, const Policy& q, double eta, const JointBelief& belief) {
    if (eta <= 0.0) throw std::invalid_argument("eta must be positive");
    int k = belief.arms();
    if (p.size() != k || q.size() != k)
        throw std::invalid_argument("policy size does not match belief");
    for (int i = 0; i < k; ++i)
        if (q[i] <= 0.0) throw std::domain_error("prior q must have full support");
}

}  // namespace

double JointBelief::theta(int i, int j) const {
    if (alpha[i] <= kEpsMin) return family_mid(family);
    return clamp_mean(family, beta[i][j] / alpha[i]);
}

double JointBelief::theta_avg(int j) const {
    double s = 0.0;
    for (int i = 0; i < arms(); ++i) s += beta[i][j];
    return clamp_mean(family, s);
}

void validate_belief(const JointBelief& belief) {
    int k = belief.arms();
    if (k == 0) throw std::invalid_argument("belief must cover at least one decision");
    if (static_cast<int>(belief.beta.size()) != k)
        throw std::invalid_argument("beta must have one row per decision");
    double total = 0.0;
    const double slack = 1e-9;
    for (int i = 0; i < k; ++i) {
        if (static_cast<int>(belief.beta[i].size()) != k)
            throw std::invalid_argument("beta rows must have one entry per decision");
        double a = belief.alpha[i];
        if (!(a >= -slack))
            throw std::invalid_argument("alpha must be nonnegative");
        total += a;
        for (int j = 0; j < k; ++j) {
            double b = belief.beta[i][j];
            double lo = family_lo(belief.family) * a - slack;
            double hi = family_hi(belief.family) * a + slack;
            if (!(b >= lo && b <= hi))
                throw std::invalid_argument("beta[" + std::to_string(i) + "][" +
                                            std::to_string(j) +
                                            "] outside the mean range for its alpha");
        }
    }
    if (std::abs(total - 1.0) > 1e-8)
        throw std::invalid_argument("alpha must sum to one");
}

double ExpFamilyView::natural_param(double theta) const {
    if (family == RewardFamily::Bernoulli) {
        double t = clamp_prob(theta);
        return std::log(t / (1.0 - t));
    }
    return theta;
}

double ExpFamilyView::log_partition(double g) const {
    if (family == RewardFamily::Bernoulli) {
        // softplus, stable for large |g|
        if (g > 0.0) return g + std::log1p(std::exp(-g));
        return std::log1p(std::exp(g));
    }
    return 0.5 * g * g;
}

AirTerms air_terms(const Policy& p, const Policy& q, double eta, const JointBelief& belief) {
    check_sizes(p, q, eta, belief);
    validate_belief(belief);
    int k = belief.arms();

    AirTerms out;
    for (int i = 0; i < k; ++i) out.expected_regret += belief.beta[i][i];
    for (int j = 0; j < k; ++j) {
        double avg = 0.0;
        for (int i = 0; i < k; ++i) avg += belief.beta[i][j];
        out.expected_regret -= p[j] * avg;

        double bar = belief.theta_avg(j);
        double gain_j = 0.0;
        for (int i = 0; i < k; ++i) {
            if (belief.alpha[i] <= kEpsMin) continue;
            double t = belief.theta(i, j);
            if (belief.family == RewardFamily::Bernoulli) {
                gain_j += belief.alpha[i] * kl_bernoulli(t, clamp_prob(bar));
            } else {
                double d = t - bar;
                gain_j += belief.alpha[i] * 0.5 * d * d;
            }
        }
        out.information_gain += p[j] * gain_j;
    }
    out.regularization = kl_categorical(belief.alpha, q.weights());
    out.total = out.expected_regret - (out.information_gain + out.regularization) / eta;
    return out;
}

double air_eval(const Policy& p, const Policy& q, double eta, const JointBelief& belief) {
    return air_terms(p, q, eta, belief).total;
}

AirGradient air_grad(const Policy& p, const Policy& q, double eta, const JointBelief& belief) {
    check_sizes(p, q, eta, belief);
    validate_belief(belief);
    int k = belief.arms();
    ExpFamilyView view{belief.family};

    std::vector<double> g_avg(k), abar_avg(k);
    for (int j = 0; j < k; ++j) {
        g_avg[j] = view.natural_param(belief.theta_avg(j));
        abar_avg[j] = view.log_partition(g_avg[j]);
    }

    AirGradient out;
    out.d_alpha.assign(k, 0.0);
    out.d_beta.assign(k, std::vector<double>(k, 0.0));
    for (int i = 0; i < k; ++i) {
        double da = 0.0;
        for (int j = 0; j < k; ++j) {
            double g = view.natural_param(belief.theta(i, j));
            out.d_beta[i][j] = (i == j ? 1.0 : 0.0) - p[j] - p[j] * (g - g_avg[j]) / eta;
            da += p[j] * (view.log_partition(g) - abar_avg[j]);
        }
        double a = std::max(belief.alpha[i], kEpsMin);
        out.d_alpha[i] = (da + std::log(q[i] / a)) / eta;
    }
    return out;
}

namespace {

// Residual of the first-order optimality conditions: the simplex-tangent part
// of the alpha gradient plus the beta gradient with box-infeasible directions
// zeroed out. Vanishes exactly at a constrained maximizer.
double projected_residual(const JointBelief& belief, const AirGradient& grad,
                          const ThetaBox& box) {
    int k = belief.arms();
    // Alpha stationarity is measured in (alpha, theta) coordinates: moving
    // alpha drags beta = alpha * theta along, so the chain-rule term enters.
    std::vector<double> ga(k);
    double avg = 0.0;
    for (int i = 0; i < k; ++i) {
        ga[i] = grad.d_alpha[i];
        for (int j = 0; j < k; ++j) ga[i] += belief.theta(i, j) * grad.d_beta[i][j];
        avg += belief.alpha[i] * ga[i];
    }
    double r = 0.0;
    for (int i = 0; i < k; ++i) {
        r = std::max(r, std::abs(belief.alpha[i] * (ga[i] - avg)));
        for (int j = 0; j < k; ++j) {
            double t = belief.theta(i, j);
            double g = belief.alpha[i] * grad.d_beta[i][j];
            if (t <= box.lo + 1e-12 && g < 0.0) g = 0.0;
            if (t >= box.hi - 1e-12 && g > 0.0) g = 0.0;
            r = std::max(r, std::abs(g));
        }
    }
    return r;
}

JointBelief apply_step(const JointBelief& belief, const AirGradient& grad, double step,
                       const ThetaBox& box) {
    int k = belief.arms();
    JointBelief next = belief;
    // The step moves (alpha, theta), so the alpha direction needs the chain
    // rule through beta = alpha * theta on top of the fixed-beta partial.
    std::vector<double> ga(k);
    double max_da = -kInf;
    for (int i = 0; i < k; ++i) {
        ga[i] = grad.d_alpha[i];
        for (int j = 0; j < k; ++j) ga[i] += belief.theta(i, j) * grad.d_beta[i][j];
        max_da = std::max(max_da, ga[i]);
    }
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        next.alpha[i] = std::max(belief.alpha[i], kEpsMin) *
                        std::exp(step * (ga[i] - max_da));
        total += next.alpha[i];
    }
    for (int i = 0; i < k; ++i) {
        next.alpha[i] /= total;
        for (int j = 0; j < k; ++j) {
            double t = std::clamp(belief.theta(i, j) + step * grad.d_beta[i][j],
                                  box.lo, box.hi);
            next.beta[i][j] = next.alpha[i] * t;
        }
    }
    return next;
}

}  // namespace

AirMaximizeResult air_maximize(const Policy& p, const Policy& q, double eta,
                               const AirMaximizeOptions& options) {
    int k = p.size();
    if (q.size() != k) throw std::invalid_argument("p and q must have the same size");
    if (eta <= 0.0) throw std::invalid_argument("eta must be positive");
    if (options.tol <= 0.0 || options.max_iterations <= 0)
        throw std::invalid_argument("tol and max_iterations must be positive");

    RewardFamily family = options.family;
    if (options.warm_start) family = options.warm_start->family;
    ThetaBox box = options.theta_box.value_or(
        ThetaBox{family == RewardFamily::Bernoulli ? kEpsMin : -1.0,
                 family == RewardFamily::Bernoulli ? 1.0 - kEpsMin : 1.0});
    if (!(box.lo <= box.hi)) throw std::invalid_argument("theta box is empty");

    JointBelief cur;
    if (options.warm_start) {
        cur = *options.warm_start;
        validate_belief(cur);
        if (cur.arms() != k) throw std::invalid_argument("warm start size mismatch");
    } else {
        cur.family = family;
        cur.alpha = q.weights();
        cur.beta.assign(k, std::vector<double>(k, 0.0));
        double tilt = family == RewardFamily::Bernoulli ? 0.05 : 0.05;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                double t = family_mid(family) + (i == j ? tilt : 0.0);
                cur.beta[i][j] = cur.alpha[i] * std::clamp(t, box.lo, box.hi);
            }
    }

    AirMaximizeResult res;
    res.belief = cur;
    res.value = air_eval(p, q, eta, cur);
    double cur_value = res.value;
    const double base_step = 0.5 / eta;

    for (int it = 0; it < options.max_iterations; ++it) {
        res.iterations = it + 1;
        AirGradient grad = air_grad(p, q, eta, cur);
        res.grad_residual = projected_residual(cur, grad, box);
        if (res.grad_residual <= options.tol) {
            res.converged = true;
            break;
        }
        double step = base_step;
        bool improved = false;
        for (int bt = 0; bt < 50; ++bt) {
            JointBelief cand = apply_step(cur, grad, step, box);
            double v = air_eval(p, q, eta, cand);
            if (v > cur_value + 1e-15) {
                cur = std::move(cand);
                cur_value = v;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (cur_value > res.value) {
            res.value = cur_value;
            res.belief = cur;
        }
        if (!improved) break;  // stalled at numerical precision
    }
    if (!res.converged) {
        AirGradient grad = air_grad(p, q, eta, res.belief);
        res.grad_residual = projected_residual(res.belief, grad, box);
        res.converged = res.grad_residual <= options.tol;
    }
    return res;
}

JointBelief belief_from_class(const ModelClass& models,
                              const std::vector<std::vector<double>>& nu) {
    int m = models.size();
    int k = models.arms();
    if (static_cast<int>(nu.size()) != m)
        throw std::invalid_argument("nu must have one row per model");
    JointBelief belief;
    belief.family = models.family();
    belief.alpha.assign(k, 0.0);
    belief.beta.assign(k, std::vector<double>(k, 0.0));
    for (int mi = 0; mi < m; ++mi) {
        if (static_cast<int>(nu[mi].size()) != k)
            throw std::invalid_argument("nu rows must have one entry per decision");
        for (int i = 0; i < k; ++i) {
            belief.alpha[i] += nu[mi][i];
            for (int j = 0; j < k; ++j)
                belief.beta[i][j] += nu[mi][i] * models[mi].means[j];
        }
    }
    return belief;
}

ClassMaximizeResult air_maximize_class(const ModelClass& models, const Policy& p,
                                       const Policy& q, double eta,
                                       double tol, int max_iterations) {
    int m = models.size();
    int k = models.arms();
    if (p.size() != k || q.size() != k)
        throw std::invalid_argument("policy size does not match model class");
    if (eta <= 0.0) throw std::invalid_argument("eta must be positive");

    std::vector<std::vector<double>> nu(m, std::vector<double>(k, 1.0 / (m * k)));
    ClassMaximizeResult res;
    res.nu = nu;
    res.belief = belief_from_class(models, nu);
    res.value = air_eval(p, q, eta, res.belief);
    double cur_value = res.value;
    const double base_step = 0.5 / eta;

    auto nu_grad = [&](const JointBelief& belief) {
        AirGradient g = air_grad(p, q, eta, belief);
        std::vector<std::vector<double>> out(m, std::vector<double>(k, 0.0));
        for (int mi = 0; mi < m; ++mi)
            for (int i = 0; i < k; ++i) {
                double v = g.d_alpha[i];
                for (int j = 0; j < k; ++j) v += g.d_beta[i][j] * models[mi].means[j];
                out[mi][i] = v;
            }
        return out;
    };

    JointBelief cur_belief = res.belief;
    for (int it = 0; it < max_iterations; ++it) {
        res.iterations = it + 1;
        auto grad = nu_grad(cur_belief);
        double avg = 0.0, residual = 0.0, max_g = -kInf;
        for (int mi = 0; mi < m; ++mi)
            for (int i = 0; i < k; ++i) {
                avg += nu[mi][i] * grad[mi][i];
                max_g = std::max(max_g, grad[mi][i]);
            }
        for (int mi = 0; mi < m; ++mi)
            for (int i = 0; i < k; ++i)
                residual = std::max(residual, std::abs(nu[mi][i] * (grad[mi][i] - avg)));
        res.grad_residual = residual;
        if (residual <= tol) {
            res.converged = true;
            break;
        }
        double step = base_step;
        bool improved = false;
        for (int bt = 0; bt < 50; ++bt) {
            std::vector<std::vector<double>> cand(m, std::vector<double>(k, 0.0));
            double total = 0.0;
            for (int mi = 0; mi < m; ++mi)
                for (int i = 0; i < k; ++i) {
                    cand[mi][i] = std::max(nu[mi][i], 1e-300) *
                                  std::exp(step * (grad[mi][i] - max_g));
                    total += cand[mi][i];
                }
            for (auto& row : cand)
                for (double& v : row) v /= total;
            JointBelief cand_belief = belief_from_class(models, cand);
            double v = air_eval(p, q, eta, cand_belief);
            if (v > cur_value + 1e-15) {
                nu = std::move(cand);
                cur_belief = std::move(cand_belief);
                cur_value = v;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (cur_value > res.value) {
            res.value = cur_value;
            res.nu = nu;
            res.belief = cur_belief;
        }
        if (!improved) break;
    }
    if (!res.converged) res.converged = res.grad_residual <= tol;
    return res;
}

Policy marginal_posterior(const JointBelief& belief, int pi, const Observation& o) {
    validate_belief(belief);
    int k = belief.arms();
    if (pi < 0 || pi >= k) throw std::invalid_argument("decision index out of range");

    std::vector<double> w(k, 0.0);
    double total = 0.0;
    if (belief.family == RewardFamily::Bernoulli) {
        if (o.value != 0.0 && o.value != 1.0)
            throw std::invalid_argument("Bernoulli observation must be 0 or 1");
        for (int i = 0; i < k; ++i) {
            w[i] = o.value == 1.0 ? belief.beta[i][pi]
                                  : belief.alpha[i] - belief.beta[i][pi];
            w[i] = std::max(w[i], 0.0);
            total += w[i];
        }
    } else {
        for (int i = 0; i < k; ++i) {
            double t = belief.theta(i, pi);
            w[i] = belief.alpha[i] * std::exp(o.value * t - 0.5 * t * t);
            total += w[i];
        }
    }
    if (total <= 0.0)
        throw std::domain_error("posterior undefined: observation " +
                                std::to_string(o.value) + " has zero probability under decision " +
                                std::to_string(pi));
    for (double& v : w) v /= total;
    return Policy(w);
}

double info_ratio(const JointBelief& belief, const Policy& p) {
    validate_belief(belief);
    int k = belief.arms();
    if (p.size() != k) throw std::invalid_argument("policy size does not match belief");

    double regret = 0.0, gain = 0.0;
    for (int i = 0; i < k; ++i) regret += belief.beta[i][i];
    for (int j = 0; j < k; ++j) {
        double avg = 0.0;
        for (int i = 0; i < k; ++i) avg += belief.beta[i][j];
        regret -= p[j] * avg;
        double bar = belief.theta_avg(j);
        for (int i = 0; i < k; ++i) {
            if (belief.alpha[i] <= kEpsMin) continue;
            double t = belief.theta(i, j);
            if (belief.family == RewardFamily::Bernoulli)
                gain += p[j] * belief.alpha[i] * kl_bernoulli(t, clamp_prob(bar));
            else
                gain += p[j] * belief.alpha[i] * 0.5 * (t - bar) * (t - bar);
        }
    }
    double num = regret * regret;
    if (gain <= 1e-15) return num <= 1e-24 ? 0.0 : kInf;
    return num / gain;
}

JointBelief algorithm4_belief(const Policy& p, double eta) {
    if (eta <= 0.0) throw std::invalid_argument("eta must be positive");
    int k = p.size();
    JointBelief belief;
    belief.family = RewardFamily::Bernoulli;
    belief.alpha = p.weights();
    belief.beta.assign(k, std::vector<double>(k, 0.0));

    for (int j = 0; j < k; ++j) {
        if (p[j] <= 0.0)
            throw std::domain_error("algorithm4_belief requires p with full support");
        // Stationarity in beta fixes the natural-parameter offsets
        // g_i(j) - g_avg(j) = eta * (1(i=j)/p(j) - 1); solve the marginal
        // consistency equation sum_i p_i * sigmoid(g + c_i) = sigmoid(g) for g.
        double cj = eta * (1.0 / p[j] - 1.0);
        double co = -eta;
        // Cancellation-free form of sum_i p_i sigmoid(g + c_i) - sigmoid(g),
        // using sigmoid(a) - sigmoid(b) = sigmoid(a) sigmoid(-b)(1 - e^{b-a});
        // each term keeps its sign even when the sigmoids saturate.
        auto f = [&](double g) {
            double s = 0.0;
            for (int i = 0; i < k; ++i) {
                double ci = i == j ? cj : co;
                s += -p[i] * sigmoid(g + ci) * sigmoid(-g) * std::expm1(-ci);
            }
            return s;
        };
        double g = 0.0;
        if (k > 1) {
            // f(-inf) > 0 > f(+inf) by Jensen (sum_i p_i c_i = 0).
            double lo = -60.0, hi = 60.0;
            for (int it = 0; it < 200; ++it) {
                g = 0.5 * (lo + hi);
                double fg = f(g);
                if (fg == 0.0) break;
                (fg > 0.0 ? lo : hi) = g;
            }
        }
        for (int i = 0; i < k; ++i)
            belief.beta[i][j] = p[i] * sigmoid(g + (i == j ? cj : co));
    }
    return belief;
}

namespace {

double obs_hellinger_sq(RewardFamily family, double a, double b) {
    if (family == RewardFamily::Bernoulli)
        return hellinger_sq({a, 1.0 - a}, {b, 1.0 - b});
    double d = a - b;
    return 1.0 - std::exp(-d * d / 8.0);
}

void grid_recurse(int k, int arm, int left, int n, std::vector<int>& counts,
                  std::vector<Policy>& out) {
    if (arm == k - 1) {
        counts[arm] = left;
        std::vector<double> w(k);
        for (int i = 0; i < k; ++i) w[i] = static_cast<double>(counts[i]) / n;
        out.emplace_back(w);
        return;
    }
    for (int c = 0; c <= left; ++c) {
        counts[arm] = c;
        grid_recurse(k, arm + 1, left - c, n, counts, out);
    }
}

}  // namespace

std::vector<Policy> simplex_grid(int K, double step) {
    if (K <= 0) throw std::invalid_argument("K must be positive");
    if (step <= 0.0 || step > 1.0) throw std::invalid_argument("step must be in (0, 1]");
    int n = static_cast<int>(std::lround(1.0 / step));
    std::vector<Policy> out;
    std::vector<int> counts(K, 0);
    grid_recurse(K, 0, n, n, counts, out);
    return out;
}

DecResult dec_bruteforce(const ModelClass& models, const Model& nominal, double eta,
                         double grid_step) {
    int k = models.arms();
    int m = models.size();
    if (k > 4) throw std::invalid_argument("dec_bruteforce supports at most 4 decisions");
    if (m > 8) throw std::invalid_argument("dec_bruteforce supports at most 8 models");
    if (static_cast<int>(nominal.means.size()) != k)
        throw std::invalid_argument("nominal model size does not match class");
    if (nominal.family != models.family())
        throw std::invalid_argument("nominal model family does not match class");
    if (eta <= 0.0) throw std::invalid_argument("eta must be positive");

    // Per-decision payoff of each model against the nominal reference.
    std::vector<std::vector<double>> cost(m, std::vector<double>(k, 0.0));
    for (int mi = 0; mi < m; ++mi) {
        const Model& mod = models[mi];
        double best = mod.means[models.optimal_decision(mi)];
        for (int j = 0; j < k; ++j)
            cost[mi][j] = best - mod.means[j] -
                          obs_hellinger_sq(models.family(), mod.means[j], nominal.means[j]) / eta;
    }

    DecResult res;
    res.value = kInf;
    for (const Policy& p : simplex_grid(k, grid_step)) {
        double worst = -kInf;
        for (int mi = 0; mi < m; ++mi) {
            double v = 0.0;
            for (int j = 0; j < k; ++j) v += p[j] * cost[mi][j];
            worst = std::max(worst, v);
        }
        if (worst < res.value) {
            res.value = worst;
            res.minimizer = p;
        }
    }
    return res;
}

double belief_payoff(const JointBelief& belief, const Policy& p, const Policy& q,
                     double eta, const Model& env_model, int env_pistar) {
    check_sizes(p, q, eta, belief);
    validate_belief(belief);
    int k = belief.arms();
    if (static_cast<int>(env_model.means.size()) != k)
        throw std::invalid_argument("environment model size does not match belief");
    if (env_model.family != belief.family)
        throw std::invalid_argument("environment model family does not match belief");
    if (env_pistar < 0 || env_pistar >= k)
        throw std::invalid_argument("environment decision index out of range");

    const std::vector<double>& f = env_model.means;
    double payoff = f[env_pistar];
    for (int a = 0; a < k; ++a) payoff -= p[a] * f[a];

    if (belief.family == RewardFamily::Bernoulli) {
        for (int a = 0; a < k; ++a) {
            double l1 = std::log(clamp_prob(marginal_posterior(belief, a, {1.0})[env_pistar]) /
                                 q[env_pistar]);
            double l0 = std::log(clamp_prob(marginal_posterior(belief, a, {0.0})[env_pistar]) /
                                 q[env_pistar]);
            payoff -= p[a] * (f[a] * l1 + (1.0 - f[a]) * l0) / eta;
        }
    } else {
        // Homogeneous-noise posterior: normalizer N(theta_avg, 1); the
        // observation expectation of the squared terms is closed form.
        double a0 = std::max(belief.alpha[env_pistar], kEpsMin);
        payoff -= std::log(a0 / q[env_pistar]) / eta;
        for (int a = 0; a < k; ++a) {
            double ti = belief.theta(env_pistar, a);
            double tb = belief.theta_avg(a);
            double di = ti - f[a], db = tb - f[a];
            payoff -= p[a] * 0.5 * (db * db - di * di) / eta;
        }
    }
    return payoff;
}

double lemma53_residual(const JointBelief& belief, const Policy& p, const Policy& q,
                        double eta, const Model& env_model, int env_pistar) {
    double lhs = belief_payoff(belief, p, q, eta, env_model, env_pistar);
    AirGradient grad = air_grad(p, q, eta, belief);
    double rhs = air_eval(p, q, eta, belief);
    int k = belief.arms();
    for (int i = 0; i < k; ++i) {
        double da = (i == env_pistar ? 1.0 : 0.0) - belief.alpha[i];
        rhs += grad.d_alpha[i] * da;
        for (int j = 0; j < k; ++j) {
            double target = i == env_pistar ? env_model.means[j] : 0.0;
            rhs += grad.d_beta[i][j] * (target - belief.beta[i][j]);
        }
    }
    return std::abs(lhs - rhs);
}

double sup_payoff(const JointBelief& belief, const Policy& p, const Policy& q, double eta) {
    check_sizes(p, q, eta, belief);
    validate_belief(belief);
    int k = belief.arms();
    double lo = family_lo(belief.family), hi = family_hi(belief.family);

    double best = -kInf;
    for (int abar = 0; abar < k; ++abar) {
        // The payoff is affine in each mean, so optimize coordinate-wise over
        // the endpoints of the mean range.
        Model mod{std::vector<double>(k, lo), belief.family};
        for (int a = 0; a < k; ++a) {
            double coef = (a == abar ? 1.0 : 0.0) - p[a];
            if (belief.family == RewardFamily::Bernoulli) {
                double l1 = std::log(clamp_prob(marginal_posterior(belief, a, {1.0})[abar]));
                double l0 = std::log(clamp_prob(marginal_posterior(belief, a, {0.0})[abar]));
                coef -= p[a] * (l1 - l0) / eta;
            } else {
                coef -= p[a] * (belief.theta(abar, a) - belief.theta_avg(a)) / eta;
            }
            mod.means[a] = coef >= 0.0 ? hi : lo;
        }
        best = std::max(best, belief_payoff(belief, p, q, eta, mod, abar));
    }
    return best;
}

}  // namespace airbench
