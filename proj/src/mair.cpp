#include "airbench/mair.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "airbench/detail/saddle.hpp"

namespace airbench {

namespace {

void check_model_args(const std::vector<double>& dist, const ModelClass& models,
                      const char* name) {
    if (static_cast<int>(dist.size()) != models.size())
        throw std::invalid_argument(std::string(name) + " size does not match model class");
    double total = 0.0;
    for (double v : dist) {
        if (v < -1e-12) throw std::invalid_argument(std::string(name) + " has negative mass");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-8)
        throw std::invalid_argument(std::string(name) + " must sum to one");
}

void require_bernoulli(const ModelClass& models) {
    if (models.family() != RewardFamily::Bernoulli)
        throw std::invalid_argument("model-index operations support Bernoulli models only");
}

// Mixture mean reward per decision.
std::vector<double> mixture_means(const std::vector<double>& w, const ModelClass& models) {
    std::vector<double> out(models.arms(), 0.0);
    for (int m = 0; m < models.size(); ++m)
        for (int j = 0; j < models.arms(); ++j) out[j] += w[m] * models[m].means[j];
    return out;
}

double bern_hellinger_sq(double a, double b) {
    return hellinger_sq({a, 1.0 - a}, {b, 1.0 - b});
}

}  // namespace

double mair_eval(const Policy& p, const std::vector<double>& rho, double eta,
                 const std::vector<double>& mu, const ModelClass& models) {
    require_bernoulli(models);
    check_model_args(rho, models, "rho");
    check_model_args(mu, models, "mu");
    if (eta <= 0.0) throw std::invalid_argument("eta must be positive");
    if (p.size() != models.arms())
        throw std::invalid_argument("policy size does not match model class");
    for (double v : rho)
        if (v <= 0.0) throw std::domain_error("rho must be interior");

    double value = 0.0;
    for (int m = 0; m < models.size(); ++m)
        value += mu[m] * models[m].means[models.optimal_decision(m)];

    for (int j = 0; j < models.arms(); ++j) {
        if (p[j] == 0.0) continue;
        for (int m = 0; m < models.size(); ++m) value -= p[j] * mu[m] * models[m].means[j];
        for (int o = 0; o <= 1; ++o) {
            double marg = 0.0;
            std::vector<double> post(models.size(), 0.0);
            for (int m = 0; m < models.size(); ++m) {
                double f = models[m].means[j];
                post[m] = mu[m] * (o == 1 ? f : 1.0 - f);
                marg += post[m];
            }
            if (marg <= 0.0) continue;
            for (double& v : post) v /= marg;
            value -= p[j] * marg * kl_categorical(post, rho) / eta;
        }
    }
    return value;
}

std::vector<double> closed_form_belief(const std::vector<double>& rho, const Policy& p,
                                       double eta, const ModelClass& models) {
    require_bernoulli(models);
    check_model_args(rho, models, "rho");
    if (eta <= 0.0) throw std::invalid_argument("eta must be positive");
    if (p.size() != models.arms())
        throw std::invalid_argument("policy size does not match model class");
    for (double v : rho)
        if (v <= 0.0) throw std::domain_error("rho must be interior");

    std::vector<double> bar = mixture_means(rho, models);
    std::vector<double> expo(models.size());
    double mx = -std::numeric_limits<double>::infinity();
    for (int m = 0; m < models.size(); ++m) {
        const Model& mod = models[m];
        double e = eta * mod.means[models.optimal_decision(m)];
        for (int j = 0; j < models.arms(); ++j) {
            e -= eta * p[j] * mod.means[j];
            e -= p[j] * bern_hellinger_sq(mod.means[j], bar[j]) / 3.0;
        }
        expo[m] = e;
        mx = std::max(mx, e);
    }
    std::vector<double> mu(models.size());
    double total = 0.0;
    for (int m = 0; m < models.size(); ++m) {
        mu[m] = rho[m] * std::exp(expo[m] - mx);
        total += mu[m];
    }
    for (double& v : mu) v /= total;
    return mu;
}

std::vector<double> model_posterior(const std::vector<double>& mu, const ModelClass& models,
                                    int pi, const Observation& o) {
    require_bernoulli(models);
    check_model_args(mu, models, "mu");
    if (pi < 0 || pi >= models.arms()) throw std::invalid_argument("decision index out of range");
    if (o.value != 0.0 && o.value != 1.0)
        throw std::invalid_argument("Bernoulli observation must be 0 or 1");
    std::vector<double> post(models.size());
    double total = 0.0;
    for (int m = 0; m < models.size(); ++m) {
        double f = models[m].means[pi];
        post[m] = mu[m] * (o.value == 1.0 ? f : 1.0 - f);
        total += post[m];
    }
    if (total <= 0.0)
        throw std::domain_error("observation " + std::to_string(o.value) +
                                " has zero likelihood under decision " + std::to_string(pi));
    for (double& v : post) v /= total;
    return post;
}

Policy induced_decision_law(const std::vector<double>& mu, const ModelClass& models) {
    check_model_args(mu, models, "mu");
    std::vector<double> w(models.arms(), 0.0);
    for (int m = 0; m < models.size(); ++m) w[models.optimal_decision(m)] += mu[m];
    return Policy(w);
}

InducedAir induce_air(const ModelClass& models, const std::vector<double>& mu,
                      const std::vector<double>& rho) {
    check_model_args(mu, models, "mu");
    check_model_args(rho, models, "rho");
    int k = models.arms();
    std::vector<double> q(k, 0.0);
    JointBelief belief;
    belief.family = models.family();
    belief.alpha.assign(k, 0.0);
    belief.beta.assign(k, std::vector<double>(k, 0.0));
    for (int m = 0; m < models.size(); ++m) {
        int star = models.optimal_decision(m);
        q[star] += rho[m];
        belief.alpha[star] += mu[m];
        for (int j = 0; j < k; ++j) belief.beta[star][j] += mu[m] * models[m].means[j];
    }
    for (double v : q)
        if (v <= 0.0)
            throw std::domain_error(
                "induced reference is on the boundary: some decision is optimal for no model");
    return {Policy(q), std::move(belief)};
}

MairAgentState maps_init(const ModelClass& models, double eta) {
    (void)eta;
    MairAgentState state;
    state.belief.mu.assign(models.size(), 1.0 / models.size());
    state.belief.rho = state.belief.mu;
    state.policy = induced_decision_law(state.belief.mu, models);
    return state;
}

MairAgentState maps_step(const MairAgentState& state, const ModelClass& models, int chosen,
                         const Observation& o, double eta) {
    MairAgentState next;
    next.belief.rho = model_posterior(state.belief.mu, models, chosen, o);
    // The closed-form exponent needs a decision law; use the one the updated
    // reference induces (posterior-sampling proposal).
    Policy prop = induced_decision_law(next.belief.rho, models);
    next.belief.mu = closed_form_belief(next.belief.rho, prop, eta, models);
    next.policy = induced_decision_law(next.belief.mu, models);
    next.last_mair = mair_eval(next.policy, next.belief.rho, eta, next.belief.mu, models);
    next.round = state.round + 1;
    return next;
}

namespace {

struct MuMaximizer {
    std::vector<double> mu;
    double value = 0.0;
    std::vector<double> coeffs;      // per-decision loadings of p
    double const_term = 0.0;
};

// MAIR(p, mu) = const(mu) + <coeffs(mu), p> with
//   const = sum_m mu_m f_m(pi_m) - KL(mu, rho)/eta
//   coeffs[j] = -fbar_mu(j) - I_j(mu)/eta,
// where I_j is the mutual information between M and the observation at j.
MuMaximizer evaluate_mu(const ModelClass& models, const std::vector<double>& rho,
                        const Policy& p, double eta, const std::vector<double>& mu) {
    int m = models.size();
    int k = models.arms();
    MuMaximizer r;
    r.mu = mu;
    std::vector<double> bar = mixture_means(mu, models);
    r.coeffs.assign(k, 0.0);
    for (int j = 0; j < k; ++j) {
        double info = 0.0;
        for (int mi = 0; mi < m; ++mi)
            if (mu[mi] > 0.0)
                info += mu[mi] * kl_bernoulli(models[mi].means[j], clamp_prob(bar[j]));
        r.coeffs[j] = -bar[j] - info / eta;
    }
    r.const_term = -kl_categorical(mu, rho) / eta;
    for (int mi = 0; mi < m; ++mi)
        r.const_term += mu[mi] * models[mi].means[models.optimal_decision(mi)];
    r.value = r.const_term;
    for (int j = 0; j < k; ++j) r.value += p[j] * r.coeffs[j];
    return r;
}

MuMaximizer maximize_mu(const ModelClass& models, const std::vector<double>& rho,
                        const Policy& p, double eta, std::vector<double> start,
                        double tol, int cap) {
    int m = models.size();
    int k = models.arms();

    auto evaluate = [&](const std::vector<double>& mu) {
        return evaluate_mu(models, rho, p, eta, mu);
    };

    auto gradient = [&](const std::vector<double>& mu) {
        std::vector<double> bar = mixture_means(mu, models);
        std::vector<double> g(m, 0.0);
        for (int mi = 0; mi < m; ++mi) {
            const Model& mod = models[mi];
            double v = mod.means[models.optimal_decision(mi)];
            for (int j = 0; j < k; ++j) {
                v -= p[j] * mod.means[j];
                v -= p[j] * kl_bernoulli(mod.means[j], clamp_prob(bar[j])) / eta;
            }
            v -= std::log(std::max(mu[mi], kEpsMin) / rho[mi]) / eta;
            g[mi] = v;
        }
        return g;
    };

    MuMaximizer cur = evaluate(start);
    MuMaximizer best = cur;
    const double base_step = 0.5 / (1.0 / eta + 1.0);
    for (int it = 0; it < cap; ++it) {
        std::vector<double> g = gradient(cur.mu);
        double avg = 0.0, mx = -std::numeric_limits<double>::infinity();
        for (int mi = 0; mi < m; ++mi) {
            avg += cur.mu[mi] * g[mi];
            mx = std::max(mx, g[mi]);
        }
        double residual = 0.0;
        for (int mi = 0; mi < m; ++mi)
            residual = std::max(residual, std::abs(cur.mu[mi] * (g[mi] - avg)));
        if (residual <= tol) break;
        double step = base_step * eta;
        bool improved = false;
        for (int bt = 0; bt < 50; ++bt) {
            std::vector<double> cand(m);
            double total = 0.0;
            for (int mi = 0; mi < m; ++mi) {
                cand[mi] = std::max(cur.mu[mi], 1e-300) * std::exp(step * (g[mi] - mx));
                total += cand[mi];
            }
            for (double& v : cand) v /= total;
            MuMaximizer c = evaluate(cand);
            if (c.value > cur.value + 1e-15) {
                cur = std::move(c);
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (cur.value > best.value) best = cur;
        if (!improved) break;
    }
    return best;
}

}  // namespace

MairSaddle mair_saddle(const ModelClass& models, const std::vector<double>& rho, double eta,
                       double tol, int max_outer) {
    require_bernoulli(models);
    check_model_args(rho, models, "rho");
    for (double v : rho)
        if (v <= 0.0) throw std::domain_error("rho must be interior");
    int k = models.arms();
    std::vector<double> warm(models.size(), 1.0 / models.size());

    auto inner = [&](const Policy& p) {
        MuMaximizer res = maximize_mu(models, rho, p, eta, warm, 1e-9, 4000);
        warm = res.mu;
        detail::InnerValue iv;
        iv.value = res.value;
        iv.coeffs = res.coeffs;
        iv.const_term = res.const_term;
        iv.state = std::make_shared<std::vector<double>>(std::move(res.mu));
        return iv;
    };

    // Evaluates a convex combination of two stored maximizing beliefs.
    auto mixer = [&](const Policy& p, const std::shared_ptr<const void>& a,
                     const std::shared_ptr<const void>& b, double lam) {
        const auto& ma = *static_cast<const std::vector<double>*>(a.get());
        const auto& mb = *static_cast<const std::vector<double>*>(b.get());
        std::vector<double> mu(ma.size());
        for (size_t i = 0; i < mu.size(); ++i) mu[i] = lam * ma[i] + (1.0 - lam) * mb[i];
        MuMaximizer res = evaluate_mu(models, rho, p, eta, mu);
        detail::InnerValue iv;
        iv.value = res.value;
        iv.coeffs = res.coeffs;
        iv.const_term = res.const_term;
        iv.state = std::make_shared<std::vector<double>>(std::move(res.mu));
        return iv;
    };

    detail::SaddlePlan plan = detail::solve_saddle(k, inner, tol, max_outer, mixer);
    MairSaddle out;
    out.p = plan.p;
    out.value = plan.value;
    out.gap = plan.gap;
    out.iterations = plan.iterations;
    out.converged = plan.converged;
    out.mu = maximize_mu(models, rho, plan.p, eta, warm, 1e-9, 4000).mu;
    return out;
}

MairAgentState mams_init(const ModelClass& models, double eta) {
    MairAgentState state;
    state.belief.rho.assign(models.size(), 1.0 / models.size());
    MairSaddle saddle = mair_saddle(models, state.belief.rho, eta);
    state.belief.mu = saddle.mu;
    state.policy = saddle.p;
    state.last_mair = saddle.value;
    state.last_gap = saddle.gap;
    return state;
}

MairAgentState mams_step(const MairAgentState& state, const ModelClass& models, int chosen,
                         const Observation& o, double eta) {
    MairAgentState next;
    next.belief.rho = model_posterior(state.belief.mu, models, chosen, o);
    MairSaddle saddle = mair_saddle(models, next.belief.rho, eta);
    next.belief.mu = saddle.mu;
    next.policy = saddle.p;
    next.last_mair = saddle.value;
    next.last_gap = saddle.gap;
    next.round = state.round + 1;
    return next;
}

double closed_form_bound_term(const Policy& p, const std::vector<double>& rho, double eta,
                              const std::vector<double>& mu, const ModelClass& models) {
    require_bernoulli(models);
    check_model_args(rho, models, "rho");
    check_model_args(mu, models, "mu");
    if (eta <= 0.0) throw std::invalid_argument("eta must be positive");
    std::vector<double> bar = mixture_means(rho, models);
    double value = -kl_categorical(mu, rho) / (3.0 * eta);
    for (int m = 0; m < models.size(); ++m) {
        const Model& mod = models[m];
        double v = mod.means[models.optimal_decision(m)];
        for (int j = 0; j < models.arms(); ++j) {
            v -= p[j] * mod.means[j];
            v -= p[j] * bern_hellinger_sq(mod.means[j], bar[j]) / (3.0 * eta);
        }
        value += mu[m] * v;
    }
    return value;
}

double mair_maximin(const ModelClass& models, double eta, int iterations) {
    require_bernoulli(models);
    if (eta <= 0.0) throw std::invalid_argument("eta must be positive");
    int m = models.size();
    int k = models.arms();
    std::vector<double> mu(m, 1.0 / m);

    // G(mu) = sum_m mu_m f_m(pi_m) + min_j (-fbar(j) - I_j(mu)/eta), concave
    // in mu; subgradient mirror ascent with the best iterate kept.
    auto value_and_j = [&](const std::vector<double>& w) {
        std::vector<double> bar = mixture_means(w, models);
        double base = 0.0;
        for (int mi = 0; mi < m; ++mi)
            base += w[mi] * models[mi].means[models.optimal_decision(mi)];
        double mn = std::numeric_limits<double>::infinity();
        int arg = 0;
        for (int j = 0; j < k; ++j) {
            double info = 0.0;
            for (int mi = 0; mi < m; ++mi)
                info += w[mi] * kl_bernoulli(models[mi].means[j], clamp_prob(bar[j]));
            double c = -bar[j] - info / eta;
            if (c < mn) {
                mn = c;
                arg = j;
            }
        }
        return std::pair<double, int>(base + mn, arg);
    };

    auto [best, arg0] = value_and_j(mu);
    for (int it = 1; it <= iterations; ++it) {
        auto [val, jstar] = value_and_j(mu);
        best = std::max(best, val);
        std::vector<double> bar = mixture_means(mu, models);
        std::vector<double> g(m);
        double mx = -std::numeric_limits<double>::infinity();
        for (int mi = 0; mi < m; ++mi) {
            const Model& mod = models[mi];
            g[mi] = mod.means[models.optimal_decision(mi)] - mod.means[jstar] -
                    kl_bernoulli(mod.means[jstar], clamp_prob(bar[jstar])) / eta;
            mx = std::max(mx, g[mi]);
        }
        double step = std::sqrt(2.0 * std::log(std::max(m, 2)) / it) /
                      (1.0 + 1.0 / eta);
        double total = 0.0;
        for (int mi = 0; mi < m; ++mi) {
            mu[mi] = std::max(mu[mi], 1e-300) * std::exp(step * (g[mi] - mx));
            total += mu[mi];
        }
        for (double& v : mu) v /= total;
    }
    best = std::max(best, value_and_j(mu).first);
    return best;
}

ModelClass load_model_csv(const std::string& path, RewardFamily family) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open model CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty model CSV: " + path);
    int k = 0;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            ++k;
            std::string expect = "arm" + std::to_string(k);
            if (cell != expect)
                throw std::invalid_argument("model CSV header must be arm1..armK, got '" + cell +
                                            "' at column " + std::to_string(k));
        }
    }
    std::vector<Model> models;
    int row = 0;
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
                throw std::invalid_argument("row " + std::to_string(row) + " column arm" +
                                            std::to_string(col) + " is not a number");
            }
            means.push_back(v);
        }
        if (col != k)
            throw std::invalid_argument("row " + std::to_string(row) + " has " +
                                        std::to_string(col) + " columns, expected " +
                                        std::to_string(k));
        try {
            models.push_back(Model{std::move(means), family});
        } catch (const std::exception& e) {
            throw std::invalid_argument("row " + std::to_string(row) + ": " + e.what());
        }
    }
    return ModelClass(std::move(models));
}

}  // namespace airbench
