#pragma once

#include <optional>
#include <vector>

#include "airbench/core.hpp"

namespace airbench {

// Belief over (model, optimal decision) pairs in the concave (alpha, beta)
// parameterization: alpha(i) is the marginal probability of decision i being
// optimal, beta[i][j] = alpha(i) * theta_i(j) where theta_i(j) is the mean
// reward of decision j conditioned on i being optimal.
struct JointBelief {
    std::vector<double> alpha;               // K
    std::vector<std::vector<double>> beta;   // K x K
    RewardFamily family = RewardFamily::Bernoulli;

    int arms() const { return static_cast<int>(alpha.size()); }

    // Conditional mean theta_i(j) = beta[i][j] / alpha[i], clamped to the
    // family's mean range; defaults to the range midpoint when alpha[i] = 0.
    double theta(int i, int j) const;
    // Marginal mean theta_avg(j) = sum_i beta[i][j].
    double theta_avg(int j) const;
};

// Throws std::invalid_argument when the belief violates its invariants.
void validate_belief(const JointBelief& belief);

// Natural-parameter / log-partition coordinates of the reward family.
struct ExpFamilyView {
    RewardFamily family;

    double natural_param(double theta) const;
    double log_partition(double g) const;
};

struct AirTerms {
    double expected_regret = 0.0;
    double information_gain = 0.0;   // E[KL(posterior, marginal)]
    double regularization = 0.0;     // KL(alpha, q)
    double total = 0.0;              // regret - (gain + regularization)/eta
};

AirTerms air_terms(const Policy& p, const Policy& q, double eta, const JointBelief& belief);
double air_eval(const Policy& p, const Policy& q, double eta, const JointBelief& belief);

struct AirGradient {
    std::vector<double> d_alpha;              // Danskin convention (see docs)
    std::vector<std::vector<double>> d_beta;
};

// Analytic gradient of AIR in (alpha, beta) coordinates. d_alpha follows the
// B-function (Danskin) convention, which differs from the unconstrained
// partial by a constant -1/eta across coordinates; the two agree on every
// simplex-tangent direction.
AirGradient air_grad(const Policy& p, const Policy& q, double eta, const JointBelief& belief);

// Per-mean box constraints for the maximizer (defaults to the family range).
struct ThetaBox {
    double lo;
    double hi;
};

struct AirMaximizeOptions {
    double tol = 1e-7;          // projected-gradient norm target
    int max_iterations = 5000;
    std::optional<ThetaBox> theta_box;           // same box for every (i, j)
    std::optional<JointBelief> warm_start;
    RewardFamily family = RewardFamily::Bernoulli;
};

struct AirMaximizeResult {
    JointBelief belief;
    double value = 0.0;
    double grad_residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Entropic mirror ascent on alpha, projected gradient ascent on beta.
AirMaximizeResult air_maximize(const Policy& p, const Policy& q, double eta,
                               const AirMaximizeOptions& options = {});

// AIR maximization over beliefs supported on a finite model class: nu is a
// |models| x K matrix over (model, optimal decision) pairs.
struct ClassMaximizeResult {
    std::vector<std::vector<double>> nu;   // |models| x K
    JointBelief belief;                    // induced (alpha, beta)
    double value = 0.0;
    double grad_residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

ClassMaximizeResult air_maximize_class(const ModelClass& models, const Policy& p,
                                       const Policy& q, double eta,
                                       double tol = 1e-7, int max_iterations = 5000);

// Converts a belief over a finite class to the (alpha, beta) parameterization.
JointBelief belief_from_class(const ModelClass& models,
                              const std::vector<std::vector<double>>& nu);

// Bayes update of the marginal belief over the optimal decision after
// playing pi and observing o.
Policy marginal_posterior(const JointBelief& belief, int pi, const Observation& o);

// (expected regret)^2 / (expected information gain); +inf when the gain is
// zero with positive regret, 0 when both vanish.
double info_ratio(const JointBelief& belief, const Policy& p);

// The closed-form approximate AIR maximizer behind the simplified Bernoulli
// update: alpha = p, with each column's mean level solved so that the
// beta-gradients vanish exactly at p = q = alpha.
JointBelief algorithm4_belief(const Policy& p, double eta);

struct DecResult {
    double value = 0.0;
    Policy minimizer;
};

// Brute-force decision-estimation coefficient on a simplex grid. Test-oracle
// quality only; sizes are capped.
DecResult dec_bruteforce(const ModelClass& models, const Model& nominal, double eta,
                         double grid_step = 0.02);

// Exact expectation over (pi ~ p, o ~ env_model(pi)) of
//   f(env_pistar) - f(pi) - (1/eta) log(posterior(env_pistar) / q(env_pistar)).
double belief_payoff(const JointBelief& belief, const Policy& p, const Policy& q,
                     double eta, const Model& env_model, int env_pistar);

// |LHS - RHS| of the first-order identity: belief_payoff versus
// air_eval + <air_grad, indicator(env) - belief>.
double lemma53_residual(const JointBelief& belief, const Policy& p, const Policy& q,
                        double eta, const Model& env_model, int env_pistar);

// sup over (model, decision) of belief_payoff, the models ranging over all
// mean vectors in the family's range (the payoff is linear in the means).
double sup_payoff(const JointBelief& belief, const Policy& p, const Policy& q, double eta);

// All distributions over K decisions whose coordinates are multiples of step.
std::vector<Policy> simplex_grid(int K, double step);

}  // namespace airbench
