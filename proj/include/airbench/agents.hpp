#pragma once

#include <optional>
#include <vector>

#include "airbench/air.hpp"
#include "airbench/core.hpp"
#include "airbench/rng.hpp"

namespace airbench {

// Loop state shared by the belief-based agents: the policy to play next, the
// reference distribution regularizing the next belief, and diagnostics from
// the last optimization.
struct AgentState {
    Policy policy;
    Policy reference;
    std::optional<JointBelief> last_belief;
    double last_air = 0.0;
    double last_residual = 0.0;
    double last_gap = 0.0;
    bool last_converged = true;
    long round = 0;
    std::optional<ModelClass> models;  // restrict beliefs to a finite class
    RewardFamily family = RewardFamily::Bernoulli;
};

// Closed-form posterior-sampling update for Bernoulli bandits: the chosen arm
// moves to (1-e^{-eta})/(1-e^{-eta/p}) on reward 1 and to
// (1-e^{eta})/(1-e^{eta/p}) on reward 0; the rest rescale proportionally.
Policy simplified_aps_update(const Policy& p, int chosen, int r, double eta);

// Loss-based twin with the two branch formulas exchanged; running it on
// losses 1-r reproduces the reward version bit for bit.
Policy simplified_aps_loss_update(const Policy& p, int chosen, int loss, double eta);

// One round of adaptive posterior sampling: maximize AIR at (p_t, q = p_t),
// then set both policy and reference to the belief's posterior.
AgentState aps_step(const AgentState& state, int chosen, const Observation& obs, double eta);

struct SaddleResult {
    Policy p;
    JointBelief belief;
    double value = 0.0;
    double gap = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Approximate saddle point of inf_p sup_nu AIR_{q,eta}(p, nu), with nu
// ranging over the given class when one is supplied and over all models of
// the family otherwise.
SaddleResult air_saddle(const Policy& q, double eta,
                        const std::optional<ModelClass>& models,
                        RewardFamily family = RewardFamily::Bernoulli,
                        double tol = 1e-4, int max_outer = 4000);

AgentState ams_init(int K, double eta, std::optional<ModelClass> models = std::nullopt,
                    RewardFamily family = RewardFamily::Bernoulli);
AgentState ams_step(const AgentState& state, int chosen, const Observation& obs, double eta);

// Exponential weights with inverse-propensity scaling on the chosen arm.
Policy exp3_update(const Policy& p, int chosen, double r, double eta);

// UCB1 arm choice; any untried arm (lowest index) first.
int ucb1_select(const std::vector<long>& counts, const std::vector<double>& means, long t);

struct BetaParams {
    std::vector<double> a, b;
};

void thompson_update(BetaParams& betas, int chosen, int r);
int thompson_select(const BetaParams& betas, CounterRng& rng);
double beta_sample(double a, double b, CounterRng& rng);

// Maps a bounded reward into {0,1} by resampling: Bernoulli((r-lo)/(hi-lo)).
int bernoulli_reduce(double r, double lo, double hi, CounterRng& rng);

// Learning-rate schedules: the fixed-horizon rate sqrt(log K/(2KT+4T)) and an
// anytime variant sqrt(log K/((2K+4)t)).
double eta_horizon(int K, long T);
double eta_anytime(int K, long t);

}  // namespace airbench
