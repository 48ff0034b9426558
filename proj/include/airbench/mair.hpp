#pragma once

#include <string>
#include <vector>

#include "airbench/air.hpp"
#include "airbench/core.hpp"

namespace airbench {

// Belief and reference over a finite model class.
struct ModelBelief {
    std::vector<double> mu;
    std::vector<double> rho;
};

// Model-index AIR by exact enumeration over (pi, o): expected regret against
// pi_M minus (1/eta) times the expected KL from the model posterior to rho.
double mair_eval(const Policy& p, const std::vector<double>& rho, double eta,
                 const std::vector<double>& mu, const ModelClass& models);

// Closed-form adaptive belief:
//   mu(M) ∝ rho(M) exp(eta(f_M(pi_M) - E_p f_M) - (1/3) E_p[D_H^2(M(pi), rho_{o|pi})]).
std::vector<double> closed_form_belief(const std::vector<double>& rho, const Policy& p,
                                       double eta, const ModelClass& models);

// Bayes update mu'(M) ∝ mu(M) [M(pi)](o).
std::vector<double> model_posterior(const std::vector<double>& mu, const ModelClass& models,
                                    int pi, const Observation& o);

// Law of the optimal decision induced by a model distribution.
Policy induced_decision_law(const std::vector<double>& mu, const ModelClass& models);

// The (q, belief) pair induced on decision space by (rho, mu); throws when
// some decision is optimal for no model (the induced q would sit on the
// boundary).
struct InducedAir {
    Policy q;
    JointBelief belief;
};
InducedAir induce_air(const ModelClass& models, const std::vector<double>& mu,
                      const std::vector<double>& rho);

struct MairAgentState {
    ModelBelief belief;
    Policy policy;
    double last_mair = 0.0;
    double last_gap = 0.0;
    long round = 0;
};

MairAgentState maps_init(const ModelClass& models, double eta);
MairAgentState maps_step(const MairAgentState& state, const ModelClass& models, int chosen,
                         const Observation& o, double eta);

struct MairSaddle {
    Policy p;
    std::vector<double> mu;
    double value = 0.0;
    double gap = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Approximate saddle of inf_p sup_mu MAIR_{rho,eta}(p, mu).
MairSaddle mair_saddle(const ModelClass& models, const std::vector<double>& rho, double eta,
                       double tol = 1e-4, int max_outer = 4000);

MairAgentState mams_init(const ModelClass& models, double eta);
MairAgentState mams_step(const MairAgentState& state, const ModelClass& models, int chosen,
                         const Observation& o, double eta);

// Per-round term of the closed-form-belief regret bound:
//   E_{mu,p}[f_M(pi_M) - f_M(pi)] - (1/(3 eta)) E_p[D_H^2(M(pi), rho_{o|pi})]
//   - (1/(3 eta)) KL(mu, rho).
double closed_form_bound_term(const Policy& p, const std::vector<double>& rho, double eta,
                              const std::vector<double>& mu, const ModelClass& models);

// sup_rho sup_mu inf_p MAIR: taking rho -> mu removes the KL(mu, rho) term,
// leaving a concave maximization over mu solved by mirror ascent.
double mair_maximin(const ModelClass& models, double eta, int iterations = 4000);

// CSV with header "arm1..armK", one model per row.
ModelClass load_model_csv(const std::string& path, RewardFamily family = RewardFamily::Bernoulli);

}  // namespace airbench
