#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "airbench/core.hpp"

namespace airbench {

// Finite set of d-dimensional actions spanning R^d.
struct LinearActionSet {
    std::vector<Eigen::VectorXd> actions;
    int d = 0;

    int size() const { return static_cast<int>(actions.size()); }
};

// Validates dimensions and the span condition (smallest eigenvalue of the
// uniform second-moment matrix must be positive).
LinearActionSet make_action_set(std::vector<Eigen::VectorXd> actions);

// CSV with header "a1,...,ad", one action per row.
LinearActionSet load_action_csv(const std::string& path);
void write_action_csv(const std::string& path, const LinearActionSet& actions);

struct LinearEstimate {
    std::vector<double> rhat;
};

// Inverse-propensity linear reward estimate plus the mean-zero regularizer:
//   rhat(a) = a'S^{-1}a_t r + (eta/2)(a'S^{-1}a - (a'S^{-1}a_t)^2),
// with S the second-moment matrix of the actions under p.
LinearEstimate modified_ipw(const LinearActionSet& actions, const Policy& p, int chosen,
                            double r, double eta, double lambda_floor = 1e-8);

struct GlbState {
    Policy policy;
    std::vector<int> exploration_set;  // indices mixed in uniformly
    long round = 0;
};

GlbState glb_init(const LinearActionSet& actions, bool spanner_subset = false);

// Exponential-weights step on the modified IPW estimate, then a gamma-mix
// with the uniform distribution over the exploration set.
GlbState glb_step(const GlbState& state, const LinearActionSet& actions, int chosen,
                  double r, double eta, double gamma);

// Second-moment matrix E_{a~p}[a a'].
Eigen::MatrixXd second_moment(const LinearActionSet& actions, const Policy& p);

// Greedy log-det selection of up to m actions (default d(d+1)/2) whose
// uniform mixture keeps the second moment well conditioned.
std::vector<int> greedy_logdet_subset(const LinearActionSet& actions, int m = -1);

}  // namespace airbench
