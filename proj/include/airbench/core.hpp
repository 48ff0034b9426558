#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace airbench {

// Probabilities are clamped into [kEpsMin, 1 - kEpsMin] before any log,
// giving a finite surrogate for objectives that diverge on the simplex
// boundary. Tunable in principle; fixed here for reproducibility.
inline constexpr double kEpsMin = 1e-12;

inline double clamp_prob(double x) {
    if (x < kEpsMin) return kEpsMin;
    if (x > 1.0 - kEpsMin) return 1.0 - kEpsMin;
    return x;
}

enum class RewardFamily { Bernoulli, GaussianUnitVariance };

// A probability vector over K decisions.
class Policy {
public:
    Policy() = default;  // empty placeholder; assigned before use
    explicit Policy(std::vector<double> weights);
    static Policy uniform(int k);
    static Policy point_mass(int k, int index);

    int size() const { return static_cast<int>(w_.size()); }
    double operator[](int i) const { return w_[i]; }
    const std::vector<double>& weights() const { return w_; }

    // True iff every weight is at least eps.
    bool interior(double eps = kEpsMin) const;

    // (1 - gamma) * this + gamma * uniform.
    Policy mixed_with_uniform(double gamma) const;

private:
    std::vector<double> w_;
};

// One model: a mean-reward vector, one entry per decision.
struct Model {
    std::vector<double> means;
    RewardFamily family = RewardFamily::Bernoulli;

    Model(std::vector<double> m, RewardFamily f = RewardFamily::Bernoulli);
    int arms() const { return static_cast<int>(means.size()); }
};

// Finite model class; optimal decisions are precomputed with ties broken
// by lowest index.
class ModelClass {
public:
    explicit ModelClass(std::vector<Model> models);

    int size() const { return static_cast<int>(models_.size()); }
    int arms() const { return models_[0].arms(); }
    RewardFamily family() const { return models_[0].family; }
    const Model& model(int m) const { return models_[m]; }
    const Model& operator[](int m) const { return models_[m]; }
    int optimal_decision(int m) const { return optimal_[m]; }

private:
    std::vector<Model> models_;
    std::vector<int> optimal_;
};

struct Observation {
    double value = 0.0;
};

// Binary KL divergence kl(x, y) with the 0 log 0 = 0 convention; x and y
// are clamped before the logs. Returns +inf if y is exactly 0 or 1 while
// x sits on the opposite side.
double kl_bernoulli(double x, double y);

// Sum p_i log(p_i / q_i); +inf when absolute continuity fails.
double kl_categorical(const std::vector<double>& p, const std::vector<double>& q);

// Sum (sqrt(p_i) - sqrt(q_i))^2, in [0, 2].
double hellinger_sq(const std::vector<double>& p, const std::vector<double>& q);

}  // namespace airbench
