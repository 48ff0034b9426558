#include "airbench/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace airbench {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Policy::Policy(std::vector<double> weights) : w_(std::move(weights)) {
    if (w_.empty()) throw std::invalid_argument("Policy: empty weight vector");
    double sum = 0.0;
    for (double w : w_) {
        if (!(w >= 0.0)) throw std::invalid_argument("Policy: negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("Policy: weights sum to " + std::to_string(sum));
}

Policy Policy::uniform(int k) {
    return Policy(std::vector<double>(k, 1.0 / k));
}

Policy Policy::point_mass(int k, int index) {
    std::vector<double> w(k, 0.0);
    w.at(index) = 1.0;
    return Policy(std::move(w));
}

bool Policy::interior(double eps) const {
    return std::all_of(w_.begin(), w_.end(), [eps](double w) { return w >= eps; });
}

Policy Policy::mixed_with_uniform(double gamma) const {
    std::vector<double> w(w_.size());
    for (std::size_t i = 0; i < w_.size(); ++i)
        w[i] = (1.0 - gamma) * w_[i] + gamma / static_cast<double>(w_.size());
    return Policy(std::move(w));
}

Model::Model(std::vector<double> m, RewardFamily f) : means(std::move(m)), family(f) {
    if (means.empty()) throw std::invalid_argument("Model: empty mean vector");
    for (double v : means) {
        if (family == RewardFamily::Bernoulli) {
            if (v < 0.0 || v > 1.0)
                throw std::invalid_argument("Model: Bernoulli mean outside [0,1]");
        } else {
            if (v < -1.0 || v > 1.0)
                throw std::invalid_argument("Model: Gaussian mean outside [-1,1]");
        }
    }
}

ModelClass::ModelClass(std::vector<Model> models) : models_(std::move(models)) {
    if (models_.empty()) throw std::invalid_argument("ModelClass: empty");
    for (const Model& m : models_) {
        if (m.arms() != models_[0].arms() || m.family != models_[0].family)
            throw std::invalid_argument("ModelClass: models disagree on K or family");
    }
    optimal_.reserve(models_.size());
    for (const Model& m : models_) {
        int best = 0;
        for (int j = 1; j < m.arms(); ++j)
            if (m.means[j] > m.means[best]) best = j;
        optimal_.push_back(best);
    }
}

double kl_bernoulli(double x, double y) {
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("kl_bernoulli: x outside [0,1]");
    if (y < 0.0 || y > 1.0) throw std::invalid_argument("kl_bernoulli: y outside [0,1]");
    if ((y == 0.0 && x > 0.0) || (y == 1.0 && x < 1.0)) return kInf;
    const double yc = clamp_prob(y);
    double out = 0.0;
    if (x > 0.0) out += x * std::log(x / yc);
    if (x < 1.0) out += (1.0 - x) * std::log((1.0 - x) / (1.0 - yc));
    return out;
}

double kl_categorical(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw std::invalid_argument("kl_categorical: length mismatch");
    double out = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0) return kInf;
        out += p[i] * std::log(p[i] / q[i]);
    }
    return std::max(out, 0.0);
}

double hellinger_sq(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw std::invalid_argument("hellinger_sq: length mismatch");
    double out = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = std::sqrt(p[i]) - std::sqrt(q[i]);
        out += d * d;
    }
    return out;
}

}  // namespace airbench
