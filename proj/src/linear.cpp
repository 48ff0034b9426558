#include "airbench/linear.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace airbench {

Eigen::MatrixXd second_moment(const LinearActionSet& actions, const Policy& p) {
    if (p.size() != actions.size())
        throw std::invalid_argument("policy size does not match action set");
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(actions.d, actions.d);
    for (int i = 0; i < actions.size(); ++i)
        s += p[i] * actions.actions[i] * actions.actions[i].transpose();
    return s;
}

LinearActionSet make_action_set(std::vector<Eigen::VectorXd> actions) {
    if (actions.empty()) throw std::invalid_argument("action set must be non-empty");
    LinearActionSet out;
    out.d = static_cast<int>(actions[0].size());
    if (out.d == 0) throw std::invalid_argument("actions must have positive dimension");
    for (const auto& a : actions)
        if (a.size() != out.d)
            throw std::invalid_argument("all actions must share the same dimension");
    out.actions = std::move(actions);
    Eigen::MatrixXd s = second_moment(out, Policy::uniform(out.size()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw std::invalid_argument("actions do not span the ambient space");
    return out;
}

LinearActionSet load_action_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open action CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty action CSV: " + path);
    int d = 0;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            ++d;
            std::string expect = "a" + std::to_string(d);
            if (cell != expect)
                throw std::invalid_argument("action CSV header must be a1..ad, got '" + cell +
                                            "' at column " + std::to_string(d));
        }
    }
    std::vector<Eigen::VectorXd> rows;
    int row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        Eigen::VectorXd a(d);
        int col = 0;
        while (std::getline(ss, cell, ',')) {
            if (col >= d)
                throw std::invalid_argument("row " + std::to_string(row) + " has too many columns");
            try {
                a[col] = std::stod(cell);
            } catch (const std::exception&) {
                throw std::invalid_argument("row " + std::to_string(row) + " column a" +
                                            std::to_string(col + 1) + " is not a number");
            }
            ++col;
        }
        if (col != d)
            throw std::invalid_argument("row " + std::to_string(row) + " has too few columns");
        rows.push_back(std::move(a));
    }
    return make_action_set(std::move(rows));
}

void write_action_csv(const std::string& path, const LinearActionSet& actions) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write action CSV: " + path);
    for (int j = 0; j < actions.d; ++j) out << (j ? ",a" : "a") << (j + 1);
    out << "\n";
    out.precision(17);
    for (const auto& a : actions.actions) {
        for (int j = 0; j < actions.d; ++j) out << (j ? "," : "") << a[j];
        out << "\n";
    }
}

LinearEstimate modified_ipw(const LinearActionSet& actions, const Policy& p, int chosen,
                            double r, double eta, double lambda_floor) {
    if (chosen < 0 || chosen >= actions.size())
        throw std::invalid_argument("chosen action out of range");
    if (eta <= 0.0) throw std::invalid_argument("eta must be positive");
    Eigen::MatrixXd s = second_moment(actions, p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    if (es.eigenvalues().minCoeff() < lambda_floor)
        throw std::runtime_error(
            "second-moment matrix is ill conditioned (min eigenvalue " +
            std::to_string(es.eigenvalues().minCoeff()) +
            "); increase the forced-exploration rate");
    Eigen::MatrixXd sinv = es.eigenvectors() *
                           es.eigenvalues().cwiseInverse().asDiagonal() *
                           es.eigenvectors().transpose();
    const Eigen::VectorXd& at = actions.actions[chosen];
    Eigen::VectorXd sinv_at = sinv * at;
    LinearEstimate out;
    out.rhat.resize(actions.size());
    for (int i = 0; i < actions.size(); ++i) {
        const Eigen::VectorXd& a = actions.actions[i];
        double ipw = a.dot(sinv_at) * r;
        double quad = a.dot(sinv * a);
        double cross = a.dot(sinv_at);
        out.rhat[i] = ipw + 0.5 * eta * (quad - cross * cross);
    }
    return out;
}

GlbState glb_init(const LinearActionSet& actions, bool spanner_subset) {
    GlbState state;
    state.policy = Policy::uniform(actions.size());
    if (spanner_subset) {
        state.exploration_set = greedy_logdet_subset(actions);
    } else {
        state.exploration_set.resize(actions.size());
        for (int i = 0; i < actions.size(); ++i) state.exploration_set[i] = i;
    }
    return state;
}

GlbState glb_step(const GlbState& state, const LinearActionSet& actions, int chosen,
                  double r, double eta, double gamma) {
    if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("gamma must lie in [0, 1]");
    LinearEstimate est = modified_ipw(actions, state.policy, chosen, r, eta);
    int k = actions.size();
    double mx = *std::max_element(est.rhat.begin(), est.rhat.end());
    std::vector<double> w(k);
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        w[i] = state.policy[i] * std::exp(eta * (est.rhat[i] - mx));
        total += w[i];
    }
    double unif = gamma / state.exploration_set.size();
    for (double& v : w) v = (1.0 - gamma) * v / total;
    for (int idx : state.exploration_set) w[idx] += unif;
    GlbState next = state;
    next.policy = Policy(w);
    next.round = state.round + 1;
    return next;
}

std::vector<int> greedy_logdet_subset(const LinearActionSet& actions, int m) {
    if (m < 0) m = actions.d * (actions.d + 1) / 2;
    m = std::min(m, actions.size());
    std::vector<int> chosen;
    Eigen::MatrixXd g = 1e-10 * Eigen::MatrixXd::Identity(actions.d, actions.d);
    for (int pick = 0; pick < m; ++pick) {
        int best = -1;
        double best_det = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < actions.size(); ++i) {
            if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) continue;
            Eigen::MatrixXd cand =
                g + actions.actions[i] * actions.actions[i].transpose();
            double det = std::log(std::max(cand.determinant(), 1e-300));
            if (det > best_det) {
                best_det = det;
                best = i;
            }
        }
        chosen.push_back(best);
        g += actions.actions[best] * actions.actions[best].transpose();
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

}  // namespace airbench
