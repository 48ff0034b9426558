#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "airbench/core.hpp"
#include "airbench/linear.hpp"
#include "airbench/rng.hpp"

using namespace airbench;

namespace {

Eigen::VectorXd vec1(double x) {
    Eigen::VectorXd v(1);
    v << x;
    return v;
}

Eigen::VectorXd vec2(double x, double y) {
    Eigen::VectorXd v(2);
    v << x, y;
    return v;
}

LinearActionSet random_spanning_set(int n, int d, CounterRng& rng) {
    std::vector<Eigen::VectorXd> a;
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd v(d);
        for (int j = 0; j < d; ++j) v[j] = 2.0 * rng.next_double() - 1.0;
        a.push_back(v);
    }
    // Guarantee the span condition with a scaled basis.
    for (int j = 0; j < d; ++j) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
        v[j] = 0.7;
        a.push_back(v);
    }
    return make_action_set(std::move(a));
}

Policy random_policy(int K, CounterRng& rng) {
    std::vector<double> w(K);
    double s = 0.0;
    for (int i = 0; i < K; ++i) {
        w[i] = 0.2 + rng.next_double();
        s += w[i];
    }
    for (double& x : w) x /= s;
    return Policy(w);
}

double min_eig(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    return es.eigenvalues().minCoeff();
}

std::string temp_path(const char* name) {
    return std::string("/tmp/airbench_linear_") + name;
}

}  // namespace

TEST_CASE("make_action_set validates shape and span") {
    CHECK_THROWS_AS(make_action_set({}), std::invalid_argument);
    CHECK_THROWS_AS(make_action_set({Eigen::VectorXd()}), std::invalid_argument);
    CHECK_THROWS_AS(make_action_set({vec1(1.0), vec2(1.0, 0.0)}), std::invalid_argument);
    // Parallel vectors do not span R^2.
    CHECK_THROWS_AS(make_action_set({vec2(1.0, 1.0), vec2(-2.0, -2.0)}), std::invalid_argument);
    LinearActionSet ok = make_action_set({vec2(1.0, 0.0), vec2(0.0, 1.0), vec2(1.0, 1.0)});
    CHECK(ok.size() == 3);
    CHECK(ok.d == 2);
}

TEST_CASE("modified IPW matches the hand-evaluated d=1 instance") {
    LinearActionSet actions = make_action_set({vec1(0.5), vec1(1.0)});
    LinearEstimate est = modified_ipw(actions, Policy::uniform(2), 1, 1.0, 0.1);
    // Sigma = 0.625, both terms evaluated by hand.
    CHECK(est.rhat[0] == doctest::Approx(0.788).epsilon(1e-12));
    CHECK(est.rhat[1] == doctest::Approx(1.552).epsilon(1e-12));
}

TEST_CASE("regularizer vanishes when all actions share a norm (d=1)") {
    LinearActionSet actions = make_action_set({vec1(-1.0), vec1(1.0)});
    CounterRng rng(7, 0, "test");
    for (int rep = 0; rep < 20; ++rep) {
        Policy p = random_policy(2, rng);
        LinearEstimate with = modified_ipw(actions, p, 0, 1.0, 0.4);
        LinearEstimate without = modified_ipw(actions, p, 0, 1.0, 1e-9);
        for (int i = 0; i < 2; ++i)
            CHECK(with.rhat[i] == doctest::Approx(without.rhat[i]).epsilon(1e-8));
    }
}

TEST_CASE("IPW is unbiased for linear rewards and the regularizer is mean zero") {
    CounterRng rng(11, 0, "test");
    for (int rep = 0; rep < 30; ++rep) {
        int d = 1 + rep % 3;
        LinearActionSet actions = random_spanning_set(3 + rep % 4, d, rng);
        int n = actions.size();
        Policy p = random_policy(n, rng);
        Eigen::VectorXd theta(d);
        for (int j = 0; j < d; ++j) theta[j] = 2.0 * rng.next_double() - 1.0;
        double scale = 0.0;
        for (const auto& a : actions.actions) scale = std::max(scale, std::abs(theta.dot(a)));
        if (scale > 1.0) theta /= scale;
        double eta = 0.3;
        // Exact expectation over the chosen action.
        std::vector<double> mean(n, 0.0), mean_reg(n, 0.0);
        for (int t = 0; t < n; ++t) {
            double r = theta.dot(actions.actions[t]);
            LinearEstimate with_reg = modified_ipw(actions, p, t, r, eta);
            LinearEstimate no_reg = modified_ipw(actions, p, t, r, 1e-12);
            for (int i = 0; i < n; ++i) {
                mean[i] += p[t] * no_reg.rhat[i];
                mean_reg[i] += p[t] * (with_reg.rhat[i] - no_reg.rhat[i]);
            }
        }
        for (int i = 0; i < n; ++i) {
            CHECK(mean[i] == doctest::Approx(theta.dot(actions.actions[i])).epsilon(1e-10));
            CHECK(std::abs(mean_reg[i]) <= 1e-10);
        }
    }
}

TEST_CASE("modified IPW argument and conditioning errors") {
    LinearActionSet actions = make_action_set({vec2(1.0, 0.0), vec2(0.0, 1.0)});
    CHECK_THROWS_AS(modified_ipw(actions, Policy::uniform(2), -1, 1.0, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(modified_ipw(actions, Policy::uniform(2), 2, 1.0, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(modified_ipw(actions, Policy::uniform(2), 0, 1.0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(modified_ipw(actions, Policy::uniform(3), 0, 1.0, 0.1),
                    std::invalid_argument);
    // Degenerate policy -> singular second moment -> conditioning error.
    try {
        modified_ipw(actions, Policy(std::vector<double>{1.0, 0.0}), 0, 1.0, 0.1);
        CHECK(false);
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("forced-exploration") != std::string::npos);
    }
}

TEST_CASE("glb_step is exponential weights on the estimate plus the uniform mix") {
    LinearActionSet actions = make_action_set({vec1(0.5), vec1(1.0)});
    GlbState state = glb_init(actions);
    CHECK(state.policy[0] == doctest::Approx(0.5));
    CHECK(state.exploration_set == std::vector<int>{0, 1});

    double eta = 0.1, gamma = 0.05;
    GlbState next = glb_step(state, actions, 1, 1.0, eta, gamma);
    CHECK(next.round == 1);
    // Hand ratio between the two actions before mixing: exp(eta * 0.764).
    double ratio = std::exp(eta * (1.552 - 0.788));
    double tilde1 = ratio / (1.0 + ratio);
    CHECK(next.policy[1] == doctest::Approx((1.0 - gamma) * tilde1 + gamma / 2.0).epsilon(1e-12));
    CHECK(next.policy[0] + next.policy[1] == doctest::Approx(1.0));

    CHECK_THROWS_AS(glb_step(state, actions, 0, 1.0, eta, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(glb_step(state, actions, 0, 1.0, eta, 1.5), std::invalid_argument);
}

TEST_CASE("zero estimate leaves the policy unchanged up to the exploration mix") {
    // Equal-norm d=1 actions kill the regularizer and r=0 kills the IPW term.
    LinearActionSet actions = make_action_set({vec1(-1.0), vec1(1.0)});
    GlbState state = glb_init(actions);
    state.policy = Policy(std::vector<double>{0.3, 0.7});
    double gamma = 0.2;
    GlbState next = glb_step(state, actions, 0, 0.0, 0.5, gamma);
    CHECK(next.policy[0] == doctest::Approx((1.0 - gamma) * 0.3 + gamma / 2.0).epsilon(1e-12));
    CHECK(next.policy[1] == doctest::Approx((1.0 - gamma) * 0.7 + gamma / 2.0).epsilon(1e-12));
}

TEST_CASE("forced exploration keeps the second moment conditioned over random steps") {
    CounterRng rng(23, 0, "test");
    LinearActionSet actions = random_spanning_set(5, 2, rng);
    double floor = min_eig(second_moment(actions, Policy::uniform(actions.size())));
    REQUIRE(floor > 0.0);
    double gamma = 0.1;
    GlbState state = glb_init(actions);
    for (int t = 0; t < 1000; ++t) {
        int chosen = rng.categorical(state.policy.weights());
        double r = 2.0 * rng.next_double() - 1.0;
        state = glb_step(state, actions, chosen, r, 0.2, gamma);
        CHECK(min_eig(second_moment(actions, state.policy)) >= gamma * floor - 1e-12);
    }
    CHECK(state.round == 1000);
}

TEST_CASE("on basis vectors the step reduces to modified exponential weights") {
    int K = 4;
    std::vector<Eigen::VectorXd> basis;
    for (int i = 0; i < K; ++i) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(K);
        v[i] = 1.0;
        basis.push_back(v);
    }
    LinearActionSet actions = make_action_set(std::move(basis));
    CounterRng rng(31, 0, "test");
    for (int rep = 0; rep < 25; ++rep) {
        Policy p = random_policy(K, rng);
        int chosen = rng.categorical(p.weights());
        double r = rng.next_double();
        double eta = 0.25;
        LinearEstimate est = modified_ipw(actions, p, chosen, r, eta);
        for (int i = 0; i < K; ++i) {
            // Sigma = diag(p), so the generic estimate specializes by hand.
            double ipw = i == chosen ? r / p[chosen] : 0.0;
            double reg = 0.5 * eta * (1.0 / p[i] - (i == chosen ? 1.0 / (p[chosen] * p[chosen]) : 0.0));
            CHECK(est.rhat[i] == doctest::Approx(ipw + reg).epsilon(1e-10));
        }
    }
}

TEST_CASE("greedy log-det subset spans the space") {
    LinearActionSet actions = make_action_set(
        {vec2(1.0, 0.0), vec2(0.99, 0.01), vec2(0.0, 1.0), vec2(0.5, 0.5), vec2(0.98, 0.02)});
    std::vector<int> subset = greedy_logdet_subset(actions);
    CHECK(int(subset.size()) == 3);  // d(d+1)/2
    std::vector<Eigen::VectorXd> picked;
    for (int idx : subset) {
        REQUIRE(idx >= 0);
        REQUIRE(idx < actions.size());
        picked.push_back(actions.actions[idx]);
    }
    LinearActionSet sub = make_action_set(std::move(picked));  // throws if rank-deficient
    CHECK(min_eig(second_moment(sub, Policy::uniform(sub.size()))) > 0.05);

    GlbState spanner = glb_init(actions, true);
    CHECK(spanner.exploration_set == subset);
    std::vector<int> capped = greedy_logdet_subset(actions, 100);
    CHECK(int(capped.size()) == actions.size());
}

TEST_CASE("action CSV round-trip preserves every coordinate") {
    CounterRng rng(41, 0, "test");
    LinearActionSet actions = random_spanning_set(6, 3, rng);
    std::string path = temp_path("roundtrip.csv");
    write_action_csv(path, actions);
    LinearActionSet loaded = load_action_csv(path);
    REQUIRE(loaded.size() == actions.size());
    REQUIRE(loaded.d == actions.d);
    for (int i = 0; i < actions.size(); ++i)
        for (int j = 0; j < actions.d; ++j)
            CHECK(loaded.actions[i][j] == actions.actions[i][j]);
    std::remove(path.c_str());
}

TEST_CASE("action CSV loader rejects malformed files") {
    CHECK_THROWS_AS(load_action_csv("/nonexistent/actions.csv"), std::invalid_argument);
    auto write = [](const std::string& path, const std::string& body) {
        std::ofstream out(path);
        out << body;
    };
    std::string path = temp_path("bad.csv");
    write(path, "x1,a2\n1,0\n0,1\n");
    CHECK_THROWS_AS(load_action_csv(path), std::invalid_argument);
    write(path, "a1,a2\n1,oops\n");
    CHECK_THROWS_AS(load_action_csv(path), std::invalid_argument);
    write(path, "a1,a2\n1\n");
    CHECK_THROWS_AS(load_action_csv(path), std::invalid_argument);
    write(path, "a1,a2\n1,0,3\n");
    CHECK_THROWS_AS(load_action_csv(path), std::invalid_argument);
    write(path, "");
    CHECK_THROWS_AS(load_action_csv(path), std::invalid_argument);
    std::remove(path.c_str());
}
