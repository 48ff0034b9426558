#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "airbench/agents.hpp"
#include "airbench/air.hpp"
#include "airbench/core.hpp"
#include "airbench/rng.hpp"

using namespace airbench;

namespace {

Policy random_policy(int K, CounterRng& rng) {
    std::vector<double> w(K);
    double s = 0.0;
    for (int i = 0; i < K; ++i) {
        w[i] = 0.1 + rng.next_double();
        s += w[i];
    }
    for (double& x : w) x /= s;
    return Policy(w);
}

}  // namespace

TEST_CASE("closed-form update: pinned two-arm values") {
    Policy p({0.5, 0.5});
    Policy up = simplified_aps_update(p, 0, 1, 0.5);
    // (1 - e^{-1/2}) / (1 - e^{-1})
    CHECK(up[0] == doctest::Approx(0.6224593312).epsilon(1e-9));
    CHECK(up[1] == doctest::Approx(0.3775406688).epsilon(1e-9));
    Policy down = simplified_aps_update(p, 0, 0, 0.5);
    // (1 - e^{1/2}) / (1 - e^{1})
    CHECK(down[0] == doctest::Approx(std::expm1(0.5) / std::expm1(1.0)).epsilon(1e-12));
    CHECK(down[0] + down[1] == doctest::Approx(1.0));
}

TEST_CASE("closed-form update: proportional rescale and errors") {
    Policy p({0.2, 0.3, 0.5});
    Policy up = simplified_aps_update(p, 1, 1, 0.4);
    // untouched arms keep their relative proportions
    CHECK(up[0] / up[2] == doctest::Approx(0.2 / 0.5).epsilon(1e-12));
    double s = up[0] + up[1] + up[2];
    CHECK(s == doctest::Approx(1.0));
    CHECK(up[1] > 0.3);  // reward pushes the chosen arm up
    Policy dn = simplified_aps_update(p, 1, 0, 0.4);
    CHECK(dn[1] < 0.3);
    CHECK_THROWS_AS(simplified_aps_update(p, 3, 1, 0.4), std::invalid_argument);
    CHECK_THROWS_AS(simplified_aps_update(p, 0, 2, 0.4), std::invalid_argument);
    CHECK_THROWS_AS(simplified_aps_update(p, 0, 1, 0.0), std::invalid_argument);
    std::vector<double> tiny = {1.0 - 1e-13, 1e-13};
    CHECK_THROWS_AS(simplified_aps_update(Policy(tiny), 1, 1, 0.4), std::domain_error);
}

TEST_CASE("loss twin reproduces the reward update bit for bit") {
    CounterRng rng(3, 0, "loss-twin");
    Policy p = Policy::uniform(5);
    for (int t = 0; t < 200; ++t) {
        int chosen = static_cast<int>(rng.next_double() * 5);
        int r = rng.bernoulli(0.4) ? 1 : 0;
        Policy a = simplified_aps_update(p, chosen, r, 0.21);
        Policy b = simplified_aps_loss_update(p, chosen, 1 - r, 0.21);
        for (int i = 0; i < 5; ++i) CHECK(a[i] == b[i]);  // exact equality
        p = a.mixed_with_uniform(0.001);
    }
}

TEST_CASE("closed-form update equals the exact posterior of its belief") {
    CounterRng rng(5, 0, "post-eq");
    for (int rep = 0; rep < 20; ++rep) {
        int K = 2 + rep % 4;
        Policy p = random_policy(K, rng);
        double eta = 0.1 + rng.next_double();
        JointBelief belief = algorithm4_belief(p, eta);
        for (int chosen = 0; chosen < K; ++chosen) {
            for (int o = 0; o < 2; ++o) {
                Policy bayes = marginal_posterior(belief, chosen, Observation{double(o)});
                Policy closed = simplified_aps_update(p, chosen, o, eta);
                for (int i = 0; i < K; ++i)
                    CHECK(bayes[i] == doctest::Approx(closed[i]).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("closed-form update is exponential weights on the implied estimator") {
    // rhat(pi) = (1/eta) log(posterior(pi)/p(pi)); re-weighting p by
    // exp(eta * rhat) must reproduce the update, and the estimator must equal
    // its explicit observation-split form up to a constant shift.
    CounterRng rng(7, 0, "est");
    int K = 4;
    Policy p = random_policy(K, rng);
    double eta = 0.3;
    JointBelief belief = algorithm4_belief(p, eta);
    for (int chosen = 0; chosen < K; ++chosen) {
        for (int r = 0; r < 2; ++r) {
            Policy post = marginal_posterior(belief, chosen, Observation{double(r)});
            std::vector<double> rhat(K), w(K);
            double total = 0.0;
            for (int i = 0; i < K; ++i) {
                rhat[i] = std::log(post[i] / p[i]) / eta;
                w[i] = p[i] * std::exp(eta * rhat[i]);
                total += w[i];
            }
            Policy rebuilt;
            {
                std::vector<double> ww = w;
                for (double& x : ww) x /= total;
                rebuilt = Policy(ww);
            }
            Policy closed = simplified_aps_update(p, chosen, r, eta);
            for (int i = 0; i < K; ++i)
                CHECK(rebuilt[i] == doctest::Approx(closed[i]).epsilon(1e-10));
            // split form: (1/eta) log(post0/p) + 1(pi=chosen) r/p - r
            Policy post0 = marginal_posterior(belief, chosen, Observation{0.0});
            double shift = 0.0;
            for (int i = 0; i < K; ++i) {
                double split = std::log(post0[i] / p[i]) / eta +
                               (i == chosen ? double(r) / p[chosen] : 0.0) - r;
                if (i == 0) shift = rhat[0] - split;
                CHECK(rhat[i] - split == doctest::Approx(shift).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("one APS step matches the closed-form update") {
    AgentState state;
    state.policy = Policy::uniform(2);
    state.reference = state.policy;
    AgentState next = aps_step(state, 0, Observation{1.0}, 0.5);
    CHECK(next.policy[0] == doctest::Approx(0.6224593312).epsilon(0.0).scale(1.0).epsilon(2e-3));
    CHECK(next.round == 1);
    CHECK(next.reference[0] == next.policy[0]);
    CHECK(next.last_belief.has_value());
}

TEST_CASE("APS step restricted to a model class stays in its hull") {
    ModelClass models({Model({0.9, 0.1}), Model({0.1, 0.9})});
    AgentState state;
    state.policy = Policy::uniform(2);
    state.reference = state.policy;
    state.models = models;
    AgentState next = aps_step(state, 0, Observation{1.0}, 0.5);
    CHECK(next.policy[0] > 0.5);  // reward on arm 0 favors model 1
    const JointBelief& b = *next.last_belief;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            CHECK(b.theta(i, j) >= 0.1 - 1e-9);
            CHECK(b.theta(i, j) <= 0.9 + 1e-9);
        }
}

TEST_CASE("saddle solver: symmetric instance equilibrates at uniform") {
    SaddleResult res = air_saddle(Policy::uniform(2), 0.5, std::nullopt);
    CHECK(res.converged);
    CHECK(res.gap <= 1e-4);
    CHECK(res.gap >= 0.0);
    CHECK(res.p[0] == doctest::Approx(0.5).epsilon(1e-3));
    // the saddle value equals the inner maximum at the reported p
    AirMaximizeResult sup = air_maximize(res.p, Policy::uniform(2), 0.5);
    CHECK(res.value == doctest::Approx(sup.value).epsilon(1e-6));
}

TEST_CASE("saddle solver over a model class") {
    ModelClass models({Model({0.8, 0.2}), Model({0.2, 0.8})});
    SaddleResult res = air_saddle(Policy::uniform(2), 0.7, models);
    CHECK(res.converged);
    CHECK(res.gap <= 1e-4);
    CHECK(res.p[0] == doctest::Approx(0.5).epsilon(1e-3));
    // K = 3 asymmetric class: gap still certified
    ModelClass m3({Model({0.7, 0.2, 0.4}), Model({0.1, 0.6, 0.3}), Model({0.3, 0.2, 0.8})});
    SaddleResult r3 = air_saddle(Policy::uniform(3), 0.5, m3);
    CHECK(r3.gap <= 1e-4);
}

TEST_CASE("AMS loop: init and one step") {
    AgentState state = ams_init(2, 0.5);
    CHECK(state.policy.size() == 2);
    CHECK(state.last_gap <= 1e-4);
    AgentState next = ams_step(state, 0, Observation{1.0}, 0.5);
    CHECK(next.round == 1);
    // observing a reward on arm 0 tilts the reference toward arm 0
    CHECK(next.reference[0] > state.reference[0]);
    CHECK(next.last_gap <= 1e-4);
}

TEST_CASE("EXP3 update pinned values and errors") {
    Policy p({0.5, 0.5});
    Policy up = exp3_update(p, 0, 1.0, 0.2);
    double e = std::exp(0.2 / 0.5);
    CHECK(up[0] == doctest::Approx(e / (e + 1.0)).epsilon(1e-12));
    Policy same = exp3_update(p, 0, 0.0, 0.2);  // zero reward changes nothing
    CHECK(same[0] == doctest::Approx(0.5));
    CHECK_THROWS_AS(exp3_update(p, 0, 1.5, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(exp3_update(p, 5, 1.0, 0.2), std::invalid_argument);
}

TEST_CASE("UCB1 selection rules") {
    std::vector<long> counts = {1, 0, 2};
    std::vector<double> means = {0.5, 0.0, 0.9};
    CHECK(ucb1_select(counts, means, 4) == 1);  // untried arm first
    counts = {1, 3, 2};
    // scores: 0.5 + sqrt(2 ln 7), 0.0 + sqrt(2 ln 7 / 3), 0.9 + sqrt(ln 7)
    double s0 = 0.5 + std::sqrt(2.0 * std::log(7.0));
    double s2 = 0.9 + std::sqrt(2.0 * std::log(7.0) / 2.0);
    CHECK(s0 > s2);
    CHECK(ucb1_select(counts, means, 7) == 0);
    CHECK_THROWS_AS(ucb1_select({}, {}, 1), std::invalid_argument);
    CHECK_THROWS_AS(ucb1_select(counts, means, 0), std::invalid_argument);
    // exact ties resolve to the lowest index
    CHECK(ucb1_select({2, 2}, {0.4, 0.4}, 5) == 0);
}

TEST_CASE("beta sampling moments") {
    CounterRng rng(11, 0, "beta");
    for (auto [a, b] : {std::pair{2.0, 5.0}, {0.5, 0.5}, {1.0, 3.0}}) {
        double sum = 0.0, sq = 0.0;
        const int n = 40000;
        for (int i = 0; i < n; ++i) {
            double x = beta_sample(a, b, rng);
            CHECK(x >= 0.0);
            CHECK(x <= 1.0);
            sum += x;
            sq += x * x;
        }
        double mean = sum / n;
        double var = sq / n - mean * mean;
        CHECK(mean == doctest::Approx(a / (a + b)).epsilon(0.02));
        CHECK(var == doctest::Approx(a * b / ((a + b) * (a + b) * (a + b + 1))).epsilon(0.05));
    }
}

TEST_CASE("Thompson update and selection behavior") {
    BetaParams betas;
    betas.a = {1.0, 1.0};
    betas.b = {1.0, 1.0};
    thompson_update(betas, 0, 1);
    CHECK(betas.a[0] == 2.0);
    thompson_update(betas, 1, 0);
    CHECK(betas.b[1] == 2.0);
    CHECK_THROWS_AS(thompson_update(betas, 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(thompson_update(betas, 0, 2), std::invalid_argument);
    // a dominant posterior wins almost always
    BetaParams strong;
    strong.a = {50.0, 2.0};
    strong.b = {2.0, 50.0};
    CounterRng rng(13, 0, "ts");
    int wins = 0;
    for (int i = 0; i < 1000; ++i)
        if (thompson_select(strong, rng) == 0) ++wins;
    CHECK(wins > 950);
}

TEST_CASE("bernoulli reduction is unbiased") {
    CounterRng rng(17, 0, "reduce");
    const int n = 100000;
    int ones = 0;
    for (int i = 0; i < n; ++i) ones += bernoulli_reduce(0.3, 0.0, 1.0, rng);
    CHECK(static_cast<double>(ones) / n == doctest::Approx(0.3).epsilon(0.02));
    // general range [lo, hi]
    int ones2 = 0;
    for (int i = 0; i < n; ++i) ones2 += bernoulli_reduce(1.0, -1.0, 3.0, rng);
    CHECK(static_cast<double>(ones2) / n == doctest::Approx(0.5).epsilon(0.02));
    CHECK_THROWS_AS(bernoulli_reduce(2.0, 0.0, 1.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(bernoulli_reduce(0.5, 1.0, 0.0, rng), std::invalid_argument);
}

TEST_CASE("learning-rate schedules") {
    CHECK(eta_horizon(4, 1000) ==
          doctest::Approx(std::sqrt(std::log(4.0) / (8000.0 + 4000.0))).epsilon(1e-12));
    CHECK(eta_anytime(4, 10) ==
          doctest::Approx(std::sqrt(std::log(4.0) / 120.0)).epsilon(1e-12));
    // K = 1 uses log 2 to stay positive
    CHECK(eta_horizon(1, 100) > 0.0);
    CHECK_THROWS_AS(eta_horizon(0, 10), std::invalid_argument);
    CHECK_THROWS_AS(eta_anytime(2, 0), std::invalid_argument);
}
