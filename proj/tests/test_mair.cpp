#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "airbench/air.hpp"
#include "airbench/core.hpp"
#include "airbench/mair.hpp"
#include "airbench/rng.hpp"

using namespace airbench;

namespace {

Model bern(std::vector<double> means) { return Model{std::move(means), RewardFamily::Bernoulli}; }

ModelClass symmetric_pair() { return ModelClass({bern({0.8, 0.2}), bern({0.2, 0.8})}); }

// Random class over K arms where every arm is optimal for at least one model,
// so the induced reference stays interior.
ModelClass random_covering_class(int K, int extra, CounterRng& rng) {
    std::vector<Model> models;
    for (int j = 0; j < K; ++j) {
        std::vector<double> means(K);
        for (int i = 0; i < K; ++i) means[i] = 0.1 + 0.6 * rng.next_double();
        means[j] = 0.75 + 0.2 * rng.next_double();
        models.push_back(bern(std::move(means)));
    }
    for (int e = 0; e < extra; ++e) {
        std::vector<double> means(K);
        for (int i = 0; i < K; ++i) means[i] = 0.1 + 0.8 * rng.next_double();
        models.push_back(bern(std::move(means)));
    }
    return ModelClass(std::move(models));
}

std::vector<double> random_dist(int n, CounterRng& rng) {
    std::vector<double> w(n);
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        w[i] = 0.15 + rng.next_double();
        s += w[i];
    }
    for (double& x : w) x /= s;
    return w;
}

Policy random_policy(int K, CounterRng& rng) { return Policy(random_dist(K, rng)); }

Model mixture_model(const std::vector<double>& mu, const ModelClass& models) {
    std::vector<double> means(models.arms(), 0.0);
    for (int m = 0; m < models.size(); ++m)
        for (int j = 0; j < models.arms(); ++j) means[j] += mu[m] * models[m].means[j];
    return bern(std::move(means));
}

}  // namespace

TEST_CASE("MAIR vanishes for a singleton class played optimally") {
    ModelClass one({bern({0.3, 0.7})});
    Policy point(std::vector<double>{0.0, 1.0});
    CHECK(mair_eval(point, {1.0}, 0.7, {1.0}, one) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("MAIR matches the hand value for a point-mass belief") {
    // mu is a point mass, so the posterior is that same point mass and the
    // information term is KL(point, uniform) = log 2 at every (pi, o).
    ModelClass models({bern({1.0, 0.0}), bern({0.0, 1.0})});
    double v = mair_eval(Policy::uniform(2), {0.5, 0.5}, 1.0, {1.0, 0.0}, models);
    CHECK(v == doctest::Approx(0.5 - std::log(2.0)).epsilon(1e-12));
    CHECK(v == doctest::Approx(-0.193147).epsilon(1e-6));
}

TEST_CASE("mair_eval validates its arguments") {
    ModelClass models = symmetric_pair();
    Policy p = Policy::uniform(2);
    CHECK_THROWS_AS(mair_eval(p, {0.5, 0.5}, 0.0, {0.5, 0.5}, models), std::invalid_argument);
    CHECK_THROWS_AS(mair_eval(p, {0.5, 0.5, 0.0}, 1.0, {0.5, 0.5}, models),
                    std::invalid_argument);
    CHECK_THROWS_AS(mair_eval(p, {1.0, 0.0}, 1.0, {0.5, 0.5}, models), std::domain_error);
    CHECK_THROWS_AS(mair_eval(Policy::uniform(3), {0.5, 0.5}, 1.0, {0.5, 0.5}, models),
                    std::invalid_argument);
    ModelClass gauss({Model{{0.3, 0.7}, RewardFamily::GaussianUnitVariance}});
    CHECK_THROWS_AS(mair_eval(p, {1.0}, 1.0, {1.0}, gauss), std::invalid_argument);
}

TEST_CASE("MAIR is bounded by AIR under the induced belief") {
    CounterRng rng(3, 0, "test");
    for (int rep = 0; rep < 200; ++rep) {
        int K = 2 + rep % 3;
        ModelClass models = random_covering_class(K, rep % 3, rng);
        std::vector<double> mu = random_dist(models.size(), rng);
        std::vector<double> rho = random_dist(models.size(), rng);
        Policy p = random_policy(K, rng);
        double eta = 0.2 + 1.5 * rng.next_double();
        InducedAir induced = induce_air(models, mu, rho);
        double mair = mair_eval(p, rho, eta, mu, models);
        double air = air_eval(p, induced.q, eta, induced.belief);
        CHECK(mair <= air + 1e-10);
    }
}

TEST_CASE("induced belief aggregates models by optimal decision") {
    ModelClass models({bern({0.8, 0.2}), bern({0.6, 0.4}), bern({0.2, 0.8})});
    InducedAir induced = induce_air(models, {0.5, 0.3, 0.2}, {0.2, 0.2, 0.6});
    CHECK(induced.q[0] == doctest::Approx(0.4));
    CHECK(induced.q[1] == doctest::Approx(0.6));
    CHECK(induced.belief.alpha[0] == doctest::Approx(0.8));
    CHECK(induced.belief.beta[0][0] == doctest::Approx(0.5 * 0.8 + 0.3 * 0.6));
    CHECK(induced.belief.beta[1][1] == doctest::Approx(0.2 * 0.8));
    // Both models optimal at arm 0 -> arm 1 uncovered -> boundary reference.
    ModelClass onesided({bern({0.8, 0.2}), bern({0.6, 0.4})});
    CHECK_THROWS_AS(induce_air(onesided, {0.5, 0.5}, {0.5, 0.5}), std::domain_error);
}

TEST_CASE("closed-form belief reproduces hand values and limits") {
    ModelClass models = symmetric_pair();
    // Identical models: equal exponents, mu = rho.
    ModelClass twins({bern({0.6, 0.4}), bern({0.6, 0.4})});
    std::vector<double> mu = closed_form_belief({0.3, 0.7}, Policy::uniform(2), 1.0, twins);
    CHECK(mu[0] == doctest::Approx(0.3).epsilon(1e-12));

    // Symmetric pair under uniform rho: the Hellinger terms match, and
    // p = (1/3, 2/3) makes the f-exponents 0.4 vs 0.2, a gap of 0.2.
    Policy p(std::vector<double>{1.0 / 3.0, 2.0 / 3.0});
    mu = closed_form_belief({0.5, 0.5}, p, 1.0, models);
    double expect = std::exp(0.2) / (1.0 + std::exp(0.2));
    CHECK(mu[0] == doctest::Approx(expect).epsilon(1e-12));
    CHECK(mu[0] == doctest::Approx(0.549834).epsilon(1e-6));
    CHECK(mu[1] == doctest::Approx(0.450166).epsilon(1e-6));

    // eta -> 0 with equal Hellinger terms: mu -> rho.
    mu = closed_form_belief({0.5, 0.5}, p, 1e-8, models);
    CHECK(mu[0] == doctest::Approx(0.5).epsilon(1e-6));

    CHECK_THROWS_AS(closed_form_belief({1.0, 0.0}, p, 1.0, models), std::domain_error);
    CHECK_THROWS_AS(closed_form_belief({0.5, 0.5}, p, 0.0, models), std::invalid_argument);
}

TEST_CASE("model posterior is exact Bayes") {
    ModelClass models = symmetric_pair();
    std::vector<double> post = model_posterior({0.5, 0.5}, models, 0, Observation{1.0});
    CHECK(post[0] == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(post[1] == doctest::Approx(0.2).epsilon(1e-12));
    post = model_posterior({0.5, 0.5}, models, 0, Observation{0.0});
    CHECK(post[0] == doctest::Approx(0.2).epsilon(1e-12));
    post = model_posterior({1.0, 0.0}, models, 1, Observation{1.0});
    CHECK(post[0] == doctest::Approx(1.0));

    CHECK_THROWS_AS(model_posterior({0.5, 0.5}, models, 2, Observation{1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(model_posterior({0.5, 0.5}, models, 0, Observation{0.5}),
                    std::invalid_argument);
    ModelClass sure({bern({1.0, 0.5}), bern({1.0, 0.5})});
    CHECK_THROWS_AS(model_posterior({0.5, 0.5}, sure, 0, Observation{0.0}), std::domain_error);
}

TEST_CASE("belief updates preserve the simplex") {
    CounterRng rng(9, 0, "test");
    for (int rep = 0; rep < 100; ++rep) {
        int K = 2 + rep % 3;
        ModelClass models = random_covering_class(K, 1, rng);
        std::vector<double> rho = random_dist(models.size(), rng);
        Policy p = random_policy(K, rng);
        std::vector<double> mu = closed_form_belief(rho, p, 0.5, models);
        double s = 0.0;
        for (double v : mu) {
            CHECK(v >= 0.0);
            s += v;
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        std::vector<double> post = model_posterior(mu, models, rep % K, Observation{double(rep % 2)});
        s = 0.0;
        for (double v : post) s += v;
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("MAPS plays the induced optimal-decision law") {
    ModelClass models({bern({0.8, 0.2}), bern({0.2, 0.8})});
    Policy law = induced_decision_law({0.7, 0.3}, models);
    CHECK(law[0] == doctest::Approx(0.7));
    CHECK(law[1] == doctest::Approx(0.3));

    ModelClass shared({bern({0.8, 0.2}), bern({0.9, 0.1})});
    MairAgentState state = maps_init(shared, 0.3);
    CHECK(state.policy[0] == doctest::Approx(1.0));
    CHECK(state.policy[1] == doctest::Approx(0.0));

    state = maps_init(models, 0.3);
    CHECK(state.policy[0] == doctest::Approx(0.5));
    MairAgentState next = maps_step(state, models, 0, Observation{1.0}, 0.3);
    CHECK(next.round == 1);
    // rho_{t+1} is the Bayes posterior of mu_t.
    std::vector<double> expect_rho = model_posterior(state.belief.mu, models, 0, Observation{1.0});
    CHECK(next.belief.rho[0] == doctest::Approx(expect_rho[0]).epsilon(1e-12));
    // mu_{t+1} is the closed-form belief at the induced proposal.
    Policy prop = induced_decision_law(next.belief.rho, models);
    std::vector<double> expect_mu = closed_form_belief(next.belief.rho, prop, 0.3, models);
    CHECK(next.belief.mu[0] == doctest::Approx(expect_mu[0]).epsilon(1e-12));
    CHECK(next.policy[0] == doctest::Approx(next.belief.mu[0]).epsilon(1e-12));
}

TEST_CASE("MAPS concentrates on an identifiable true model") {
    ModelClass models = symmetric_pair();
    double eta = 0.2;
    int hits = 0;
    for (int seed = 1; seed <= 100; ++seed) {
        MairAgentState state = maps_init(models, eta);
        for (int t = 0; t < 500; ++t) {
            CounterRng decide(seed, t, "decide");
            int chosen = decide.categorical(state.policy.weights());
            CounterRng env(seed, t, "env");
            double o = env.bernoulli(models[0].means[chosen]) ? 1.0 : 0.0;
            state = maps_step(state, models, chosen, Observation{o}, eta);
        }
        if (state.belief.rho[0] > 0.5) ++hits;
    }
    CHECK(hits >= 95);
}

TEST_CASE("closed-form bound term matches a hand evaluation") {
    ModelClass models = symmetric_pair();
    Policy p = Policy::uniform(2);
    std::vector<double> rho{0.5, 0.5}, mu{0.7, 0.3};
    double eta = 0.4;
    // Mixture reference mean is 0.5 at both arms.
    double h = hellinger_sq({0.8, 0.2}, {0.5, 0.5});
    double hand = 0.0;
    for (int m = 0; m < 2; ++m) {
        double v = 0.8 - 0.5 - h / (3.0 * eta);
        hand += mu[m] * v;
    }
    hand -= kl_categorical(mu, rho) / (3.0 * eta);
    CHECK(closed_form_bound_term(p, rho, eta, mu, models) == doctest::Approx(hand).epsilon(1e-12));
    CHECK_THROWS_AS(closed_form_bound_term(p, rho, 0.0, mu, models), std::invalid_argument);
}

TEST_CASE("closed-form belief regret bound holds along MAPS runs") {
    ModelClass models({bern({0.7, 0.3}), bern({0.35, 0.65})});
    double eta = 0.25;
    int seeds = 80, T = 200;
    double sum_regret = 0.0, sumsq_regret = 0.0, sum_bound = 0.0;
    for (int seed = 1; seed <= seeds; ++seed) {
        CounterRng pick(seed, 0, "model");
        int truth = pick.categorical(std::vector<double>{1.0, 1.0});
        int star = truth == 0 ? 0 : 1;
        MairAgentState state = maps_init(models, eta);
        double regret = 0.0, bound = 0.0;
        for (int t = 0; t < T; ++t) {
            bound += closed_form_bound_term(state.policy, state.belief.rho, eta,
                                            state.belief.mu, models);
            CounterRng decide(seed, t, "decide");
            int chosen = decide.categorical(state.policy.weights());
            regret += models[truth].means[star] - models[truth].means[chosen];
            CounterRng env(seed, t, "env");
            double o = env.bernoulli(models[truth].means[chosen]) ? 1.0 : 0.0;
            state = maps_step(state, models, chosen, Observation{o}, eta);
        }
        sum_regret += regret;
        sumsq_regret += regret * regret;
        sum_bound += bound;
    }
    double mean = sum_regret / seeds;
    double sd = std::sqrt((sumsq_regret - seeds * mean * mean) / (seeds - 1));
    double se = sd / std::sqrt(double(seeds));
    double rhs = std::log(double(models.size())) / eta + sum_bound / seeds;
    CHECK(mean <= rhs + 3.0 * se);
}

TEST_CASE("MAMS plays the saddle point and reports its gap") {
    ModelClass one({bern({0.3, 0.7})});
    MairAgentState state = mams_init(one, 0.5);
    CHECK(state.policy[1] == doctest::Approx(1.0));
    CHECK(state.last_gap <= 1e-12);

    ModelClass models = symmetric_pair();
    state = mams_init(models, 0.5);
    CHECK(state.last_gap <= 1e-4);
    CHECK(state.policy[0] == doctest::Approx(0.5).epsilon(1e-3));
    MairAgentState next = mams_step(state, models, 0, Observation{1.0}, 0.5);
    CHECK(next.round == 1);
    CHECK(next.last_gap <= 1e-4);
    std::vector<double> expect_rho = model_posterior(state.belief.mu, models, 0, Observation{1.0});
    CHECK(next.belief.rho[0] == doctest::Approx(expect_rho[0]).epsilon(1e-12));
    // The asymmetric posterior reference tilts the saddle toward model 1's arm.
    CHECK(next.policy[0] > 0.5);
}

TEST_CASE("saddle value stays below the brute-force DEC") {
    CounterRng rng(17, 0, "test");
    for (int rep = 0; rep < 10; ++rep) {
        ModelClass models = random_covering_class(2, rep % 2, rng);
        std::vector<double> rho = random_dist(models.size(), rng);
        double eta = 0.5 + rng.next_double();
        MairSaddle saddle = mair_saddle(models, rho, eta);
        // DEC with the saddle mixture as nominal upper-bounds the KL version.
        DecResult dec = dec_bruteforce(models, mixture_model(saddle.mu, models), eta, 0.01);
        CHECK(saddle.value <= dec.value + saddle.gap + 0.02);
    }
}

TEST_CASE("maximin MAIR is bounded by the Hellinger DEC") {
    // Symmetric class: the maximizing mu is uniform, so the uniform mixture is
    // the right DEC nominal.
    ModelClass models = symmetric_pair();
    for (double eta : {0.5, 1.0, 2.0}) {
        double maximin = mair_maximin(models, eta);
        DecResult dec = dec_bruteforce(models, mixture_model({0.5, 0.5}, models), eta, 0.005);
        CHECK(maximin <= dec.value + 0.01);
        // The saddle at uniform rho is a lower bound on the maximin value.
        MairSaddle saddle = mair_saddle(models, {0.5, 0.5}, eta);
        CHECK(saddle.value <= maximin + 1e-3);
    }
    CHECK_THROWS_AS(mair_maximin(models, 0.0), std::invalid_argument);
}

TEST_CASE("per-round MAIR values bound MAMS regret") {
    ModelClass models = symmetric_pair();
    double eta = 0.3;
    int seeds = 30, T = 60;
    double sum_regret = 0.0, sumsq_regret = 0.0, sum_bound = 0.0;
    for (int seed = 1; seed <= seeds; ++seed) {
        CounterRng pick(seed, 0, "model");
        int truth = pick.categorical(std::vector<double>{1.0, 1.0});
        int star = truth == 0 ? 0 : 1;
        MairAgentState state = mams_init(models, eta);
        double regret = 0.0, bound = 0.0;
        for (int t = 0; t < T; ++t) {
            bound += state.last_mair;
            CounterRng decide(seed, t, "decide");
            int chosen = decide.categorical(state.policy.weights());
            regret += models[truth].means[star] - models[truth].means[chosen];
            CounterRng env(seed, t, "env");
            double o = env.bernoulli(models[truth].means[chosen]) ? 1.0 : 0.0;
            state = mams_step(state, models, chosen, Observation{o}, eta);
        }
        sum_regret += regret;
        sumsq_regret += regret * regret;
        sum_bound += bound;
    }
    double mean = sum_regret / seeds;
    double sd = std::sqrt((sumsq_regret - seeds * mean * mean) / (seeds - 1));
    double se = sd / std::sqrt(double(seeds));
    double rhs = std::log(double(models.size())) / eta + sum_bound / seeds;
    CHECK(mean <= rhs + 3.0 * se);
}

TEST_CASE("model CSV loads and validates") {
    std::string path = "/tmp/airbench_models.csv";
    {
        std::ofstream out(path);
        out << "arm1,arm2\n0.8,0.2\n0.2,0.8\n";
    }
    ModelClass models = load_model_csv(path);
    CHECK(models.size() == 2);
    CHECK(models[0].means[0] == doctest::Approx(0.8));
    CHECK(models.optimal_decision(1) == 1);

    auto write = [&](const std::string& body) {
        std::ofstream out(path);
        out << body;
    };
    write("col1,arm2\n0.8,0.2\n");
    CHECK_THROWS_AS(load_model_csv(path), std::invalid_argument);
    write("arm1,arm2\n0.8,oops\n");
    CHECK_THROWS_AS(load_model_csv(path), std::invalid_argument);
    write("arm1,arm2\n0.8\n");
    CHECK_THROWS_AS(load_model_csv(path), std::invalid_argument);
    write("arm1,arm2\n0.8,1.4\n");
    CHECK_THROWS_AS(load_model_csv(path), std::invalid_argument);
    write("");
    CHECK_THROWS_AS(load_model_csv(path), std::invalid_argument);
    std::remove(path.c_str());
}
