#include <doctest.h>

#include "lcx/reward.hpp"
#include "lcx/rng.hpp"

using namespace lcx;

namespace {

InsertionDelta delta_of(std::size_t c0, std::size_t c1, std::size_t c2) {
    InsertionDelta d;
    d.new_counts = {c0, c1, c2};
    LandmarkId next = 0;
    for (std::size_t i = 0; i < c0; ++i) d.new_simplices.push_back(Simplex{next++});
    for (std::size_t i = 0; i < c1; ++i, next += 2) d.new_simplices.push_back(Simplex{next, next + 1});
    for (std::size_t i = 0; i < c2; ++i, next += 3) d.new_simplices.push_back(Simplex{next, next + 1, next + 2});
    return d;
}

}  // namespace

TEST_CASE("worked examples") {
    const RewardWeights w;
    const std::vector<InsertionDelta> one{delta_of(2, 1, 0)};
    const auto r = step_rewards(one, {true}, {false}, false, w);
    CHECK(r.agents[0].total == 1.5);
    CHECK(r.group_total == -0.2);

    const std::vector<InsertionDelta> idle{InsertionDelta{{0, 0, 0}, {}}};
    const auto z = step_rewards(idle, {false}, {false}, false, w);
    CHECK(z.agents[0].total == 0.0);
    CHECK(z.group_total == -0.2);

    LandmarkComplex c;
    const auto fig = c.insert_observation({1, 2, 3});
    CHECK(simplex_reward(fig, w) == 9.5);
}

TEST_CASE("randomized scenarios match an independent recomputation") {
    Rng rng(31);
    const RewardWeights w;
    for (int scenario = 0; scenario < 100; ++scenario) {
        const std::size_t n = 1 + rng.index(6);
        std::vector<InsertionDelta> deltas;
        std::vector<bool> comm, coll;
        for (std::size_t i = 0; i < n; ++i) {
            deltas.push_back(delta_of(rng.index(6), rng.index(10), rng.index(10)));
            comm.push_back(rng.bernoulli(0.5));
            coll.push_back(rng.bernoulli(0.3));
        }
        const bool done = rng.bernoulli(0.2);
        const auto r = step_rewards(deltas, comm, coll, done, w);

        double expected_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            // count dimensions from the simplices themselves, not new_counts
            double c[3] = {0, 0, 0};
            for (const auto& s : deltas[i].new_simplices) c[s.dim()] += 1;
            const double rs = c[0] + 1.5 * c[1] + 2.0 * c[2];
            const double total = rs + (comm[i] ? -2.0 : 0.0) + (coll[i] ? -5.0 : 0.0);
            CHECK(r.agents[i].r_s == rs);
            CHECK(r.agents[i].total == total);
            CHECK(r.agents[i].total == r.agents[i].r_s + r.agents[i].comm_penalty + r.agents[i].coll_penalty);
            expected_sum += total;
        }
        const double group = -0.2 + (done ? 5000.0 : 0.0);
        CHECK(r.group_total == group);
        double got_sum = 0.0;
        for (const auto& a : r.agents) got_sum += a.total;
        CHECK(got_sum + r.group_total == expected_sum + group);
    }
}

TEST_CASE("linearity over disjoint deltas") {
    const RewardWeights w;
    for (std::size_t a = 0; a < 5; ++a) {
        for (std::size_t b = 0; b < 5; ++b) {
            const double merged = simplex_reward(delta_of(a, b, a + b), w);
            CHECK(merged == simplex_reward(delta_of(a, 0, 0), w) + simplex_reward(delta_of(0, b, a + b), w));
        }
    }
}

TEST_CASE("completion bonus is paid once") {
    RewardAccumulator acc;
    const std::vector<InsertionDelta> none{InsertionDelta{{0, 0, 0}, {}}};
    int paid = 0;
    for (int t = 0; t < 10; ++t) {
        const auto r = acc.step(none, {false}, {false}, t >= 4);
        paid += r.completion_bonus == 5000.0;
        if (t == 4) CHECK(r.group_total == 5000.0 - 0.2);
    }
    CHECK(paid == 1);
    CHECK(acc.completion_paid());
}

TEST_CASE("mismatched inputs and bad weights") {
    const std::vector<InsertionDelta> one{delta_of(1, 0, 0)};
    CHECK_THROWS_AS(step_rewards(one, {true, false}, {false}, false, RewardWeights{}), Error);
    RewardWeights w;
    w.r_comm = 1.0;
    CHECK_THROWS_AS(w.validate(), Error);
}
