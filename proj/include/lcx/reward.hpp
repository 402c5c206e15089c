#pragma once

#include <span>
#include <vector>

#include "lcx/complex.hpp"

namespace lcx {

struct RewardWeights {
    double alpha = 1.5;
    double beta = 2.0;
    double r_comm = -2.0;
    double r_coll = -5.0;
    double r_comp = 5000.0;
    double r_t = -0.2;

    void validate() const;
};

struct AgentReward {
    double r_s = 0.0;
    double comm_penalty = 0.0;
    double coll_penalty = 0.0;
    double total = 0.0;
};

struct RewardBreakdown {
    std::vector<AgentReward> agents;
    double time_penalty = 0.0;
    double completion_bonus = 0.0;
    double group_total = 0.0;
};

/// c0 + alpha * c1 + beta * c2.
double simplex_reward(const InsertionDelta& delta, const RewardWeights& w);

/// One step's rewards. Every argument holds one entry per agent.
RewardBreakdown step_rewards(std::span<const InsertionDelta> deltas,
                             const std::vector<bool>& communicated,
                             const std::vector<bool>& collided, bool completed,
                             const RewardWeights& w);

/// Per-episode wrapper that pays the completion bonus only on the first
/// completed step.
class RewardAccumulator {
public:
    explicit RewardAccumulator(RewardWeights w = {}) : weights_(w) { weights_.validate(); }

    RewardBreakdown step(std::span<const InsertionDelta> deltas, const std::vector<bool>& communicated,
                         const std::vector<bool>& collided, bool completed);

    bool completion_paid() const { return completion_paid_; }
    const RewardWeights& weights() const { return weights_; }

private:
    RewardWeights weights_;
    bool completion_paid_ = false;
};

}  // namespace lcx
