#include "lcx/reward.hpp"

#include <string>

namespace lcx {

void RewardWeights::validate() const {
    if (!(alpha > 0.0 && beta > 0.0)) throw Error(Errc::InvalidConfig, "alpha and beta must be > 0");
    if (!(r_comm <= 0.0 && r_coll <= 0.0 && r_t <= 0.0)) {
        throw Error(Errc::InvalidConfig, "penalties must be <= 0");
    }
    if (!(r_comp > 0.0)) throw Error(Errc::InvalidConfig, "completion reward must be > 0");
}

double simplex_reward(const InsertionDelta& delta, const RewardWeights& w) {
    return static_cast<double>(delta.count(0)) + w.alpha * static_cast<double>(delta.count(1)) +
           w.beta * static_cast<double>(delta.count(2));
}

RewardBreakdown step_rewards(std::span<const InsertionDelta> deltas,
                             const std::vector<bool>& communicated,
                             const std::vector<bool>& collided, bool completed,
                             const RewardWeights& w) {
    if (communicated.size() != deltas.size() || collided.size() != deltas.size()) {
        throw Error(Errc::InvalidAgent, "reward inputs disagree on the agent count (" +
                                            std::to_string(deltas.size()) + " deltas)");
    }
    RewardBreakdown out;
    out.agents.resize(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        AgentReward& a = out.agents[i];
        a.r_s = simplex_reward(deltas[i], w);
        a.comm_penalty = communicated[i] ? w.r_comm : 0.0;
        a.coll_penalty = collided[i] ? w.r_coll : 0.0;
        a.total = a.r_s + a.comm_penalty + a.coll_penalty;
    }
    out.time_penalty = w.r_t;
    out.completion_bonus = completed ? w.r_comp : 0.0;
    out.group_total = out.time_penalty + out.completion_bonus;
    return out;
}

RewardBreakdown RewardAccumulator::step(std::span<const InsertionDelta> deltas,
                                        const std::vector<bool>& communicated,
                                        const std::vector<bool>& collided, bool completed) {
    const bool pay = completed && !completion_paid_;
    completion_paid_ = completion_paid_ || completed;
    return step_rewards(deltas, communicated, collided, pay, weights_);
}

}  // namespace lcx
