#include "lcx/episode.hpp"

#include <charconv>
#include <ostream>
#include <string>

namespace lcx {

namespace {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

bool ObservationGate::offer(std::size_t agent, Vec2 position, bool sees_landmarks) {
    if (!sees_landmarks) return false;
    auto& last = last_.at(agent);
    if (last && distance(*last, position) < gate_) return false;
    last = position;
    return true;
}

std::string EpisodeLog::header(std::size_t n_agents) {
    std::string h = "episode,step,obs_count,c0,c1,c2,comm_total,collisions,reward_group";
    for (std::size_t i = 0; i < n_agents; ++i) h += ",reward_agent_" + std::to_string(i);
    return h;
}

void EpisodeLog::write_csv(std::ostream& out, bool with_header) const {
    if (with_header) out << header(n_agents) << '\n';
    for (const LogRow& r : rows) {
        out << r.episode << ',' << r.step << ',' << r.obs_count << ',' << r.c0 << ',' << r.c1 << ','
            << r.c2 << ',' << r.comm_total << ',' << r.collisions << ',' << format_double(r.reward_group);
        for (double a : r.reward_agents) out << ',' << format_double(a);
        out << '\n';
    }
}

std::vector<LandmarkId> remaining_ids(const World& world) {
    std::vector<LandmarkId> ids;
    for (const auto& l : world.landmarks()) {
        if (!l.destroyed) ids.push_back(l.id);
    }
    return ids;
}

Episode::Episode(World world, EpisodeParams params, std::uint64_t seed, std::uint64_t episode_id)
    : world_(std::move(world)),
      params_(params),
      seed_(seed),
      episode_id_(episode_id),
      server_(params.n_agents, remaining_ids(world_), params.max_dim),
      credit_(params.max_dim),
      gate_(params.n_agents, params.obs_gate),
      rewards_(params.weights) {
    if (params_.n_agents == 0) throw Error(Errc::InvalidConfig, "an episode needs at least one agent");
    if (params_.max_steps == 0) throw Error(Errc::InvalidConfig, "max_steps must be > 0");
    if (!(params_.obs_gate >= 0.0)) throw Error(Errc::InvalidConfig, "obs_gate must be >= 0");
    for (std::size_t i = 0; i < params_.n_agents; ++i) {
        clients_.emplace_back(static_cast<AgentIndex>(i), params_.max_dim);
        local_credit_.emplace_back(params_.max_dim);
    }
    log_.n_agents = params_.n_agents;
}

StepOutput Episode::reset() {
    if (started_) throw Error(Errc::Protocol, "episode already started");
    started_ = true;
    Rng rng(derive_seed(seed_, 1));
    world_.spawn_agents(params_.n_agents, rng);
    const auto deltas = sense_and_register();
    const std::vector<bool> none(params_.n_agents, false);
    return finish_step(deltas, none, none);
}

StepOutput Episode::step(std::span<const Action> actions) {
    std::vector<std::optional<Action>> wrapped(actions.begin(), actions.end());
    return step(std::span<const std::optional<Action>>(wrapped));
}

StepOutput Episode::step(std::span<const std::optional<Action>> actions) {
    if (!started_) throw Error(Errc::Protocol, "step before reset");
    if (finished()) throw Error(Errc::Protocol, "episode already finished");
    const std::size_t n = params_.n_agents;
    if (actions.size() != n) {
        throw Error(Errc::ActionCountMismatch,
                    "got " + std::to_string(actions.size()) + " actions for " + std::to_string(n) + " agents");
    }
    std::vector<Action> applied(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!actions[i]) {
            if (world_.agents()[i].alive) world_.kill_agent(i);
            continue;
        }
        if (world_.agents()[i].alive) applied[i] = *actions[i];
    }
    std::vector<bool> collided = world_.step(applied);
    ++step_;

    std::vector<bool> comm(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (!world_.agents()[i].alive) {
            collided[i] = false;
            continue;
        }
        if (!applied[i].communicate) continue;
        comm[i] = true;
        const auto delta = server_.handle_sync(clients_[i].build_request());
        clients_[i].apply_delta(delta);
        if (params_.credit == CreditMode::Local) {
            for (const auto& r : delta.records) {
                local_credit_[i].insert_observation(r.simplex.vertices(), r.source_agent, r.observation_index);
            }
        }
    }
    const auto deltas = sense_and_register();
    for (bool c : collided) collisions_ += c;
    return finish_step(deltas, comm, collided);
}

std::vector<InsertionDelta> Episode::sense_and_register() {
    const std::size_t n = params_.n_agents;
    readings_.resize(n);
    std::vector<InsertionDelta> deltas(n);
    for (std::size_t i = 0; i < n; ++i) {
        const ClientDb& client = clients_[i];
        const LandmarkComplex& own = local_credit_[i];
        // what this agent has seen itself or learned from the server
        const KnownPredicate known = [&](LandmarkId id) { return client.knows(id) || own.contains_vertex(id); };
        readings_[i] = world_.sense(i, known);
        const AgentState& a = world_.agents()[i];
        if (!a.alive || !gate_.offer(i, a.position, !readings_[i].visible_ids.empty())) continue;

        const auto& ids = readings_[i].visible_ids;
        const auto agent = static_cast<AgentIndex>(i);
        clients_[i].queue_observation(ids);
        const auto global = credit_.insert_observation(ids, agent, obs_count_);
        const auto local = local_credit_[i].insert_observation(ids, agent, obs_count_);
        deltas[i] = params_.credit == CreditMode::Global ? global : local;
        ++obs_count_;
    }
    return deltas;
}

StepOutput Episode::finish_step(const std::vector<InsertionDelta>& deltas, const std::vector<bool>& comm,
                                const std::vector<bool>& coll) {
    const bool complete = server_.completion_check();
    StepOutput out;
    out.rewards = rewards_.step(deltas, comm, coll, complete);
    if (step_ == 0) {
        // no time has passed at reset
        out.rewards.time_penalty = 0.0;
        out.rewards.group_total = out.rewards.completion_bonus;
    }
    done_ = complete;
    truncated_ = !complete && step_ >= params_.max_steps;

    out.readings = readings_;
    for (const auto& a : world_.agents()) out.alive.push_back(a.alive);
    out.done = done_;
    out.truncated = truncated_;
    out.info.step_index = step_;
    out.info.obs_count = obs_count_;
    out.info.c0 = credit_.size(0);
    out.info.c1 = credit_.max_dim() >= 1 ? credit_.size(1) : 0;
    out.info.c2 = credit_.max_dim() >= 2 ? credit_.size(2) : 0;
    out.info.comm_counts = server_.comm_counts();
    out.info.collisions = collisions_;

    LogRow row;
    row.episode = episode_id_;
    row.step = step_;
    row.obs_count = obs_count_;
    row.c0 = out.info.c0;
    row.c1 = out.info.c1;
    row.c2 = out.info.c2;
    row.comm_total = server_.total_comm();
    row.collisions = collisions_;
    row.reward_group = out.rewards.group_total;
    for (const auto& a : out.rewards.agents) row.reward_agents.push_back(a.total);
    log_.rows.push_back(std::move(row));
    log_.done = done_;
    log_.truncated = truncated_;
    return out;
}

EpisodeLog run_episode(Episode& episode, Policy& policy) {
    episode.reset();
    const PolicyContext ctx{episode};
    policy.reset(ctx);
    while (!episode.finished()) {
        const auto actions = policy.act(ctx);
        episode.step(std::span<const Action>(actions));
    }
    return episode.log();
}

}  // namespace lcx
