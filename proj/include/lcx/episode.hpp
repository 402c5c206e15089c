#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lcx/complex.hpp"
#include "lcx/reward.hpp"
#include "lcx/sync.hpp"
#include "lcx/world.hpp"

namespace lcx {

/// Which complex a newly registered observation is scored against.
enum class CreditMode {
    Global,  // one complex shared by all agents, updated at registration time
    Local,   // each agent's own observations plus what it has synced
};

struct EpisodeParams {
    std::size_t n_agents = 4;
    std::uint64_t max_steps = 20000;
    double obs_gate = 1.0;  // minimum travel between registered observations
    RewardWeights weights;
    CreditMode credit = CreditMode::Global;
    int max_dim = 2;
};

/// Registers an observation when landmarks are in sight and the agent has
/// moved at least `gate` metres since its previous registration.
class ObservationGate {
public:
    ObservationGate(std::size_t n_agents, double gate) : gate_(gate), last_(n_agents) {}

    bool offer(std::size_t agent, Vec2 position, bool sees_landmarks);

private:
    double gate_;
    std::vector<std::optional<Vec2>> last_;
};

struct StepInfo {
    std::uint64_t step_index = 0;
    std::uint64_t obs_count = 0;
    std::size_t c0 = 0;
    std::size_t c1 = 0;
    std::size_t c2 = 0;
    std::vector<std::uint64_t> comm_counts;
    std::uint64_t collisions = 0;  // cumulative flags over all agents
};

struct StepOutput {
    std::vector<SensorReading> readings;
    std::vector<bool> alive;
    RewardBreakdown rewards;
    bool done = false;
    bool truncated = false;
    StepInfo info;
};

struct LogRow {
    std::uint64_t episode = 0;
    std::uint64_t step = 0;
    std::uint64_t obs_count = 0;
    std::size_t c0 = 0;
    std::size_t c1 = 0;
    std::size_t c2 = 0;
    std::uint64_t comm_total = 0;
    std::uint64_t collisions = 0;
    double reward_group = 0.0;
    std::vector<double> reward_agents;
};

struct EpisodeLog {
    std::size_t n_agents = 0;
    std::vector<LogRow> rows;
    bool done = false;
    bool truncated = false;

    static std::string header(std::size_t n_agents);
    void write_csv(std::ostream& out, bool with_header = true) const;
};

/// One episode: world physics, the sync server with one client per agent,
/// observation registration, rewards and the log. Step 0 is the reset.
class Episode {
public:
    Episode(World world, EpisodeParams params, std::uint64_t seed, std::uint64_t episode_id = 0);

    StepOutput reset();

    /// One entry per agent; an empty entry disconnects that agent for good.
    StepOutput step(std::span<const std::optional<Action>> actions);
    StepOutput step(std::span<const Action> actions);

    bool finished() const { return done_ || truncated_; }
    bool done() const { return done_; }
    bool truncated() const { return truncated_; }
    std::uint64_t step_index() const { return step_; }

    const World& world() const { return world_; }
    const SyncServer& server() const { return server_; }
    const std::vector<ClientDb>& clients() const { return clients_; }
    const LandmarkComplex& credit_complex() const { return credit_; }
    const std::vector<SensorReading>& readings() const { return readings_; }
    const EpisodeParams& params() const { return params_; }
    const EpisodeLog& log() const { return log_; }
    std::uint64_t seed() const { return seed_; }

private:
    std::vector<InsertionDelta> sense_and_register();
    StepOutput finish_step(const std::vector<InsertionDelta>& deltas, const std::vector<bool>& comm,
                           const std::vector<bool>& coll);

    World world_;
    EpisodeParams params_;
    std::uint64_t seed_;
    std::uint64_t episode_id_;
    SyncServer server_;
    std::vector<ClientDb> clients_;
    LandmarkComplex credit_;
    std::vector<LandmarkComplex> local_credit_;
    ObservationGate gate_;
    RewardAccumulator rewards_;
    std::vector<SensorReading> readings_;
    EpisodeLog log_;
    std::uint64_t step_ = 0;
    std::uint64_t obs_count_ = 0;
    std::uint64_t collisions_ = 0;
    bool started_ = false;
    bool done_ = false;
    bool truncated_ = false;
};

/// Read-only view handed to built-in policies.
struct PolicyContext {
    const Episode& episode;
};

class Policy {
public:
    virtual ~Policy() = default;
    virtual void reset(const PolicyContext& ctx) = 0;
    virtual std::vector<Action> act(const PolicyContext& ctx) = 0;
};

/// Runs reset and steps until the episode finishes; returns its log.
EpisodeLog run_episode(Episode& episode, Policy& policy);

std::vector<LandmarkId> remaining_ids(const World& world);

}  // namespace lcx
