#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lcx/complex.hpp"
#include "lcx/episode.hpp"
#include "lcx/rng.hpp"

namespace lcx {

/// Vertices on a boundary edge (an edge that is a face of at most one
/// triangle) plus isolated vertices. Ascending.
std::vector<LandmarkId> frontier_vertices(const LandmarkComplex& complex);

struct FrontierPlan {
    std::vector<std::optional<LandmarkId>> targets;
    std::vector<std::vector<LandmarkId>> paths;  // anchor .. target
    std::map<LandmarkId, AgentIndex> assignment;
    std::vector<bool> random_walk;
};

/// For each agent in index order, picks the frontier vertex closest in hops to
/// its anchor (ties: smaller id). The anchor itself, vertices in `excluded`
/// and targets already taken are skipped while another reachable frontier
/// remains. Agents without an anchor or a reachable frontier random-walk.
FrontierPlan select_targets(const LandmarkComplex& complex,
                            const std::vector<std::optional<LandmarkId>>& anchors,
                            const std::unordered_set<LandmarkId>& excluded = {});

struct FrontierParams {
    int sync_every = 10;          // K_sync
    std::size_t sync_batch = 5;   // C_batch
    double probe_distance = 3.0;
    double turn_step_deg = 15.0;
    double reach_distance = 2.0;  // waypoint / target reached
    int replan_every = 50;
    int give_up_steps = 400;      // target abandoned without progress
    int walk_hold_steps = 100;
    double excursion_distance = 12.0;  // push past a reached frontier vertex
    double sweep_cell = 10.0;          // coverage grid used once frontiers run out
};

/// Steering toward `goal` at full speed; if the sensor grid shows an obstacle
/// cell (or the arena edge) within the probe distance, the heading turns
/// clockwise in fixed steps until the probe clears, which keeps the wall on
/// the agent's left. When every heading is blocked (narrow passages look
/// closed at grid resolution) it retries with a centre-line probe and finally
/// heads straight for the goal, leaving the physics to slide along the wall.
Action steer(Vec2 position, Vec2 goal, const SensorReading& reading, const WorldConfig& config,
             const FrontierParams& params);

/// True iff the straight probe from `position` along `dir` hits an obstacle
/// cell, another agent or leaves the arena. `width` adds side probes at
/// +-agent_radius.
bool probe_blocked(Vec2 position, Vec2 dir, const SensorReading& reading, const WorldConfig& config,
                   double distance, bool width = true);

/// Frontier exploration over the server's complex. Agents travel along hop
/// paths to frontier vertices, push outward past them, and sweep unvisited
/// cells of a coarse grid when no frontier is left.
class FrontierPolicy : public Policy {
public:
    explicit FrontierPolicy(std::uint64_t seed, FrontierParams params = {});

    void reset(const PolicyContext& ctx) override;
    std::vector<Action> act(const PolicyContext& ctx) override;

    const FrontierPlan& plan() const { return plan_; }
    const std::unordered_set<LandmarkId>& explored() const { return explored_; }

private:
    enum class Mode { Travel, Excursion, Sweep, Walk };

    struct AgentMemory {
        std::optional<LandmarkId> anchor;
        Mode mode = Mode::Walk;
        std::optional<LandmarkId> target;
        Vec2 goal;  // excursion end point or sweep cell centre
        std::size_t cell = 0;
        std::size_t waypoint = 0;
        double best_distance = 0.0;
        int stalled = 0;
        Vec2 walk_dir;
        int walk_left = 0;
    };

    void replan(const PolicyContext& ctx);
    bool track_progress(AgentMemory& m, double d);
    Vec2 excursion_goal(LandmarkId vertex, const PolicyContext& ctx) const;
    Action random_walk(std::size_t agent, const PolicyContext& ctx);
    void mark_swept(const PolicyContext& ctx);
    std::optional<std::size_t> pick_cell(Vec2 from, std::size_t self) const;
    Vec2 cell_center(std::size_t cell) const;

    FrontierParams params_;
    Rng rng_;
    FrontierPlan plan_;
    std::vector<AgentMemory> memory_;
    std::unordered_set<LandmarkId> explored_;
    std::unordered_map<LandmarkId, Vec2> positions_;
    std::vector<std::uint8_t> swept_;
    int sweep_cols_ = 0;
    int sweep_rows_ = 0;
    std::uint64_t last_plan_step_ = 0;
};

/// Uniform actions in bounds; communicates with probability 0.1.
Action random_action(Rng& rng, const WorldConfig& config, double comm_probability = 0.1);

class RandomPolicy : public Policy {
public:
    explicit RandomPolicy(std::uint64_t seed) : rng_(seed) {}

    void reset(const PolicyContext&) override {}
    std::vector<Action> act(const PolicyContext& ctx) override;

private:
    Rng rng_;
};

}  // namespace lcx
