#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "lcx/geometry.hpp"
#include "lcx/rng.hpp"
#include "lcx/types.hpp"

namespace lcx {

struct WorldConfig {
    double width = 200.0;
    double height = 200.0;
    double dt = 0.1;
    double agent_radius = 0.5;
    double v_max = 2.0;
    double w_max = std::numbers::pi;
    double sensor_radius = 15.0;      // d
    double sensor_resolution = 1.0;   // q
    bool occlusion = true;
    std::uint64_t rng_seed = 0;

    /// Throws InvalidConfig when a length is non-positive, d < q, or an agent
    /// could cross the sensor footprint in one step.
    void validate() const;

    int sensor_half() const;   // floor(d / q)
    int sensor_side() const { return 2 * sensor_half() + 1; }
};

struct AgentState {
    Vec2 position;
    double heading = 0.0;
    bool alive = true;
};

struct LandmarkInstance {
    LandmarkId id = 0;
    Vec2 position;
    bool destroyed = false;

    friend bool operator==(const LandmarkInstance&, const LandmarkInstance&) = default;
};

struct Action {
    double vx = 0.0;
    double vy = 0.0;
    double wz = 0.0;
    bool communicate = false;
};

enum SensorChannel : int {
    kOtherAgent = 0,
    kObservedLandmark = 1,
    kUnobservedLandmark = 2,
    kObstacleCell = 3,
};
inline constexpr int kSensorChannels = 4;

/// Row-major (row, col, channel) one-hot grid plus the ids in line of sight.
struct SensorReading {
    int side = 0;
    std::vector<std::uint8_t> grid;
    std::vector<LandmarkId> visible_ids;  // ascending

    std::uint8_t at(int row, int col, int channel) const {
        return grid[(static_cast<std::size_t>(row) * side + col) * kSensorChannels + channel];
    }
};

/// Cells of the sensor grid whose centre lies within the disk, row-major.
struct DiskMask {
    int side = 0;
    std::vector<std::uint8_t> inside;  // side*side
    std::vector<int> cells;            // row*side + col of in-disk cells, ascending

    static DiskMask make(const WorldConfig& config);
};

using KnownPredicate = std::function<bool(LandmarkId)>;

/// Deterministic 2-D arena with rectangular obstacles, landmarks and disk agents.
class World {
public:
    World(WorldConfig config, std::vector<Obstacle> obstacles,
          std::vector<LandmarkInstance> landmarks = {});

    const WorldConfig& config() const { return config_; }
    const std::vector<Obstacle>& obstacles() const { return obstacles_; }
    const std::vector<LandmarkInstance>& landmarks() const { return landmarks_; }
    const std::vector<AgentState>& agents() const { return agents_; }
    const DiskMask& disk_mask() const { return disk_; }

    void set_landmarks(std::vector<LandmarkInstance> landmarks);
    void set_agents(std::vector<AgentState> agents);
    void kill_agent(std::size_t index);

    /// Rejection-samples `n` non-overlapping obstacle-free poses and installs them.
    const std::vector<AgentState>& spawn_agents(std::size_t n, Rng& rng,
                                                std::size_t max_attempts = 100000);

    /// Advances every alive agent by one tick, in index order. Returns a
    /// per-agent collision flag. Motion is clamped axis by axis so agents slide
    /// along contacts and never penetrate.
    std::vector<bool> step(std::span<const Action> actions);

    /// Omni-directional grid reading for `agent`; `known` tells observed from
    /// unobserved landmarks.
    SensorReading sense(std::size_t agent, const KnownPredicate& known) const;

    bool line_of_sight(Vec2 p, Vec2 q) const;

    /// Fraction of q-grid cells whose centre lies in some obstacle.
    double occupancy_percentage() const;

    bool point_free(Vec2 p) const;
    /// True iff a disk of `radius` at `c` is inside the arena and clear of obstacles.
    bool disk_free(Vec2 c, double radius) const;

private:
    double clamp_axis(std::size_t self, int axis, double from, double to, double fixed) const;

    WorldConfig config_;
    std::vector<Obstacle> obstacles_;
    std::vector<LandmarkInstance> landmarks_;
    std::vector<AgentState> agents_;
    DiskMask disk_;
};

double wrap_angle(double theta);

}  // namespace lcx
