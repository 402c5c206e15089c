#pragma once

#include <cstdint>
#include <vector>

#include "lcx/placement.hpp"
#include "lcx/world.hpp"

namespace lcx {

struct CurriculumParams {
    int n_o = 25;            // episodes per obstacle increment
    int n_l = 5;             // episodes per p_l increment
    double p_l_step = 0.05;
    double w_min = 20.0;
    double w_max = 50.0;
    double h_min = 50.0;
    double h_max = 100.0;
    int stage1_episodes = 25;
    int stage2_episodes = 75;  // stage 3 runs for every later episode
    int max_layout_attempts = 50;
    int max_obstacle_tries = 1000;
    std::uint64_t seed = 0;

    void validate(const WorldConfig& world) const;
};

struct ScheduleEntry {
    int stage = 1;
    int episode_in_stage = 0;
    int n_obstacles = 0;
    double p_l = 0.0;
};

/// Closed-form schedule for the e-th (0-based) episode of `stage`.
ScheduleEntry schedule_entry(int stage, int episode_in_stage, const CurriculumParams& params);

/// Maps a global episode index onto (stage, episode within stage) and the schedule.
ScheduleEntry schedule_for_episode(std::uint64_t episode_index, const CurriculumParams& params);

struct ObstacleLayout {
    std::vector<Obstacle> obstacles;
    bool connectivity_relaxed = false;  // no connected layout within the attempt budget
    int attempts = 0;
};

/// n rectangles with uniform sizes in the configured bounds, uniform positions
/// inside the arena, pairwise interior-disjoint, and (when possible) leaving a
/// single 4-connected free region for an agent disk. Throws SamplingFailure if
/// no overlap-free layout is found.
ObstacleLayout sample_obstacles(int n, const CurriculumParams& params, const WorldConfig& world,
                                Rng& rng);

/// True iff the q-grid cells where an agent disk fits form one 4-connected region.
bool free_space_connected(const WorldConfig& world, const std::vector<Obstacle>& obstacles);

struct EpisodeConfig {
    int stage = 1;
    std::uint64_t episode_index = 0;
    int episode_in_stage = 0;
    int n_obstacles = 0;
    double p_l = 0.0;
    std::vector<Obstacle> obstacles;
    bool connectivity_relaxed = false;
    std::uint64_t world_seed = 0;
    std::uint64_t landmark_seed = 0;
};

/// Pure function of (params.seed, episode index).
EpisodeConfig episode_config(std::uint64_t episode_index, const CurriculumParams& params,
                             const WorldConfig& world);

class Curriculum {
public:
    Curriculum(CurriculumParams params, WorldConfig world);

    EpisodeConfig next_episode_config();
    std::uint64_t episode_index() const { return next_; }
    const CurriculumParams& params() const { return params_; }

private:
    CurriculumParams params_;
    WorldConfig world_;
    std::uint64_t next_ = 0;
};

/// Builds the episode world: obstacles, LPA landmarks, then destruction with
/// the landmark seed.
World build_episode_world(const EpisodeConfig& config, const WorldConfig& base,
                          const PlacementConfig& placement);

}  // namespace lcx
