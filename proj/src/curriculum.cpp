#include "lcx/curriculum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lcx {

void CurriculumParams::validate(const WorldConfig& world) const {
    if (n_o <= 0 || n_l <= 0) throw Error(Errc::InvalidConfig, "n_o and n_l must be > 0");
    if (!(p_l_step >= 0.0)) throw Error(Errc::InvalidConfig, "p_l_step must be >= 0");
    if (!(w_min > 0.0 && w_min <= w_max && h_min > 0.0 && h_min <= h_max)) {
        throw Error(Errc::InvalidConfig, "obstacle size bounds must satisfy 0 < min <= max");
    }
    if (w_max > world.width || h_max > world.height) {
        throw Error(Errc::InvalidConfig, "obstacle size bounds exceed the arena");
    }
    if (stage1_episodes < 0 || stage2_episodes < 0) {
        throw Error(Errc::InvalidConfig, "stage lengths must be >= 0");
    }
    if (max_layout_attempts <= 0 || max_obstacle_tries <= 0) {
        throw Error(Errc::InvalidConfig, "attempt budgets must be > 0");
    }
}

ScheduleEntry schedule_entry(int stage, int e, const CurriculumParams& params) {
    if (stage < 1 || stage > 3 || e < 0) {
        throw Error(Errc::InvalidConfig, "no schedule for stage " + std::to_string(stage) +
                                             " episode " + std::to_string(e));
    }
    ScheduleEntry s;
    s.stage = stage;
    s.episode_in_stage = e;
    if (stage == 1) return s;
    s.n_obstacles = 1 + e / params.n_o;
    if (stage == 3) s.p_l = params.p_l_step * (1 + (e % params.n_o) / params.n_l);
    return s;
}

ScheduleEntry schedule_for_episode(std::uint64_t episode_index, const CurriculumParams& params) {
    const auto s1 = static_cast<std::uint64_t>(params.stage1_episodes);
    const auto s2 = static_cast<std::uint64_t>(params.stage2_episodes);
    if (episode_index < s1) return schedule_entry(1, static_cast<int>(episode_index), params);
    if (episode_index < s1 + s2) return schedule_entry(2, static_cast<int>(episode_index - s1), params);
    return schedule_entry(3, static_cast<int>(episode_index - s1 - s2), params);
}

bool free_space_connected(const WorldConfig& world, const std::vector<Obstacle>& obstacles) {
    const double q = world.sensor_resolution;
    const double r = world.agent_radius;
    const int nx = static_cast<int>(std::floor(world.width / q + 1e-9));
    const int ny = static_cast<int>(std::floor(world.height / q + 1e-9));
    std::vector<std::uint8_t> free(static_cast<std::size_t>(nx) * ny, 0);
    std::size_t free_count = 0;
    std::size_t seed = free.size();
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const Vec2 c{(i + 0.5) * q, (j + 0.5) * q};
            if (c.x < r || c.y < r || c.x > world.width - r || c.y > world.height - r) continue;
            const bool clear = std::all_of(obstacles.begin(), obstacles.end(),
                                           [&](const Obstacle& o) { return o.distance_to(c) >= r; });
            if (!clear) continue;
            const std::size_t idx = static_cast<std::size_t>(j) * nx + i;
            free[idx] = 1;
            ++free_count;
            if (seed == free.size()) seed = idx;
        }
    }
    if (free_count == 0) return false;

    std::vector<std::size_t> stack{seed};
    free[seed] = 2;
    std::size_t reached = 0;
    while (!stack.empty()) {
        const std::size_t idx = stack.back();
        stack.pop_back();
        ++reached;
        const int i = static_cast<int>(idx % nx);
        const int j = static_cast<int>(idx / nx);
        const int di[4] = {1, -1, 0, 0};
        const int dj[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            const int a = i + di[k];
            const int b = j + dj[k];
            if (a < 0 || b < 0 || a >= nx || b >= ny) continue;
            const std::size_t n = static_cast<std::size_t>(b) * nx + a;
            if (free[n] == 1) {
                free[n] = 2;
                stack.push_back(n);
            }
        }
    }
    return reached == free_count;
}

namespace {

// One overlap-free layout, or false if some obstacle exhausted its tries.
bool sample_layout(int n, const CurriculumParams& p, const WorldConfig& world, Rng& rng,
                   std::vector<Obstacle>& out) {
    out.clear();
    for (int k = 0; k < n; ++k) {
        bool placed = false;
        for (int t = 0; t < p.max_obstacle_tries && !placed; ++t) {
            Obstacle o;
            o.w = rng.uniform(p.w_min, p.w_max);
            o.h = rng.uniform(p.h_min, p.h_max);
            o.x = rng.uniform(0.0, world.width - o.w);
            o.y = rng.uniform(0.0, world.height - o.h);
            const bool clear = std::none_of(out.begin(), out.end(),
                                            [&](const Obstacle& other) { return o.overlaps(other); });
            if (clear) {
                out.push_back(o);
                placed = true;
            }
        }
        if (!placed) return false;
    }
    return true;
}

}  // namespace

ObstacleLayout sample_obstacles(int n, const CurriculumParams& params, const WorldConfig& world,
                                Rng& rng) {
    if (n < 0) throw Error(Errc::InvalidConfig, "obstacle count must be >= 0");
    ObstacleLayout layout;
    // size bounds only matter once something has to be placed
    if (n == 0) return layout;
    params.validate(world);

    std::vector<Obstacle> candidate;
    std::vector<Obstacle> fallback;
    bool have_fallback = false;
    for (int attempt = 1; attempt <= params.max_layout_attempts; ++attempt) {
        layout.attempts = attempt;
        if (!sample_layout(n, params, world, rng, candidate)) continue;
        if (free_space_connected(world, candidate)) {
            layout.obstacles = candidate;
            return layout;
        }
        if (!have_fallback) {
            fallback = candidate;
            have_fallback = true;
        }
    }
    if (!have_fallback) {
        throw Error(Errc::SamplingFailure,
                    "no overlap-free layout of " + std::to_string(n) + " obstacles found");
    }
    layout.obstacles = fallback;
    layout.connectivity_relaxed = true;
    return layout;
}

EpisodeConfig episode_config(std::uint64_t episode_index, const CurriculumParams& params,
                             const WorldConfig& world) {
    const ScheduleEntry s = schedule_for_episode(episode_index, params);
    EpisodeConfig c;
    c.stage = s.stage;
    c.episode_index = episode_index;
    c.episode_in_stage = s.episode_in_stage;
    c.n_obstacles = s.n_obstacles;
    c.p_l = s.p_l;
    c.world_seed = derive_seed(params.seed, 100 + s.stage, static_cast<std::uint64_t>(s.episode_in_stage));
    c.landmark_seed = derive_seed(params.seed, 200 + s.stage, static_cast<std::uint64_t>(s.episode_in_stage));
    Rng rng(c.world_seed);
    auto layout = sample_obstacles(s.n_obstacles, params, world, rng);
    c.obstacles = std::move(layout.obstacles);
    c.connectivity_relaxed = layout.connectivity_relaxed;
    return c;
}

Curriculum::Curriculum(CurriculumParams params, WorldConfig world)
    : params_(std::move(params)), world_(world) {
    params_.validate(world_);
    world_.validate();
}

EpisodeConfig Curriculum::next_episode_config() { return episode_config(next_++, params_, world_); }

World build_episode_world(const EpisodeConfig& config, const WorldConfig& base,
                          const PlacementConfig& placement) {
    World world(base, config.obstacles);
    auto landmarks = place_landmarks_lpa(world, placement);
    Rng rng(config.landmark_seed);
    destroy_landmarks(landmarks, config.p_l, rng);
    world.set_landmarks(std::move(landmarks));
    return world;
}

}  // namespace lcx
