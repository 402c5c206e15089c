#include "lcx/world.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lcx {

namespace {

constexpr double kContactEps = 1e-9;

double clamp_abs(double v, double limit) { return std::clamp(v, -limit, limit); }

}  // namespace

double wrap_angle(double theta) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double t = std::fmod(theta + std::numbers::pi, two_pi);
    if (t <= 0.0) t += two_pi;
    return t - std::numbers::pi;
}

void WorldConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw Error(Errc::InvalidConfig, std::string(name) + " must be > 0");
    };
    positive(width, "width");
    positive(height, "height");
    positive(dt, "dt");
    positive(agent_radius, "agent_radius");
    positive(v_max, "v_max");
    positive(w_max, "w_max");
    positive(sensor_radius, "sensor_radius");
    positive(sensor_resolution, "sensor_resolution");
    if (sensor_radius < sensor_resolution) {
        throw Error(Errc::InvalidConfig, "sensor_radius must be >= sensor_resolution");
    }
    if (!(v_max * dt < sensor_radius)) {
        throw Error(Errc::InvalidConfig, "v_max * dt must be < sensor_radius");
    }
}

int WorldConfig::sensor_half() const {
    return static_cast<int>(std::floor(sensor_radius / sensor_resolution + 1e-9));
}

DiskMask DiskMask::make(const WorldConfig& config) {
    DiskMask m;
    const int half = config.sensor_half();
    m.side = 2 * half + 1;
    m.inside.assign(static_cast<std::size_t>(m.side) * m.side, 0);
    const double limit = config.sensor_radius / config.sensor_resolution;
    const double limit2 = limit * limit;
    for (int r = 0; r < m.side; ++r) {
        for (int c = 0; c < m.side; ++c) {
            const double dr = r - half;
            const double dc = c - half;
            if (dr * dr + dc * dc <= limit2 + 1e-9) {
                m.inside[static_cast<std::size_t>(r) * m.side + c] = 1;
                m.cells.push_back(r * m.side + c);
            }
        }
    }
    return m;
}

World::World(WorldConfig config, std::vector<Obstacle> obstacles,
             std::vector<LandmarkInstance> landmarks)
    : config_(config), obstacles_(std::move(obstacles)), landmarks_(std::move(landmarks)) {
    config_.validate();
    disk_ = DiskMask::make(config_);
}

void World::set_landmarks(std::vector<LandmarkInstance> landmarks) {
    landmarks_ = std::move(landmarks);
}

void World::set_agents(std::vector<AgentState> agents) { agents_ = std::move(agents); }

void World::kill_agent(std::size_t index) {
    if (index >= agents_.size()) throw Error(Errc::InvalidAgent, "no agent " + std::to_string(index));
    agents_[index].alive = false;
}

bool World::point_free(Vec2 p) const {
    if (p.x < 0.0 || p.y < 0.0 || p.x > config_.width || p.y > config_.height) return false;
    return std::none_of(obstacles_.begin(), obstacles_.end(),
                        [&](const Obstacle& o) { return o.contains(p); });
}

bool World::disk_free(Vec2 c, double radius) const {
    if (c.x < radius || c.y < radius || c.x > config_.width - radius ||
        c.y > config_.height - radius) {
        return false;
    }
    return std::all_of(obstacles_.begin(), obstacles_.end(),
                       [&](const Obstacle& o) { return o.distance_to(c) >= radius; });
}

const std::vector<AgentState>& World::spawn_agents(std::size_t n, Rng& rng,
                                                   std::size_t max_attempts) {
    const double r = config_.agent_radius;
    std::vector<AgentState> placed;
    std::size_t attempts = 0;
    while (placed.size() < n) {
        if (attempts++ >= max_attempts) {
            throw Error(Errc::SpawnFailure, "could only place " + std::to_string(placed.size()) +
                                                " of " + std::to_string(n) + " agents");
        }
        Vec2 p{rng.uniform(r, config_.width - r), rng.uniform(r, config_.height - r)};
        const double heading = rng.uniform(-std::numbers::pi, std::numbers::pi);
        if (!disk_free(p, r)) continue;
        const bool clear = std::all_of(placed.begin(), placed.end(), [&](const AgentState& a) {
            return distance(a.position, p) >= 2.0 * r;
        });
        if (!clear) continue;
        placed.push_back({p, heading, true});
    }
    agents_ = std::move(placed);
    return agents_;
}

double World::clamp_axis(std::size_t self, int axis, double from, double to, double fixed) const {
    if (to == from) return to;
    const double r = config_.agent_radius;
    const bool forward = to > from;
    double result = to;

    auto block = [&](double lo, double hi) {
        if (forward) {
            if (lo >= from - kContactEps && lo < result) result = std::max(from, lo);
        } else {
            if (hi <= from + kContactEps && hi > result) result = std::min(from, hi);
        }
    };

    for (const Obstacle& o : obstacles_) {
        const double plo = axis == 0 ? o.y : o.x;
        const double phi = axis == 0 ? o.y1() : o.x1();
        const double perp = std::max({plo - fixed, 0.0, fixed - phi});
        if (perp >= r) continue;
        const double half = std::sqrt(r * r - perp * perp);
        const double lo = axis == 0 ? o.x : o.y;
        const double hi = axis == 0 ? o.x1() : o.y1();
        block(lo - half, hi + half);
    }
    for (std::size_t j = 0; j < agents_.size(); ++j) {
        if (j == self || !agents_[j].alive) continue;
        const Vec2 c = agents_[j].position;
        const double along = axis == 0 ? c.x : c.y;
        const double perp = std::abs(fixed - (axis == 0 ? c.y : c.x));
        if (perp >= 2.0 * r) continue;
        const double half = std::sqrt(4.0 * r * r - perp * perp);
        block(along - half, along + half);
    }
    const double extent = axis == 0 ? config_.width : config_.height;
    if (forward && result > extent - r) result = std::max(from, extent - r);
    if (!forward && result < r) result = std::min(from, r);
    return result;
}

std::vector<bool> World::step(std::span<const Action> actions) {
    if (actions.size() != agents_.size()) {
        throw Error(Errc::ActionCountMismatch, "got " + std::to_string(actions.size()) +
                                                   " actions for " +
                                                   std::to_string(agents_.size()) + " agents");
    }
    const std::size_t n = agents_.size();
    std::vector<Vec2> intended(n);
    std::vector<bool> collided(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const Action& a = actions[i];
        const Vec2 v{clamp_abs(a.vx, config_.v_max), clamp_abs(a.vy, config_.v_max)};
        intended[i] = agents_[i].position + v * config_.dt;
    }
    for (std::size_t i = 0; i < n; ++i) {
        AgentState& agent = agents_[i];
        if (!agent.alive) continue;
        const Vec2 from = agent.position;
        const double nx = clamp_axis(i, 0, from.x, intended[i].x, from.y);
        const double ny = clamp_axis(i, 1, from.y, intended[i].y, nx);
        collided[i] = nx != intended[i].x || ny != intended[i].y;
        agent.position = {nx, ny};
        agent.heading = wrap_angle(agent.heading + clamp_abs(actions[i].wz, config_.w_max) * config_.dt);
    }
    // Agents whose intended positions overlap both count as colliding, even if
    // the index-order resolution let the first one move freely.
    const double contact = 2.0 * config_.agent_radius - kContactEps;
    for (std::size_t i = 0; i < n; ++i) {
        if (!agents_[i].alive) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!agents_[j].alive) continue;
            if (distance(intended[i], intended[j]) < contact) collided[i] = collided[j] = true;
        }
    }
    return collided;
}

bool World::line_of_sight(Vec2 p, Vec2 q) const {
    return std::none_of(obstacles_.begin(), obstacles_.end(),
                        [&](const Obstacle& o) { return segment_hits_interior(p, q, o); });
}

SensorReading World::sense(std::size_t agent, const KnownPredicate& known) const {
    if (agent >= agents_.size()) throw Error(Errc::InvalidAgent, "no agent " + std::to_string(agent));
    SensorReading reading;
    const int side = disk_.side;
    const int half = config_.sensor_half();
    reading.side = side;
    reading.grid.assign(static_cast<std::size_t>(side) * side * kSensorChannels, 0);
    const AgentState& me = agents_[agent];
    if (!me.alive) return reading;

    const Vec2 a = me.position;
    const double q = config_.sensor_resolution;
    const double d = config_.sensor_radius;
    std::vector<signed char> channel(static_cast<std::size_t>(side) * side, -1);

    auto cell_of = [&](Vec2 p) -> int {
        const long c = half + std::lround((p.x - a.x) / q);
        const long r = half + std::lround((p.y - a.y) / q);
        if (c < 0 || r < 0 || c >= side || r >= side) return -1;
        const int idx = static_cast<int>(r * side + c);
        return disk_.inside[idx] ? idx : -1;
    };
    auto mark = [&](int idx, int ch) {
        if (idx < 0) return;
        if (channel[idx] < 0 || ch < channel[idx]) channel[idx] = static_cast<signed char>(ch);
    };
    auto visible = [&](Vec2 p) {
        return distance(a, p) <= d && (!config_.occlusion || line_of_sight(a, p));
    };

    for (std::size_t j = 0; j < agents_.size(); ++j) {
        if (j == agent || !agents_[j].alive) continue;
        if (visible(agents_[j].position)) mark(cell_of(agents_[j].position), kOtherAgent);
    }
    for (const LandmarkInstance& l : landmarks_) {
        if (l.destroyed || !visible(l.position)) continue;
        reading.visible_ids.push_back(l.id);
        mark(cell_of(l.position), known && known(l.id) ? kObservedLandmark : kUnobservedLandmark);
    }
    std::sort(reading.visible_ids.begin(), reading.visible_ids.end());

    const double reach = d + q;
    for (const Obstacle& o : obstacles_) {
        if (o.distance_to(a) > reach) continue;
        // only the cells whose centres can fall inside the rectangle
        const int c0 = std::max(0, static_cast<int>(std::floor((o.x - a.x) / q)) + half - 1);
        const int c1 = std::min(side - 1, static_cast<int>(std::ceil((o.x1() - a.x) / q)) + half + 1);
        const int r0 = std::max(0, static_cast<int>(std::floor((o.y - a.y) / q)) + half - 1);
        const int r1 = std::min(side - 1, static_cast<int>(std::ceil((o.y1() - a.y) / q)) + half + 1);
        for (int r = r0; r <= r1; ++r) {
            for (int c = c0; c <= c1; ++c) {
                const int idx = r * side + c;
                if (!disk_.inside[idx]) continue;
                const Vec2 center{a.x + (c - half) * q, a.y + (r - half) * q};
                if (o.contains(center)) mark(idx, kObstacleCell);
            }
        }
    }
    for (std::size_t idx = 0; idx < channel.size(); ++idx) {
        if (channel[idx] >= 0) reading.grid[idx * kSensorChannels + channel[idx]] = 1;
    }
    return reading;
}

double World::occupancy_percentage() const {
    const double q = config_.sensor_resolution;
    const long nx = std::lround(config_.width / q);
    const long ny = std::lround(config_.height / q);
    if (nx <= 0 || ny <= 0) return 0.0;
    std::size_t occupied = 0;
    for (long j = 0; j < ny; ++j) {
        for (long i = 0; i < nx; ++i) {
            const Vec2 c{(i + 0.5) * q, (j + 0.5) * q};
            if (std::any_of(obstacles_.begin(), obstacles_.end(),
                            [&](const Obstacle& o) { return o.contains(c); })) {
                ++occupied;
            }
        }
    }
    return static_cast<double>(occupied) / static_cast<double>(nx * ny);
}

}  // namespace lcx
