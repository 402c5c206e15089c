#include "lcx/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

namespace lcx {

namespace {

struct PairHash {
    std::size_t operator()(const std::pair<LandmarkId, LandmarkId>& p) const noexcept {
        return (static_cast<std::size_t>(p.first) << 32) ^ p.second;
    }
};

Vec2 rotate(Vec2 v, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

Vec2 unit(Vec2 v) {
    const double n = v.norm();
    return n > 0.0 ? Vec2{v.x / n, v.y / n} : Vec2{};
}

}  // namespace

std::vector<LandmarkId> frontier_vertices(const LandmarkComplex& complex) {
    std::vector<LandmarkId> out;
    if (complex.max_dim() < 1) return complex.vertices();
    std::unordered_map<std::pair<LandmarkId, LandmarkId>, int, PairHash> cofaces;
    if (complex.max_dim() >= 2) {
        for (const Simplex& t : complex.cells(2)) {
            ++cofaces[{t[0], t[1]}];
            ++cofaces[{t[0], t[2]}];
            ++cofaces[{t[1], t[2]}];
        }
    }
    for (LandmarkId v : complex.vertices()) {
        const auto nbrs = complex.neighbors(v);
        bool frontier = nbrs.empty();
        for (LandmarkId u : nbrs) {
            if (frontier) break;
            const auto key = v < u ? std::pair{v, u} : std::pair{u, v};
            const auto it = cofaces.find(key);
            frontier = it == cofaces.end() || it->second <= 1;
        }
        if (frontier) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

FrontierPlan select_targets(const LandmarkComplex& complex,
                            const std::vector<std::optional<LandmarkId>>& anchors,
                            const std::unordered_set<LandmarkId>& excluded) {
    const std::size_t n = anchors.size();
    FrontierPlan plan;
    plan.targets.assign(n, std::nullopt);
    plan.paths.assign(n, {});
    plan.random_walk.assign(n, true);
    const auto frontier = frontier_vertices(complex);

    for (std::size_t i = 0; i < n; ++i) {
        if (!anchors[i] || !complex.contains_vertex(*anchors[i])) continue;
        const LandmarkId anchor = *anchors[i];
        const auto hops = complex.hop_distances(anchor);
        std::optional<std::pair<std::size_t, LandmarkId>> best_free;
        std::optional<std::pair<std::size_t, LandmarkId>> best_any;
        for (LandmarkId v : frontier) {
            if (v == anchor || excluded.contains(v)) continue;
            const auto it = hops.find(v);
            if (it == hops.end()) continue;
            const std::pair key{it->second, v};
            if (!best_any || key < *best_any) best_any = key;
            if (!plan.assignment.contains(v) && (!best_free || key < *best_free)) best_free = key;
        }
        const auto pick = best_free ? best_free : best_any;
        if (!pick) continue;
        const LandmarkId target = pick->second;
        plan.targets[i] = target;
        plan.paths[i] = *complex.hop_path(anchor, target);
        plan.random_walk[i] = false;
        plan.assignment.emplace(target, static_cast<AgentIndex>(i));
    }
    return plan;
}

bool probe_blocked(Vec2 position, Vec2 dir, const SensorReading& reading, const WorldConfig& config,
                   double distance, bool width) {
    const double q = config.sensor_resolution;
    const int half = config.sensor_half();
    const double r = config.agent_radius;
    const Vec2 side{-dir.y, dir.x};
    for (double s = 0.5; s <= distance + 1e-9; s += 0.5) {
        for (double lateral : {-r, 0.0, r}) {
            if (!width && lateral != 0.0) continue;
            const Vec2 p = position + dir * s + side * lateral;
            if (p.x < r || p.y < r || p.x > config.width - r || p.y > config.height - r) return true;
            const long c = half + std::lround((p.x - position.x) / q);
            const long row = half + std::lround((p.y - position.y) / q);
            if (c < 0 || row < 0 || c >= reading.side || row >= reading.side) continue;
            const int ri = static_cast<int>(row);
            const int ci = static_cast<int>(c);
            if (reading.at(ri, ci, kObstacleCell)) return true;
            if ((ri != half || ci != half) && reading.at(ri, ci, kOtherAgent)) return true;
        }
    }
    return false;
}

Action steer(Vec2 position, Vec2 goal, const SensorReading& reading, const WorldConfig& config,
             const FrontierParams& params) {
    const Vec2 to_goal = goal - position;
    const double dist = to_goal.norm();
    if (dist < 1e-9) return {};
    const Vec2 dir = unit(to_goal);
    const double speed = std::min(config.v_max, dist / config.dt);
    const double step = params.turn_step_deg * std::numbers::pi / 180.0;
    const int turns = static_cast<int>(std::ceil(360.0 / params.turn_step_deg));
    for (bool width : {true, false}) {
        for (int k = 0; k < turns; ++k) {
            const Vec2 d = rotate(dir, -k * step);
            const double probe = k == 0 ? std::min(params.probe_distance, dist) : params.probe_distance;
            if (!probe_blocked(position, d, reading, config, probe, width)) {
                const double v = k == 0 ? speed : config.v_max;
                return {v * d.x, v * d.y, 0.0, false};
            }
        }
    }
    return {speed * dir.x, speed * dir.y, 0.0, false};
}

FrontierPolicy::FrontierPolicy(std::uint64_t seed, FrontierParams params)
    : params_(params), rng_(seed) {}

void FrontierPolicy::reset(const PolicyContext& ctx) {
    memory_.assign(ctx.episode.params().n_agents, AgentMemory{});
    explored_.clear();
    positions_.clear();
    for (const auto& l : ctx.episode.world().landmarks()) positions_[l.id] = l.position;
    const WorldConfig& config = ctx.episode.world().config();
    sweep_cols_ = std::max(1, static_cast<int>(std::ceil(config.width / params_.sweep_cell)));
    sweep_rows_ = std::max(1, static_cast<int>(std::ceil(config.height / params_.sweep_cell)));
    swept_.assign(static_cast<std::size_t>(sweep_cols_) * sweep_rows_, 0);
    plan_ = FrontierPlan{};
    last_plan_step_ = 0;
    mark_swept(ctx);
    replan(ctx);
}

void FrontierPolicy::replan(const PolicyContext& ctx) {
    std::vector<std::optional<LandmarkId>> anchors;
    for (const auto& m : memory_) {
        anchors.push_back(m.mode == Mode::Excursion ? std::nullopt : m.anchor);
    }
    const LandmarkComplex& shared = ctx.episode.server().complex();
    plan_ = select_targets(shared, anchors, explored_);
    const auto frontier = frontier_vertices(shared);
    for (std::size_t i = 0; i < memory_.size(); ++i) {
        AgentMemory& m = memory_[i];
        if (m.mode == Mode::Excursion) continue;
        // keep a live target instead of chasing whichever frontier is nearest
        // to the current anchor
        if (m.mode == Mode::Travel && m.target && anchors[i] && !explored_.contains(*m.target) &&
            std::binary_search(frontier.begin(), frontier.end(), *m.target)) {
            if (auto path = shared.hop_path(*anchors[i], *m.target)) {
                plan_.targets[i] = m.target;
                plan_.paths[i] = std::move(*path);
                plan_.random_walk[i] = false;
                plan_.assignment[*m.target] = static_cast<AgentIndex>(i);
            }
        }
        m.waypoint = plan_.paths[i].size() > 1 ? 1 : 0;
        if (plan_.random_walk[i]) {
            m.target.reset();
            if (m.mode == Mode::Sweep && !swept_[m.cell]) continue;
            const AgentState& a = ctx.episode.world().agents()[i];
            const auto cell = a.alive ? pick_cell(a.position, i) : std::nullopt;
            if (cell) {
                m.mode = Mode::Sweep;
                m.cell = *cell;
                m.goal = cell_center(*cell);
                m.best_distance = std::numeric_limits<double>::infinity();
                m.stalled = 0;
            } else {
                m.mode = Mode::Walk;
            }
            continue;
        }
        // stall state survives a replan that keeps the target
        if (m.mode != Mode::Travel || m.target != plan_.targets[i]) {
            m.best_distance = std::numeric_limits<double>::infinity();
            m.stalled = 0;
        }
        m.mode = Mode::Travel;
        m.target = plan_.targets[i];
    }
    last_plan_step_ = ctx.episode.step_index();
}

bool FrontierPolicy::track_progress(AgentMemory& m, double d) {
    if (d < m.best_distance - 0.05) {
        m.best_distance = d;
        m.stalled = 0;
        return true;
    }
    return ++m.stalled <= params_.give_up_steps;
}

Vec2 FrontierPolicy::excursion_goal(LandmarkId vertex, const PolicyContext& ctx) const {
    const WorldConfig& config = ctx.episode.world().config();
    const Vec2 p = positions_.at(vertex);
    const auto nbrs = ctx.episode.server().complex().neighbors(vertex);
    Vec2 dir;
    if (nbrs.empty()) {
        dir = unit(Vec2{config.width / 2.0, config.height / 2.0} - p);
    } else {
        Vec2 mean;
        for (LandmarkId u : nbrs) mean = mean + positions_.at(u);
        mean = mean * (1.0 / static_cast<double>(nbrs.size()));
        dir = unit(p - mean);
    }
    if (dir.norm() == 0.0) dir = {1.0, 0.0};
    const double r = config.agent_radius;
    const Vec2 g = p + dir * params_.excursion_distance;
    return {std::clamp(g.x, r, config.width - r), std::clamp(g.y, r, config.height - r)};
}

Vec2 FrontierPolicy::cell_center(std::size_t cell) const {
    const auto col = static_cast<int>(cell % sweep_cols_);
    const auto row = static_cast<int>(cell / sweep_cols_);
    return {(col + 0.5) * params_.sweep_cell, (row + 0.5) * params_.sweep_cell};
}

void FrontierPolicy::mark_swept(const PolicyContext& ctx) {
    const World& world = ctx.episode.world();
    const WorldConfig& config = world.config();
    const int half = config.sensor_half();
    const double q = config.sensor_resolution;
    for (std::size_t i = 0; i < world.agents().size(); ++i) {
        const AgentState& a = world.agents()[i];
        if (!a.alive) continue;
        const auto& reading = ctx.episode.readings()[i];
        for (std::size_t cell = 0; cell < swept_.size(); ++cell) {
            if (swept_[cell]) continue;
            const Vec2 c = cell_center(cell);
            const double d = distance(a.position, c);
            if (d <= params_.sweep_cell / 2.0) {
                swept_[cell] = 1;
            } else if (d <= config.sensor_radius) {
                // centre inside an obstacle or outside the arena: unreachable
                const long col = half + std::lround((c.x - a.position.x) / q);
                const long row = half + std::lround((c.y - a.position.y) / q);
                if (c.x > config.width || c.y > config.height ||
                    (col >= 0 && row >= 0 && col < reading.side && row < reading.side &&
                     reading.at(static_cast<int>(row), static_cast<int>(col), kObstacleCell))) {
                    swept_[cell] = 1;
                }
            }
        }
    }
}

std::optional<std::size_t> FrontierPolicy::pick_cell(Vec2 from, std::size_t self) const {
    std::optional<std::size_t> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t cell = 0; cell < swept_.size(); ++cell) {
        if (swept_[cell]) continue;
        bool claimed = false;
        for (std::size_t j = 0; j < memory_.size(); ++j) {
            claimed = claimed || (j != self && memory_[j].mode == Mode::Sweep && memory_[j].cell == cell);
        }
        if (claimed) continue;
        const double d = distance(from, cell_center(cell));
        if (d < best_d) {
            best_d = d;
            best = cell;
        }
    }
    return best;
}

Action FrontierPolicy::random_walk(std::size_t agent, const PolicyContext& ctx) {
    const World& world = ctx.episode.world();
    const Vec2 pos = world.agents()[agent].position;
    AgentMemory& m = memory_[agent];
    const auto& reading = ctx.episode.readings()[agent];
    if (m.walk_left <= 0 || probe_blocked(pos, m.walk_dir, reading, world.config(), params_.probe_distance)) {
        const double theta = rng_.uniform(-std::numbers::pi, std::numbers::pi);
        m.walk_dir = {std::cos(theta), std::sin(theta)};
        m.walk_left = params_.walk_hold_steps;
    }
    --m.walk_left;
    return steer(pos, pos + m.walk_dir * 10.0, reading, world.config(), params_);
}

std::vector<Action> FrontierPolicy::act(const PolicyContext& ctx) {
    const Episode& ep = ctx.episode;
    const World& world = ep.world();
    const LandmarkComplex& shared = ep.server().complex();
    const std::size_t n = memory_.size();
    auto position_of = [&](LandmarkId id) { return positions_.at(id); };

    mark_swept(ctx);
    bool need_plan = ep.step_index() >= last_plan_step_ + static_cast<std::uint64_t>(params_.replan_every);
    for (std::size_t i = 0; i < n; ++i) {
        const AgentState& a = world.agents()[i];
        if (!a.alive) continue;
        AgentMemory& m = memory_[i];
        std::optional<LandmarkId> nearest;
        double best = std::numeric_limits<double>::infinity();
        for (LandmarkId id : ep.readings()[i].visible_ids) {
            const double d = distance(a.position, position_of(id));
            if (shared.contains_vertex(id) && d < best) {
                best = d;
                nearest = id;
            }
        }
        if (nearest) {
            if (!m.anchor) need_plan = true;
            m.anchor = nearest;
        }
        if ((m.mode == Mode::Walk || m.mode == Mode::Sweep) && ep.step_index() % 10 == 0) need_plan = true;
        if (m.mode == Mode::Sweep && !swept_[m.cell] && !track_progress(m, distance(a.position, m.goal))) {
            swept_[m.cell] = 1;  // abandon
            need_plan = true;
        }
        if (m.mode == Mode::Travel && m.target) {
            if (distance(a.position, position_of(*m.target)) <= params_.reach_distance) {
                explored_.insert(*m.target);
                m.mode = Mode::Excursion;
                m.goal = excursion_goal(*m.target, ctx);
                m.best_distance = std::numeric_limits<double>::infinity();
                m.stalled = 0;
            } else if (explored_.contains(*m.target)) {
                need_plan = true;
            }
        }
        if (m.mode == Mode::Excursion &&
            (distance(a.position, m.goal) <= params_.reach_distance ||
             !track_progress(m, distance(a.position, m.goal)))) {
            m.mode = Mode::Walk;
            m.target.reset();
            need_plan = true;
        }
    }
    if (need_plan) replan(ctx);

    const std::uint64_t next_step = ep.step_index() + 1;
    std::vector<Action> actions(n);
    for (std::size_t i = 0; i < n; ++i) {
        const AgentState& a = world.agents()[i];
        if (!a.alive) continue;
        AgentMemory& m = memory_[i];
        const auto& reading = ep.readings()[i];
        Action act;
        if (m.mode == Mode::Excursion || m.mode == Mode::Sweep) {
            act = steer(a.position, m.goal, reading, world.config(), params_);
        } else if (m.mode == Mode::Walk) {
            act = random_walk(i, ctx);
        } else {
            const auto& path = plan_.paths[i];
            while (m.waypoint + 1 < path.size() &&
                   distance(a.position, position_of(path[m.waypoint])) <= params_.reach_distance) {
                ++m.waypoint;
            }
            if (!track_progress(m, distance(a.position, position_of(path.back())))) {
                // abandon this target; the next plan skips it
                explored_.insert(path.back());
                m.stalled = 0;
            }
            act = steer(a.position, position_of(path[m.waypoint]), reading, world.config(), params_);
        }
        act.communicate = next_step % static_cast<std::uint64_t>(params_.sync_every) == 0 ||
                          ep.clients()[i].pending_count() >= params_.sync_batch;
        actions[i] = act;
    }
    return actions;
}

Action random_action(Rng& rng, const WorldConfig& config, double comm_probability) {
    Action a;
    a.vx = rng.uniform(-config.v_max, config.v_max);
    a.vy = rng.uniform(-config.v_max, config.v_max);
    a.wz = rng.uniform(-config.w_max, config.w_max);
    a.communicate = rng.bernoulli(comm_probability);
    return a;
}

std::vector<Action> RandomPolicy::act(const PolicyContext& ctx) {
    std::vector<Action> out;
    for (std::size_t i = 0; i < ctx.episode.params().n_agents; ++i) {
        out.push_back(random_action(rng_, ctx.episode.world().config()));
    }
    return out;
}

}  // namespace lcx
