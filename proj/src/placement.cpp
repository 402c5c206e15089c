#include "lcx/placement.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include "lcx/kernels.hpp"

namespace lcx {

void PlacementConfig::validate(const WorldConfig& world) const {
    if (radii.empty()) throw Error(Errc::InvalidConfig, "placement needs at least one radius");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw Error(Errc::InvalidConfig, "placement radii must be > 0");
        if (i > 0 && !(radii[i] < radii[i - 1])) {
            throw Error(Errc::InvalidConfig, "placement radii must be strictly decreasing");
        }
    }
    if (radii.back() < world.sensor_radius) {
        throw Error(Errc::InvalidConfig, "last placement radius is below the sensor radius");
    }
    if (!(sample_resolution > 0.0)) {
        throw Error(Errc::InvalidConfig, "sample resolution must be > 0");
    }
}

namespace {

struct Candidate {
    std::uint64_t gain;
    std::uint32_t index;
    std::uint32_t epoch;
};

// Max-heap on gain, then lowest sample index (row-major, so lowest (y, x)).
struct LowerPriority {
    bool operator()(const Candidate& a, const Candidate& b) const {
        if (a.gain != b.gain) return a.gain < b.gain;
        return a.index > b.index;
    }
};

}  // namespace

std::vector<LandmarkInstance> place_landmarks_lpa(const World& world, const PlacementConfig& cfg) {
    cfg.validate(world.config());
    const SampleGrid grid = SampleGrid::make(world, cfg.sample_resolution);
    if (std::none_of(grid.free.begin(), grid.free.end(), [](std::uint8_t f) { return f != 0; })) {
        throw Error(Errc::NoFreeSpace, "no free sample to place landmarks on");
    }
    const std::span<const Obstacle> obstacles = world.obstacles();

    std::vector<LandmarkInstance> placed;
    std::vector<Vec2> positions;
    std::vector<std::uint8_t> uncovered(grid.size());

    for (double r : cfg.radii) {
        const auto covered = kernels::coverage_mask(grid, obstacles, positions, r, cfg.occlusion);
        std::vector<std::uint32_t> candidates;
        for (std::size_t t = 0; t < grid.size(); ++t) {
            uncovered[t] = grid.free[t] && !covered[t];
            if (uncovered[t]) candidates.push_back(static_cast<std::uint32_t>(t));
        }
        if (candidates.empty()) continue;

        const auto gains =
            kernels::visible_counts(grid, obstacles, uncovered, candidates, r, cfg.occlusion);
        std::priority_queue<Candidate, std::vector<Candidate>, LowerPriority> heap;
        for (std::size_t c = 0; c < candidates.size(); ++c) heap.push({gains[c], candidates[c], 0});

        const VisibilityScanner scanner(grid, obstacles, r, cfg.occlusion);
        VisibilityScanner::Scratch scratch;
        std::vector<Run> runs;
        std::vector<std::uint32_t> prefix = row_prefix(grid, uncovered);
        std::size_t remaining = candidates.size();
        std::uint32_t epoch = 0;

        // Lazy greedy: coverage gains only shrink as landmarks are added, so a
        // stale gain is an upper bound and a freshly evaluated top is the argmax.
        while (remaining > 0 && !heap.empty()) {
            const Candidate top = heap.top();
            heap.pop();
            if (!uncovered[top.index]) continue;
            if (top.epoch != epoch) {
                const auto src = scanner.prepare(grid.point(top.index));
                heap.push({scanner.count_visible(src, prefix, scratch), top.index, epoch});
                continue;
            }
            const Vec2 p = grid.point(top.index);
            placed.push_back({static_cast<LandmarkId>(placed.size()), p, false});
            positions.push_back(p);
            const auto src = scanner.prepare(p);
            for (int row = src.row_lo; row <= src.row_hi; ++row) {
                scanner.row_runs(src, row, scratch, runs);
                bool changed = false;
                for (Run run : runs) {
                    for (int i = run.first; i <= run.last; ++i) {
                        const std::size_t t = grid.index(i, row);
                        if (uncovered[t]) {
                            uncovered[t] = 0;
                            --remaining;
                            changed = true;
                        }
                    }
                }
                if (changed) update_row_prefix(grid, uncovered, row, prefix);
            }
            ++epoch;
        }
    }
    return placed;
}

std::vector<Vec2> coverage_check(const World& world, const std::vector<LandmarkInstance>& landmarks,
                                 double radius, double sample_resolution, bool occlusion) {
    const SampleGrid grid = SampleGrid::make(world, sample_resolution);
    std::vector<Vec2> sources;
    for (const auto& l : landmarks) {
        if (!l.destroyed) sources.push_back(l.position);
    }
    const auto covered = kernels::coverage_mask(grid, world.obstacles(), sources, radius, occlusion);
    std::vector<Vec2> out;
    for (std::size_t t = 0; t < grid.size(); ++t) {
        if (grid.free[t] && !covered[t]) out.push_back(grid.point(t));
    }
    return out;
}

DestructionResult destroy_landmarks(std::vector<LandmarkInstance>& landmarks, double p_l, Rng& rng) {
    if (!(p_l >= 0.0 && p_l <= 1.0)) {
        throw Error(Errc::InvalidConfig, "destruction probability must be in [0, 1]");
    }
    DestructionResult result;
    for (auto& l : landmarks) {
        l.destroyed = rng.bernoulli(p_l);
        (l.destroyed ? result.destroyed : result.remaining).push_back(l.id);
    }
    return result;
}

}  // namespace lcx
