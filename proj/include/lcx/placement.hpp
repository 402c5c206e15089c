#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lcx/rng.hpp"
#include "lcx/world.hpp"

namespace lcx {

struct PlacementConfig {
    std::vector<double> radii{50.0, 23.0, 15.0};  // filtration, strictly decreasing
    double sample_resolution = 1.0;
    bool occlusion = true;
    std::uint64_t rng_seed = 0;

    void validate(const WorldConfig& world) const;
};

/// Greedy filtration placement: for each radius in turn, keep adding a landmark
/// at the uncovered free sample that sees the most uncovered samples (ties go
/// to the lowest (y, x)) until every free sample sees a landmark within that
/// radius. Ids are assigned in placement order from 0.
std::vector<LandmarkInstance> place_landmarks_lpa(const World& world, const PlacementConfig& cfg);

/// Free samples that see no intact landmark within `radius`.
std::vector<Vec2> coverage_check(const World& world, const std::vector<LandmarkInstance>& landmarks,
                                 double radius, double sample_resolution = 1.0,
                                 bool occlusion = true);

struct DestructionResult {
    std::vector<LandmarkId> remaining;  // L_R
    std::vector<LandmarkId> destroyed;  // L_D
};

/// Independently marks each landmark destroyed with probability p_l, in order.
DestructionResult destroy_landmarks(std::vector<LandmarkInstance>& landmarks, double p_l, Rng& rng);

}  // namespace lcx
