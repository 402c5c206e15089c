#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lcx/geometry.hpp"
#include "lcx/types.hpp"

namespace lcx {

class World;

/// Regular grid of sample points at cell centres, ((i + 0.5) * res, (j + 0.5) * res).
struct SampleGrid {
    double resolution = 1.0;
    int nx = 0;
    int ny = 0;
    std::vector<std::uint8_t> free;  // 1 iff the point lies in no (closed) obstacle

    static SampleGrid make(double width, double height, std::span<const Obstacle> obstacles,
                           double resolution);
    static SampleGrid make(const World& world, double resolution);

    std::size_t size() const { return free.size(); }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    Vec2 point(int i, int j) const { return {(i + 0.5) * resolution, (j + 0.5) * resolution}; }
    Vec2 point(std::size_t idx) const {
        return point(static_cast<int>(idx % nx), static_cast<int>(idx / nx));
    }
};

/// Inclusive run of sample indices [first, last] on one grid row.
struct Run {
    int first;
    int last;
};

/// Exact "within radius and in line of sight" queries against a sample grid.
///
/// A target t is visible from p iff |t - p|^2 <= radius^2 and (when occlusion
/// is on) no obstacle interior meets segment p->t. Rows are resolved as index
/// runs using obstacle shadows; samples within a small band of a shadow edge
/// fall back to the pointwise test so the runs match `visible()` exactly.
class VisibilityScanner {
public:
    VisibilityScanner(const SampleGrid& grid, std::span<const Obstacle> obstacles, double radius,
                      bool occlusion);

    struct Source {
        Vec2 p;
        std::vector<std::uint32_t> relevant;  // obstacles that can shadow anything within radius
        bool inside_obstacle = false;
        int row_lo = 0;
        int row_hi = -1;
    };

    struct Scratch {
        std::vector<Run> blocked;
        std::vector<int> uncertain;
        std::vector<Run> runs;
    };

    Source prepare(Vec2 p) const;

    /// Visible sample runs of `src` on `row`, ascending and disjoint.
    void row_runs(const Source& src, int row, Scratch& scratch, std::vector<Run>& out) const;

    /// Number of visible samples t with weight[t] != 0, using per-row prefix
    /// sums of the weight (see `row_prefix`).
    std::uint64_t count_visible(const Source& src, std::span<const std::uint32_t> prefix,
                                Scratch& scratch) const;

    bool visible(Vec2 p, Vec2 t) const;

    const SampleGrid& grid() const { return grid_; }
    double radius() const { return radius_; }

private:
    const SampleGrid& grid_;
    std::span<const Obstacle> obstacles_;
    double radius_;
    double radius2_;
    bool occlusion_;
};

/// ny rows of (nx + 1) running sums of weight != 0.
std::vector<std::uint32_t> row_prefix(const SampleGrid& grid, std::span<const std::uint8_t> weight);
void update_row_prefix(const SampleGrid& grid, std::span<const std::uint8_t> weight, int row,
                       std::vector<std::uint32_t>& prefix);

namespace kernels {

/// For each candidate sample, how many samples with weight != 0 it sees.
/// Brute-force serial version: every (candidate, target) pair is tested.
std::vector<std::uint32_t> visible_counts_reference(const SampleGrid& grid,
                                                    std::span<const Obstacle> obstacles,
                                                    std::span<const std::uint8_t> weight,
                                                    std::span<const std::uint32_t> candidates,
                                                    double radius, bool occlusion);

/// Same result as the reference; row-run counting, parallel over candidates.
std::vector<std::uint32_t> visible_counts(const SampleGrid& grid,
                                          std::span<const Obstacle> obstacles,
                                          std::span<const std::uint8_t> weight,
                                          std::span<const std::uint32_t> candidates,
                                          double radius, bool occlusion);

/// 1 for every sample seen by at least one source. Brute-force serial version.
std::vector<std::uint8_t> coverage_mask_reference(const SampleGrid& grid,
                                                  std::span<const Obstacle> obstacles,
                                                  std::span<const Vec2> sources, double radius,
                                                  bool occlusion);

/// Same result as the reference; row-run marking, parallel over grid rows.
std::vector<std::uint8_t> coverage_mask(const SampleGrid& grid, std::span<const Obstacle> obstacles,
                                        std::span<const Vec2> sources, double radius,
                                        bool occlusion);

}  // namespace kernels
}  // namespace lcx
