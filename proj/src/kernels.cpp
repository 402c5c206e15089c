#include "lcx/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "lcx/world.hpp"

namespace lcx {

namespace {

// Samples closer than this (in metres, along the row) to a shadow edge are
// settled by the pointwise test.
constexpr double kEdgeBand = 1e-6;

long clamp_index(double v, long lo, long hi) {
    if (!(v > static_cast<double>(lo))) return lo;  // also catches NaN and -inf
    if (!(v < static_cast<double>(hi))) return hi;
    return static_cast<long>(v);
}

}  // namespace

SampleGrid SampleGrid::make(double width, double height, std::span<const Obstacle> obstacles,
                            double resolution) {
    if (!(resolution > 0.0)) throw Error(Errc::InvalidConfig, "sample resolution must be > 0");
    SampleGrid g;
    g.resolution = resolution;
    g.nx = static_cast<int>(std::floor(width / resolution + 1e-9));
    g.ny = static_cast<int>(std::floor(height / resolution + 1e-9));
    g.free.assign(static_cast<std::size_t>(g.nx) * g.ny, 1);
    for (const Obstacle& o : obstacles) {
        const int i0 = std::max(0, static_cast<int>(std::floor(o.x / resolution - 0.5)));
        const int i1 = std::min(g.nx - 1, static_cast<int>(std::ceil(o.x1() / resolution - 0.5)));
        const int j0 = std::max(0, static_cast<int>(std::floor(o.y / resolution - 0.5)));
        const int j1 = std::min(g.ny - 1, static_cast<int>(std::ceil(o.y1() / resolution - 0.5)));
        for (int j = j0; j <= j1; ++j) {
            for (int i = i0; i <= i1; ++i) {
                if (o.contains(g.point(i, j))) g.free[g.index(i, j)] = 0;
            }
        }
    }
    return g;
}

SampleGrid SampleGrid::make(const World& world, double resolution) {
    return make(world.config().width, world.config().height, world.obstacles(), resolution);
}

VisibilityScanner::VisibilityScanner(const SampleGrid& grid, std::span<const Obstacle> obstacles,
                                     double radius, bool occlusion)
    : grid_(grid),
      obstacles_(obstacles),
      radius_(radius),
      radius2_(radius * radius),
      occlusion_(occlusion) {
    if (!(radius > 0.0)) throw Error(Errc::InvalidConfig, "coverage radius must be > 0");
}

bool VisibilityScanner::visible(Vec2 p, Vec2 t) const {
    const double dx = t.x - p.x;
    const double dy = t.y - p.y;
    if (dx * dx + dy * dy > radius2_) return false;
    if (!occlusion_) return true;
    return std::none_of(obstacles_.begin(), obstacles_.end(),
                        [&](const Obstacle& o) { return segment_hits_interior(p, t, o); });
}

VisibilityScanner::Source VisibilityScanner::prepare(Vec2 p) const {
    Source s;
    s.p = p;
    if (occlusion_) {
        for (std::uint32_t k = 0; k < obstacles_.size(); ++k) {
            const Obstacle& o = obstacles_[k];
            if (o.distance_to(p) <= radius_ + 1e-6) s.relevant.push_back(k);
            if (o.contains_interior(p)) s.inside_obstacle = true;
        }
    }
    const double res = grid_.resolution;
    s.row_lo = static_cast<int>(clamp_index(std::ceil((p.y - radius_) / res - 0.5) - 1, 0, grid_.ny));
    s.row_hi = static_cast<int>(clamp_index(std::floor((p.y + radius_) / res - 0.5) + 1, -1, grid_.ny - 1));
    return s;
}

void VisibilityScanner::row_runs(const Source& src, int row, Scratch& scratch,
                                 std::vector<Run>& out) const {
    out.clear();
    const double res = grid_.resolution;
    const Vec2 p = src.p;
    const double y = (row + 0.5) * res;
    const double dy = y - p.y;
    const double dy2 = dy * dy;
    if (dy2 > radius2_) return;

    auto in_radius = [&](int i) {
        const double dx = (i + 0.5) * res - p.x;
        return dx * dx + dy2 <= radius2_;
    };
    const double half = std::sqrt(radius2_ - dy2);
    long ia = clamp_index(std::ceil((p.x - half) / res - 0.5) - 1, 0, grid_.nx - 1);
    long ib = clamp_index(std::floor((p.x + half) / res - 0.5) + 1, 0, grid_.nx - 1);
    while (ia <= ib && !in_radius(static_cast<int>(ia))) ++ia;
    while (ib >= ia && !in_radius(static_cast<int>(ib))) --ib;
    if (ia > ib) return;

    if (!occlusion_ || src.relevant.empty()) {
        out.push_back({static_cast<int>(ia), static_cast<int>(ib)});
        return;
    }

    auto& blocked = scratch.blocked;
    auto& uncertain = scratch.uncertain;
    blocked.clear();
    uncertain.clear();
    const double origin = 0.5 * res;
    auto edge_band = [&](double edge) {
        if (!std::isfinite(edge)) return;
        const long lo = std::max(ia, clamp_index(std::ceil((edge - kEdgeBand - origin) / res), ia - 1, ib + 1));
        const long hi = std::min(ib, clamp_index(std::floor((edge + kEdgeBand - origin) / res), ia - 1, ib + 1));
        for (long i = lo; i <= hi; ++i) uncertain.push_back(static_cast<int>(i));
    };

    if (src.inside_obstacle) {
        for (long i = ia; i <= ib; ++i) uncertain.push_back(static_cast<int>(i));
    } else {
        for (std::uint32_t k : src.relevant) {
            const auto shadow = row_shadow(p, y, obstacles_[k]);
            if (!shadow) continue;
            const long lo = clamp_index(std::floor((shadow->lo + kEdgeBand - origin) / res) + 1, ia - 1, ib + 1);
            const long hi = clamp_index(std::ceil((shadow->hi - kEdgeBand - origin) / res) - 1, ia - 1, ib + 1);
            const long first = std::max(lo, ia);
            const long last = std::min(hi, ib);
            if (first <= last) blocked.push_back({static_cast<int>(first), static_cast<int>(last)});
            edge_band(shadow->lo);
            edge_band(shadow->hi);
        }
    }

    std::sort(blocked.begin(), blocked.end(), [](Run a, Run b) { return a.first < b.first; });
    auto& runs = scratch.runs;
    runs.clear();
    long cursor = ia;
    for (const Run& b : blocked) {
        if (b.first > cursor) runs.push_back({static_cast<int>(cursor), b.first - 1});
        cursor = std::max<long>(cursor, static_cast<long>(b.last) + 1);
    }
    if (cursor <= ib) runs.push_back({static_cast<int>(cursor), static_cast<int>(ib)});

    std::sort(uncertain.begin(), uncertain.end());
    uncertain.erase(std::unique(uncertain.begin(), uncertain.end()), uncertain.end());
    std::size_t u = 0;
    for (Run r : runs) {
        int start = r.first;
        while (u < uncertain.size() && uncertain[u] < r.first) ++u;
        while (u < uncertain.size() && uncertain[u] <= r.last) {
            const int i = uncertain[u++];
            if (!visible(p, grid_.point(i, row))) {
                if (i > start) out.push_back({start, i - 1});
                start = i + 1;
            }
        }
        if (start <= r.last) out.push_back({start, r.last});
    }
}

std::uint64_t VisibilityScanner::count_visible(const Source& src,
                                               std::span<const std::uint32_t> prefix,
                                               Scratch& scratch) const {
    std::uint64_t total = 0;
    std::vector<Run> runs;
    const std::size_t stride = static_cast<std::size_t>(grid_.nx) + 1;
    for (int row = src.row_lo; row <= src.row_hi; ++row) {
        row_runs(src, row, scratch, runs);
        const std::uint32_t* pre = prefix.data() + static_cast<std::size_t>(row) * stride;
        for (Run r : runs) total += pre[r.last + 1] - pre[r.first];
    }
    return total;
}

std::vector<std::uint32_t> row_prefix(const SampleGrid& grid, std::span<const std::uint8_t> weight) {
    std::vector<std::uint32_t> prefix(static_cast<std::size_t>(grid.ny) * (grid.nx + 1), 0);
    for (int row = 0; row < grid.ny; ++row) update_row_prefix(grid, weight, row, prefix);
    return prefix;
}

void update_row_prefix(const SampleGrid& grid, std::span<const std::uint8_t> weight, int row,
                       std::vector<std::uint32_t>& prefix) {
    const std::size_t stride = static_cast<std::size_t>(grid.nx) + 1;
    std::uint32_t* pre = prefix.data() + static_cast<std::size_t>(row) * stride;
    const std::uint8_t* w = weight.data() + grid.index(0, row);
    pre[0] = 0;
    for (int i = 0; i < grid.nx; ++i) pre[i + 1] = pre[i] + (w[i] != 0 ? 1u : 0u);
}

namespace kernels {

std::vector<std::uint32_t> visible_counts_reference(const SampleGrid& grid,
                                                    std::span<const Obstacle> obstacles,
                                                    std::span<const std::uint8_t> weight,
                                                    std::span<const std::uint32_t> candidates,
                                                    double radius, bool occlusion) {
    const VisibilityScanner scanner(grid, obstacles, radius, occlusion);
    std::vector<std::uint32_t> counts(candidates.size(), 0);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const Vec2 p = grid.point(candidates[c]);
        std::uint32_t n = 0;
        for (std::size_t t = 0; t < grid.size(); ++t) {
            if (weight[t] != 0 && scanner.visible(p, grid.point(t))) ++n;
        }
        counts[c] = n;
    }
    return counts;
}

std::vector<std::uint32_t> visible_counts(const SampleGrid& grid,
                                          std::span<const Obstacle> obstacles,
                                          std::span<const std::uint8_t> weight,
                                          std::span<const std::uint32_t> candidates,
                                          double radius, bool occlusion) {
    const VisibilityScanner scanner(grid, obstacles, radius, occlusion);
    const std::vector<std::uint32_t> prefix = row_prefix(grid, weight);
    std::vector<std::uint32_t> counts(candidates.size(), 0);
    const long n = static_cast<long>(candidates.size());
#pragma omp parallel
    {
        VisibilityScanner::Scratch scratch;
#pragma omp for schedule(dynamic, 64)
        for (long c = 0; c < n; ++c) {
            const auto src = scanner.prepare(grid.point(candidates[c]));
            counts[c] = static_cast<std::uint32_t>(scanner.count_visible(src, prefix, scratch));
        }
    }
    return counts;
}

std::vector<std::uint8_t> coverage_mask_reference(const SampleGrid& grid,
                                                  std::span<const Obstacle> obstacles,
                                                  std::span<const Vec2> sources, double radius,
                                                  bool occlusion) {
    const VisibilityScanner scanner(grid, obstacles, radius, occlusion);
    std::vector<std::uint8_t> mask(grid.size(), 0);
    for (std::size_t t = 0; t < grid.size(); ++t) {
        const Vec2 target = grid.point(t);
        for (const Vec2& s : sources) {
            if (scanner.visible(s, target)) {
                mask[t] = 1;
                break;
            }
        }
    }
    return mask;
}

std::vector<std::uint8_t> coverage_mask(const SampleGrid& grid, std::span<const Obstacle> obstacles,
                                        std::span<const Vec2> sources, double radius,
                                        bool occlusion) {
    const VisibilityScanner scanner(grid, obstacles, radius, occlusion);
    std::vector<VisibilityScanner::Source> prepared;
    prepared.reserve(sources.size());
    for (const Vec2& s : sources) prepared.push_back(scanner.prepare(s));

    std::vector<std::uint8_t> mask(grid.size(), 0);
#pragma omp parallel
    {
        VisibilityScanner::Scratch scratch;
        std::vector<Run> runs;
#pragma omp for schedule(dynamic, 4)
        for (int row = 0; row < grid.ny; ++row) {
            std::uint8_t* out = mask.data() + grid.index(0, row);
            for (const auto& src : prepared) {
                if (row < src.row_lo || row > src.row_hi) continue;
                scanner.row_runs(src, row, scratch, runs);
                for (Run r : runs) std::fill(out + r.first, out + r.last + 1, std::uint8_t{1});
            }
        }
    }
    return mask;
}

}  // namespace kernels
}  // namespace lcx
