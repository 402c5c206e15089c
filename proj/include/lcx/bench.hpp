#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcx/curriculum.hpp"
#include "lcx/episode.hpp"

namespace lcx {

struct Condition {
    std::string name;
    std::optional<int> n_obstacles;  // exactly one of these two
    std::optional<double> occupancy;  // target fraction of the arena, +-0.01
    double p_l = 0.0;
};

/// [{"name"?, "n_obstacles" | "occupancy", "p_l"}...]
std::vector<Condition> conditions_from_json(const nlohmann::json& j);

struct BenchSpec {
    std::string policy = "frontier";  // frontier | random
    int trials = 10;
    std::vector<Condition> conditions;
    std::vector<std::uint64_t> checkpoints;  // obs_count values, ascending
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> seeds;  // per-trial seeds; derived from `seed` when empty
    double width = 200.0;
    double height = 200.0;
    EpisodeParams episode;

    void validate() const;
};

/// 50, 100, ..., up to `last`.
std::vector<std::uint64_t> checkpoint_range(std::uint64_t step, std::uint64_t last);

struct GeneratedMap {
    World world;
    double occupancy = 0.0;
    bool connectivity_relaxed = false;
};

/// Obstacles from the curriculum sampler, LPA landmarks, then destruction.
GeneratedMap generate_map(const WorldConfig& base, int n_obstacles, double p_l, std::uint64_t seed,
                          const CurriculumParams& sampler = {}, const PlacementConfig& placement = {});

/// Adds obstacles one at a time until occupancy is within +-0.01 of `target`
/// with a connected free region, restarting on overshoot.
GeneratedMap generate_map_occupancy(const WorldConfig& base, double target, double p_l, std::uint64_t seed,
                                    const CurriculumParams& sampler = {},
                                    const PlacementConfig& placement = {});

/// c0, c1, c2 of the last row with obs_count <= checkpoint (zeros if none).
std::vector<std::array<double, 3>> sample_checkpoints(const EpisodeLog& log,
                                                      std::span<const std::uint64_t> checkpoints);

struct CiStat {
    double mean = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t n = 0;
    bool degenerate = false;  // fewer than 2 samples
};

/// Mean and two-sided Student-t interval with n-1 degrees of freedom.
CiStat mean_ci(std::span<const double> xs, double level = 0.95);

struct TrialRecord {
    std::size_t condition = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    bool completed = false;  // ran to done or truncation
    std::string error;
    bool done = false;
    std::uint64_t steps = 0;
    std::size_t remaining = 0;  // |L_R|
    double occupancy = 0.0;
    std::vector<std::array<double, 3>> samples;  // per checkpoint
};

struct AggregateRow {
    std::string condition;
    std::uint64_t checkpoint = 0;
    std::string metric;  // c0 | c1 | c2
    CiStat stat;
};

struct BenchResult {
    std::vector<TrialRecord> trials;
    std::vector<AggregateRow> aggregate;
};

std::string condition_label(const Condition& c);

/// Trials of a condition run in parallel; aggregation is sequential.
BenchResult run_bench(const BenchSpec& spec);
std::vector<AggregateRow> aggregate(const BenchSpec& spec, const std::vector<TrialRecord>& trials);

// condition,trial,seed,completed,done,steps,remaining,occupancy,checkpoint,c0,c1,c2
void write_raw_csv(std::ostream& out, const BenchSpec& spec, const std::vector<TrialRecord>& trials);
// condition,checkpoint,metric,mean,ci_lo,ci_hi ; degenerate intervals are written as nan
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);
/// Line chart of one metric: mean per condition with a shaded interval band.
std::string render_svg(const std::vector<AggregateRow>& rows, const std::string& metric);

}  // namespace lcx
