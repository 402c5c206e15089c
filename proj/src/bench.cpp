#include "lcx/bench.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <ostream>

#include "lcx/frontier.hpp"

namespace lcx {

namespace {

std::string num(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fixed(double v, int digits = 2) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

constexpr const char* kMetrics[3] = {"c0", "c1", "c2"};

World assemble(const WorldConfig& wc, std::vector<Obstacle> obstacles, double p_l, std::uint64_t seed,
               const PlacementConfig& placement) {
    EpisodeConfig ec;
    ec.obstacles = std::move(obstacles);
    ec.n_obstacles = static_cast<int>(ec.obstacles.size());
    ec.p_l = p_l;
    ec.world_seed = derive_seed(seed, 1);
    ec.landmark_seed = derive_seed(seed, 2);
    return build_episode_world(ec, wc, placement);
}

}  // namespace

std::vector<Condition> conditions_from_json(const nlohmann::json& j) {
    try {
        std::vector<Condition> out;
        for (const auto& item : j) {
            Condition c;
            if (item.contains("name")) c.name = item.at("name").get<std::string>();
            if (item.contains("n_obstacles")) c.n_obstacles = item.at("n_obstacles").get<int>();
            if (item.contains("occupancy")) c.occupancy = item.at("occupancy").get<double>();
            if (item.contains("p_l")) c.p_l = item.at("p_l").get<double>();
            if (c.n_obstacles.has_value() == c.occupancy.has_value()) {
                throw Error(Errc::InvalidConfig, "a condition needs exactly one of n_obstacles, occupancy");
            }
            out.push_back(std::move(c));
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::InvalidConfig, std::string("bad conditions: ") + e.what());
    }
}

void BenchSpec::validate() const {
    if (policy != "frontier" && policy != "random") throw Error(Errc::InvalidConfig, "unknown policy " + policy);
    if (trials < 2) throw Error(Errc::InvalidConfig, "trials must be >= 2");
    if (!seeds.empty() && seeds.size() != static_cast<std::size_t>(trials)) {
        throw Error(Errc::InvalidConfig, "need one seed per trial");
    }
    if (conditions.empty()) throw Error(Errc::InvalidConfig, "no conditions");
    if (checkpoints.empty() || !std::is_sorted(checkpoints.begin(), checkpoints.end())) {
        throw Error(Errc::InvalidConfig, "checkpoints must be non-empty and ascending");
    }
    for (const auto& c : conditions) {
        if (!(c.p_l >= 0.0 && c.p_l <= 1.0)) throw Error(Errc::InvalidConfig, "p_l must be in [0, 1]");
        if (c.n_obstacles && *c.n_obstacles < 0) throw Error(Errc::InvalidConfig, "n_obstacles must be >= 0");
        if (c.occupancy && !(*c.occupancy >= 0.0 && *c.occupancy < 0.9)) {
            throw Error(Errc::InvalidConfig, "occupancy must be in [0, 0.9)");
        }
    }
}

std::vector<std::uint64_t> checkpoint_range(std::uint64_t step, std::uint64_t last) {
    if (step == 0) throw Error(Errc::InvalidConfig, "checkpoint step must be > 0");
    std::vector<std::uint64_t> out;
    for (std::uint64_t c = step; c <= last; c += step) out.push_back(c);
    return out;
}

GeneratedMap generate_map(const WorldConfig& base, int n_obstacles, double p_l, std::uint64_t seed,
                          const CurriculumParams& sampler, const PlacementConfig& placement) {
    Rng rng(derive_seed(seed, 1));
    auto layout = sample_obstacles(n_obstacles, sampler, base, rng);
    GeneratedMap map{assemble(base, std::move(layout.obstacles), p_l, seed, placement), 0.0,
                     layout.connectivity_relaxed};
    map.occupancy = map.world.occupancy_percentage();
    return map;
}

GeneratedMap generate_map_occupancy(const WorldConfig& base, double target, double p_l, std::uint64_t seed,
                                    const CurriculumParams& sampler, const PlacementConfig& placement) {
    constexpr double kTolerance = 0.01;
    sampler.validate(base);
    Rng rng(derive_seed(seed, 1));
    for (int restart = 0; restart < sampler.max_layout_attempts; ++restart) {
        std::vector<Obstacle> obstacles;
        double occ = 0.0;
        for (int tries = 0; occ < target - kTolerance && tries < sampler.max_obstacle_tries; ++tries) {
            Obstacle o;
            o.w = rng.uniform(sampler.w_min, sampler.w_max);
            o.h = rng.uniform(sampler.h_min, sampler.h_max);
            o.x = rng.uniform(0.0, base.width - o.w);
            o.y = rng.uniform(0.0, base.height - o.h);
            if (std::any_of(obstacles.begin(), obstacles.end(), [&](const Obstacle& b) { return o.overlaps(b); })) {
                continue;
            }
            obstacles.push_back(o);
            const double next = World(base, obstacles).occupancy_percentage();
            if (next > target + kTolerance) {
                obstacles.pop_back();
                continue;
            }
            occ = next;
        }
        if (std::abs(occ - target) > kTolerance || !free_space_connected(base, obstacles)) continue;
        return {assemble(base, std::move(obstacles), p_l, seed, placement), occ, false};
    }
    throw Error(Errc::SamplingFailure, "no connected layout near occupancy " + num(target));
}

std::vector<std::array<double, 3>> sample_checkpoints(const EpisodeLog& log,
                                                      std::span<const std::uint64_t> checkpoints) {
    std::vector<std::array<double, 3>> out;
    for (std::uint64_t cp : checkpoints) {
        // obs_count is non-decreasing, so the last qualifying row is found by bisection
        const auto it = std::upper_bound(log.rows.begin(), log.rows.end(), cp,
                                         [](std::uint64_t v, const LogRow& r) { return v < r.obs_count; });
        if (it == log.rows.begin()) {
            out.push_back({0.0, 0.0, 0.0});
        } else {
            const LogRow& r = *std::prev(it);
            out.push_back({static_cast<double>(r.c0), static_cast<double>(r.c1), static_cast<double>(r.c2)});
        }
    }
    return out;
}

CiStat mean_ci(std::span<const double> xs, double level) {
    CiStat s;
    s.n = xs.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (xs.empty()) {
        s.mean = s.lo = s.hi = nan;
        s.degenerate = true;
        return s;
    }
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n < 2) {
        s.lo = s.hi = nan;
        s.degenerate = true;
        return s;
    }
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    const double sd = std::sqrt(ss / static_cast<double>(s.n - 1));
    const boost::math::students_t dist(static_cast<double>(s.n - 1));
    const double t = boost::math::quantile(dist, 1.0 - (1.0 - level) / 2.0);
    const double half = t * sd / std::sqrt(static_cast<double>(s.n));
    s.lo = s.mean - half;
    s.hi = s.mean + half;
    return s;
}

std::string condition_label(const Condition& c) {
    if (!c.name.empty()) return c.name;
    std::string s = c.occupancy ? "occ" + num(*c.occupancy) : "obs" + std::to_string(c.n_obstacles.value_or(0));
    return s + "_pl" + num(c.p_l);
}

BenchResult run_bench(const BenchSpec& spec) {
    spec.validate();
    const std::size_t n_cond = spec.conditions.size();
    const auto trials = static_cast<std::size_t>(spec.trials);
    std::vector<TrialRecord> records(n_cond * trials);
    WorldConfig base;
    base.width = spec.width;
    base.height = spec.height;

#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < static_cast<long>(records.size()); ++k) {
        TrialRecord& rec = records[static_cast<std::size_t>(k)];
        rec.condition = static_cast<std::size_t>(k) / trials;
        rec.trial = static_cast<int>(static_cast<std::size_t>(k) % trials);
        rec.seed = spec.seeds.empty() ? derive_seed(spec.seed, rec.condition, static_cast<std::uint64_t>(rec.trial))
                                      : spec.seeds[static_cast<std::size_t>(rec.trial)];
        const Condition& c = spec.conditions[rec.condition];
        try {
            const GeneratedMap map = c.occupancy ? generate_map_occupancy(base, *c.occupancy, c.p_l, rec.seed)
                                                 : generate_map(base, *c.n_obstacles, c.p_l, rec.seed);
            rec.occupancy = map.occupancy;
            rec.remaining = remaining_ids(map.world).size();
            Episode ep(map.world, spec.episode, rec.seed, static_cast<std::uint64_t>(rec.trial));
            std::unique_ptr<Policy> policy;
            if (spec.policy == "frontier") {
                policy = std::make_unique<FrontierPolicy>(derive_seed(rec.seed, 3));
            } else {
                policy = std::make_unique<RandomPolicy>(derive_seed(rec.seed, 3));
            }
            const EpisodeLog log = run_episode(ep, *policy);
            rec.samples = sample_checkpoints(log, spec.checkpoints);
            rec.done = log.done;
            rec.steps = ep.step_index();
            rec.completed = true;
        } catch (const std::exception& e) {
            rec.error = e.what();
        }
    }
    BenchResult result;
    result.aggregate = aggregate(spec, records);
    result.trials = std::move(records);
    return result;
}

std::vector<AggregateRow> aggregate(const BenchSpec& spec, const std::vector<TrialRecord>& trials) {
    std::vector<AggregateRow> rows;
    for (std::size_t c = 0; c < spec.conditions.size(); ++c) {
        const std::string label = condition_label(spec.conditions[c]);
        for (std::size_t k = 0; k < spec.checkpoints.size(); ++k) {
            for (int m = 0; m < 3; ++m) {
                std::vector<double> xs;
                for (const auto& t : trials) {
                    if (t.condition == c && t.completed) xs.push_back(t.samples.at(k)[m]);
                }
                rows.push_back({label, spec.checkpoints[k], kMetrics[m], mean_ci(xs)});
            }
        }
    }
    return rows;
}

void write_raw_csv(std::ostream& out, const BenchSpec& spec, const std::vector<TrialRecord>& trials) {
    out << "condition,trial,seed,completed,done,steps,remaining,occupancy,checkpoint,c0,c1,c2\n";
    for (const auto& t : trials) {
        const std::string head = condition_label(spec.conditions.at(t.condition)) + ',' + std::to_string(t.trial) +
                                 ',' + std::to_string(t.seed) + ',' + (t.completed ? "1" : "0") + ',' +
                                 (t.done ? "1" : "0") + ',' + std::to_string(t.steps) + ',' +
                                 std::to_string(t.remaining) + ',' + num(t.occupancy);
        for (std::size_t k = 0; k < t.samples.size(); ++k) {
            out << head << ',' << spec.checkpoints[k] << ',' << num(t.samples[k][0]) << ',' << num(t.samples[k][1])
                << ',' << num(t.samples[k][2]) << '\n';
        }
    }
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
    out << "condition,checkpoint,metric,mean,ci_lo,ci_hi\n";
    for (const auto& r : rows) {
        out << r.condition << ',' << r.checkpoint << ',' << r.metric << ',' << num(r.stat.mean) << ','
            << num(r.stat.lo) << ',' << num(r.stat.hi) << '\n';
    }
}

std::string render_svg(const std::vector<AggregateRow>& rows, const std::string& metric) {
    constexpr double W = 640, H = 400, L = 60, R = 160, T = 20, B = 40;
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

    std::vector<std::string> labels;
    double xmax = 1.0, ymax = 1.0;
    for (const auto& r : rows) {
        if (r.metric != metric) continue;
        if (std::find(labels.begin(), labels.end(), r.condition) == labels.end()) labels.push_back(r.condition);
        xmax = std::max(xmax, static_cast<double>(r.checkpoint));
        for (double v : {r.stat.mean, r.stat.hi}) {
            if (std::isfinite(v)) ymax = std::max(ymax, v);
        }
    }
    ymax *= 1.05;
    auto px = [&](double x) { return L + (W - L - R) * x / xmax; };
    auto py = [&](double y) { return H - B - (H - T - B) * y / ymax; };

    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
    s += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    s += "<line x1=\"" + fixed(L) + "\" y1=\"" + fixed(H - B) + "\" x2=\"" + fixed(W - R) + "\" y2=\"" + fixed(H - B) +
         "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + fixed(L) + "\" y1=\"" + fixed(T) + "\" x2=\"" + fixed(L) + "\" y2=\"" + fixed(H - B) +
         "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = xmax * k / 4.0;
        const double yv = ymax * k / 4.0;
        s += "<text x=\"" + fixed(px(xv)) + "\" y=\"" + fixed(H - B + 16) +
             "\" font-size=\"11\" text-anchor=\"middle\">" + fixed(xv, 0) + "</text>\n";
        s += "<text x=\"" + fixed(L - 6) + "\" y=\"" + fixed(py(yv) + 4) +
             "\" font-size=\"11\" text-anchor=\"end\">" + fixed(yv, 0) + "</text>\n";
    }
    s += "<text x=\"" + fixed((L + W - R) / 2) + "\" y=\"" + fixed(H - 6) +
         "\" font-size=\"12\" text-anchor=\"middle\">observations</text>\n";
    s += "<text x=\"14\" y=\"" + fixed((T + H - B) / 2) + "\" font-size=\"12\" transform=\"rotate(-90 14 " +
         fixed((T + H - B) / 2) + ")\" text-anchor=\"middle\">" + metric + "</text>\n";

    for (std::size_t c = 0; c < labels.size(); ++c) {
        const char* color = palette[c % std::size(palette)];
        std::vector<const AggregateRow*> series;
        for (const auto& r : rows) {
            if (r.metric == metric && r.condition == labels[c]) series.push_back(&r);
        }
        std::string band, line;
        for (const auto* r : series) {
            const double lo = r->stat.degenerate ? r->stat.mean : r->stat.lo;
            band += fixed(px(static_cast<double>(r->checkpoint))) + "," + fixed(py(std::isfinite(lo) ? lo : 0)) + " ";
        }
        for (auto it = series.rbegin(); it != series.rend(); ++it) {
            const double hi = (*it)->stat.degenerate ? (*it)->stat.mean : (*it)->stat.hi;
            band += fixed(px(static_cast<double>((*it)->checkpoint))) + "," + fixed(py(std::isfinite(hi) ? hi : 0)) + " ";
        }
        for (const auto* r : series) {
            const double m = std::isfinite(r->stat.mean) ? r->stat.mean : 0.0;
            line += fixed(px(static_cast<double>(r->checkpoint))) + "," + fixed(py(m)) + " ";
        }
        s += "<polygon points=\"" + band + "\" fill=\"" + color + "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
        s += "<polyline points=\"" + line + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
        const double ly = T + 16.0 * static_cast<double>(c + 1);
        s += "<rect x=\"" + fixed(W - R + 12) + "\" y=\"" + fixed(ly - 9) + "\" width=\"10\" height=\"10\" fill=\"" +
             color + "\"/>\n";
        s += "<text x=\"" + fixed(W - R + 28) + "\" y=\"" + fixed(ly) + "\" font-size=\"11\">" + labels[c] + "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

}  // namespace lcx
