#include "lcx/gateway.hpp"

namespace lcx {

namespace {

template <typename T>
T field_or(const ojson& msg, const char* key, T fallback) {
    return msg.contains(key) ? msg.at(key).get<T>() : fallback;
}

}  // namespace

ojson encode_grid(const SensorReading& reading, const DiskMask& disk) {
    if (reading.side != disk.side) throw Error(Errc::Protocol, "grid size does not match the sensor disk");
    ojson channels = ojson::array();
    for (int ch = 0; ch < kSensorChannels; ++ch) {
        ojson runs = ojson::array();
        long start = -1;
        const long n = static_cast<long>(disk.cells.size());
        for (long k = 0; k <= n; ++k) {
            const bool on = k < n && reading.grid[static_cast<std::size_t>(disk.cells[k]) * kSensorChannels + ch];
            if (on && start < 0) start = k;
            if (!on && start >= 0) {
                runs.push_back(ojson::array({start, k - start}));
                start = -1;
            }
        }
        channels.push_back(std::move(runs));
    }
    return channels;
}

SensorReading decode_grid(const ojson& runs, const DiskMask& disk) {
    SensorReading r;
    r.side = disk.side;
    r.grid.assign(static_cast<std::size_t>(disk.side) * disk.side * kSensorChannels, 0);
    try {
        if (!runs.is_array() || runs.size() != kSensorChannels) throw Error(Errc::Protocol, "expected 4 channels");
        for (int ch = 0; ch < kSensorChannels; ++ch) {
            for (const auto& run : runs[ch]) {
                const auto start = run.at(0).get<std::size_t>();
                const auto len = run.at(1).get<std::size_t>();
                if (start + len > disk.cells.size()) throw Error(Errc::Protocol, "run past the disk");
                for (std::size_t k = start; k < start + len; ++k) {
                    r.grid[static_cast<std::size_t>(disk.cells[k]) * kSensorChannels + ch] = 1;
                }
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::Protocol, std::string("bad grid: ") + e.what());
    }
    return r;
}

ojson info_json(const StepInfo& info) {
    ojson j;
    j["step_index"] = info.step_index;
    j["obs_count"] = info.obs_count;
    j["c0"] = info.c0;
    j["c1"] = info.c1;
    j["c2"] = info.c2;
    j["comm_counts"] = info.comm_counts;
    j["collisions"] = info.collisions;
    return j;
}

EnvSession::EnvSession(GatewayOptions options) : options_(std::move(options)) {}

std::string EnvSession::handle_line(const std::string& line) {
    ojson msg;
    try {
        msg = ojson::parse(line);
    } catch (const nlohmann::json::parse_error&) {
        return error_json(to_string(Errc::Protocol)).dump();
    }
    if (!msg.is_object() || !msg.contains("t") || !msg["t"].is_string()) {
        return error_json(error_code_for_unknown_type()).dump();
    }
    const std::string type = msg["t"].get<std::string>();
    try {
        if (type == "reset") return reset(msg).dump();
        if (type == "act") return act(msg).dump();
        if (type == "close") {
            closed_ = true;
            return ojson{{"t", "closed"}}.dump();
        }
        return error_json(error_code_for_unknown_type()).dump();
    } catch (const Error& e) {
        return error_json(to_string(e.code())).dump();
    } catch (const nlohmann::json::exception&) {
        return error_json(to_string(Errc::Protocol)).dump();
    }
}

ojson EnvSession::agents_json(const StepOutput& out) const {
    const DiskMask& disk = episode_->world().disk_mask();
    ojson agents = ojson::array();
    for (std::size_t i = 0; i < out.readings.size(); ++i) {
        ojson a;
        a["alive"] = static_cast<bool>(out.alive[i]);
        a["visible"] = out.readings[i].visible_ids;
        a["grid"] = encode_grid(out.readings[i], disk);
        agents.push_back(std::move(a));
    }
    return agents;
}

ojson EnvSession::reset(const ojson& msg) {
    const auto seed = msg.at("seed").get<std::uint64_t>();
    const int stage = field_or(msg, "stage", 1);
    const int n_agents = field_or(msg, "n_agents", 4);
    const double p_l = field_or(msg, "p_l", 0.0);
    const int n_obstacles = field_or(msg, "n_obstacles", 0);
    if (n_agents < 1) throw Error(Errc::InvalidConfig, "n_agents must be >= 1");
    if (!(p_l >= 0.0 && p_l <= 1.0)) throw Error(Errc::InvalidConfig, "p_l must be in [0, 1]");
    if (n_obstacles < 0) throw Error(Errc::InvalidConfig, "n_obstacles must be >= 0");

    EpisodeParams params = options_.episode;
    params.n_agents = static_cast<std::size_t>(n_agents);
    params.max_steps = field_or(msg, "max_steps", params.max_steps);

    std::optional<World> world;
    if (options_.fixed_world) {
        world = *options_.fixed_world;
    } else {
        WorldConfig wc = options_.world;
        wc.width = field_or(msg, "width", wc.width);
        wc.height = field_or(msg, "height", wc.height);
        wc.validate();
        CurriculumParams cp = options_.curriculum;
        cp.seed = seed;
        EpisodeConfig ec;
        ec.stage = stage;
        ec.n_obstacles = n_obstacles;
        ec.p_l = p_l;
        ec.world_seed = derive_seed(seed, 100 + stage, 0);
        ec.landmark_seed = derive_seed(seed, 200 + stage, 0);
        Rng rng(ec.world_seed);
        const auto layout = sample_obstacles(n_obstacles, cp, wc, rng);
        ec.obstacles = layout.obstacles;
        ec.connectivity_relaxed = layout.connectivity_relaxed;
        world = build_episode_world(ec, wc, options_.placement);
    }
    auto episode = std::make_unique<Episode>(std::move(*world), params, seed, episodes_);
    const StepOutput out = episode->reset();
    episode_ = std::move(episode);
    ++episodes_;

    ojson j;
    j["t"] = "obs";
    j["agents"] = agents_json(out);
    j["done"] = out.done;
    j["truncated"] = out.truncated;
    j["info"] = info_json(out.info);
    return j;
}

ojson EnvSession::act(const ojson& msg) {
    if (!episode_) throw Error(Errc::Protocol, "act before reset");
    if (episode_->finished()) throw Error(Errc::Protocol, "episode finished");
    const auto& list = msg.at("actions");
    if (!list.is_array()) throw Error(Errc::Protocol, "actions must be an array");
    std::vector<std::optional<Action>> actions;
    for (const auto& a : list) {
        if (a.is_null()) {
            actions.emplace_back();
            continue;
        }
        Action act;
        act.vx = a.at("vx").get<double>();
        act.vy = a.at("vy").get<double>();
        act.wz = field_or(a, "wz", 0.0);
        act.communicate = field_or(a, "comm", false);
        actions.push_back(act);
    }
    const StepOutput out = episode_->step(std::span<const std::optional<Action>>(actions));

    ojson j;
    j["t"] = "stepres";
    j["agents"] = agents_json(out);
    ojson rewards = ojson::array();
    for (const auto& r : out.rewards.agents) rewards.push_back(r.total);
    j["rewards"] = std::move(rewards);
    j["group"] = out.rewards.group_total;
    j["done"] = out.done;
    j["truncated"] = out.truncated;
    j["info"] = info_json(out.info);
    return j;
}

}  // namespace lcx
