#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "lcx/complex_io.hpp"
#include "lcx/curriculum.hpp"
#include "lcx/episode.hpp"
#include "lcx/line_server.hpp"
#include "lcx/sync_wire.hpp"

namespace lcx {

/// Per channel, [start, len] runs over the row-major in-disk cells.
ojson encode_grid(const SensorReading& reading, const DiskMask& disk);
/// Inverse of encode_grid; `visible_ids` is left empty.
SensorReading decode_grid(const ojson& runs, const DiskMask& disk);

ojson info_json(const StepInfo& info);

struct GatewayOptions {
    WorldConfig world;                 // width/height may be overridden per reset
    PlacementConfig placement;
    CurriculumParams curriculum;
    EpisodeParams episode;             // n_agents is overridden per reset
    std::optional<World> fixed_world;  // used instead of generating one
};

/// One environment session speaking the reset/act/close protocol:
///   {"t":"reset","seed","stage","n_agents","p_l","n_obstacles"[,"width","height","max_steps"]}
///     -> {"t":"obs","agents":[{"alive","visible","grid"}...],"done","truncated","info"}
///   {"t":"act","actions":[{"vx","vy","wz","comm"} | null ...]}
///     -> {"t":"stepres","agents":[...],"rewards":[...],"group","done","truncated","info"}
///   {"t":"close"} -> {"t":"closed"}
/// Failures answer {"t":"err","code":...} and leave the session usable.
class EnvSession : public LineHandler {
public:
    explicit EnvSession(GatewayOptions options);

    std::string handle_line(const std::string& line) override;
    bool finished() const override { return closed_; }

    const Episode* episode() const { return episode_.get(); }

private:
    ojson reset(const ojson& msg);
    ojson act(const ojson& msg);
    ojson agents_json(const StepOutput& out) const;

    GatewayOptions options_;
    std::unique_ptr<Episode> episode_;
    std::uint64_t episodes_ = 0;
    bool closed_ = false;
};

/// Adapter so several connections can share one sync endpoint.
class SyncLineHandler : public LineHandler {
public:
    explicit SyncLineHandler(SyncEndpoint& endpoint) : endpoint_(endpoint) {}
    std::string handle_line(const std::string& line) override { return endpoint_.handle_line(line); }

private:
    SyncEndpoint& endpoint_;
};

}  // namespace lcx
