#pragma once

#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "lcx/complex.hpp"

namespace lcx {

struct SyncRequest {
    AgentIndex agent = 0;
    std::uint64_t known_version = 0;
    std::vector<std::vector<LandmarkId>> observations;
    std::uint64_t rid = 0;

    friend bool operator==(const SyncRequest&, const SyncRequest&) = default;
};

struct SyncDelta {
    std::vector<InsertionRecord> records;
    std::uint64_t new_version = 0;
    bool complete = false;

    friend bool operator==(const SyncDelta&, const SyncDelta&) = default;
};

/// Holds the shared complex. Each request is metered once; a request id seen
/// before from the same agent is answered without inserting again.
///
/// Observation indices in the log are assigned here, counting the observation
/// sets received from each agent.
class SyncServer {
public:
    SyncServer(std::size_t n_agents, std::vector<LandmarkId> remaining_ids, int max_dim = 2);

    /// Validates the whole request before touching any state, so a rejected
    /// request is neither applied nor metered.
    SyncDelta handle_sync(const SyncRequest& request);

    /// True iff every id of L_R is a vertex of the shared complex.
    bool completion_check() const;

    const LandmarkComplex& complex() const { return complex_; }
    std::size_t n_agents() const { return comm_counts_.size(); }
    std::uint64_t comm_count(AgentIndex agent) const;
    const std::vector<std::uint64_t>& comm_counts() const { return comm_counts_; }
    std::uint64_t total_comm() const;
    std::uint64_t last_acked(AgentIndex agent) const;
    const std::vector<LandmarkId>& remaining_ids() const { return remaining_; }

private:
    LandmarkComplex complex_;
    std::vector<LandmarkId> remaining_;  // ascending
    std::unordered_set<LandmarkId> remaining_set_;
    std::size_t remaining_found_ = 0;
    std::vector<std::uint64_t> comm_counts_;
    std::vector<std::uint64_t> last_acked_;
    std::vector<std::uint64_t> observations_received_;
    std::vector<std::unordered_set<std::uint64_t>> seen_rids_;
};

/// A client's local copy of the shared complex plus its unsent observations.
class ClientDb {
public:
    explicit ClientDb(AgentIndex agent, int max_dim = 2) : agent_(agent), local_(max_dim) {}

    void queue_observation(std::vector<LandmarkId> ids);

    /// Next request. If an earlier request is still unacknowledged it is sent
    /// again unchanged (same rid); otherwise all pending observations move
    /// into a new request.
    SyncRequest build_request();

    /// Replays the delta. Records must continue exactly from known_version.
    /// Acknowledges the in-flight request.
    void apply_delta(const SyncDelta& delta);

    AgentIndex agent() const { return agent_; }
    const LandmarkComplex& local() const { return local_; }
    std::uint64_t known_version() const { return known_version_; }
    bool knows(LandmarkId id) const { return local_.contains_vertex(id); }
    /// Observations not yet acknowledged (queued plus in flight).
    std::size_t pending_count() const;
    bool has_inflight() const { return inflight_.has_value(); }

private:
    AgentIndex agent_;
    LandmarkComplex local_;
    std::uint64_t known_version_ = 0;
    std::vector<std::vector<LandmarkId>> pending_;
    std::optional<SyncRequest> inflight_;
    std::uint64_t next_rid_ = 1;
};

}  // namespace lcx
