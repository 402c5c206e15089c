#include "lcx/sync.hpp"

#include <algorithm>
#include <string>

namespace lcx {

SyncServer::SyncServer(std::size_t n_agents, std::vector<LandmarkId> remaining_ids, int max_dim)
    : complex_(max_dim),
      remaining_(std::move(remaining_ids)),
      comm_counts_(n_agents, 0),
      last_acked_(n_agents, 0),
      observations_received_(n_agents, 0),
      seen_rids_(n_agents) {
    std::sort(remaining_.begin(), remaining_.end());
    remaining_.erase(std::unique(remaining_.begin(), remaining_.end()), remaining_.end());
    remaining_set_.insert(remaining_.begin(), remaining_.end());
}

std::uint64_t SyncServer::comm_count(AgentIndex agent) const {
    if (agent >= comm_counts_.size()) throw Error(Errc::InvalidAgent, "no agent " + std::to_string(agent));
    return comm_counts_[agent];
}

std::uint64_t SyncServer::last_acked(AgentIndex agent) const {
    if (agent >= last_acked_.size()) throw Error(Errc::InvalidAgent, "no agent " + std::to_string(agent));
    return last_acked_[agent];
}

std::uint64_t SyncServer::total_comm() const {
    std::uint64_t total = 0;
    for (auto c : comm_counts_) total += c;
    return total;
}

bool SyncServer::completion_check() const { return remaining_found_ == remaining_.size(); }

SyncDelta SyncServer::handle_sync(const SyncRequest& req) {
    if (req.agent >= comm_counts_.size()) {
        throw Error(Errc::InvalidAgent, "no agent " + std::to_string(req.agent));
    }
    if (req.known_version > complex_.version()) {
        throw Error(Errc::VersionOutOfRange, "client claims version " + std::to_string(req.known_version) +
                                                 ", server is at " + std::to_string(complex_.version()));
    }
    if (req.known_version < last_acked_[req.agent]) {
        throw Error(Errc::StaleVersion, "client version " + std::to_string(req.known_version) +
                                            " is older than its last request (" +
                                            std::to_string(last_acked_[req.agent]) + ")");
    }
    for (const auto& obs : req.observations) {
        if (obs.empty()) throw Error(Errc::MalformedObservation, "empty observation set");
        for (LandmarkId id : obs) {
            if (!remaining_set_.contains(id)) {
                throw Error(Errc::MalformedObservation, "landmark " + std::to_string(id) + " cannot be observed");
            }
        }
    }

    ++comm_counts_[req.agent];
    last_acked_[req.agent] = req.known_version;
    const bool redelivery = req.rid != 0 && !seen_rids_[req.agent].insert(req.rid).second;
    if (!redelivery) {
        for (const auto& obs : req.observations) {
            const auto delta = complex_.insert_observation(obs, req.agent, observations_received_[req.agent]++);
            for (const Simplex& s : delta.new_simplices) {
                if (s.size() == 1) ++remaining_found_;  // every vertex is in L_R, checked above
            }
        }
    }
    SyncDelta out;
    out.records = complex_.diff_since(req.known_version);
    out.new_version = complex_.version();
    out.complete = completion_check();
    return out;
}

void ClientDb::queue_observation(std::vector<LandmarkId> ids) {
    if (ids.empty()) throw Error(Errc::EmptyObservation, "cannot queue an empty observation");
    pending_.push_back(std::move(ids));
}

std::size_t ClientDb::pending_count() const {
    return pending_.size() + (inflight_ ? inflight_->observations.size() : 0);
}

SyncRequest ClientDb::build_request() {
    if (inflight_) return *inflight_;
    SyncRequest req;
    req.agent = agent_;
    req.known_version = known_version_;
    req.observations = std::move(pending_);
    req.rid = next_rid_++;
    pending_.clear();
    inflight_ = req;
    return req;
}

void ClientDb::apply_delta(const SyncDelta& delta) {
    std::uint64_t expect = known_version_;
    for (const auto& r : delta.records) {
        if (r.version != expect + 1) {
            throw Error(Errc::VersionGap, "expected record " + std::to_string(expect + 1) + ", got " +
                                              std::to_string(r.version));
        }
        ++expect;
    }
    if (delta.new_version != expect) {
        throw Error(Errc::VersionGap, "delta ends at " + std::to_string(expect) + " but claims version " +
                                          std::to_string(delta.new_version));
    }
    for (const auto& r : delta.records) local_.apply(r);
    known_version_ = delta.new_version;
    inflight_.reset();
}

}  // namespace lcx
