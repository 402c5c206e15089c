#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "lcx/types.hpp"

namespace lcx {

/// A set of landmark ids kept in strictly ascending order.
class Simplex {
public:
    Simplex() = default;
    Simplex(std::initializer_list<LandmarkId> ids) : Simplex(std::vector<LandmarkId>(ids)) {}

    /// Sorts `ids`; duplicate ids are a MalformedObservation error.
    explicit Simplex(std::vector<LandmarkId> ids);

    std::span<const LandmarkId> vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    int dim() const { return static_cast<int>(vertices_.size()) - 1; }
    LandmarkId operator[](std::size_t i) const { return vertices_[i]; }

    friend bool operator==(const Simplex&, const Simplex&) = default;
    friend auto operator<=>(const Simplex&, const Simplex&) = default;

private:
    struct Sorted {};
    Simplex(Sorted, std::vector<LandmarkId> ids) : vertices_(std::move(ids)) {}
    friend class LandmarkComplex;

    std::vector<LandmarkId> vertices_;
};

struct SimplexHash {
    std::size_t operator()(const Simplex& s) const noexcept;
};

struct InsertionRecord {
    std::uint64_t version = 0;
    Simplex simplex;
    AgentIndex source_agent = 0;
    std::uint64_t observation_index = 0;

    friend bool operator==(const InsertionRecord&, const InsertionRecord&) = default;
};

/// Newly inserted simplices from one observation, plus per-dimension counts.
struct InsertionDelta {
    std::vector<std::size_t> new_counts;
    std::vector<Simplex> new_simplices;

    /// Count of new k-simplices; 0 for dimensions above the complex cap.
    std::size_t count(int k) const {
        return k >= 0 && static_cast<std::size_t>(k) < new_counts.size() ? new_counts[k] : 0;
    }
    bool empty() const { return new_simplices.empty(); }
};

/// 1-skeleton: nodes are the 0-simplices, edges the 1-simplices.
struct Skeleton {
    std::vector<LandmarkId> nodes;                           // ascending
    std::vector<std::pair<LandmarkId, LandmarkId>> edges;    // ascending, first < second
    std::unordered_map<LandmarkId, std::vector<LandmarkId>> adjacency;  // ascending lists

    std::size_t component_count() const;
};

/// Abstract simplicial complex over landmark ids, truncated at `max_dim`.
///
/// Every mutation appends to an insertion log; the version is the log length
/// and replaying the log onto an empty complex reproduces the cells. Faces are
/// always logged before their cofaces. Not internally synchronized.
class LandmarkComplex {
public:
    explicit LandmarkComplex(int max_dim = 2);

    int max_dim() const { return max_dim_; }
    std::uint64_t version() const { return log_.size(); }

    /// Inserts every subset of `seen` with at most max_dim+1 elements.
    InsertionDelta insert_observation(std::span<const LandmarkId> seen, AgentIndex source_agent,
                                      std::uint64_t observation_index);
    InsertionDelta insert_observation(std::initializer_list<LandmarkId> seen,
                                      AgentIndex source_agent = 0,
                                      std::uint64_t observation_index = 0) {
        return insert_observation(std::span<const LandmarkId>(seen.begin(), seen.size()),
                                  source_agent, observation_index);
    }

    /// Replays one record from another complex's log. The record must carry
    /// version()+1, must be new here and must have all its faces present.
    void apply(const InsertionRecord& record);

    bool contains(const Simplex& s) const;
    bool contains_vertex(LandmarkId id) const { return adjacency_.contains(id); }

    std::size_t size(int dim) const;
    const std::unordered_set<Simplex, SimplexHash>& cells(int dim) const { return cells_.at(dim); }

    const std::vector<InsertionRecord>& log() const { return log_; }

    /// Records with version > `since`, ascending.
    std::vector<InsertionRecord> diff_since(std::uint64_t since) const;

    /// Neighbours of `id` in the skeleton, ascending. Empty for unknown ids.
    std::span<const LandmarkId> neighbors(LandmarkId id) const;

    std::vector<LandmarkId> vertices() const;
    Skeleton skeleton() const;

    /// Shortest skeleton path (BFS); among equal-length paths the one whose
    /// next vertex is smallest at every step. Throws UnknownLandmark.
    std::optional<std::vector<LandmarkId>> hop_path(LandmarkId from, LandmarkId to) const;

    /// Hop distances from `from` to every reachable vertex.
    std::unordered_map<LandmarkId, std::size_t> hop_distances(LandmarkId from) const;

    /// Equality of cell sets; logs may differ.
    bool same_cells(const LandmarkComplex& other) const;

private:
    bool insert_new(Simplex s, AgentIndex agent, std::uint64_t obs_index);

    int max_dim_;
    std::vector<std::unordered_set<Simplex, SimplexHash>> cells_;
    std::vector<InsertionRecord> log_;
    std::unordered_map<LandmarkId, std::vector<LandmarkId>> adjacency_;
};

}  // namespace lcx
