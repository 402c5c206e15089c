#include "lcx/complex.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <string>

namespace lcx {

std::string_view to_string(Errc code) {
    switch (code) {
        case Errc::EmptyObservation: return "empty_observation";
        case Errc::UnknownLandmark: return "unknown_landmark";
        case Errc::VersionOutOfRange: return "version_out_of_range";
        case Errc::VersionGap: return "version_gap";
        case Errc::StaleVersion: return "stale_version";
        case Errc::MalformedObservation: return "malformed_observation";
        case Errc::InvalidAgent: return "invalid_agent";
        case Errc::ActionCountMismatch: return "action_count_mismatch";
        case Errc::InvalidConfig: return "invalid_config";
        case Errc::NoFreeSpace: return "no_free_space";
        case Errc::SpawnFailure: return "spawn_failure";
        case Errc::SamplingFailure: return "sampling_failure";
        case Errc::Protocol: return "protocol";
        case Errc::Io: return "io";
    }
    return "unknown";
}

Simplex::Simplex(std::vector<LandmarkId> ids) : vertices_(std::move(ids)) {
    std::sort(vertices_.begin(), vertices_.end());
    if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end()) {
        throw Error(Errc::MalformedObservation, "simplex has duplicate vertices");
    }
}

std::size_t SimplexHash::operator()(const Simplex& s) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL ^ s.size();
    for (LandmarkId id : s.vertices()) {
        h ^= id + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

std::size_t Skeleton::component_count() const {
    std::unordered_set<LandmarkId> seen;
    std::size_t components = 0;
    std::vector<LandmarkId> stack;
    for (LandmarkId root : nodes) {
        if (seen.contains(root)) continue;
        ++components;
        stack.push_back(root);
        seen.insert(root);
        while (!stack.empty()) {
            LandmarkId v = stack.back();
            stack.pop_back();
            auto it = adjacency.find(v);
            if (it == adjacency.end()) continue;
            for (LandmarkId w : it->second) {
                if (seen.insert(w).second) stack.push_back(w);
            }
        }
    }
    return components;
}

LandmarkComplex::LandmarkComplex(int max_dim) : max_dim_(max_dim) {
    if (max_dim < 0) throw Error(Errc::InvalidConfig, "max_dim must be >= 0");
    cells_.resize(static_cast<std::size_t>(max_dim) + 1);
}

bool LandmarkComplex::insert_new(Simplex s, AgentIndex agent, std::uint64_t obs_index) {
    auto& bucket = cells_[s.size() - 1];
    if (bucket.contains(s)) return false;
    if (s.size() == 1) {
        adjacency_.try_emplace(s[0]);
    } else if (s.size() == 2) {
        auto link = [this](LandmarkId a, LandmarkId b) {
            auto& list = adjacency_[a];
            list.insert(std::upper_bound(list.begin(), list.end(), b), b);
        };
        link(s[0], s[1]);
        link(s[1], s[0]);
    }
    log_.push_back({log_.size() + 1, s, agent, obs_index});
    bucket.insert(std::move(s));
    return true;
}

InsertionDelta LandmarkComplex::insert_observation(std::span<const LandmarkId> seen,
                                                   AgentIndex source_agent,
                                                   std::uint64_t observation_index) {
    if (seen.empty()) throw Error(Errc::EmptyObservation, "observation has no landmarks");
    std::vector<LandmarkId> ids(seen.begin(), seen.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    InsertionDelta delta;
    delta.new_counts.assign(cells_.size(), 0);

    const std::size_t m = ids.size();
    const std::size_t top = std::min<std::size_t>(m, cells_.size());
    std::vector<std::size_t> pick;
    // Lexicographic k-combinations, k ascending, so faces precede cofaces in the log.
    for (std::size_t k = 1; k <= top; ++k) {
        pick.resize(k);
        for (std::size_t i = 0; i < k; ++i) pick[i] = i;
        while (true) {
            std::vector<LandmarkId> verts(k);
            for (std::size_t i = 0; i < k; ++i) verts[i] = ids[pick[i]];
            Simplex s(Simplex::Sorted{}, std::move(verts));
            if (!cells_[k - 1].contains(s)) {
                delta.new_simplices.push_back(s);
                insert_new(std::move(s), source_agent, observation_index);
                ++delta.new_counts[k - 1];
            }
            std::size_t i = k;
            while (i > 0 && pick[i - 1] == m - k + (i - 1)) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    return delta;
}

void LandmarkComplex::apply(const InsertionRecord& record) {
    if (record.version != version() + 1) {
        throw Error(Errc::VersionGap, "expected version " + std::to_string(version() + 1) +
                                          ", got " + std::to_string(record.version));
    }
    const Simplex& s = record.simplex;
    if (s.size() == 0 || s.size() > cells_.size()) {
        throw Error(Errc::MalformedObservation, "record simplex dimension out of range");
    }
    if (contains(s)) throw Error(Errc::MalformedObservation, "record simplex already present");
    if (s.size() > 1) {
        for (std::size_t skip = 0; skip < s.size(); ++skip) {
            std::vector<LandmarkId> face;
            for (std::size_t i = 0; i < s.size(); ++i) {
                if (i != skip) face.push_back(s[i]);
            }
            if (!cells_[face.size() - 1].contains(Simplex(Simplex::Sorted{}, std::move(face)))) {
                throw Error(Errc::MalformedObservation, "record inserted before its faces");
            }
        }
    }
    insert_new(s, record.source_agent, record.observation_index);
}

bool LandmarkComplex::contains(const Simplex& s) const {
    if (s.size() == 0 || s.size() > cells_.size()) return false;
    return cells_[s.size() - 1].contains(s);
}

std::size_t LandmarkComplex::size(int dim) const {
    if (dim < 0 || static_cast<std::size_t>(dim) >= cells_.size()) return 0;
    return cells_[dim].size();
}

std::vector<InsertionRecord> LandmarkComplex::diff_since(std::uint64_t since) const {
    if (since > version()) {
        throw Error(Errc::VersionOutOfRange, "version " + std::to_string(since) +
                                                 " is beyond current " + std::to_string(version()));
    }
    return {log_.begin() + static_cast<std::ptrdiff_t>(since), log_.end()};
}

std::span<const LandmarkId> LandmarkComplex::neighbors(LandmarkId id) const {
    auto it = adjacency_.find(id);
    if (it == adjacency_.end()) return {};
    return it->second;
}

std::vector<LandmarkId> LandmarkComplex::vertices() const {
    std::vector<LandmarkId> out;
    out.reserve(adjacency_.size());
    for (const auto& [id, _] : adjacency_) out.push_back(id);
    std::sort(out.begin(), out.end());
    return out;
}

Skeleton LandmarkComplex::skeleton() const {
    Skeleton sk;
    sk.nodes = vertices();
    sk.adjacency = adjacency_;
    if (cells_.size() > 1) {
        sk.edges.reserve(cells_[1].size());
        for (const Simplex& e : cells_[1]) sk.edges.emplace_back(e[0], e[1]);
        std::sort(sk.edges.begin(), sk.edges.end());
    }
    return sk;
}

std::unordered_map<LandmarkId, std::size_t> LandmarkComplex::hop_distances(LandmarkId from) const {
    if (!contains_vertex(from)) {
        throw Error(Errc::UnknownLandmark, "landmark " + std::to_string(from) + " not in complex");
    }
    std::unordered_map<LandmarkId, std::size_t> dist{{from, 0}};
    std::deque<LandmarkId> queue{from};
    while (!queue.empty()) {
        LandmarkId v = queue.front();
        queue.pop_front();
        const std::size_t dv = dist[v];
        for (LandmarkId w : neighbors(v)) {
            if (dist.try_emplace(w, dv + 1).second) queue.push_back(w);
        }
    }
    return dist;
}

std::optional<std::vector<LandmarkId>> LandmarkComplex::hop_path(LandmarkId from,
                                                                 LandmarkId to) const {
    if (!contains_vertex(from)) {
        throw Error(Errc::UnknownLandmark, "landmark " + std::to_string(from) + " not in complex");
    }
    // Distances are taken from the target so the walk from `from` can pick the
    // smallest neighbour that is one hop closer.
    const auto dist = hop_distances(to);
    auto it = dist.find(from);
    if (it == dist.end()) return std::nullopt;

    std::vector<LandmarkId> path{from};
    LandmarkId cur = from;
    std::size_t remaining = it->second;
    while (remaining > 0) {
        for (LandmarkId w : neighbors(cur)) {
            auto dw = dist.find(w);
            if (dw != dist.end() && dw->second + 1 == remaining) {
                cur = w;
                break;
            }
        }
        path.push_back(cur);
        --remaining;
    }
    return path;
}

bool LandmarkComplex::same_cells(const LandmarkComplex& other) const {
    return cells_ == other.cells_;
}

}  // namespace lcx
