#include "lcx/sync_wire.hpp"

namespace lcx {

ojson to_json(const SyncRequest& req) {
    ojson j;
    j["t"] = "sync";
    j["agent"] = req.agent;
    j["ver"] = req.known_version;
    j["obs"] = ojson::array();
    for (const auto& o : req.observations) j["obs"].push_back(o);
    j["rid"] = req.rid;
    return j;
}

SyncRequest sync_request_from_json(const ojson& j) {
    try {
        SyncRequest req;
        req.agent = j.at("agent").get<AgentIndex>();
        req.known_version = j.at("ver").get<std::uint64_t>();
        req.observations = j.at("obs").get<std::vector<std::vector<LandmarkId>>>();
        req.rid = j.contains("rid") ? j.at("rid").get<std::uint64_t>() : 0;
        return req;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::Protocol, std::string("bad sync request: ") + e.what());
    }
}

ojson to_json(const SyncDelta& delta) {
    ojson j;
    j["t"] = "delta";
    j["recs"] = ojson::array();
    for (const auto& r : delta.records) j["recs"].push_back(record_to_json(r));
    j["ver"] = delta.new_version;
    j["complete"] = delta.complete;
    return j;
}

SyncDelta sync_delta_from_json(const ojson& j) {
    try {
        if (j.at("t") != "delta") throw Error(Errc::Protocol, "expected a delta message");
        SyncDelta d;
        for (const auto& r : j.at("recs")) d.records.push_back(record_from_json(r));
        d.new_version = j.at("ver").get<std::uint64_t>();
        d.complete = j.at("complete").get<bool>();
        return d;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::Protocol, std::string("bad delta: ") + e.what());
    }
}

ojson error_json(std::string_view code) {
    ojson j;
    j["t"] = "err";
    j["code"] = code;
    return j;
}

std::string_view error_code_for_unknown_type() { return "unknown_type"; }

std::string SyncEndpoint::handle_line(const std::string& line) {
    ojson msg;
    try {
        msg = ojson::parse(line);
    } catch (const nlohmann::json::parse_error&) {
        return error_json(to_string(Errc::Protocol)).dump();
    }
    if (!msg.is_object() || !msg.contains("t") || msg["t"] != "sync") {
        return error_json(error_code_for_unknown_type()).dump();
    }
    try {
        const SyncRequest req = sync_request_from_json(msg);
        std::lock_guard lock(mutex_);
        return to_json(server_.handle_sync(req)).dump();
    } catch (const Error& e) {
        return error_json(to_string(e.code())).dump();
    }
}

}  // namespace lcx
