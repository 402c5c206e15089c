#pragma once

#include <mutex>
#include <string>
#include <string_view>

#include "lcx/complex_io.hpp"
#include "lcx/sync.hpp"

namespace lcx {

// {"t":"sync","agent":int,"ver":int,"obs":[[ids]...],"rid":int}
ojson to_json(const SyncRequest& req);
SyncRequest sync_request_from_json(const ojson& j);

// {"t":"delta","recs":[{"v","s","a","o"}...],"ver":int,"complete":bool}
ojson to_json(const SyncDelta& delta);
SyncDelta sync_delta_from_json(const ojson& j);

// {"t":"err","code":string}
ojson error_json(std::string_view code);
std::string_view error_code_for_unknown_type();

/// Answers one JSON line against a shared server. Safe to call from several
/// connection threads; requests are serialized on an internal mutex.
class SyncEndpoint {
public:
    explicit SyncEndpoint(SyncServer& server) : server_(server) {}

    std::string handle_line(const std::string& line);

private:
    SyncServer& server_;
    std::mutex mutex_;
};

}  // namespace lcx
