#include <doctest.h>

#include "lcx/rng.hpp"
#include "lcx/sync.hpp"
#include "lcx/sync_wire.hpp"

using namespace lcx;

namespace {

std::vector<LandmarkId> iota_ids(LandmarkId n) {
    std::vector<LandmarkId> ids(n);
    for (LandmarkId i = 0; i < n; ++i) ids[i] = i;
    return ids;
}

SyncDelta sync_once(SyncServer& server, ClientDb& client) {
    const auto delta = server.handle_sync(client.build_request());
    client.apply_delta(delta);
    return delta;
}

template <class F>
Errc error_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return Errc::Io;
}

}  // namespace

TEST_CASE("empty up-to-date request") {
    SyncServer server(2, iota_ids(5));
    ClientDb client(0);
    const auto delta = sync_once(server, client);
    CHECK(delta.records.empty());
    CHECK(delta.new_version == 0);
    CHECK_FALSE(delta.complete);
    CHECK(server.comm_count(0) == 1);
    CHECK(server.comm_count(1) == 0);
}

TEST_CASE("two clients converge on the server complex") {
    SyncServer server(2, iota_ids(5));
    ClientDb a(0), b(1);
    a.queue_observation({0, 1});
    b.queue_observation({2, 3});
    sync_once(server, a);
    sync_once(server, b);
    sync_once(server, a);
    CHECK(a.local().same_cells(server.complex()));
    CHECK(b.local().same_cells(server.complex()));
    CHECK(server.comm_counts() == std::vector<std::uint64_t>{2, 1});
    // observation indices count what each agent sent
    CHECK(server.complex().log().front().source_agent == 0);
    CHECK(server.complex().log().back().source_agent == 1);
    CHECK(server.complex().log().back().observation_index == 0);
}

TEST_CASE("completion flips on the last undiscovered landmark") {
    SyncServer server(1, {4, 7, 9});
    ClientDb c(0);
    c.queue_observation({4, 7});
    CHECK_FALSE(sync_once(server, c).complete);
    CHECK_FALSE(server.completion_check());
    c.queue_observation({9});
    CHECK(sync_once(server, c).complete);
    CHECK(server.completion_check());

    SyncServer empty(1, {});
    CHECK(empty.completion_check());
}

TEST_CASE("server rejects bad requests without metering them") {
    SyncServer server(2, iota_ids(4));
    ClientDb c(0);
    c.queue_observation({0, 1});
    sync_once(server, c);
    CHECK(error_of([&] { server.handle_sync({0, 99, {}, 0}); }) == Errc::VersionOutOfRange);
    CHECK(error_of([&] { server.handle_sync({0, 3, {{}}, 0}); }) == Errc::MalformedObservation);
    CHECK(error_of([&] { server.handle_sync({0, 3, {{7}}, 0}); }) == Errc::MalformedObservation);
    CHECK(error_of([&] { server.handle_sync({5, 0, {}, 0}); }) == Errc::InvalidAgent);
    server.handle_sync({0, 3, {}, 0});
    CHECK(error_of([&] { server.handle_sync({0, 1, {}, 0}); }) == Errc::StaleVersion);
    CHECK(server.comm_count(0) == 2);
    CHECK(server.complex().version() == 3);
}

TEST_CASE("re-delivered request ids insert once") {
    SyncServer server(1, iota_ids(6));
    ClientDb c(0);
    c.queue_observation({0, 1, 2});
    const auto req = c.build_request();
    server.handle_sync(req);  // response lost
    CHECK(c.build_request() == req);
    const auto delta = server.handle_sync(c.build_request());
    c.apply_delta(delta);
    CHECK(server.complex().version() == 7);
    CHECK(server.comm_count(0) == 2);
    CHECK(c.local().same_cells(server.complex()));
    CHECK(c.pending_count() == 0);
}

TEST_CASE("apply_delta detects gaps") {
    SyncServer server(1, iota_ids(6));
    ClientDb writer(0);
    writer.queue_observation({0, 1});
    const auto full = sync_once(server, writer);

    ClientDb fresh(0);
    fresh.apply_delta(full);
    CHECK(fresh.local().same_cells(server.complex()));

    ClientDb other(0);
    SyncDelta tail = full;
    tail.records.erase(tail.records.begin());
    CHECK(error_of([&] { other.apply_delta(tail); }) == Errc::VersionGap);
    SyncDelta empty{{}, 0, false};
    other.apply_delta(empty);
    CHECK(other.known_version() == 0);
    SyncDelta lying{{}, 5, false};
    CHECK(error_of([&] { other.apply_delta(lying); }) == Errc::VersionGap);
}

TEST_CASE("property: random interleavings of four clients converge") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Rng rng(seed);
        const LandmarkId n_ids = 12 + static_cast<LandmarkId>(rng.index(20));
        SyncServer server(4, iota_ids(n_ids));
        std::vector<ClientDb> clients{ClientDb(0), ClientDb(1), ClientDb(2), ClientDb(3)};
        std::vector<std::uint64_t> tally(4, 0);
        LandmarkComplex oracle;

        for (int op = 0; op < 300; ++op) {
            const std::size_t k = rng.index(4);
            const double u = rng.uniform();
            if (u < 0.55) {
                std::vector<LandmarkId> ids;
                const std::size_t m = 1 + rng.index(4);
                for (std::size_t i = 0; i < m; ++i) ids.push_back(static_cast<LandmarkId>(rng.index(n_ids)));
                oracle.insert_observation(ids, 0, 0);
                clients[k].queue_observation(ids);
            } else if (u < 0.9) {
                sync_once(server, clients[k]);
                ++tally[k];
            } else {
                server.handle_sync(clients[k].build_request());  // lost response
                ++tally[k];
            }
        }
        // quiescence: flush until nothing is pending, then everyone pulls once
        for (std::size_t k = 0; k < 4; ++k) {
            while (clients[k].pending_count() > 0) {
                sync_once(server, clients[k]);
                ++tally[k];
            }
        }
        for (std::size_t k = 0; k < 4; ++k) {
            sync_once(server, clients[k]);
            ++tally[k];
        }
        for (auto& c : clients) {
            CHECK(c.pending_count() == 0);
            CHECK(c.local().same_cells(server.complex()));
            CHECK(c.known_version() == server.complex().version());
        }
        CHECK(server.comm_counts() == tally);
        CHECK(server.complex().same_cells(oracle));
    }
}

TEST_CASE("wire codec") {
    const SyncRequest req{2, 5, {{1, 2}, {3}}, 9};
    CHECK(to_json(req).dump() == R"({"t":"sync","agent":2,"ver":5,"obs":[[1,2],[3]],"rid":9})");
    CHECK(sync_request_from_json(to_json(req)) == req);

    SyncServer server(3, iota_ids(4));
    SyncEndpoint endpoint(server);
    CHECK(endpoint.handle_line(R"({"t":"sync","agent":0,"ver":0,"obs":[[1,0]],"rid":1})") ==
          R"({"t":"delta","recs":[{"v":1,"s":[0],"a":0,"o":0},{"v":2,"s":[1],"a":0,"o":0},)"
          R"({"v":3,"s":[0,1],"a":0,"o":0}],"ver":3,"complete":false})");
    CHECK(endpoint.handle_line(R"({"t":"hello"})") == R"({"t":"err","code":"unknown_type"})");
    CHECK(endpoint.handle_line("not json") == R"({"t":"err","code":"protocol"})");
    CHECK(endpoint.handle_line(R"({"t":"sync","agent":0,"ver":9,"obs":[]})") ==
          R"({"t":"err","code":"version_out_of_range"})");
    CHECK(endpoint.handle_line(R"({"t":"sync","agent":1,"obs":[]})") == R"({"t":"err","code":"protocol"})");

    const auto delta = sync_delta_from_json(ojson::parse(
        endpoint.handle_line(R"({"t":"sync","agent":1,"ver":0,"obs":[]})")));
    CHECK(delta.records.size() == 3);
    CHECK(to_json(delta).dump().find(R"("complete":false)") != std::string::npos);
}
