#include <doctest.h>

#include <boost/asio.hpp>
#include <fstream>
#include <sstream>

#include "lcx/gateway.hpp"

using namespace lcx;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string replay(LineHandler& handler, const std::string& input) {
    std::istringstream in(input);
    std::ostringstream out;
    serve_stream(in, out, handler);
    return out.str();
}

std::string golden(const std::string& name) { return std::string(LCX_GOLDEN_DIR) + "/" + name; }

World small_world() {
    WorldConfig wc;
    wc.width = 40;
    wc.height = 40;
    World w(wc, {{18, 5, 4, 20}}, {{0, {10, 10}, false}, {1, {30, 12}, false}, {2, {20, 30}, false}});
    w.set_agents({{{12, 12}, 0.0, true}, {{28, 14}, 0.0, true}});
    return w;
}

}  // namespace

TEST_CASE("grid runs are over in-disk cells") {
    const World w = small_world();
    const DiskMask& disk = w.disk_mask();
    for (std::size_t a = 0; a < 2; ++a) {
        const SensorReading r = w.sense(a, [](LandmarkId id) { return id == 0; });
        const ojson runs = encode_grid(r, disk);
        REQUIRE(runs.size() == kSensorChannels);
        const SensorReading back = decode_grid(runs, disk);
        CHECK(back.grid == r.grid);
        // independent expansion: every run covers set cells only, and the counts agree
        for (int ch = 0; ch < kSensorChannels; ++ch) {
            std::size_t covered = 0;
            long prev_end = -1;
            for (const auto& run : runs[ch]) {
                const long start = run[0].get<long>();
                const long len = run[1].get<long>();
                CHECK(len > 0);
                CHECK(start > prev_end);  // maximal, disjoint, ascending
                prev_end = start + len;
                for (long k = start; k < start + len; ++k) {
                    CHECK(r.grid[static_cast<std::size_t>(disk.cells[k]) * kSensorChannels + ch] == 1);
                }
                covered += static_cast<std::size_t>(len);
            }
            std::size_t set = 0;
            for (int idx : disk.cells) set += r.grid[static_cast<std::size_t>(idx) * kSensorChannels + ch];
            CHECK(covered == set);
        }
    }
}

TEST_CASE("grid codec examples and errors") {
    const World w = small_world();
    const DiskMask& disk = w.disk_mask();
    SensorReading r;
    r.side = disk.side;
    r.grid.assign(static_cast<std::size_t>(disk.side) * disk.side * kSensorChannels, 0);
    for (int k : {0, 1, 2, 5}) r.grid[static_cast<std::size_t>(disk.cells[k]) * kSensorChannels + 3] = 1;
    CHECK(encode_grid(r, disk).dump() == "[[],[],[],[[0,3],[5,1]]]");

    CHECK_THROWS_AS(decode_grid(ojson::parse("[[],[],[]]"), disk), Error);
    const std::string past = "[[[" + std::to_string(disk.cells.size() - 1) + ",2]],[],[],[]]";
    CHECK_THROWS_AS(decode_grid(ojson::parse(past), disk), Error);
    CHECK_THROWS_AS(decode_grid(ojson::parse("[[[\"a\",1]],[],[],[]]"), disk), Error);
}

TEST_CASE("env golden transcript replays byte for byte") {
    EnvSession session{GatewayOptions{}};
    CHECK(replay(session, read_file(golden("env_session.in"))) == read_file(golden("env_session.out")));
    CHECK(session.finished());
}

TEST_CASE("sync golden transcript replays byte for byte") {
    SyncServer server(2, {0, 1, 2, 3, 4, 5}, 2);
    SyncEndpoint endpoint(server);
    SyncLineHandler handler(endpoint);
    CHECK(replay(handler, read_file(golden("sync_session.in"))) == read_file(golden("sync_session.out")));
}

TEST_CASE("message shapes") {
    EnvSession session{GatewayOptions{}};
    const auto obs = ojson::parse(
        session.handle_line(R"({"t":"reset","seed":3,"n_agents":2,"p_l":0.0,"n_obstacles":1})"));
    std::vector<std::string> keys;
    for (const auto& [k, v] : obs.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"t", "agents", "done", "truncated", "info"});
    CHECK(obs["agents"].size() == 2);
    CHECK(obs["info"]["step_index"] == 0);

    const auto res = ojson::parse(session.handle_line(
        R"({"t":"act","actions":[{"vx":1,"vy":0,"wz":0,"comm":true},{"vx":0,"vy":1,"wz":0,"comm":false}]})"));
    keys.clear();
    for (const auto& [k, v] : res.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"t", "agents", "rewards", "group", "done", "truncated", "info"});
    std::vector<std::string> info_keys;
    for (const auto& [k, v] : res["info"].items()) info_keys.push_back(k);
    CHECK(info_keys ==
          std::vector<std::string>{"step_index", "obs_count", "c0", "c1", "c2", "comm_counts", "collisions"});
    CHECK(res["info"]["comm_counts"] == ojson::array({1, 0}));
    CHECK(res["group"].get<double>() == -0.2);

    // the reply's grids decode to the session's own readings
    const auto& ep = *session.episode();
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(decode_grid(res["agents"][i]["grid"], ep.world().disk_mask()).grid == ep.readings()[i].grid);
    }
}

TEST_CASE("fixed world sessions use the given map") {
    GatewayOptions options;
    options.fixed_world = small_world();
    EnvSession session(options);
    const auto obs = ojson::parse(session.handle_line(R"({"t":"reset","seed":1,"n_agents":2})"));
    CHECK(session.episode()->world().landmarks().size() == 3);
    CHECK(session.episode()->world().obstacles().size() == 1);
    CHECK(obs["t"] == "obs");
}

TEST_CASE("tcp sessions are independent and match stdio") {
    TcpLineServer server(0, [] { return std::make_unique<EnvSession>(GatewayOptions{}); });
    server.start();
    REQUIRE(server.port() != 0);

    const std::string script = read_file(golden("env_session.in"));
    const std::string expected = read_file(golden("env_session.out"));

    boost::asio::io_context io;
    auto talk = [&](boost::asio::ip::tcp::socket& s) {
        std::string got;
        boost::asio::streambuf buf;
        std::istringstream lines(script);
        std::string line;
        while (std::getline(lines, line)) {
            boost::asio::write(s, boost::asio::buffer(line + "\n"));
            boost::asio::read_until(s, buf, '\n');
            std::istream in(&buf);
            std::string reply;
            std::getline(in, reply);
            got += reply + "\n";
        }
        return got;
    };
    const boost::asio::ip::tcp::endpoint ep(boost::asio::ip::address_v4::loopback(), server.port());
    boost::asio::ip::tcp::socket a(io), b(io);
    a.connect(ep);
    b.connect(ep);
    // interleave two sessions; each must see its own fresh environment
    boost::asio::write(a, boost::asio::buffer(std::string(R"({"t":"reset","seed":7,"n_agents":1,"width":60,"height":60})") + "\n"));
    CHECK(talk(b) == expected);
    boost::asio::streambuf buf;
    boost::asio::read_until(a, buf, '\n');
    std::istream in(&buf);
    std::string first;
    std::getline(in, first);
    CHECK(ojson::parse(first)["t"] == "obs");
    a.close();
    b.close();
    server.stop();
}
