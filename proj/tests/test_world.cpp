#include <doctest.h>

#include <cmath>

#include "lcx/world.hpp"
#include "lcx/world_io.hpp"

using namespace lcx;

namespace {

const KnownPredicate kNothingKnown = [](LandmarkId) { return false; };

World open_world(std::vector<Obstacle> obstacles = {}, std::vector<LandmarkInstance> landmarks = {}) {
    return World(WorldConfig{}, std::move(obstacles), std::move(landmarks));
}

// Oracle: sample the closed segment densely and test interior membership.
bool sampled_blocked(Vec2 p, Vec2 q, const Obstacle& o) {
    for (int k = 0; k <= 4000; ++k) {
        const double t = k / 4000.0;
        if (o.contains_interior(p + (q - p) * t)) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("free-space Euler step") {
    World w = open_world();
    w.set_agents({{{50.0, 50.0}, 0.0, true}});
    const Action a{1.0, 0.0, 0.0, false};
    const auto flags = w.step(std::span(&a, 1));
    CHECK(w.agents()[0].position.x == doctest::Approx(50.1).epsilon(1e-12));
    CHECK(w.agents()[0].position.y == 50.0);
    CHECK_FALSE(flags[0]);
}

TEST_CASE("clamp against an obstacle face") {
    // obstacle face at x = 100; agent centre 0.55 m from it, radius 0.5, so a
    // 0.2 m step would penetrate and is clamped to 0.5 m centre clearance
    World w = open_world({{100.0, 40.0, 10.0, 20.0}});
    w.set_agents({{{100.0 - 0.55, 50.0}, 0.0, true}});
    const Action a{2.0, 0.0, 0.0, false};
    const auto flags = w.step(std::span(&a, 1));
    const double clearance = 100.0 - w.agents()[0].position.x;
    CHECK(clearance == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(flags[0]);

    // sliding: pushing diagonally keeps the tangential component
    const Action diag{2.0, 2.0, 0.0, false};
    const auto again = w.step(std::span(&diag, 1));
    CHECK(again[0]);
    CHECK(100.0 - w.agents()[0].position.x == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(w.agents()[0].position.y == doctest::Approx(50.2).epsilon(1e-12));
}

TEST_CASE("arena boundary clamps and flags") {
    World w = open_world();
    w.set_agents({{{0.6, 10.0}, 0.0, true}});
    const Action a{-2.0, 0.0, 0.0, false};
    CHECK(w.step(std::span(&a, 1))[0]);
    CHECK(w.agents()[0].position.x == doctest::Approx(0.5));
}

TEST_CASE("head-on agents are both flagged and never overlap") {
    World w = open_world();
    w.set_agents({{{50.0, 50.0}, 0.0, true}, {{51.2, 50.0}, 0.0, true}});
    const std::vector<Action> actions{{2.0, 0.0, 0.0, false}, {-2.0, 0.0, 0.0, false}};
    const auto flags = w.step(actions);
    CHECK(flags[0]);
    CHECK(flags[1]);
    CHECK(distance(w.agents()[0].position, w.agents()[1].position) >= 1.0 - 1e-9);
}

TEST_CASE("action count mismatch") {
    World w = open_world();
    w.set_agents({{{50.0, 50.0}, 0.0, true}});
    std::vector<Action> none;
    try {
        w.step(none);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ActionCountMismatch);
    }
}

TEST_CASE("property: no penetration and determinism under random actions") {
    WorldConfig cfg;
    cfg.width = 60.0;
    cfg.height = 60.0;
    const std::vector<Obstacle> obstacles{{10, 10, 12, 8}, {30, 25, 5, 20}, {45, 5, 10, 10}};
    auto run = [&](std::uint64_t seed) {
        World w(cfg, obstacles);
        Rng rng(seed);
        w.spawn_agents(6, rng);
        std::vector<Vec2> trace;
        for (int t = 0; t < 2000; ++t) {
            std::vector<Action> actions;
            for (int i = 0; i < 6; ++i) {
                actions.push_back({rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-3, 3), false});
            }
            w.step(actions);
            for (const auto& a : w.agents()) {
                trace.push_back(a.position);
                REQUIRE(w.disk_free(a.position, cfg.agent_radius - 1e-9));
            }
            for (std::size_t i = 0; i < w.agents().size(); ++i) {
                for (std::size_t j = i + 1; j < w.agents().size(); ++j) {
                    REQUIRE(distance(w.agents()[i].position, w.agents()[j].position) >=
                            2 * cfg.agent_radius - 1e-9);
                }
            }
        }
        return trace;
    };
    CHECK(run(5) == run(5));
}

TEST_CASE("line of sight") {
    World w = open_world({{10.0, 10.0, 10.0, 10.0}});
    CHECK(w.line_of_sight({3, 3}, {3, 3}));
    CHECK_FALSE(w.line_of_sight({0, 15}, {30, 15}));
    CHECK(w.line_of_sight({0, 0}, {20, 30} ) == !sampled_blocked({0, 0}, {20, 30}, w.obstacles()[0]));
    // grazing the lower-left corner exactly
    CHECK(w.line_of_sight({0, 20}, {20, 0}));
    // running along an edge
    CHECK(w.line_of_sight({0, 10}, {40, 10}));
}

TEST_CASE("segment test agrees with dense sampling oracle") {
    Rng rng(7);
    const Obstacle box{4.0, 3.0, 5.0, 2.5};
    int blocked = 0;
    for (int k = 0; k < 3000; ++k) {
        const Vec2 p{rng.uniform(0, 14), rng.uniform(0, 10)};
        const Vec2 q{rng.uniform(0, 14), rng.uniform(0, 10)};
        if (box.contains_interior(p) || box.contains_interior(q)) continue;
        const bool exact = segment_hits_interior(p, q, box);
        blocked += exact;
        // sampling can miss slivers but can never report a false hit
        if (sampled_blocked(p, q, box)) CHECK(exact);
    }
    CHECK(blocked > 100);
}

TEST_CASE("row shadow matches the pointwise segment test") {
    Rng rng(11);
    const Obstacle box{10.0, 10.0, 6.0, 4.0};
    for (int k = 0; k < 400; ++k) {
        Vec2 p{rng.uniform(0, 30), rng.uniform(0, 30)};
        if (box.contains_interior(p)) continue;
        const double row = std::floor(rng.uniform(0, 30)) + 0.5;
        const auto shadow = row_shadow(p, row, box);
        for (int i = 0; i < 60; ++i) {
            const double x = i * 0.5 + 0.25;
            const bool hit = segment_hits_interior(p, {x, row}, box);
            const bool in = shadow && shadow->lo < x && x < shadow->hi;
            if (shadow && (std::abs(x - shadow->lo) < 1e-6 || std::abs(x - shadow->hi) < 1e-6)) continue;
            CAPTURE(p.x);
            CAPTURE(p.y);
            CAPTURE(row);
            CAPTURE(x);
            CHECK(hit == in);
        }
    }
}

TEST_CASE("sensor grid shape, disk mask and empty reading") {
    World w = open_world();
    w.set_agents({{{100.0, 100.0}, 0.0, true}});
    const auto reading = w.sense(0, kNothingKnown);
    CHECK(reading.side == 31);
    CHECK(reading.grid.size() == 31u * 31u * 4u);
    CHECK(reading.visible_ids.empty());
    CHECK(std::all_of(reading.grid.begin(), reading.grid.end(), [](auto v) { return v == 0; }));
    // disk mask oracle: centre distance in cells <= d/q
    const auto& mask = w.disk_mask();
    std::size_t inside = 0;
    for (int r = 0; r < 31; ++r) {
        for (int c = 0; c < 31; ++c) {
            const bool in = (r - 15) * (r - 15) + (c - 15) * (c - 15) <= 225;
            inside += in;
            CHECK(mask.inside[r * 31 + c] == in);
        }
    }
    CHECK(mask.cells.size() == inside);
}

TEST_CASE("sensor channels, occlusion and heading invariance") {
    const std::vector<LandmarkInstance> landmarks{
        {0, {105.0, 100.0}, false},   // 5 m east, visible
        {1, {110.0, 100.0}, false},   // 10 m east, behind the wall below
        {2, {100.0, 104.0}, true},    // destroyed
        {3, {100.0, 96.0}, false},    // south
        {4, {130.0, 100.0}, false},   // out of range
    };
    World w = open_world({{107.0, 98.0, 1.0, 4.0}}, landmarks);
    w.set_agents({{{100.0, 100.0}, 0.0, true}, {{100.0, 107.0}, 0.0, true}});
    const auto known = [](LandmarkId id) { return id == 3; };
    const auto reading = w.sense(0, known);
    CHECK(reading.visible_ids == std::vector<LandmarkId>{0, 3});
    CHECK(reading.at(15, 20, kUnobservedLandmark) == 1);
    CHECK(reading.at(11, 15, kObservedLandmark) == 1);
    CHECK(reading.at(15, 25, kUnobservedLandmark) == 0);
    CHECK(reading.at(22, 15, kOtherAgent) == 1);
    // cell centres on the wall boundary count as inside
    CHECK(reading.at(15, 22, kObstacleCell) == 1);
    CHECK(reading.at(13, 23, kObstacleCell) == 1);
    CHECK(reading.at(12, 22, kObstacleCell) == 0);
    CHECK(reading.at(15, 24, kObstacleCell) == 0);

    // each cell has at most one channel
    for (int r = 0; r < 31; ++r) {
        for (int c = 0; c < 31; ++c) {
            int set = 0;
            for (int k = 0; k < kSensorChannels; ++k) set += reading.at(r, c, k);
            CHECK(set <= 1);
            if (!w.disk_mask().inside[r * 31 + c]) CHECK(set == 0);
        }
    }

    auto turned = w.agents();
    turned[0].heading = 2.0;
    w.set_agents(turned);
    CHECK(w.sense(0, known).grid == reading.grid);
}

TEST_CASE("sensor translation invariance") {
    const std::vector<Obstacle> obs{{20.0, 20.0, 4.0, 6.0}};
    const std::vector<LandmarkInstance> lms{{0, {30.0, 25.0}, false}, {1, {18.0, 28.0}, false}};
    World a = open_world(obs, lms);
    a.set_agents({{{25.0, 25.0}, 0.0, true}});
    const Vec2 shift{40.0, 17.0};
    std::vector<Obstacle> obs2{{60.0, 37.0, 4.0, 6.0}};
    std::vector<LandmarkInstance> lms2{{0, lms[0].position + shift, false}, {1, lms[1].position + shift, false}};
    World b = open_world(obs2, lms2);
    b.set_agents({{{65.0, 42.0}, 0.0, true}});
    CHECK(a.sense(0, kNothingKnown).grid == b.sense(0, kNothingKnown).grid);
}

TEST_CASE("occupancy") {
    CHECK(open_world().occupancy_percentage() == 0.0);
    CHECK(open_world({{0.0, 0.0, 50.0, 100.0}}).occupancy_percentage() == doctest::Approx(0.125));
    // overlapping obstacles count their union once
    CHECK(open_world({{0, 0, 50, 100}, {0, 0, 50, 100}}).occupancy_percentage() ==
          doctest::Approx(0.125));
}

TEST_CASE("spawning") {
    World w = open_world({{0.0, 0.0, 200.0, 100.0}});
    Rng rng(3);
    const auto& agents = w.spawn_agents(4, rng);
    CHECK(agents.size() == 4);
    for (const auto& a : agents) CHECK(w.disk_free(a.position, 0.5));

    WorldConfig tiny;
    tiny.width = 2.0;
    tiny.height = 2.0;
    tiny.sensor_radius = 1.0;
    tiny.v_max = 1.0;
    World crowded(tiny, {});
    try {
        crowded.spawn_agents(5, rng, 1000);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SpawnFailure);
    }
}

TEST_CASE("invalid config") {
    WorldConfig cfg;
    cfg.sensor_radius = 0.5;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = {};
    cfg.v_max = 200.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("world description round-trips bit-exactly") {
    WorldDescription d;
    d.width = 120.0;
    d.height = 80.0;
    d.obstacles = {{10.25, 3.0, 20.0, 50.125}};
    d.landmarks = {{0, {0.1, 0.2}, false}, {1, {33.3, 44.4}, true}};
    d.seed = 99;
    const std::string text = dump_world(d);
    const auto back = parse_world(text);
    CHECK(dump_world(back) == text);
    CHECK(back.obstacles == d.obstacles);
    CHECK(back.landmarks == d.landmarks);
    CHECK(text.find("\"width\"") < text.find("\"obstacles\""));
    CHECK_THROWS_AS(parse_world("{\"width\": 1"), Error);
}

TEST_CASE("obstacle channel matches a per-cell oracle") {
    Rng rng(13);
    const std::vector<Obstacle> obs{{20.5, 20.0, 7.0, 3.25}, {35.0, 10.0, 2.0, 30.0}, {0.0, 0.0, 3.0, 60.0}};
    World w = open_world(obs);
    for (int k = 0; k < 200; ++k) {
        const Vec2 a{rng.uniform(4, 60), rng.uniform(1, 60)};
        if (!w.disk_free(a, 0.5)) continue;
        w.set_agents({{a, 0.0, true}});
        const auto reading = w.sense(0, kNothingKnown);
        for (int r = 0; r < 31; ++r) {
            for (int c = 0; c < 31; ++c) {
                const Vec2 centre{a.x + (c - 15), a.y + (r - 15)};
                const bool in_disk = (r - 15) * (r - 15) + (c - 15) * (c - 15) <= 225;
                const bool expected = in_disk && std::any_of(obs.begin(), obs.end(),
                                                             [&](const Obstacle& o) { return o.contains(centre); });
                CHECK(reading.at(r, c, kObstacleCell) == expected);
            }
        }
    }
}
