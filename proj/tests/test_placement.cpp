#include <doctest.h>

#include <cmath>

#include "lcx/placement.hpp"

using namespace lcx;

namespace {

// Oracle: brute-force list of free samples with no landmark within r in sight.
std::size_t uncovered_bruteforce(const World& w, const std::vector<LandmarkInstance>& lms, double r) {
    std::size_t n = 0;
    const int nx = static_cast<int>(w.config().width);
    const int ny = static_cast<int>(w.config().height);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const Vec2 t{i + 0.5, j + 0.5};
            if (!w.point_free(t)) continue;
            bool seen = false;
            for (const auto& l : lms) {
                if (l.destroyed) continue;
                if (distance(l.position, t) <= r && w.line_of_sight(l.position, t)) {
                    seen = true;
                    break;
                }
            }
            n += !seen;
        }
    }
    return n;
}

WorldConfig sized(double w, double h) {
    WorldConfig c;
    c.width = w;
    c.height = h;
    return c;
}

}  // namespace

TEST_CASE("empty arena is fully covered at the last radius") {
    const World w(WorldConfig{}, {});
    const auto lms = place_landmarks_lpa(w, PlacementConfig{});
    CHECK(coverage_check(w, lms, 15.0).empty());
    CHECK(uncovered_bruteforce(w, lms, 15.0) == 0);
    for (std::size_t i = 0; i < lms.size(); ++i) CHECK(lms[i].id == i);
    CHECK(lms.size() > 40);
}

TEST_CASE("a small arena needs exactly one landmark") {
    // diagonal of a 10x10 arena is under 15 m, so one disk sees everything
    const World w(sized(10, 10), {});
    const auto lms = place_landmarks_lpa(w, PlacementConfig{});
    REQUIRE(lms.size() == 1);
    CHECK(lms[0].position == Vec2{0.5, 0.5});  // every sample ties; lowest (y, x) wins
    PlacementConfig one;
    one.radii = {15.0};
    const World w20(sized(20, 20), {});
    CHECK(place_landmarks_lpa(w20, one).size() >= 1);
}

TEST_CASE("a wall forces landmarks on both sides") {
    const World w(sized(60, 30), {{29.0, 0.0, 2.0, 30.0}});
    const auto lms = place_landmarks_lpa(w, PlacementConfig{});
    const bool left = std::any_of(lms.begin(), lms.end(), [](const auto& l) { return l.position.x < 29; });
    const bool right = std::any_of(lms.begin(), lms.end(), [](const auto& l) { return l.position.x > 31; });
    CHECK(left);
    CHECK(right);
    CHECK(uncovered_bruteforce(w, lms, 15.0) == 0);
}

TEST_CASE("coverage check edge cases") {
    const World w(sized(30, 20), {{10, 5, 5, 5}});
    const auto all_free = coverage_check(w, {}, 15.0);
    std::size_t free_count = 0;
    for (int j = 0; j < 20; ++j)
        for (int i = 0; i < 30; ++i) free_count += w.point_free({i + 0.5, j + 0.5});
    CHECK(all_free.size() == free_count);

    auto lms = place_landmarks_lpa(w, PlacementConfig{});
    CHECK(coverage_check(w, lms, 15.0).empty());
    for (auto& l : lms) l.destroyed = true;
    CHECK(coverage_check(w, lms, 15.0).size() == free_count);
}

TEST_CASE("placement is deterministic and each pass extends the previous") {
    const World w(sized(80, 60), {{20, 10, 8, 30}, {50, 30, 20, 6}});
    const auto a = place_landmarks_lpa(w, PlacementConfig{});
    const auto b = place_landmarks_lpa(w, PlacementConfig{});
    CHECK(a == b);
    PlacementConfig first;
    first.radii = {50.0, 23.0};
    const auto prefix = place_landmarks_lpa(w, first);
    REQUIRE(prefix.size() <= a.size());
    for (std::size_t i = 0; i < prefix.size(); ++i) CHECK(prefix[i] == a[i]);
    CHECK(coverage_check(w, prefix, 23.0).empty());
}

TEST_CASE("placement errors") {
    const World full(sized(20, 20), {{0, 0, 20, 20}});
    try {
        place_landmarks_lpa(full, PlacementConfig{});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NoFreeSpace);
    }
    PlacementConfig bad;
    bad.radii = {23.0, 50.0};
    CHECK_THROWS_AS(bad.validate(WorldConfig{}), Error);
    bad.radii = {50.0, 10.0};
    CHECK_THROWS_AS(bad.validate(WorldConfig{}), Error);
}

TEST_CASE("destruction") {
    std::vector<LandmarkInstance> lms;
    for (LandmarkId i = 0; i < 1000; ++i) lms.push_back({i, {0, 0}, false});
    Rng rng(1);
    auto none = lms;
    CHECK(destroy_landmarks(none, 0.0, rng).destroyed.empty());
    auto all = lms;
    CHECK(destroy_landmarks(all, 1.0, rng).remaining.empty());

    // binomial mean 200, sd ~12.6 per draw; average of 50 seeds has sd ~1.8
    double total = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto copy = lms;
        Rng r(seed);
        const auto res = destroy_landmarks(copy, 0.2, r);
        CHECK(res.remaining.size() + res.destroyed.size() == 1000);
        total += static_cast<double>(res.destroyed.size());
    }
    CHECK(std::abs(total / 50.0 - 200.0) < 4 * 1.8);

    auto again1 = lms;
    auto again2 = lms;
    Rng r1(9), r2(9);
    CHECK(destroy_landmarks(again1, 0.3, r1).destroyed == destroy_landmarks(again2, 0.3, r2).destroyed);
    CHECK_THROWS_AS(destroy_landmarks(again1, 1.5, r1), Error);
}
