#include <cmath>

#include "doctest.h"
#include "manetsim/mobility.hpp"
#include "manetsim/rng.hpp"

using namespace manet;

TEST_CASE("next_waypoint draws") {
    RngStream rng(7);
    FieldDim field{500, 500};

    SUBCASE("degenerate speed interval") {
        Waypoint w = next_waypoint(rng, field, 5.0, 5.0, 0.0);
        CHECK(w.speed == 5.0);
    }
    SUBCASE("rejects max < min") {
        CHECK_THROWS_AS(next_waypoint(rng, field, 5.0, 4.0, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(next_waypoint(rng, field, 0.0, 4.0, 0.0), std::invalid_argument);
    }
    SUBCASE("destinations are uniform over the field") {
        double sx = 0, sy = 0;
        const int n = 10000;
        for (int i = 0; i < n; ++i) {
            Waypoint w = next_waypoint(rng, field, 1.0, 5.0, 0.0);
            CHECK(w.destination.x >= 0.0);
            CHECK(w.destination.x <= 500.0);
            sx += w.destination.x;
            sy += w.destination.y;
        }
        // 3 standard errors on the mean of U(0,500): 3 * (500/sqrt(12)) / 100
        double tol = 3.0 * (500.0 / std::sqrt(12.0)) / std::sqrt(static_cast<double>(n));
        CHECK(std::abs(sx / n - 250.0) < tol);
        CHECK(std::abs(sy / n - 250.0) < tol);
    }
    SUBCASE("zero pause never rests") {
        Trajectory tr =
            random_waypoint_trajectory(rng, Vec2{10, 10}, field, 1.0, 5.0, 0.0, 100.0);
        for (const Segment& s : tr.segments)
            if (s.t1 <= 100.0)
                CHECK(s.vel.norm2() > 0.0);
    }
}

TEST_CASE("position_at interpolates linearly and clamps during pause") {
    Trajectory tr;
    tr.segments.push_back(Segment{0.0, 10.0, {0, 0}, {10, 0}});   // to (100,0) at 10 m/s
    tr.segments.push_back(Segment{10.0, 14.0, {100, 0}, {0, 0}}); // 4 s pause
    tr.segments.push_back(
        Segment{14.0, std::numeric_limits<SimTime>::infinity(), {100, 0}, {0, 0}});

    Vec2 mid = tr.position_at(5.0);
    CHECK(mid.x == doctest::Approx(50.0));
    CHECK(mid.y == doctest::Approx(0.0));
    Vec2 paused = tr.position_at(12.0); // travel time + pause/2
    CHECK(paused.x == doctest::Approx(100.0));
    CHECK(paused.y == doctest::Approx(0.0));
}

TEST_CASE("position_at on a 3-4-5 leg") {
    Trajectory tr;
    Vec2 dir{30.0 / 50.0 * 5.0, 40.0 / 50.0 * 5.0}; // speed 5 toward (30,40)
    tr.segments.push_back(Segment{0.0, 10.0, {0, 0}, dir});
    tr.segments.push_back(
        Segment{10.0, std::numeric_limits<SimTime>::infinity(), {30, 40}, {0, 0}});
    Vec2 p = tr.position_at(5.0); // half of the 10 s travel
    CHECK(p.x == doctest::Approx(15.0));
    CHECK(p.y == doctest::Approx(20.0));
}

TEST_CASE("link events are exact crossings") {
    SUBCASE("stationary pair inside range: no events") {
        std::vector<Trajectory> trajs{Trajectory::stationary({0, 0}),
                                      Trajectory::stationary({100, 0})};
        CHECK(link_events(trajs, 250.0, 100.0).empty());
    }
    SUBCASE("outbound crossing") {
        std::vector<Trajectory> trajs{Trajectory::stationary({0, 0}), Trajectory{}};
        trajs[1].segments.push_back(Segment{0.0, 10.0, {200, 0}, {10, 0}});
        trajs[1].segments.push_back(
            Segment{10.0, std::numeric_limits<SimTime>::infinity(), {300, 0}, {0, 0}});
        auto evs = link_events(trajs, 250.0, 100.0);
        REQUIRE(evs.size() == 1);
        CHECK(evs[0].t == doctest::Approx(5.0).epsilon(1e-12));
        CHECK(evs[0].a == 0);
        CHECK(evs[0].b == 1);
        CHECK_FALSE(evs[0].up);
    }
    SUBCASE("inbound crossing is symmetric") {
        std::vector<Trajectory> trajs{Trajectory::stationary({0, 0}), Trajectory{}};
        trajs[1].segments.push_back(Segment{0.0, 10.0, {300, 0}, {-10, 0}});
        trajs[1].segments.push_back(
            Segment{10.0, std::numeric_limits<SimTime>::infinity(), {200, 0}, {0, 0}});
        auto evs = link_events(trajs, 250.0, 100.0);
        REQUIRE(evs.size() == 1);
        CHECK(evs[0].t == doctest::Approx(5.0).epsilon(1e-12));
        CHECK(evs[0].up);
    }
}

TEST_CASE("parallel kernel matches the serial reference") {
    RngStream rng(99);
    FieldDim field{500, 500};
    std::vector<Trajectory> trajs;
    for (int i = 0; i < 25; ++i) {
        Vec2 start{rng.uniform(0.0, 500.0), rng.uniform(0.0, 500.0)};
        trajs.push_back(random_waypoint_trajectory(rng, start, field, 1.0, 20.0, 5.0, 120.0));
    }
    auto serial = link_events_serial(trajs, 250.0, 120.0);
    auto parallel = link_events(trajs, 250.0, 120.0);
    CHECK(serial.size() == parallel.size());
    CHECK(serial == parallel);
    CHECK(!serial.empty());
}

TEST_CASE("events partition time into constant-predicate intervals") {
    RngStream rng(3);
    FieldDim field{400, 400};
    std::vector<Trajectory> trajs;
    for (int i = 0; i < 6; ++i) {
        Vec2 start{rng.uniform(0.0, 400.0), rng.uniform(0.0, 400.0)};
        trajs.push_back(random_waypoint_trajectory(rng, start, field, 2.0, 10.0, 3.0, 60.0));
    }
    const double range = 150.0;
    auto evs = link_events(trajs, range, 60.0);
    // replay the event stream against sampled ground truth
    std::map<std::pair<int, int>, bool> state;
    for (int a = 0; a < 6; ++a)
        for (int b = a + 1; b < 6; ++b)
            state[{a, b}] =
                distance(trajs[a].position_at(0), trajs[b].position_at(0)) <= range;
    std::size_t idx = 0;
    for (double t = 0.005; t < 60.0; t += 0.489) {
        while (idx < evs.size() && evs[idx].t <= t) {
            auto key = std::make_pair(evs[idx].a, evs[idx].b);
            CHECK(state[key] != evs[idx].up); // each event flips its pair
            state[key] = evs[idx].up;
            ++idx;
        }
        for (auto& [pair, in] : state) {
            bool truth = distance(trajs[pair.first].position_at(t),
                                  trajs[pair.second].position_at(t)) <= range;
            CHECK(truth == in);
        }
    }
}
