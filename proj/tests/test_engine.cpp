#include "doctest.h"
#include "manetsim/engine.hpp"

using namespace manet;

TEST_CASE("events dispatch in time order") {
    Engine e;
    std::vector<int> order;
    e.schedule(5.0, [&] { order.push_back(5); });
    e.schedule(3.0, [&] { order.push_back(3); });
    e.run_until(10.0);
    CHECK(order == std::vector<int>{3, 5});
}

TEST_CASE("equal fire times dispatch FIFO") {
    Engine e;
    std::vector<char> order;
    e.schedule(7.0, [&] { order.push_back('A'); });
    e.schedule(7.0, [&] { order.push_back('B'); });
    e.run_until(7.0);
    CHECK(order == std::vector<char>{'A', 'B'});
}

TEST_CASE("scheduling into the past is rejected") {
    Engine e;
    e.schedule(2.0, [] {});
    e.run_until(2.0);
    CHECK_THROWS_WITH_AS(e.schedule(1.0, [] {}), "past event", std::invalid_argument);
    // scheduling at the current instant is allowed
    CHECK_NOTHROW(e.schedule(2.0, [] {}));
}

TEST_CASE("cancel semantics") {
    Engine e;
    bool fired = false;
    EventHandle pending = e.schedule(1.0, [&] { fired = true; });
    EventHandle will_fire = e.schedule(2.0, [] {});
    CHECK(e.cancel(pending));
    CHECK_FALSE(e.cancel(pending)); // removal is idempotent
    e.run_until(3.0);
    CHECK_FALSE(fired);
    CHECK_FALSE(e.cancel(will_fire)); // already fired
}

TEST_CASE("run_until drains events at or before t_end") {
    Engine e;
    SUBCASE("empty queue") {
        CHECK(e.run_until(200.0) == 0);
        CHECK(e.now() == 200.0);
    }
    SUBCASE("partial drain") {
        int n = 0;
        e.schedule(1.0, [&] { ++n; });
        e.schedule(2.0, [&] { ++n; });
        e.schedule(3.0, [&] { ++n; });
        CHECK(e.run_until(2.5) == 2);
        CHECK(n == 2);
        CHECK(e.now() == 2.5);
        CHECK(e.run_until(3.0) == 1);
    }
}

TEST_CASE("self-scheduling chain") {
    Engine e;
    // each handler schedules one successor one second later, from t = 0
    std::function<void()> step = [&] {
        if (e.now() + 1.0 <= 20.0)
            e.schedule(e.now() + 1.0, step);
    };
    e.schedule(1.0, step);
    CHECK(e.run_until(10.0) == 10); // events at 1..10
}

TEST_CASE("clock never decreases while dispatching") {
    Engine e;
    SimTime last = 0.0;
    for (double t : {4.0, 1.0, 3.0, 1.0, 9.0})
        e.schedule(t, [&, t] {
            CHECK(e.now() == t);
            CHECK(e.now() >= last);
            last = e.now();
        });
    e.run_until(10.0);
    CHECK(e.now() == 10.0);
}
