#include "doctest.h"
#include "manetsim/medium.hpp"
#include "support.hpp"

using namespace manet;
using namespace manet::test;

namespace {

struct Net {
    Engine engine;
    PositionOracle positions;
    MetricLedger ledger;
    TraceWriter trace;
    Medium medium;
    std::vector<std::tuple<NodeId, NodeId, SimTime>> rx;   // (to, from, t)
    std::vector<std::pair<NodeId, NodeId>> failures;       // (sender, next_hop)

    explicit Net(std::vector<Trajectory> trajs, double range = 250.0, double bw = 2e6)
        : positions(std::move(trajs)), medium(engine, positions, ledger, trace, range, bw) {
        ledger.set_node_count(positions.node_count());
        medium.set_handlers(
            [this](NodeId to, const Frame&, NodeId from) {
                rx.emplace_back(to, from, engine.now());
            },
            [this](NodeId sender, NodeId next_hop, const Frame&) {
                failures.emplace_back(sender, next_hop);
            });
    }
    Frame data_frame(NodeId src, std::uint32_t bytes) {
        Frame f;
        f.kind = FrameKind::kData;
        f.src = src;
        f.size_bytes = bytes;
        DataBody b;
        b.flow_src = src;
        f.body = b;
        return f;
    }
};

} // namespace

TEST_CASE("in_range is inclusive at the boundary") {
    CHECK(Medium::in_range({0, 0}, {0, 0}, 250.0));
    CHECK(Medium::in_range({0, 0}, {250, 0}, 250.0));
    CHECK(Medium::in_range({0, 0}, {150, 200}, 250.0)); // 3-4-5 triangle, exactly 250
    CHECK_FALSE(Medium::in_range({0, 0}, {250.0001, 0}, 250.0));
}

TEST_CASE("strength is inverse-square, normalized at the boundary") {
    CHECK(Medium::strength({0, 0}, {250, 0}, 250.0) == doctest::Approx(1.0));
    CHECK(Medium::strength({0, 0}, {125, 0}, 250.0) == doctest::Approx(4.0));
    CHECK(Medium::strength({0, 0}, {204.1, 0}, 250.0) == doctest::Approx(1.5).epsilon(1e-3));
    // boundary consistency with the inclusive range convention
    CHECK(Medium::strength({0, 0}, {250, 0}, 250.0) >= 1.0);
    CHECK(Medium::in_range({0, 0}, {250, 0}, 250.0));
}

TEST_CASE("broadcast delivers to every node in range after the transmission delay") {
    Net net({still(0, 0), still(100, 0), still(0, 100), still(-100, 0), still(600, 600)});
    net.engine.schedule(0.0, [&] { net.medium.broadcast(0, net.data_frame(0, 1000)); });
    net.engine.run_until(1.0);
    REQUIRE(net.rx.size() == 3); // node 4 is out of range
    for (auto& [to, from, t] : net.rx) {
        CHECK(from == 0);
        CHECK(t == doctest::Approx(0.004)); // 8000 bits / 2 Mbps
    }
}

TEST_CASE("broadcast with no neighbors completes silently") {
    Net net({still(0, 0), still(900, 900)});
    net.engine.schedule(0.0, [&] { net.medium.broadcast(0, net.data_frame(0, 1000)); });
    net.engine.run_until(1.0);
    CHECK(net.rx.empty());
    CHECK(net.failures.empty());
    // nobody heard it, so it does not count as successfully sent
    CHECK(net.ledger.node_counters()[0].data_bytes_tx_orig == 0);
}

TEST_CASE("neighborhood serialization: a crowded forwarder waits its turn") {
    // A(0) at the center, B(1), D(2), E(3) mutually in range. After A's
    // broadcast, D and E request the channel before B: B transmits last.
    Net net({still(0, 0), still(100, 0), still(0, 100), still(-100, 0)});
    net.engine.schedule(0.0, [&] { net.medium.broadcast(0, net.data_frame(0, 1000)); });
    net.engine.schedule(0.004, [&] {
        net.medium.broadcast(2, net.data_frame(2, 1000)); // D
        net.medium.broadcast(3, net.data_frame(3, 1000)); // E
        net.medium.broadcast(1, net.data_frame(1, 1000)); // B
    });
    net.engine.run_until(1.0);
    SimTime b_done = -1, d_done = -1, e_done = -1;
    for (auto& [to, from, t] : net.rx) {
        (void)to;
        if (from == 1)
            b_done = std::max(b_done, t);
        if (from == 2)
            d_done = std::max(d_done, t);
        if (from == 3)
            e_done = std::max(e_done, t);
    }
    CHECK(d_done == doctest::Approx(0.008));
    CHECK(e_done == doctest::Approx(0.012));
    CHECK(b_done == doctest::Approx(0.016)); // waited for the other two
}

TEST_CASE("disjoint neighborhoods transmit concurrently") {
    Net net({still(0, 0), still(100, 0), still(5000, 0), still(5100, 0)});
    net.engine.schedule(0.0, [&] {
        net.medium.broadcast(0, net.data_frame(0, 1000));
        net.medium.broadcast(2, net.data_frame(2, 1000));
    });
    net.engine.run_until(1.0);
    REQUIRE(net.rx.size() == 2);
    CHECK(std::get<2>(net.rx[0]) == doctest::Approx(0.004));
    CHECK(std::get<2>(net.rx[1]) == doctest::Approx(0.004));
}

TEST_CASE("unicast delivery and link failure") {
    SUBCASE("next hop in range") {
        Net net({still(0, 0), still(200, 0)});
        net.engine.schedule(0.0, [&] { net.medium.unicast(0, 1, net.data_frame(0, 1000)); });
        net.engine.run_until(1.0);
        REQUIRE(net.rx.size() == 1);
        CHECK(net.failures.empty());
    }
    SUBCASE("next hop out of range") {
        Net net({still(0, 0), still(300, 0)});
        net.engine.schedule(0.0, [&] { net.medium.unicast(0, 1, net.data_frame(0, 1000)); });
        net.engine.run_until(1.0);
        CHECK(net.rx.empty());
        REQUIRE(net.failures.size() == 1);
        CHECK(net.failures[0] == std::pair<NodeId, NodeId>{0, 1});
    }
    SUBCASE("next hop leaves range mid-transmission") {
        // at 50 m/s the receiver crosses the 250 m boundary inside the
        // 4 ms transmission window; range is evaluated at completion
        Net net({still(0, 0), drift({249.9, 0}, {50, 0}, 0.0, 1.0)});
        net.engine.schedule(0.0, [&] { net.medium.unicast(0, 1, net.data_frame(0, 1000)); });
        net.engine.run_until(1.0);
        CHECK(net.rx.empty());
        REQUIRE(net.failures.size() == 1);
    }
}
