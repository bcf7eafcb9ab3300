#include "doctest.h"
#include "manetsim/metrics.hpp"

using namespace manet;

namespace {

FlowSpec flow(int id, NodeId src, NodeId dst) {
    FlowSpec f;
    f.id = id;
    f.src = src;
    f.dst = dst;
    return f;
}

// generate `sent` packets on a flow, deliver the first `recv` of them
void fill_flow(MetricLedger& l, const FlowSpec& f, int sent, int recv, double delay = 0.01,
               std::uint32_t payload = 512, std::uint64_t uid0 = 0) {
    for (int i = 0; i < sent; ++i) {
        std::uint64_t uid = uid0 + static_cast<std::uint64_t>(i);
        double t = 0.1 * i;
        l.on_generated(uid, f.id, f.src, f.dst, payload, t);
        if (i < recv) {
            l.on_departed(uid);
            l.on_delivered(uid, t + delay);
        }
    }
}

} // namespace

TEST_CASE("pdf is the per-flow mean of received over sent") {
    SUBCASE("one perfect flow") {
        MetricLedger l;
        l.set_node_count(2);
        l.add_flow(flow(0, 1, 0));
        fill_flow(l, flow(0, 1, 0), 100, 100);
        CHECK(pdf(l) == doctest::Approx(1.0));
    }
    SUBCASE("two flows, one dead") {
        MetricLedger l;
        l.set_node_count(4);
        l.add_flow(flow(0, 1, 0));
        l.add_flow(flow(1, 3, 2));
        fill_flow(l, flow(0, 1, 0), 100, 100, 0.01, 512, 0);
        fill_flow(l, flow(1, 3, 2), 100, 0, 0.01, 512, 1000);
        CHECK(pdf(l) == doctest::Approx(0.5));
    }
    SUBCASE("three partial flows") {
        MetricLedger l;
        l.set_node_count(6);
        for (int i = 0; i < 3; ++i)
            l.add_flow(flow(i, 2 * i + 1, 2 * i));
        fill_flow(l, flow(0, 1, 0), 100, 90, 0.01, 512, 0);
        fill_flow(l, flow(1, 3, 2), 100, 50, 0.01, 512, 1000);
        fill_flow(l, flow(2, 5, 4), 100, 10, 0.01, 512, 2000);
        CHECK(pdf(l) == doctest::Approx(0.5)); // (0.9 + 0.5 + 0.1) / 3
    }
    SUBCASE("a flow that never sent is excluded and reported") {
        MetricLedger l;
        l.set_node_count(4);
        l.add_flow(flow(0, 1, 0));
        l.add_flow(flow(1, 3, 2));
        fill_flow(l, flow(0, 1, 0), 10, 10);
        int excluded = 0;
        CHECK(pdf(l, &excluded) == doctest::Approx(1.0));
        CHECK(excluded == 1);
    }
}

TEST_CASE("avg_delay over delivered packets only, in ms") {
    MetricLedger l;
    l.set_node_count(2);
    l.add_flow(flow(0, 1, 0));
    SUBCASE("three packets") {
        l.on_generated(1, 0, 1, 0, 512, 0.0);
        l.on_delivered(1, 0.010);
        l.on_generated(2, 0, 1, 0, 512, 1.0);
        l.on_delivered(2, 1.020);
        l.on_generated(3, 0, 1, 0, 512, 2.0);
        l.on_delivered(3, 2.030);
        l.on_generated(4, 0, 1, 0, 512, 3.0); // lost; not included
        CHECK(avg_delay_ms(l).value() == doctest::Approx(20.0));
    }
    SUBCASE("single packet") {
        l.on_generated(1, 0, 1, 0, 512, 0.0);
        l.on_delivered(1, 0.004);
        CHECK(avg_delay_ms(l).value() == doctest::Approx(4.0));
    }
    SUBCASE("zero delivered is not measurable") {
        l.on_generated(1, 0, 1, 0, 512, 0.0);
        CHECK_FALSE(avg_delay_ms(l).has_value());
    }
}

TEST_CASE("throughput counts delivered payload bytes per second") {
    MetricLedger l;
    l.set_node_count(2);
    l.add_flow(flow(0, 1, 0));
    SUBCASE("2 MB over 200 s is 10 kBps") {
        fill_flow(l, flow(0, 1, 0), 4000, 4000, 0.01, 500);
        CHECK(throughput_kBps(l, 200.0) == doctest::Approx(10.0));
    }
    SUBCASE("512 B x 400 packets over 100 s") {
        fill_flow(l, flow(0, 1, 0), 400, 400, 0.01, 512);
        CHECK(throughput_kBps(l, 100.0) == doctest::Approx(2.048));
    }
    SUBCASE("zero delivered is 0.0, not NM") {
        fill_flow(l, flow(0, 1, 0), 10, 0);
        CHECK(throughput_kBps(l, 200.0) == 0.0);
    }
}

namespace {
Frame mk(FrameKind k, NodeId src, std::uint32_t bytes) {
    Frame f;
    f.kind = k;
    f.src = src;
    f.size_bytes = bytes;
    return f;
}
} // namespace

TEST_CASE("the three efficiencies") {
    MetricLedger l;
    l.set_node_count(3); // 0 = sink, 1 = source, 2 = relay
    l.add_flow(flow(0, 1, 0));

    SUBCASE("no control anywhere: all 100") {
        l.on_rx(0, mk(FrameKind::kData, 1, 1000));
        l.on_tx(1, mk(FrameKind::kData, 1, 1000), true);
        auto e = efficiencies(l);
        CHECK(e.recv.value() == doctest::Approx(100.0));
        CHECK(e.send.value() == doctest::Approx(100.0));
        CHECK(e.fwd.value() == doctest::Approx(100.0));
    }
    SUBCASE("sink received 9900 data and 100 control bytes") {
        l.on_rx(0, mk(FrameKind::kData, 1, 9900));
        l.on_rx(0, mk(FrameKind::kRreq, 1, 100));
        CHECK(efficiencies(l).recv.value() == doctest::Approx(99.0));
    }
    SUBCASE("network with a 3:1 control ratio") {
        l.on_tx(1, mk(FrameKind::kData, 1, 30000), true);
        l.on_tx(2, mk(FrameKind::kData, 1, 20000), true);   // forwarded data
        l.on_tx(1, mk(FrameKind::kQry, 1, 50000), true);
        l.on_tx(2, mk(FrameKind::kUpd, 2, 60000), true);
        l.on_tx(0, mk(FrameKind::kClr, 0, 40000), true);
        CHECK(efficiencies(l).fwd.value() == doctest::Approx(25.0));
    }
    SUBCASE("unsuccessful transmissions do not count") {
        l.on_tx(1, mk(FrameKind::kData, 1, 1000), false);
        auto e = efficiencies(l);
        CHECK_FALSE(e.send.has_value());
        CHECK_FALSE(e.fwd.has_value());
    }
    SUBCASE("all NM when nothing moved") {
        auto e = efficiencies(l);
        CHECK_FALSE(e.recv.has_value());
        CHECK_FALSE(e.send.has_value());
        CHECK_FALSE(e.fwd.has_value());
    }
    SUBCASE("forwarded data is excluded from the source numerator") {
        l.on_tx(1, mk(FrameKind::kData, 1, 6000), true); // own data
        l.on_tx(1, mk(FrameKind::kData, 2, 9999), true); // forwarded for node 2
        l.on_tx(1, mk(FrameKind::kRreq, 1, 4000), true);
        CHECK(efficiencies(l).send.value() == doctest::Approx(60.0));
    }
}

TEST_CASE("conservation audit") {
    MetricLedger l;
    l.set_node_count(2);
    l.add_flow(flow(0, 1, 0));
    SUBCASE("all delivered") {
        fill_flow(l, flow(0, 1, 0), 5, 5);
        l.finalize();
        auto a = conservation_audit(l);
        CHECK(a.ok);
        CHECK(a.delivered == 5);
        CHECK(a.drop_source + a.drop_transit == 0);
    }
    SUBCASE("never departed counts at the source") {
        l.on_generated(1, 0, 1, 0, 512, 0.0);
        l.finalize();
        auto a = conservation_audit(l);
        CHECK(a.ok);
        CHECK(a.drop_source == 1);
    }
    SUBCASE("departed but undelivered counts in transit") {
        l.on_generated(1, 0, 1, 0, 512, 0.0);
        l.on_departed(1);
        l.finalize();
        auto a = conservation_audit(l);
        CHECK(a.ok);
        CHECK(a.drop_transit == 1);
    }
    SUBCASE("unfinalized records are unaccounted") {
        l.on_generated(1, 0, 1, 0, 512, 0.0);
        auto a = conservation_audit(l);
        CHECK_FALSE(a.ok);
        CHECK(a.unaccounted == 1);
    }
    SUBCASE("duplicate delivery registers once") {
        l.on_generated(1, 0, 1, 0, 512, 0.0);
        l.on_delivered(1, 0.5);
        l.on_delivered(1, 0.9);
        CHECK(l.records().at(1).delivered_at.value() == 0.5);
    }
}

TEST_CASE("csv row formatting uses NM for non-measurable cells") {
    RunEcho echo{"tora", 10, "fast", 0.0, 1};
    Metrics m;
    m.data_sent = 3;
    m.drop_source = 3;
    std::string row = csv_row(echo, m);
    CHECK(row == "tora,10,fast,0,1,0.00000,0.00000,0.00000,NM,NM,NM,NM,0,0,3,0,3,0");
    CHECK(std::string(kCsvHeader).substr(0, 8) == "protocol");
}
