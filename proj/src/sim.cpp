#include "manetsim/sim.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>

#include "manetsim/rng.hpp"

namespace manet {

std::optional<double> median(std::vector<double> v) {
    if (v.empty())
        return std::nullopt;
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    if (n % 2 == 1)
        return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

SimConfig make_config(const Scenario& sc) {
    SimConfig c;
    c.protocol = sc.protocol;
    c.nodes = sc.nodes;
    c.range = sc.range_m;
    c.bandwidth_bps = sc.bandwidth_bps;
    c.duration = sc.duration_s;
    c.seed = sc.seed;
    c.field = FieldDim{sc.area_x, sc.area_y};
    c.v_min = sc.speed_min;
    c.v_max = sc.speed_max;
    c.pause = sc.pause_s;
    c.flows = scenario_flows(sc);
    c.sizes = sc.sizes;
    c.pdsr.q = sc.pdsr_q_s;
    c.pdsr.threshold = sc.pdsr_T;
    c.pdsr.ack_timeout_factor = sc.ack_timeout_factor;
    c.pdsr.dsr_baseline = (sc.protocol == Protocol::kDsr);
    c.buffer_cap = sc.buffer_packets;
    c.speed_class = sc.speed_class();
    return c;
}

Simulation::Simulation(SimConfig cfg) : cfg_(std::move(cfg)) { build(); }
Simulation::~Simulation() = default;

ToraRouter* Simulation::tora(NodeId n) {
    return dynamic_cast<ToraRouter*>(routers_.at(static_cast<std::size_t>(n)).get());
}

PdsrRouter* Simulation::pdsr(NodeId n) {
    return dynamic_cast<PdsrRouter*>(routers_.at(static_cast<std::size_t>(n)).get());
}

void Simulation::build() {
    if (cfg_.collect_trace)
        trace_.collect_to_string();
    if (!cfg_.trace_path.empty())
        trace_.open_file(cfg_.trace_path);

    if (cfg_.trajectories.empty()) {
        RngStream rng = RngStream(cfg_.seed).substream("mobility");
        for (int i = 0; i < cfg_.nodes; ++i) {
            Vec2 start{rng.uniform(0.0, cfg_.field.width), rng.uniform(0.0, cfg_.field.height)};
            cfg_.trajectories.push_back(random_waypoint_trajectory(
                rng, start, cfg_.field, cfg_.v_min, cfg_.v_max, cfg_.pause,
                std::min(cfg_.motion_stop, cfg_.duration)));
        }
    }
    cfg_.nodes = static_cast<int>(cfg_.trajectories.size());
    positions_ = std::make_unique<PositionOracle>(cfg_.trajectories);

    ledger_.set_node_count(cfg_.nodes);
    for (const auto& f : cfg_.flows)
        ledger_.add_flow(f);

    medium_ = std::make_unique<Medium>(engine_, *positions_, ledger_, trace_, cfg_.range,
                                       cfg_.bandwidth_bps);

    RouterContext ctx;
    ctx.engine = &engine_;
    ctx.medium = medium_.get();
    ctx.ledger = &ledger_;
    ctx.trace = &trace_;
    ctx.sizes = cfg_.sizes;
    ctx.bandwidth_bps = cfg_.bandwidth_bps;
    ctx.buffer_cap = cfg_.buffer_cap;
    for (const auto& f : cfg_.flows)
        ctx.flow_pairs.insert({f.src, f.dst});
    ctx.clr_events = &clr_events_;
    ctx.route_latencies = &route_latencies_;
    ctx.loop_violations = &loop_violations_;

    // ground-truth connectivity: initial adjacency plus exact crossings
    link_events_ = link_events(cfg_.trajectories, cfg_.range, cfg_.duration);
    std::vector<std::vector<NodeId>> initial(static_cast<std::size_t>(cfg_.nodes));
    for (auto [a, b] : adjacency_at(cfg_.trajectories, cfg_.range, 0.0)) {
        initial[static_cast<std::size_t>(a)].push_back(b);
        initial[static_cast<std::size_t>(b)].push_back(a);
    }

    PdsrParams pp = cfg_.pdsr;
    for (NodeId n = 0; n < cfg_.nodes; ++n) {
        if (cfg_.protocol == Protocol::kTora)
            routers_.push_back(std::make_unique<ToraRouter>(n, ctx, initial[static_cast<std::size_t>(n)]));
        else
            routers_.push_back(std::make_unique<PdsrRouter>(n, ctx, pp));
    }

    medium_->set_handlers(
        [this](NodeId to, const Frame& f, NodeId from) {
            routers_[static_cast<std::size_t>(to)]->on_receive(f, from);
        },
        [this](NodeId sender, NodeId next_hop, const Frame& f) {
            routers_[static_cast<std::size_t>(sender)]->on_unicast_failed(f, next_hop);
        });

    for (const LinkEvent& ev : link_events_) {
        engine_.schedule(ev.t, [this, ev] {
            trace_.link(ev.t, ev.a, ev.b, ev.up);
            auto& ra = routers_[static_cast<std::size_t>(ev.a)];
            auto& rb = routers_[static_cast<std::size_t>(ev.b)];
            if (ev.up) {
                ra->on_link_up(ev.b);
                rb->on_link_up(ev.a);
            } else {
                ra->on_link_down(ev.b);
                rb->on_link_down(ev.a);
            }
        });
    }

    schedule_traffic();
}

void Simulation::schedule_traffic() {
    for (std::size_t i = 0; i < cfg_.flows.size(); ++i) {
        const FlowSpec& f = cfg_.flows[i];
        if (f.start < f.stop)
            engine_.schedule(f.start, [this, i] { traffic_tick(i, 0); });
    }
}

void Simulation::traffic_tick(std::size_t flow_idx, std::uint64_t k) {
    const FlowSpec& f = cfg_.flows[flow_idx];
    SimTime t = engine_.now();
    std::uint64_t uid = next_uid_++;
    ledger_.on_generated(uid, f.id, f.src, f.dst, f.payload, t);
    trace_.gen(t, f.src, uid, f.id, f.payload);
    routers_[static_cast<std::size_t>(f.src)]->send_data(f, uid);
    SimTime next = f.start + static_cast<double>(k + 1) * f.interval;
    if (next < f.stop && next <= cfg_.duration)
        engine_.schedule(next, [this, flow_idx, k] { traffic_tick(flow_idx, k + 1); });
}

void Simulation::run() {
    if (ran_)
        return;
    ran_ = true;
    if (trace_.enabled()) {
        char buf[256];
        std::snprintf(buf, sizeof(buf),
                      "# scenario protocol=%s nodes=%d speed_class=%s pause_s=%g seed=%" PRIu64
                      " duration_s=%.6f",
                      protocol_name(cfg_.protocol), cfg_.nodes, cfg_.speed_class.c_str(),
                      cfg_.pause, cfg_.seed, cfg_.duration);
        trace_.raw(buf);
        for (const auto& f : cfg_.flows) {
            std::snprintf(buf, sizeof(buf),
                          "# flow id=%d src=%d dst=%d payload=%u interval=%.6f start=%.6f "
                          "stop=%.6f",
                          f.id, f.src, f.dst, f.payload, f.interval, f.start, f.stop);
            trace_.raw(buf);
        }
    }
    engine_.run_until(cfg_.duration);
    for (auto& r : routers_)
        r->finish();
    ledger_.finalize();

    result_.echo.protocol = protocol_name(cfg_.protocol);
    result_.echo.nodes = cfg_.nodes;
    result_.echo.speed_class = cfg_.speed_class;
    result_.echo.pause_s = cfg_.pause;
    result_.echo.seed = cfg_.seed;
    result_.metrics = compute_metrics(ledger_, cfg_.duration);
    result_.audit = conservation_audit(ledger_);
    result_.route_latency_s = median(route_latencies_);
    result_.loop_violations = loop_violations_;
    result_.clr_count = clr_events_.size();

    if (trace_.enabled()) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "# end t=%.6f", cfg_.duration);
        trace_.raw(buf);
    }
}

RunResult run_scenario(const Scenario& sc, const std::string& trace_path,
                       std::string* trace_out) {
    SimConfig cfg = make_config(sc);
    cfg.trace_path = trace_path;
    cfg.collect_trace = trace_out != nullptr;
    Simulation sim(std::move(cfg));
    sim.run();
    if (trace_out)
        *trace_out = sim.trace();
    return sim.result();
}

} // namespace manet
