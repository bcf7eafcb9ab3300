#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "manetsim/medium.hpp"
#include "manetsim/metrics.hpp"
#include "manetsim/pdsr.hpp"
#include "manetsim/scenario.hpp"
#include "manetsim/tora.hpp"

namespace manet {

/// Fully expanded run description. Scenario files lower into this; tests
/// and the acceptance suite can also build one directly with explicit
/// trajectories and flows.
struct SimConfig {
    Protocol protocol = Protocol::kPdsr;
    int nodes = 0;
    double range = 250.0;
    double bandwidth_bps = 2e6;
    SimTime duration = 200.0;
    std::uint64_t seed = 1;
    FieldDim field{500.0, 500.0};
    double v_min = 1.0;
    double v_max = 5.0;
    double pause = 0.0;
    SimTime motion_stop = std::numeric_limits<SimTime>::infinity();
    std::vector<Trajectory> trajectories; // generated from the seed when empty
    std::vector<FlowSpec> flows;
    FrameSizes sizes;
    PdsrParams pdsr;
    int buffer_cap = 64;
    bool collect_trace = false;
    std::string trace_path;
    std::string speed_class = "custom";
};

SimConfig make_config(const Scenario& sc);

class Simulation {
  public:
    explicit Simulation(SimConfig cfg);
    ~Simulation();

    void run(); // executes the whole configured duration

    const RunResult& result() const { return result_; }
    const std::string& trace() const { return trace_.str(); }
    const std::vector<LinkEvent>& links() const { return link_events_; }
    const PositionOracle& positions() const { return *positions_; }
    const MetricLedger& ledger() const { return ledger_; }
    const std::vector<ClrEvent>& clr_events() const { return clr_events_; }
    Engine& engine() { return engine_; }

    ToraRouter* tora(NodeId n);
    PdsrRouter* pdsr(NodeId n);

  private:
    void build();
    void schedule_traffic();
    void traffic_tick(std::size_t flow_idx, std::uint64_t k);

    SimConfig cfg_;
    Engine engine_;
    std::unique_ptr<PositionOracle> positions_;
    MetricLedger ledger_;
    TraceWriter trace_;
    std::unique_ptr<Medium> medium_;
    std::vector<std::unique_ptr<Router>> routers_;
    std::vector<LinkEvent> link_events_;
    std::vector<ClrEvent> clr_events_;
    std::vector<double> route_latencies_;
    std::uint64_t loop_violations_ = 0;
    std::uint64_t next_uid_ = 1;
    RunResult result_;
    bool ran_ = false;
};

/// Parse-level entry point: expand, run, and collect the result.
RunResult run_scenario(const Scenario& sc, const std::string& trace_path = "",
                       std::string* trace_out = nullptr);

std::optional<double> median(std::vector<double> v);

} // namespace manet
