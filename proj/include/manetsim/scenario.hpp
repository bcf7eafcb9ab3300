#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "manetsim/frame.hpp"
#include "manetsim/ledger.hpp"

namespace manet {

enum class Protocol { kTora, kPdsr, kDsr };
const char* protocol_name(Protocol p);

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scenario file contents: `key = value` lines, `#` comments, exactly the
/// documented keys accepted. Unset keys take the defaults below.
struct Scenario {
    Protocol protocol = Protocol::kPdsr;
    int nodes = 50;
    double area_x = 500.0;
    double area_y = 500.0;
    double range_m = 250.0;
    double bandwidth_bps = 2e6;
    double duration_s = 200.0;
    std::uint64_t seed = 1;
    double speed_min = 1.0;
    double speed_max = 5.0;
    double pause_s = 0.0;
    int flows = 1;
    std::vector<NodeId> flow_src; // optional explicit endpoints
    std::vector<NodeId> flow_dst;
    std::uint32_t cbr_payload_bytes = 512;
    double cbr_interval_s = 0.25;
    double pdsr_q_s = 0.1;
    double pdsr_T = 1.5;
    double ack_timeout_factor = 3.0;
    int buffer_packets = 64;
    FrameSizes sizes;

    /// "slow" / "fast" when the range matches a preset, else "custom".
    std::string speed_class() const;
    static void speed_class_range(const std::string& cls, double& lo, double& hi);

    std::string emit() const; // canonical key=value form; parse(emit(s)) == s
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Flow endpoints: explicit lists first, the rest drawn from the scenario
/// RNG ("flows" substream), sources and sinks distinct per flow.
std::vector<FlowSpec> scenario_flows(const Scenario& sc);

} // namespace manet
