#include "manetsim/scenario.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "manetsim/rng.hpp"

namespace manet {

const char* protocol_name(Protocol p) {
    switch (p) {
    case Protocol::kTora: return "tora";
    case Protocol::kPdsr: return "pdsr";
    case Protocol::kDsr: return "dsr";
    }
    return "?";
}

std::string Scenario::speed_class() const {
    if (speed_min == 1.0 && speed_max == 5.0)
        return "slow";
    if (speed_min == 10.0 && speed_max == 20.0)
        return "fast";
    return "custom";
}

void Scenario::speed_class_range(const std::string& cls, double& lo, double& hi) {
    if (cls == "slow") {
        lo = 1.0;
        hi = 5.0;
    } else if (cls == "fast") {
        lo = 10.0;
        hi = 20.0;
    } else {
        throw ParseError("unknown speed class '" + cls + "'");
    }
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<NodeId> parse_id_list(const std::string& v, int line) {
    std::vector<NodeId> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            continue;
        try {
            out.push_back(std::stoi(item));
        } catch (...) {
            throw ParseError("malformed id list at line " + std::to_string(line));
        }
    }
    return out;
}

} // namespace

Scenario parse_scenario(const std::string& text) {
    Scenario sc;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;

    auto want_double = [&](const std::string& v, const std::string& key) {
        try {
            std::size_t used = 0;
            double d = std::stod(v, &used);
            if (used != v.size())
                throw std::invalid_argument("");
            return d;
        } catch (...) {
            throw ParseError("malformed value for '" + key + "' at line " +
                             std::to_string(lineno));
        }
    };
    auto want_int = [&](const std::string& v, const std::string& key) {
        try {
            std::size_t used = 0;
            long d = std::stol(v, &used);
            if (used != v.size())
                throw std::invalid_argument("");
            return d;
        } catch (...) {
            throw ParseError("malformed value for '" + key + "' at line " +
                             std::to_string(lineno));
        }
    };

    std::map<std::string, std::function<void(const std::string&)>> setters = {
        {"protocol",
         [&](const std::string& v) {
             if (v == "tora")
                 sc.protocol = Protocol::kTora;
             else if (v == "pdsr")
                 sc.protocol = Protocol::kPdsr;
             else if (v == "dsr")
                 sc.protocol = Protocol::kDsr;
             else
                 throw ParseError("unknown protocol '" + v + "' at line " +
                                  std::to_string(lineno));
         }},
        {"nodes", [&](const std::string& v) { sc.nodes = static_cast<int>(want_int(v, "nodes")); }},
        {"area_x", [&](const std::string& v) { sc.area_x = want_double(v, "area_x"); }},
        {"area_y", [&](const std::string& v) { sc.area_y = want_double(v, "area_y"); }},
        {"range_m", [&](const std::string& v) { sc.range_m = want_double(v, "range_m"); }},
        {"bandwidth_bps",
         [&](const std::string& v) { sc.bandwidth_bps = want_double(v, "bandwidth_bps"); }},
        {"duration_s", [&](const std::string& v) { sc.duration_s = want_double(v, "duration_s"); }},
        {"seed",
         [&](const std::string& v) {
             sc.seed = static_cast<std::uint64_t>(want_int(v, "seed"));
         }},
        {"speed_min", [&](const std::string& v) { sc.speed_min = want_double(v, "speed_min"); }},
        {"speed_max", [&](const std::string& v) { sc.speed_max = want_double(v, "speed_max"); }},
        {"pause_s", [&](const std::string& v) { sc.pause_s = want_double(v, "pause_s"); }},
        {"flows", [&](const std::string& v) { sc.flows = static_cast<int>(want_int(v, "flows")); }},
        {"flow_src", [&](const std::string& v) { sc.flow_src = parse_id_list(v, lineno); }},
        {"flow_dst", [&](const std::string& v) { sc.flow_dst = parse_id_list(v, lineno); }},
        {"cbr_payload_bytes",
         [&](const std::string& v) {
             sc.cbr_payload_bytes = static_cast<std::uint32_t>(want_int(v, "cbr_payload_bytes"));
         }},
        {"cbr_interval_s",
         [&](const std::string& v) { sc.cbr_interval_s = want_double(v, "cbr_interval_s"); }},
        {"pdsr_q_s", [&](const std::string& v) { sc.pdsr_q_s = want_double(v, "pdsr_q_s"); }},
        {"pdsr_T", [&](const std::string& v) { sc.pdsr_T = want_double(v, "pdsr_T"); }},
        {"ack_timeout_factor",
         [&](const std::string& v) { sc.ack_timeout_factor = want_double(v, "ack_timeout_factor"); }},
        {"buffer_packets",
         [&](const std::string& v) {
             sc.buffer_packets = static_cast<int>(want_int(v, "buffer_packets"));
         }},
        {"size_data_header",
         [&](const std::string& v) {
             sc.sizes.data_header = static_cast<std::uint32_t>(want_int(v, "size_data_header"));
         }},
        {"size_per_hop",
         [&](const std::string& v) {
             sc.sizes.per_hop = static_cast<std::uint32_t>(want_int(v, "size_per_hop"));
         }},
        {"size_rreq",
         [&](const std::string& v) {
             sc.sizes.rreq = static_cast<std::uint32_t>(want_int(v, "size_rreq"));
         }},
        {"size_rrep",
         [&](const std::string& v) {
             sc.sizes.rrep = static_cast<std::uint32_t>(want_int(v, "size_rrep"));
         }},
        {"size_rerr",
         [&](const std::string& v) {
             sc.sizes.rerr = static_cast<std::uint32_t>(want_int(v, "size_rerr"));
         }},
        {"size_warning",
         [&](const std::string& v) {
             sc.sizes.warning = static_cast<std::uint32_t>(want_int(v, "size_warning"));
         }},
        {"size_ack",
         [&](const std::string& v) {
             sc.sizes.ack = static_cast<std::uint32_t>(want_int(v, "size_ack"));
         }},
        {"size_qry",
         [&](const std::string& v) {
             sc.sizes.qry = static_cast<std::uint32_t>(want_int(v, "size_qry"));
         }},
        {"size_upd",
         [&](const std::string& v) {
             sc.sizes.upd = static_cast<std::uint32_t>(want_int(v, "size_upd"));
         }},
        {"size_clr",
         [&](const std::string& v) {
             sc.sizes.clr = static_cast<std::uint32_t>(want_int(v, "size_clr"));
         }},
    };

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value' at line " + std::to_string(lineno));
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        auto it = setters.find(key);
        if (it == setters.end())
            throw ParseError("unknown key '" + key + "' at line " + std::to_string(lineno));
        it->second(val);
    }

    // invariants
    if (sc.nodes <= 0)
        throw ParseError("nodes must be positive");
    if (sc.duration_s <= 0.0)
        throw ParseError("duration_s must be positive");
    if (sc.range_m <= 0.0)
        throw ParseError("range_m must be positive");
    if (sc.bandwidth_bps <= 0.0)
        throw ParseError("bandwidth_bps must be positive");
    if (sc.speed_min <= 0.0)
        throw ParseError("speed_min must be positive");
    if (sc.speed_max < sc.speed_min)
        throw ParseError("speed_max < speed_min");
    if (sc.pause_s < 0.0)
        throw ParseError("pause_s must be non-negative");
    if (sc.flows < 0)
        throw ParseError("flows must be non-negative");
    if (sc.cbr_interval_s <= 0.0)
        throw ParseError("cbr_interval_s must be positive");
    if (sc.buffer_packets < 0)
        throw ParseError("buffer_packets must be non-negative");
    if (sc.flows > 0 && sc.nodes < 2)
        throw ParseError("flows need at least 2 nodes");
    for (NodeId n : sc.flow_src)
        if (n < 0 || n >= sc.nodes)
            throw ParseError("flow_src id out of range");
    for (NodeId n : sc.flow_dst)
        if (n < 0 || n >= sc.nodes)
            throw ParseError("flow_dst id out of range");
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw ParseError("cannot open scenario file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_scenario(ss.str());
}

std::string Scenario::emit() const {
    char buf[2048];
    std::string ids_src, ids_dst;
    for (std::size_t i = 0; i < flow_src.size(); ++i)
        ids_src += (i ? "," : "") + std::to_string(flow_src[i]);
    for (std::size_t i = 0; i < flow_dst.size(); ++i)
        ids_dst += (i ? "," : "") + std::to_string(flow_dst[i]);
    std::snprintf(buf, sizeof(buf),
                  "protocol = %s\n"
                  "nodes = %d\n"
                  "area_x = %.17g\narea_y = %.17g\nrange_m = %.17g\n"
                  "bandwidth_bps = %.17g\nduration_s = %.17g\nseed = %" PRIu64 "\n"
                  "speed_min = %.17g\nspeed_max = %.17g\npause_s = %.17g\n"
                  "flows = %d\n"
                  "cbr_payload_bytes = %u\ncbr_interval_s = %.17g\n"
                  "pdsr_q_s = %.17g\npdsr_T = %.17g\nack_timeout_factor = %.17g\n"
                  "buffer_packets = %d\n"
                  "size_data_header = %u\nsize_per_hop = %u\nsize_rreq = %u\nsize_rrep = %u\n"
                  "size_rerr = %u\nsize_warning = %u\nsize_ack = %u\nsize_qry = %u\n"
                  "size_upd = %u\nsize_clr = %u\n",
                  protocol_name(protocol), nodes, area_x, area_y, range_m, bandwidth_bps,
                  duration_s, seed, speed_min, speed_max, pause_s, flows, cbr_payload_bytes,
                  cbr_interval_s, pdsr_q_s, pdsr_T, ack_timeout_factor, buffer_packets,
                  sizes.data_header, sizes.per_hop, sizes.rreq, sizes.rrep, sizes.rerr,
                  sizes.warning, sizes.ack, sizes.qry, sizes.upd, sizes.clr);
    std::string out(buf);
    if (!ids_src.empty())
        out += "flow_src = " + ids_src + "\n";
    if (!ids_dst.empty())
        out += "flow_dst = " + ids_dst + "\n";
    return out;
}

std::vector<FlowSpec> scenario_flows(const Scenario& sc) {
    std::vector<FlowSpec> flows;
    RngStream rng = RngStream(sc.seed).substream("flows");
    // Single unconfigured flow is the table preset: node 1 sends to node 0.
    bool table_preset = sc.flows == 1 && sc.flow_src.empty() && sc.flow_dst.empty();
    for (int i = 0; i < sc.flows; ++i) {
        FlowSpec f;
        f.id = i;
        f.payload = sc.cbr_payload_bytes;
        f.interval = sc.cbr_interval_s;
        f.start = 0.0;
        f.stop = sc.duration_s;
        if (table_preset) {
            f.src = 1;
            f.dst = 0;
        } else {
            if (i < static_cast<int>(sc.flow_src.size()))
                f.src = sc.flow_src[static_cast<std::size_t>(i)];
            else
                f.src =
                    static_cast<NodeId>(rng.uniform_int(static_cast<std::uint64_t>(sc.nodes)));
            if (i < static_cast<int>(sc.flow_dst.size()))
                f.dst = sc.flow_dst[static_cast<std::size_t>(i)];
            else {
                do {
                    f.dst = static_cast<NodeId>(
                        rng.uniform_int(static_cast<std::uint64_t>(sc.nodes)));
                } while (f.dst == f.src);
            }
        }
        flows.push_back(f);
    }
    return flows;
}

} // namespace manet
