#include "manetsim/replay.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace manet {

namespace {

// key=value fields of one trace line
std::map<std::string, std::string> fields(const std::string& line) {
    std::map<std::string, std::string> kv;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) {
        auto eq = tok.find('=');
        if (eq != std::string::npos)
            kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return kv;
}

FrameKind kind_from(const std::string& s) {
    if (s == "DATA") return FrameKind::kData;
    if (s == "RREQ") return FrameKind::kRreq;
    if (s == "RREP") return FrameKind::kRrep;
    if (s == "RERR") return FrameKind::kRerr;
    if (s == "WARN") return FrameKind::kWarning;
    if (s == "ACK") return FrameKind::kAck;
    if (s == "QRY") return FrameKind::kQry;
    if (s == "UPD") return FrameKind::kUpd;
    if (s == "CLR") return FrameKind::kClr;
    throw std::runtime_error("unknown frame kind in trace: " + s);
}

} // namespace

ReplayResult replay_trace(const std::string& trace_text) {
    MetricLedger ledger;
    RunEcho echo;
    double duration = 0.0;
    std::map<std::uint64_t, NodeId> uid_src; // data uid -> flow source

    std::istringstream in(trace_text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        if (line[0] == '#') {
            auto kv = fields(line);
            if (line.rfind("# scenario", 0) == 0) {
                echo.protocol = kv.at("protocol");
                echo.nodes = std::stoi(kv.at("nodes"));
                echo.speed_class = kv.at("speed_class");
                echo.pause_s = std::stod(kv.at("pause_s"));
                echo.seed = std::stoull(kv.at("seed"));
                duration = std::stod(kv.at("duration_s"));
                ledger.set_node_count(echo.nodes);
            } else if (line.rfind("# flow", 0) == 0) {
                FlowSpec f;
                f.id = std::stoi(kv.at("id"));
                f.src = std::stoi(kv.at("src"));
                f.dst = std::stoi(kv.at("dst"));
                f.payload = static_cast<std::uint32_t>(std::stoul(kv.at("payload")));
                f.interval = std::stod(kv.at("interval"));
                f.start = std::stod(kv.at("start"));
                f.stop = std::stod(kv.at("stop"));
                ledger.add_flow(f);
            }
            continue;
        }
        auto kv = fields(line);
        auto ev = kv.find("ev");
        if (ev == kv.end())
            continue;
        double t = std::stod(kv.at("t"));
        NodeId node = std::stoi(kv.at("node"));
        if (ev->second == "gen") {
            std::uint64_t uid = std::stoull(kv.at("uid"));
            int flow = std::stoi(kv.at("flow"));
            std::uint32_t bytes = static_cast<std::uint32_t>(std::stoul(kv.at("bytes")));
            NodeId dst = 0;
            for (const auto& f : ledger.flows())
                if (f.id == flow)
                    dst = f.dst;
            ledger.on_generated(uid, flow, node, dst, bytes, t);
            uid_src[uid] = node;
        } else if (ev->second == "deliver") {
            ledger.on_delivered(std::stoull(kv.at("uid")), t);
        } else if (ev->second == "tx") {
            Frame f;
            f.kind = kind_from(kv.at("kind"));
            f.src = std::stoi(kv.at("src"));
            f.size_bytes = static_cast<std::uint32_t>(std::stoul(kv.at("bytes")));
            bool ok = kv.at("ok") == "1";
            ledger.on_tx(node, f, ok);
            if (ok && f.kind == FrameKind::kData) {
                std::uint64_t uid = std::stoull(kv.at("uid"));
                auto it = uid_src.find(uid);
                if (it != uid_src.end() && it->second == node)
                    ledger.on_departed(uid);
            }
        } else if (ev->second == "rx") {
            Frame f;
            f.kind = kind_from(kv.at("kind"));
            f.src = std::stoi(kv.at("src"));
            f.size_bytes = static_cast<std::uint32_t>(std::stoul(kv.at("bytes")));
            ledger.on_rx(node, f);
        }
    }
    if (duration <= 0.0)
        throw std::runtime_error("trace lacks a scenario header");
    ledger.finalize();
    ReplayResult r;
    r.echo = echo;
    r.metrics = compute_metrics(ledger, duration);
    return r;
}

ReplayResult replay_trace_file(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("cannot open trace file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return replay_trace(ss.str());
}

} // namespace manet
