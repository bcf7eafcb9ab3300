#include "manetsim/metrics.hpp"

#include <cinttypes>
#include <cstdio>
#include <set>

namespace manet {

double pdf(const MetricLedger& ledger, int* excluded_flows) {
    int used = 0, excluded = 0;
    double sum = 0.0;
    for (const auto& f : ledger.flows()) {
        std::uint64_t sent = 0, recv = 0;
        for (const auto& [uid, rec] : ledger.records()) {
            (void)uid;
            if (rec.flow_id != f.id)
                continue;
            ++sent;
            if (rec.delivered_at)
                ++recv;
        }
        if (sent == 0) {
            ++excluded;
            continue;
        }
        sum += static_cast<double>(recv) / static_cast<double>(sent);
        ++used;
    }
    if (excluded_flows)
        *excluded_flows = excluded;
    return used > 0 ? sum / used : 0.0;
}

std::optional<double> avg_delay_ms(const MetricLedger& ledger) {
    std::uint64_t n = 0;
    double sum = 0.0;
    for (const auto& [uid, rec] : ledger.records()) {
        (void)uid;
        if (rec.delivered_at) {
            sum += *rec.delivered_at - rec.sent_at;
            ++n;
        }
    }
    if (n == 0)
        return std::nullopt;
    return (sum / static_cast<double>(n)) * 1000.0;
}

double throughput_kBps(const MetricLedger& ledger, SimTime duration) {
    std::uint64_t bytes = 0;
    for (const auto& [uid, rec] : ledger.records()) {
        (void)uid;
        if (rec.delivered_at)
            bytes += rec.payload;
    }
    return static_cast<double>(bytes) / duration / 1000.0;
}

Efficiencies efficiencies(const MetricLedger& ledger) {
    std::set<NodeId> sinks, sources;
    for (const auto& f : ledger.flows()) {
        sinks.insert(f.dst);
        sources.insert(f.src);
    }
    const auto& nodes = ledger.node_counters();
    Efficiencies e;

    std::uint64_t sink_data = 0, sink_ctrl = 0;
    for (NodeId s : sinks) {
        sink_data += nodes.at(static_cast<std::size_t>(s)).data_bytes_rx;
        sink_ctrl += nodes.at(static_cast<std::size_t>(s)).ctrl_bytes_rx;
    }
    if (sink_data + sink_ctrl > 0)
        e.recv = 100.0 * static_cast<double>(sink_data) /
                 static_cast<double>(sink_data + sink_ctrl);

    // Sending efficiency counts the source's own data sends against all
    // control it sent or forwarded; forwarded data is left to fwd_eff.
    std::uint64_t src_data = 0, src_all = 0;
    for (NodeId s : sources) {
        const auto& c = nodes.at(static_cast<std::size_t>(s));
        src_data += c.data_bytes_tx_orig;
        src_all += c.data_bytes_tx_orig + c.ctrl_bytes_tx_orig + c.ctrl_bytes_tx_fwd;
    }
    if (src_all > 0)
        e.send = 100.0 * static_cast<double>(src_data) / static_cast<double>(src_all);

    std::uint64_t net_data = 0, net_all = 0;
    for (const auto& c : nodes) {
        net_data += c.data_bytes_tx_orig + c.data_bytes_tx_fwd;
        net_all += c.data_bytes_tx_orig + c.data_bytes_tx_fwd + c.ctrl_bytes_tx_orig +
                   c.ctrl_bytes_tx_fwd;
    }
    if (net_all > 0)
        e.fwd = 100.0 * static_cast<double>(net_data) / static_cast<double>(net_all);
    return e;
}

Metrics compute_metrics(const MetricLedger& ledger, SimTime duration) {
    Metrics m;
    m.throughput_kBps = throughput_kBps(ledger, duration);
    m.pdf = pdf(ledger);
    m.avg_delay_ms = avg_delay_ms(ledger);
    m.eff = efficiencies(ledger);
    for (const auto& [uid, rec] : ledger.records()) {
        (void)uid;
        ++m.data_sent;
        switch (rec.disposition) {
        case Disposition::kDelivered: ++m.data_delivered; break;
        case Disposition::kDroppedSource: ++m.drop_source; break;
        case Disposition::kDroppedTransit: ++m.drop_transit; break;
        case Disposition::kPending: break;
        }
    }
    m.pct_delivered = m.data_sent > 0 ? 100.0 * static_cast<double>(m.data_delivered) /
                                            static_cast<double>(m.data_sent)
                                      : 0.0;
    for (const auto& [kind, c] : ledger.tx_by_kind()) {
        if (is_control(kind)) {
            m.ctrl_pkts += c.pkts;
            m.ctrl_bytes += c.bytes;
        }
    }
    return m;
}

AuditReport conservation_audit(const MetricLedger& ledger) {
    AuditReport r;
    for (const auto& [uid, rec] : ledger.records()) {
        (void)uid;
        ++r.total;
        switch (rec.disposition) {
        case Disposition::kDelivered: ++r.delivered; break;
        case Disposition::kDroppedSource: ++r.drop_source; break;
        case Disposition::kDroppedTransit: ++r.drop_transit; break;
        case Disposition::kPending: ++r.unaccounted; break;
        }
    }
    r.ok = (r.unaccounted == 0) &&
           (r.delivered + r.drop_source + r.drop_transit == r.total);
    return r;
}

const char* const kCsvHeader =
    "protocol,nodes,speed_class,pause_s,seed,throughput_kBps,pct_delivered,pdf,avg_delay_ms,"
    "recv_eff,send_eff,fwd_eff,ctrl_pkts,ctrl_bytes,data_sent,data_delivered,drop_source,"
    "drop_transit";

namespace {
std::string fmt_opt(const std::optional<double>& v) {
    if (!v)
        return "NM";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.5f", *v);
    return buf;
}
} // namespace

std::string csv_row(const RunEcho& echo, const Metrics& m) {
    char head[160];
    std::snprintf(head, sizeof(head), "%s,%d,%s,%g,%" PRIu64 ",", echo.protocol.c_str(),
                  echo.nodes, echo.speed_class.c_str(), echo.pause_s, echo.seed);
    char mid[128];
    std::snprintf(mid, sizeof(mid), "%.5f,%.5f,%.5f,", m.throughput_kBps, m.pct_delivered,
                  m.pdf);
    std::string row(head);
    row += mid;
    row += fmt_opt(m.avg_delay_ms) + "," + fmt_opt(m.eff.recv) + "," + fmt_opt(m.eff.send) +
           "," + fmt_opt(m.eff.fwd) + ",";
    char tail[160];
    std::snprintf(tail, sizeof(tail),
                  "%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%" PRIu64,
                  m.ctrl_pkts, m.ctrl_bytes, m.data_sent, m.data_delivered, m.drop_source,
                  m.drop_transit);
    row += tail;
    return row;
}

} // namespace manet
