#include "manetsim/ledger.hpp"

#include <cassert>

namespace manet {

void MetricLedger::on_generated(std::uint64_t uid, int flow_id, NodeId src, NodeId dst,
                                std::uint32_t payload, SimTime t) {
    PacketRecord rec;
    rec.uid = uid;
    rec.flow_id = flow_id;
    rec.src = src;
    rec.dst = dst;
    rec.payload = payload;
    rec.sent_at = t;
    auto [it, inserted] = records_.emplace(uid, rec);
    assert(inserted);
    (void)it;
    (void)inserted;
}

void MetricLedger::on_tx(NodeId node, const Frame& f, bool success) {
    if (!success)
        return;
    auto& c = nodes_.at(static_cast<std::size_t>(node));
    if (f.kind == FrameKind::kData) {
        if (f.src == node)
            c.data_bytes_tx_orig += f.size_bytes;
        else
            c.data_bytes_tx_fwd += f.size_bytes;
        if (const auto* d = std::get_if<DataBody>(&f.body))
            if (node == d->flow_src)
                on_departed(d->uid);
    } else {
        if (f.src == node)
            c.ctrl_bytes_tx_orig += f.size_bytes;
        else
            c.ctrl_bytes_tx_fwd += f.size_bytes;
    }
    auto& k = tx_by_kind_[f.kind];
    k.pkts += 1;
    k.bytes += f.size_bytes;
}

void MetricLedger::on_rx(NodeId node, const Frame& f) {
    auto& c = nodes_.at(static_cast<std::size_t>(node));
    if (f.kind == FrameKind::kData)
        c.data_bytes_rx += f.size_bytes;
    else
        c.ctrl_bytes_rx += f.size_bytes;
}

void MetricLedger::on_departed(std::uint64_t uid) {
    auto it = records_.find(uid);
    if (it != records_.end())
        it->second.departed = true;
}

void MetricLedger::on_delivered(std::uint64_t uid, SimTime t) {
    auto it = records_.find(uid);
    if (it == records_.end())
        return;
    if (!it->second.delivered_at)
        it->second.delivered_at = t;
}

void MetricLedger::finalize() {
    for (auto& [uid, rec] : records_) {
        (void)uid;
        if (rec.delivered_at)
            rec.disposition = Disposition::kDelivered;
        else if (rec.departed)
            rec.disposition = Disposition::kDroppedTransit;
        else
            rec.disposition = Disposition::kDroppedSource;
    }
}

} // namespace manet
