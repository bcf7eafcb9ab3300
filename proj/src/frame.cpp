#include "manetsim/frame.hpp"

#include <optional>

namespace manet {

const char* frame_kind_name(FrameKind k) {
    switch (k) {
    case FrameKind::kData: return "DATA";
    case FrameKind::kRreq: return "RREQ";
    case FrameKind::kRrep: return "RREP";
    case FrameKind::kRerr: return "RERR";
    case FrameKind::kWarning: return "WARN";
    case FrameKind::kAck: return "ACK";
    case FrameKind::kQry: return "QRY";
    case FrameKind::kUpd: return "UPD";
    case FrameKind::kClr: return "CLR";
    }
    return "?";
}

int compare(const std::optional<Height>& a, const std::optional<Height>& b) {
    if (!a && !b)
        return 0;
    if (!a)
        return 1; // NULL above everything
    if (!b)
        return -1;
    if (a->tau != b->tau)
        return a->tau < b->tau ? -1 : 1;
    if (a->oid != b->oid)
        return a->oid < b->oid ? -1 : 1;
    if (a->r != b->r)
        return a->r < b->r ? -1 : 1;
    if (a->delta != b->delta)
        return a->delta < b->delta ? -1 : 1;
    if (a->id != b->id)
        return a->id < b->id ? -1 : 1;
    return 0;
}

std::uint32_t data_frame_size(const FrameSizes& s, std::uint32_t payload, std::size_t route_len) {
    return payload + s.data_header + s.per_hop * static_cast<std::uint32_t>(route_len);
}

std::uint32_t rreq_size(const FrameSizes& s, std::size_t record_len) {
    return s.rreq + s.per_hop * static_cast<std::uint32_t>(record_len);
}

std::uint32_t rrep_size(const FrameSizes& s, std::size_t primary_len, std::size_t backup_len) {
    return s.rrep + s.per_hop * static_cast<std::uint32_t>(primary_len + backup_len);
}

} // namespace manet
