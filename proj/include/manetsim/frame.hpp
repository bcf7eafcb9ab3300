#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "manetsim/engine.hpp"
#include "manetsim/geometry.hpp"

namespace manet {

enum class FrameKind { kData, kRreq, kRrep, kRerr, kWarning, kAck, kQry, kUpd, kClr };

const char* frame_kind_name(FrameKind k);
inline bool is_control(FrameKind k) { return k != FrameKind::kData; }

/// Wire sizes in bytes. Table-style defaults; every value can be
/// overridden from the scenario file.
struct FrameSizes {
    std::uint32_t data_header = 12;
    std::uint32_t per_hop = 4; // per node address carried in a source route
    std::uint32_t rreq = 24;   // + per_hop * |record|
    std::uint32_t rrep = 24;   // + per_hop * (|primary| + |backup|)
    std::uint32_t rerr = 20;
    std::uint32_t warning = 20;
    std::uint32_t ack = 14;
    std::uint32_t qry = 20;
    std::uint32_t upd = 28;
    std::uint32_t clr = 24;
};

// ---- TORA height -----------------------------------------------------

/// Per-destination ordering value: (tau, oid, r, delta, id), compared
/// lexicographically. The destination holds the global minimum
/// (0, 0, 0, 0, dest). An absent height (std::nullopt) orders above
/// every defined height.
struct Height {
    SimTime tau = 0.0;
    NodeId oid = 0;
    int r = 0; // reflection bit
    int delta = 0;
    NodeId id = 0;

    friend bool operator==(const Height&, const Height&) = default;
};

inline Height zero_height(NodeId dest) { return Height{0.0, 0, 0, 0, dest}; }

// -1 / 0 / +1; nullopt compares greater than any defined height.
int compare(const std::optional<Height>& a, const std::optional<Height>& b);

// ---- frame bodies ----------------------------------------------------

struct DataBody {
    std::uint64_t uid = 0; // application packet id (shared by duplicates)
    int flow_id = 0;
    NodeId flow_src = 0;
    NodeId flow_dst = 0;
    std::uint32_t payload = 0;
    // DSR/PDSR source route (full path, flow_src first); empty for TORA
    std::vector<NodeId> route;
    int hop_idx = 0; // position of the current holder within route
    bool ack_requested = false;
    bool salvaged = false;
    const char* route_tag = "primary"; // primary | backup | salvage | hop
    std::vector<NodeId> trail;         // nodes visited, for loop auditing
};

struct RreqBody {
    NodeId origin = 0;
    NodeId target = 0;
    std::uint32_t request_id = 0;
    std::vector<NodeId> record; // accumulated path, origin first
};

struct RrepBody {
    NodeId origin = 0; // replying destination
    NodeId target = 0; // discovery source
    std::uint32_t request_id = 0;
    std::vector<NodeId> primary;
    std::vector<NodeId> backup;  // empty when absent
    std::vector<NodeId> path;    // delivery path (reversed primary)
    int hop_idx = 0;
};

struct RerrBody {
    NodeId reporter = 0;
    NodeId broken_from = 0;
    NodeId broken_to = 0;
    NodeId flow_dst = 0;
    std::vector<NodeId> path; // back toward the source
    int hop_idx = 0;
};

struct WarningBody {
    NodeId reporter = 0;
    NodeId flow_dst = 0;
    std::vector<NodeId> path;
    int hop_idx = 0;
};

struct AckBody {
    std::uint64_t data_uid = 0;
    NodeId flow_dst = 0; // destination that acknowledges
    std::vector<NodeId> path;
    int hop_idx = 0;
};

struct QryBody {
    NodeId dest = 0;
    NodeId origin = 0;
    std::uint32_t epoch = 0;
};

struct UpdBody {
    NodeId dest = 0;
    Height height; // sender's height for dest
};

struct ClrBody {
    NodeId dest = 0;
    SimTime tau = 0.0;
    NodeId oid = 0;
};

using FrameBody = std::variant<DataBody, RreqBody, RrepBody, RerrBody, WarningBody, AckBody,
                               QryBody, UpdBody, ClrBody>;

struct Frame {
    FrameKind kind = FrameKind::kData;
    NodeId src = 0; // originator of the frame contents
    std::uint32_t size_bytes = 0;
    std::uint64_t frame_uid = 0; // assigned by the medium at request time
    FrameBody body;
};

std::uint32_t data_frame_size(const FrameSizes& s, std::uint32_t payload, std::size_t route_len);
std::uint32_t rreq_size(const FrameSizes& s, std::size_t record_len);
std::uint32_t rrep_size(const FrameSizes& s, std::size_t primary_len, std::size_t backup_len);

} // namespace manet
