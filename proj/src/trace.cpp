#include "manetsim/trace.hpp"

#include <cinttypes>
#include <stdexcept>

namespace manet {

TraceWriter::~TraceWriter() {
    if (file_)
        std::fclose(file_);
}

void TraceWriter::open_file(const std::string& path) {
    file_ = std::fopen(path.c_str(), "wb");
    if (!file_)
        throw std::runtime_error("cannot open trace file: " + path);
}

void TraceWriter::raw(const std::string& line) {
    if (to_string_) {
        buf_ += line;
        buf_ += '\n';
    }
    if (file_) {
        std::fputs(line.c_str(), file_);
        std::fputc('\n', file_);
    }
}

void TraceWriter::line(SimTime t, NodeId node, const char* ev, const std::string& rest) {
    if (!enabled())
        return;
    char head[96];
    std::snprintf(head, sizeof(head), "t=%.6f node=%d ev=%s", t, node, ev);
    std::string out(head);
    if (!rest.empty()) {
        out += ' ';
        out += rest;
    }
    raw(out);
}

void TraceWriter::tx(SimTime t, NodeId node, const Frame& f, bool ok, const char* to) {
    if (!enabled())
        return;
    char rest[192];
    if (f.kind == FrameKind::kData) {
        const auto& d = std::get<DataBody>(f.body);
        std::snprintf(rest, sizeof(rest),
                      "kind=%s bytes=%u src=%d to=%s ok=%d uid=%" PRIu64 " route=%s",
                      frame_kind_name(f.kind), f.size_bytes, f.src, to, ok ? 1 : 0, d.uid,
                      d.route_tag);
    } else {
        std::snprintf(rest, sizeof(rest), "kind=%s bytes=%u src=%d to=%s ok=%d fid=%" PRIu64,
                      frame_kind_name(f.kind), f.size_bytes, f.src, to, ok ? 1 : 0, f.frame_uid);
    }
    line(t, node, "tx", rest);
}

void TraceWriter::rx(SimTime t, NodeId node, const Frame& f, NodeId from) {
    if (!enabled())
        return;
    char rest[128];
    std::snprintf(rest, sizeof(rest), "kind=%s bytes=%u from=%d src=%d",
                  frame_kind_name(f.kind), f.size_bytes, from, f.src);
    line(t, node, "rx", rest);
}

void TraceWriter::gen(SimTime t, NodeId node, std::uint64_t uid, int flow, std::uint32_t bytes) {
    if (!enabled())
        return;
    char rest[96];
    std::snprintf(rest, sizeof(rest), "uid=%" PRIu64 " flow=%d bytes=%u", uid, flow, bytes);
    line(t, node, "gen", rest);
}

void TraceWriter::deliver(SimTime t, NodeId node, std::uint64_t uid, int flow,
                          std::uint32_t bytes) {
    if (!enabled())
        return;
    char rest[96];
    std::snprintf(rest, sizeof(rest), "uid=%" PRIu64 " flow=%d bytes=%u", uid, flow, bytes);
    line(t, node, "deliver", rest);
}

void TraceWriter::drop(SimTime t, NodeId node, std::uint64_t uid, const char* where,
                       const char* reason) {
    if (!enabled())
        return;
    char rest[128];
    std::snprintf(rest, sizeof(rest), "uid=%" PRIu64 " where=%s reason=%s", uid, where, reason);
    line(t, node, "drop", rest);
}

void TraceWriter::link(SimTime t, NodeId a, NodeId b, bool up) {
    if (!enabled())
        return;
    char rest[64];
    std::snprintf(rest, sizeof(rest), "a=%d b=%d state=%s", a, b, up ? "up" : "down");
    line(t, a, "link", rest);
}

std::string TraceWriter::format_height(const std::optional<Height>& h) {
    if (!h)
        return "NULL";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.6f:%d:%d:%d:%d", h->tau, h->oid, h->r, h->delta, h->id);
    return buf;
}

} // namespace manet
