#pragma once

#include <cstdio>
#include <string>

#include "manetsim/engine.hpp"
#include "manetsim/frame.hpp"

namespace manet {

/// Per-event trace emitter. One line per event:
///   t=<s.us> node=<id> ev=<kind> key=value ...
/// Lines go to an in-memory buffer, a file, or nowhere. The byte stream is
/// deterministic for a given scenario and seed.
class TraceWriter {
  public:
    TraceWriter() = default;
    ~TraceWriter();
    TraceWriter(const TraceWriter&) = delete;
    TraceWriter& operator=(const TraceWriter&) = delete;

    void collect_to_string() { to_string_ = true; }
    void open_file(const std::string& path);
    bool enabled() const { return to_string_ || file_ != nullptr; }

    void raw(const std::string& line); // '\n' appended
    void line(SimTime t, NodeId node, const char* ev, const std::string& rest);

    void tx(SimTime t, NodeId node, const Frame& f, bool ok, const char* to);
    void rx(SimTime t, NodeId node, const Frame& f, NodeId from);
    void gen(SimTime t, NodeId node, std::uint64_t uid, int flow, std::uint32_t bytes);
    void deliver(SimTime t, NodeId node, std::uint64_t uid, int flow, std::uint32_t bytes);
    void drop(SimTime t, NodeId node, std::uint64_t uid, const char* where, const char* reason);
    void link(SimTime t, NodeId a, NodeId b, bool up);

    const std::string& str() const { return buf_; }

    static std::string format_height(const std::optional<Height>& h);

  private:
    bool to_string_ = false;
    std::FILE* file_ = nullptr;
    std::string buf_;
};

} // namespace manet
