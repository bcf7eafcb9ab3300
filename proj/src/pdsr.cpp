#include "manetsim/pdsr.hpp"

#include <algorithm>
#include <cassert>

namespace manet {

std::string route_str(const RouteRecord& r) {
    std::string s;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i)
            s += '-';
        s += std::to_string(r[i]);
    }
    return s.empty() ? "none" : s;
}

namespace {

int shared_intermediates(const RouteRecord& a, const RouteRecord& b) {
    int n = 0;
    for (std::size_t i = 1; i + 1 < a.size(); ++i)
        for (std::size_t j = 1; j + 1 < b.size(); ++j)
            if (a[i] == b[j]) {
                ++n;
                break;
            }
    return n;
}

} // namespace

RouteChoice choose_routes(const std::vector<RouteRecord>& candidates) {
    RouteChoice c;
    if (candidates.empty())
        return c;
    c.primary = *std::min_element(candidates.begin(), candidates.end(),
                                  [](const RouteRecord& a, const RouteRecord& b) {
                                      if (a.size() != b.size())
                                          return a.size() < b.size();
                                      return a < b;
                                  });
    const RouteRecord* best = nullptr;
    int best_shared = 0;
    for (const auto& cand : candidates) {
        if (cand == c.primary)
            continue;
        int shared = shared_intermediates(cand, c.primary);
        if (!best || shared < best_shared ||
            (shared == best_shared && (cand.size() < best->size() ||
                                       (cand.size() == best->size() && cand < *best)))) {
            best = &cand;
            best_shared = shared;
        }
    }
    if (best)
        c.backup = *best;
    return c;
}

bool SignalMonitor::sample(double strength) {
    if (armed_ && strength < threshold_) {
        armed_ = false;
        return true;
    }
    if (!armed_ && strength >= threshold_ * kRearmFactor)
        armed_ = true;
    return false;
}

PdsrRouter::PdsrRouter(NodeId me, RouterContext ctx, PdsrParams params)
    : me_(me), ctx_(std::move(ctx)), p_(params) {
    if (p_.dsr_baseline)
        p_.q = 0.0;
}

PdsrRouter::Mode PdsrRouter::mode(NodeId dest) const {
    auto it = src_.find(dest);
    return it == src_.end() ? Mode::kNone : it->second.mode;
}

RouteRecord PdsrRouter::primary(NodeId dest) const {
    auto it = src_.find(dest);
    return it == src_.end() ? RouteRecord{} : it->second.primary;
}

RouteRecord PdsrRouter::backup(NodeId dest) const {
    auto it = src_.find(dest);
    return it == src_.end() ? RouteRecord{} : it->second.backup;
}

const std::vector<RouteRecord>* PdsrRouter::cached(NodeId dest) const {
    static thread_local std::vector<RouteRecord> tmp;
    auto it = cache_.find(dest);
    if (it == cache_.end())
        return nullptr;
    tmp.clear();
    for (const auto& e : it->second)
        tmp.push_back(e.route);
    return &tmp;
}

void PdsrRouter::trace_mode(NodeId dest, const char* state) {
    if (ctx_.trace->enabled())
        ctx_.trace->line(ctx_.engine->now(), me_, "mode",
                         "dest=" + std::to_string(dest) + " state=" + state);
}

// ---- cache ----------------------------------------------------------------

bool PdsrRouter::uses_link(const RouteRecord& r, NodeId a, NodeId b) {
    for (std::size_t i = 0; i + 1 < r.size(); ++i)
        if ((r[i] == a && r[i + 1] == b) || (r[i] == b && r[i + 1] == a))
            return true;
    return false;
}

void PdsrRouter::cache_add(RouteRecord route) {
    auto it = std::find(route.begin(), route.end(), me_);
    if (it == route.end())
        return;
    RouteRecord suffix(it, route.end());
    if (suffix.size() < 2)
        return;
    NodeId dest = suffix.back();
    auto& entries = cache_[dest];
    for (auto& e : entries) {
        if (e.route == suffix) {
            e.inserted = ctx_.engine->now();
            return;
        }
    }
    entries.push_back(CacheEntry{std::move(suffix), ctx_.engine->now()});
    if (ctx_.trace->enabled())
        ctx_.trace->line(ctx_.engine->now(), me_, "cache",
                         "dest=" + std::to_string(dest) + " op=add n=" +
                             std::to_string(entries.size()));
}

void PdsrRouter::purge_link(NodeId a, NodeId b) {
    for (auto& [dest, entries] : cache_) {
        auto before = entries.size();
        entries.erase(std::remove_if(entries.begin(), entries.end(),
                                     [&](const CacheEntry& e) { return uses_link(e.route, a, b); }),
                      entries.end());
        if (entries.size() != before && ctx_.trace->enabled())
            ctx_.trace->line(ctx_.engine->now(), me_, "cache",
                             "dest=" + std::to_string(dest) + " op=purge n=" +
                                 std::to_string(entries.size()));
    }
}

std::optional<RouteRecord> PdsrRouter::cache_best(NodeId dest) const {
    auto it = cache_.find(dest);
    if (it == cache_.end() || it->second.empty())
        return std::nullopt;
    const CacheEntry* best = nullptr;
    for (const auto& e : it->second) {
        if (!best || e.route.size() < best->route.size() ||
            (e.route.size() == best->route.size() && e.route < best->route))
            best = &e;
    }
    return best->route;
}

// ---- generic path forwarding ----------------------------------------------

namespace {
struct PathRef {
    std::vector<NodeId>* path = nullptr;
    int* hop = nullptr;
};
PathRef path_of(FrameBody& b) {
    if (auto* x = std::get_if<RrepBody>(&b))
        return {&x->path, &x->hop_idx};
    if (auto* x = std::get_if<RerrBody>(&b))
        return {&x->path, &x->hop_idx};
    if (auto* x = std::get_if<WarningBody>(&b))
        return {&x->path, &x->hop_idx};
    if (auto* x = std::get_if<AckBody>(&b))
        return {&x->path, &x->hop_idx};
    return {};
}
} // namespace

void PdsrRouter::forward_on_path(Frame f) {
    PathRef pr = path_of(f.body);
    assert(pr.path && *pr.hop + 1 < static_cast<int>(pr.path->size()));
    *pr.hop += 1;
    NodeId next = (*pr.path)[static_cast<std::size_t>(*pr.hop)];
    ctx_.medium->unicast(me_, next, std::move(f));
}

// ---- data plane -------------------------------------------------------------

void PdsrRouter::tx_data(const RouteRecord& route, DataBody body, const char* tag,
                         bool want_ack) {
    assert(route.size() >= 2 && route.front() == me_);
    body.route = route;
    body.hop_idx = 0;
    body.route_tag = tag;
    body.ack_requested = want_ack;
    if (body.trail.empty() || body.trail.back() != me_)
        body.trail.push_back(me_);
    body.hop_idx = 1;
    NodeId next = route[1];
    Frame f;
    f.kind = FrameKind::kData;
    f.src = body.flow_src;
    f.size_bytes = data_frame_size(ctx_.sizes, body.payload, route.size());
    f.body = std::move(body);
    ctx_.medium->unicast(me_, next, std::move(f));
}

void PdsrRouter::send_data(const FlowSpec& flow, std::uint64_t uid) {
    DataBody b;
    b.uid = uid;
    b.flow_id = flow.id;
    b.flow_src = flow.src;
    b.flow_dst = flow.dst;
    b.payload = flow.payload;
    NodeId dest = flow.dst;
    SourceState& st = src_[dest];

    if (st.mode == Mode::kNone) {
        if (auto cached = cache_best(dest)) {
            st.primary = *cached;
            st.mode = Mode::kPrimary;
            trace_mode(dest, "primary");
            st.first_hop_mon = SignalMonitor(p_.threshold);
            schedule_src_probe(dest);
        }
    }
    switch (st.mode) {
    case Mode::kNone:
        st.buffer.push_back(std::move(b));
        if (st.buffer.size() > static_cast<std::size_t>(ctx_.buffer_cap)) {
            ctx_.trace->drop(ctx_.engine->now(), me_, st.buffer.front().uid, "source",
                             "buffer-overflow");
            st.buffer.pop_front();
        }
        if (!st.discovering)
            start_discovery(dest);
        break;
    case Mode::kPrimary:
        tx_data(st.primary, std::move(b), "primary", false);
        break;
    case Mode::kBoth: {
        DataBody dup = b;
        tx_data(st.primary, std::move(b), "primary", false);
        bool want_ack = st.need_probe;
        if (want_ack) {
            st.need_probe = false;
            st.awaiting_ack = true;
            st.probe_uid = dup.uid;
            double hops = static_cast<double>(st.backup.size()) - 1.0;
            double per_hop =
                data_frame_size(ctx_.sizes, dup.payload, st.backup.size()) * 8.0 /
                ctx_.bandwidth_bps;
            double timeout = std::max(p_.ack_timeout_floor,
                                      p_.ack_timeout_factor * hops * per_hop);
            NodeId d = dest;
            st.ack_timer =
                ctx_.engine->schedule(ctx_.engine->now() + timeout, [this, d] { ack_timeout(d); });
        }
        tx_data(st.backup, std::move(dup), "backup", want_ack);
        break;
    }
    }
}

void PdsrRouter::drain(NodeId /*dest*/, SourceState& st) {
    while (!st.buffer.empty() && st.mode != Mode::kNone) {
        DataBody b = std::move(st.buffer.front());
        st.buffer.pop_front();
        FlowSpec pseudo;
        pseudo.id = b.flow_id;
        pseudo.src = b.flow_src;
        pseudo.dst = b.flow_dst;
        pseudo.payload = b.payload;
        send_data(pseudo, b.uid);
    }
}

void PdsrRouter::handle_data(const Frame& f, NodeId from) {
    observe_data(f, from);
    DataBody b = std::get<DataBody>(f.body);
    if (me_ == b.flow_dst) {
        ctx_.ledger->on_delivered(b.uid, ctx_.engine->now());
        ctx_.trace->deliver(ctx_.engine->now(), me_, b.uid, b.flow_id, b.payload);
        if (b.ack_requested) {
            AckBody a;
            a.data_uid = b.uid;
            a.flow_dst = me_;
            a.path.assign(b.route.rbegin(), b.route.rend());
            a.hop_idx = 0;
            Frame af;
            af.kind = FrameKind::kAck;
            af.src = me_;
            af.size_bytes = ctx_.sizes.ack;
            af.body = std::move(a);
            forward_on_path(std::move(af));
        }
        return;
    }
    // forward along the source route
    if (b.hop_idx < 0 || b.hop_idx + 1 >= static_cast<int>(b.route.size()) ||
        b.route[static_cast<std::size_t>(b.hop_idx)] != me_) {
        ctx_.trace->drop(ctx_.engine->now(), me_, b.uid, "transit", "bad-route");
        return;
    }
    cache_add(b.route); // learn the suffix toward the destination
    if (b.trail.empty() || b.trail.back() != me_)
        b.trail.push_back(me_);
    int idx = b.hop_idx;
    b.hop_idx = idx + 1;
    NodeId next = b.route[static_cast<std::size_t>(idx + 1)];
    Frame out;
    out.kind = FrameKind::kData;
    out.src = b.flow_src;
    out.size_bytes = f.size_bytes;
    out.body = std::move(b);
    ctx_.medium->unicast(me_, next, std::move(out));
}

// ---- route discovery --------------------------------------------------------

void PdsrRouter::start_discovery(NodeId dest) {
    SourceState& st = src_[dest];
    if (st.discovering)
        return;
    st.discovering = true;
    st.tries = 0;
    st.gap = p_.backoff_initial;
    if (ctx_.flow_pairs.count({me_, dest}) && !discovery_t0_.count(dest))
        discovery_t0_[dest] = ctx_.engine->now();
    emit_rreq(dest, st);
    NodeId d = dest;
    st.retry_timer =
        ctx_.engine->schedule(ctx_.engine->now() + st.gap, [this, d] { retry_discovery(d); });
}

void PdsrRouter::emit_rreq(NodeId dest, SourceState& st) {
    st.request_id = ++rreq_counter_;
    st.tries += 1;
    seen_rreq_.insert({me_, st.request_id});
    RreqBody r;
    r.origin = me_;
    r.target = dest;
    r.request_id = st.request_id;
    r.record = {me_};
    Frame f;
    f.kind = FrameKind::kRreq;
    f.src = me_;
    f.size_bytes = rreq_size(ctx_.sizes, r.record.size());
    f.body = std::move(r);
    ctx_.medium->broadcast(me_, std::move(f));
}

void PdsrRouter::retry_discovery(NodeId dest) {
    SourceState& st = src_[dest];
    if (!st.discovering)
        return;
    if (st.tries >= p_.max_tries) {
        st.discovering = false;
        for (const DataBody& b : st.buffer)
            ctx_.trace->drop(ctx_.engine->now(), me_, b.uid, "source", "give-up");
        st.buffer.clear();
        discovery_t0_.erase(dest);
        return;
    }
    emit_rreq(dest, st);
    st.gap = std::min(st.gap * 2.0, p_.backoff_cap);
    NodeId d = dest;
    st.retry_timer =
        ctx_.engine->schedule(ctx_.engine->now() + st.gap, [this, d] { retry_discovery(d); });
}

void PdsrRouter::handle_rreq(const RreqBody& r, NodeId from) {
    (void)from;
    if (r.origin == me_)
        return;
    if (me_ == r.target) {
        auto key = std::make_pair(r.origin, r.request_id);
        auto wit = windows_.find(key);
        RouteRecord cand = r.record;
        cand.push_back(me_);
        if (wit == windows_.end()) {
            Window w;
            w.candidates.push_back(std::move(cand));
            windows_.emplace(key, std::move(w));
            if (p_.q <= 0.0) {
                reply_window(r.origin, r.request_id);
            } else {
                ctx_.engine->schedule(ctx_.engine->now() + p_.q,
                                      [this, key] { reply_window(key.first, key.second); });
            }
        } else if (!wit->second.replied) {
            wit->second.candidates.push_back(std::move(cand));
        }
        return;
    }
    if (!seen_rreq_.insert({r.origin, r.request_id}).second)
        return;
    if (std::find(r.record.begin(), r.record.end(), me_) != r.record.end())
        return;
    RreqBody fwd = r;
    fwd.record.push_back(me_);
    Frame f;
    f.kind = FrameKind::kRreq;
    f.src = r.origin;
    f.size_bytes = rreq_size(ctx_.sizes, fwd.record.size());
    f.body = std::move(fwd);
    ctx_.medium->broadcast(me_, std::move(f));
}

void PdsrRouter::reply_window(NodeId origin, std::uint32_t rid) {
    auto it = windows_.find({origin, rid});
    if (it == windows_.end() || it->second.replied)
        return;
    it->second.replied = true;
    RouteChoice choice = choose_routes(it->second.candidates);
    if (p_.dsr_baseline)
        choice.backup.clear();
    if (ctx_.trace->enabled())
        ctx_.trace->line(ctx_.engine->now(), me_, "window",
                         "src=" + std::to_string(origin) + " rid=" + std::to_string(rid) +
                             " cands=" + std::to_string(it->second.candidates.size()) +
                             " primary=" + route_str(choice.primary) +
                             " backup=" + route_str(choice.backup));
    if (choice.primary.size() < 2)
        return;
    RrepBody rep;
    rep.origin = me_;
    rep.target = origin;
    rep.request_id = rid;
    rep.primary = choice.primary;
    rep.backup = choice.backup;
    rep.path.assign(choice.primary.rbegin(), choice.primary.rend());
    rep.hop_idx = 0;
    Frame f;
    f.kind = FrameKind::kRrep;
    f.src = me_;
    f.size_bytes = rrep_size(ctx_.sizes, rep.primary.size(), rep.backup.size());
    f.body = std::move(rep);
    forward_on_path(std::move(f));
}

void PdsrRouter::install_routes(NodeId dest, RouteChoice choice) {
    SourceState& st = src_[dest];
    st.primary = std::move(choice.primary);
    st.backup = std::move(choice.backup);
    st.mode = Mode::kPrimary;
    trace_mode(dest, "primary");
    st.discovering = false;
    ctx_.engine->cancel(st.retry_timer);
    st.need_probe = false;
    if (st.awaiting_ack) {
        st.awaiting_ack = false;
        ctx_.engine->cancel(st.ack_timer);
    }
    cache_add(st.primary);
    if (!st.backup.empty())
        cache_add(st.backup);
    st.first_hop_mon = SignalMonitor(p_.threshold);
    schedule_src_probe(dest);
    auto t0 = discovery_t0_.find(dest);
    if (t0 != discovery_t0_.end()) {
        if (ctx_.route_latencies)
            ctx_.route_latencies->push_back(ctx_.engine->now() - t0->second);
        discovery_t0_.erase(t0);
    }
    drain(dest, st);
}

void PdsrRouter::handle_rrep(const Frame& f, NodeId from) {
    (void)from;
    RrepBody r = std::get<RrepBody>(f.body);
    if (me_ == r.target) {
        install_routes(r.origin, RouteChoice{r.primary, r.backup});
        return;
    }
    // forwarders learn the carried routes
    cache_add(r.primary);
    if (!r.backup.empty())
        cache_add(r.backup);
    Frame out = f;
    forward_on_path(std::move(out));
}

// ---- maintenance --------------------------------------------------------------

void PdsrRouter::send_rerr(const DataBody& d, NodeId broken_to) {
    if (d.hop_idx <= 0)
        return; // the source learns by local observation, no frame needed
    RerrBody e;
    e.reporter = me_;
    e.broken_from = me_;
    e.broken_to = broken_to;
    e.flow_dst = d.flow_dst;
    e.path.assign(d.route.begin(), d.route.begin() + d.hop_idx + 1);
    std::reverse(e.path.begin(), e.path.end());
    e.hop_idx = 0;
    Frame f;
    f.kind = FrameKind::kRerr;
    f.src = me_;
    f.size_bytes = ctx_.sizes.rerr;
    f.body = std::move(e);
    forward_on_path(std::move(f));
}

void PdsrRouter::rerr_core(NodeId dest, NodeId a, NodeId b) {
    auto it = src_.find(dest);
    if (it == src_.end())
        return;
    SourceState& st = it->second;
    bool prim_dead = uses_link(st.primary, a, b);
    bool back_dead = uses_link(st.backup, a, b);
    if (back_dead) {
        st.backup.clear();
        st.need_probe = false;
        if (st.awaiting_ack) {
            st.awaiting_ack = false;
            ctx_.engine->cancel(st.ack_timer);
        }
        if (st.mode == Mode::kBoth) {
            st.mode = Mode::kPrimary;
            trace_mode(dest, "primary");
        }
    }
    if (!prim_dead)
        return;
    if (!st.backup.empty()) {
        st.primary = std::move(st.backup);
        st.backup.clear();
        st.mode = Mode::kPrimary;
        trace_mode(dest, "primary");
        st.need_probe = false;
        if (st.awaiting_ack) {
            st.awaiting_ack = false;
            ctx_.engine->cancel(st.ack_timer);
        }
        st.first_hop_mon = SignalMonitor(p_.threshold);
        schedule_src_probe(dest);
        return;
    }
    if (auto cached = cache_best(dest)) {
        st.primary = *cached;
        st.backup.clear();
        st.mode = Mode::kPrimary;
        trace_mode(dest, "primary");
        st.first_hop_mon = SignalMonitor(p_.threshold);
        schedule_src_probe(dest);
        return;
    }
    st.primary.clear();
    st.backup.clear();
    st.mode = Mode::kNone;
    trace_mode(dest, "none");
    start_discovery(dest);
}

void PdsrRouter::handle_link_failure(const Frame& f, NodeId next_hop) {
    purge_link(me_, next_hop);
    for (auto& [dest, st] : src_) {
        (void)st;
        rerr_core(dest, me_, next_hop);
    }
    if (f.kind != FrameKind::kData)
        return; // lost control frames are not retried
    DataBody b = std::get<DataBody>(f.body);
    std::optional<RouteRecord> alt;
    if (me_ == b.flow_src) {
        auto it = src_.find(b.flow_dst);
        if (it != src_.end() && it->second.mode != Mode::kNone)
            alt = it->second.primary;
    }
    if (!alt)
        alt = cache_best(b.flow_dst);
    if (alt && !b.salvaged) {
        b.salvaged = true;
        b.route = *alt;
        b.hop_idx = 0;
        b.route_tag = "salvage";
        NodeId next = (*alt)[1];
        b.hop_idx = 1;
        Frame out;
        out.kind = FrameKind::kData;
        out.src = b.flow_src;
        out.size_bytes = data_frame_size(ctx_.sizes, b.payload, b.route.size());
        out.body = std::move(b);
        ctx_.medium->unicast(me_, next, std::move(out));
        return;
    }
    if (me_ == b.flow_src) {
        ctx_.trace->drop(ctx_.engine->now(), me_, b.uid, "source", "no-route");
    } else {
        send_rerr(b, next_hop);
        ctx_.trace->drop(ctx_.engine->now(), me_, b.uid, "transit", "no-salvage");
    }
}

void PdsrRouter::handle_rerr(const Frame& f, NodeId from) {
    (void)from;
    RerrBody e = std::get<RerrBody>(f.body);
    purge_link(e.broken_from, e.broken_to);
    if (me_ == e.path.back()) {
        rerr_core(e.flow_dst, e.broken_from, e.broken_to);
        return;
    }
    Frame out = f;
    forward_on_path(std::move(out));
}

// ---- preemption -----------------------------------------------------------------

void PdsrRouter::observe_data(const Frame& f, NodeId from) {
    if (p_.dsr_baseline)
        return;
    const DataBody& d = std::get<DataBody>(f.body);
    if (me_ == d.flow_src)
        return;
    auto key = std::make_pair(d.flow_src, d.flow_dst);
    auto [it, fresh] = monitors_.try_emplace(key);
    RouteMonitor& m = it->second;
    if (fresh)
        m.mon = SignalMonitor(p_.threshold);
    m.upstream = from;
    m.route = d.route;
    m.last_data = ctx_.engine->now();
    if (m.probe_timer == 0)
        schedule_route_probe(key);
    double s = ctx_.medium->strength(me_, from);
    if (m.mon.sample(s))
        raise_warning(d);
}

void PdsrRouter::raise_warning(const DataBody& d) {
    // "Path likely to be disconnected": tell the source along the
    // reversed route prefix.
    auto it = std::find(d.route.begin(), d.route.end(), me_);
    if (it == d.route.end())
        return;
    WarningBody w;
    w.reporter = me_;
    w.flow_dst = d.flow_dst;
    w.path.assign(d.route.begin(), it + 1);
    std::reverse(w.path.begin(), w.path.end());
    w.hop_idx = 0;
    if (w.path.size() < 2)
        return;
    Frame f;
    f.kind = FrameKind::kWarning;
    f.src = me_;
    f.size_bytes = ctx_.sizes.warning;
    f.body = std::move(w);
    forward_on_path(std::move(f));
}

void PdsrRouter::schedule_route_probe(std::pair<NodeId, NodeId> key) {
    auto it = monitors_.find(key);
    if (it == monitors_.end())
        return;
    it->second.probe_timer =
        ctx_.engine->schedule(ctx_.engine->now() + p_.probe_interval, [this, key] {
            auto mit = monitors_.find(key);
            if (mit == monitors_.end())
                return;
            RouteMonitor& m = mit->second;
            if (ctx_.engine->now() - m.last_data > p_.monitor_lease) {
                monitors_.erase(mit);
                return;
            }
            double s = ctx_.medium->strength(me_, m.upstream);
            if (m.mon.sample(s)) {
                DataBody pseudo;
                pseudo.flow_src = m.route.empty() ? -1 : m.route.front();
                pseudo.flow_dst = key.second;
                pseudo.route = m.route;
                raise_warning(pseudo);
            }
            schedule_route_probe(key);
        });
}

void PdsrRouter::schedule_src_probe(NodeId dest) {
    if (p_.dsr_baseline)
        return;
    SourceState& st = src_[dest];
    ctx_.engine->cancel(st.probe_timer);
    st.probe_timer = ctx_.engine->schedule(ctx_.engine->now() + p_.probe_interval, [this, dest] {
        auto it = src_.find(dest);
        if (it == src_.end() || it->second.mode == Mode::kNone ||
            it->second.primary.size() < 2)
            return;
        double s = ctx_.medium->strength(me_, it->second.primary[1]);
        if (it->second.first_hop_mon.sample(s)) {
            if (ctx_.trace->enabled())
                ctx_.trace->line(ctx_.engine->now(), me_, "warnself",
                                 "dest=" + std::to_string(dest));
            handle_warning(dest);
        }
        schedule_src_probe(dest);
    });
}

void PdsrRouter::handle_warning_frame(const Frame& f) {
    WarningBody w = std::get<WarningBody>(f.body);
    if (me_ == w.path.back()) {
        handle_warning(w.flow_dst);
        return;
    }
    Frame out = f;
    forward_on_path(std::move(out));
}

void PdsrRouter::handle_warning(NodeId dest) {
    auto it = src_.find(dest);
    if (it == src_.end() || it->second.mode == Mode::kNone) {
        start_discovery(dest);
        return;
    }
    SourceState& st = it->second;
    if (st.mode == Mode::kBoth)
        return; // already duplicating
    if (st.backup.empty()) {
        // incipient failure with nothing to fall back on
        start_discovery(dest);
        return;
    }
    st.mode = Mode::kBoth;
    st.need_probe = true;
    trace_mode(dest, "both");
}

void PdsrRouter::handle_ack(const Frame& f) {
    AckBody a = std::get<AckBody>(f.body);
    if (me_ != a.path.back()) {
        Frame out = f;
        forward_on_path(std::move(out));
        return;
    }
    NodeId dest = a.flow_dst;
    auto it = src_.find(dest);
    if (it == src_.end())
        return;
    SourceState& st = it->second;
    if (!st.awaiting_ack || a.data_uid != st.probe_uid)
        return; // late ack; a discovery is already underway
    // preemption: the backup carried data end to end, switch over
    st.awaiting_ack = false;
    ctx_.engine->cancel(st.ack_timer);
    cache_add(st.primary);
    st.primary = std::move(st.backup);
    st.backup.clear();
    st.mode = Mode::kPrimary;
    trace_mode(dest, "switched");
    st.first_hop_mon = SignalMonitor(p_.threshold);
    schedule_src_probe(dest);
}

void PdsrRouter::ack_timeout(NodeId dest) {
    auto it = src_.find(dest);
    if (it == src_.end() || !it->second.awaiting_ack)
        return;
    it->second.awaiting_ack = false;
    start_discovery(dest);
}

// ---- dispatch ---------------------------------------------------------------------

void PdsrRouter::on_receive(const Frame& f, NodeId from) {
    switch (f.kind) {
    case FrameKind::kData: handle_data(f, from); break;
    case FrameKind::kRreq: handle_rreq(std::get<RreqBody>(f.body), from); break;
    case FrameKind::kRrep: handle_rrep(f, from); break;
    case FrameKind::kRerr: handle_rerr(f, from); break;
    case FrameKind::kWarning: handle_warning_frame(f); break;
    case FrameKind::kAck: handle_ack(f); break;
    default: break;
    }
}

void PdsrRouter::on_unicast_failed(const Frame& f, NodeId next_hop) {
    handle_link_failure(f, next_hop);
}

void PdsrRouter::finish() {
    for (auto& [dest, st] : src_) {
        (void)dest;
        for (const DataBody& b : st.buffer)
            ctx_.trace->drop(ctx_.engine->now(), me_, b.uid, "source", "end-of-run");
        st.buffer.clear();
    }
}

} // namespace manet
