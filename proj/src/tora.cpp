#include "manetsim/tora.hpp"

#include <algorithm>
#include <cassert>

namespace manet {

namespace {
std::string height_kv(NodeId dest, const std::optional<Height>& h) {
    return "dest=" + std::to_string(dest) + " h=" + TraceWriter::format_height(h);
}
const char* dir_name(int d) { return d < 0 ? "down" : (d > 0 ? "up" : "un"); }
} // namespace

ToraRouter::ToraRouter(NodeId me, RouterContext ctx, const std::vector<NodeId>& initial_neighbors)
    : me_(me), ctx_(std::move(ctx)), neighbors_(initial_neighbors.begin(), initial_neighbors.end()) {}

ToraInstance& ToraRouter::ensure_instance(NodeId dest) {
    auto it = instances_.find(dest);
    if (it != instances_.end())
        return it->second;
    ToraInstance ti;
    ti.dest = dest;
    if (me_ == dest)
        ti.height = zero_height(dest);
    for (NodeId n : neighbors_)
        ti.nbr[n] = std::nullopt;
    auto [ins, ok] = instances_.emplace(dest, std::move(ti));
    (void)ok;
    return ins->second;
}

void ToraRouter::seed_height(NodeId dest, std::optional<Height> h) {
    ensure_instance(dest).height = std::move(h);
}

void ToraRouter::seed_neighbor_height(NodeId dest, NodeId nbr, std::optional<Height> h) {
    auto& ti = ensure_instance(dest);
    ti.nbr[nbr] = std::move(h);
    refresh_dirs(ti);
}

std::optional<Height> ToraRouter::height(NodeId dest) const {
    auto it = instances_.find(dest);
    if (it == instances_.end())
        return me_ == dest ? std::optional<Height>(zero_height(dest)) : std::nullopt;
    return it->second.height;
}

int ToraRouter::direction(NodeId dest, NodeId nbr) const {
    auto it = instances_.find(dest);
    if (it == instances_.end())
        return 0;
    auto nit = it->second.nbr.find(nbr);
    if (nit == it->second.nbr.end())
        return 0;
    int c = compare(nit->second, it->second.height);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

int ToraRouter::downstream_count(const ToraInstance& ti) const {
    int n = 0;
    for (const auto& [id, h] : ti.nbr)
        if (h && compare(h, ti.height) < 0)
            ++n;
    return n;
}

std::optional<NodeId> ToraRouter::pick_next_hop(const ToraInstance& ti,
                                                const std::vector<NodeId>* exclude) const {
    if (!ti.height)
        return std::nullopt;
    std::optional<NodeId> best;
    std::optional<Height> best_h;
    for (const auto& [id, h] : ti.nbr) {
        if (!h || compare(h, ti.height) >= 0)
            continue;
        if (exclude && std::find(exclude->begin(), exclude->end(), id) != exclude->end())
            continue;
        if (!best || compare(h, best_h) < 0) {
            best = id;
            best_h = h;
        }
    }
    return best;
}

std::optional<NodeId> ToraRouter::next_hop(NodeId dest) const {
    auto it = instances_.find(dest);
    if (it == instances_.end())
        return std::nullopt;
    return pick_next_hop(it->second, nullptr);
}

void ToraRouter::refresh_dirs(ToraInstance& ti) {
    for (const auto& [id, h] : ti.nbr) {
        int c = compare(h, ti.height);
        int d = c < 0 ? -1 : (c > 0 ? 1 : 0);
        auto it = ti.last_dir.find(id);
        if (it == ti.last_dir.end() || it->second != d) {
            ti.last_dir[id] = d;
            if (ctx_.trace->enabled())
                ctx_.trace->line(ctx_.engine->now(), me_, "dir",
                                 "dest=" + std::to_string(ti.dest) + " nbr=" + std::to_string(id) +
                                     " dir=" + dir_name(d));
        }
    }
    for (auto it = ti.last_dir.begin(); it != ti.last_dir.end();) {
        if (!ti.nbr.count(it->first))
            it = ti.last_dir.erase(it);
        else
            ++it;
    }
}

bool ToraRouter::set_height(ToraInstance& ti, std::optional<Height> h) {
    if (compare(ti.height, h) == 0)
        return false;
    ti.height = std::move(h);
    ti.reflections.clear();
    if (ctx_.trace->enabled())
        ctx_.trace->line(ctx_.engine->now(), me_, "height", height_kv(ti.dest, ti.height));
    refresh_dirs(ti);
    return true;
}

// ---- control frame emission -------------------------------------------

void ToraRouter::broadcast_upd(ToraInstance& ti) {
    assert(ti.height);
    Frame f;
    f.kind = FrameKind::kUpd;
    f.src = me_;
    f.size_bytes = ctx_.sizes.upd;
    f.body = UpdBody{ti.dest, *ti.height};
    ctx_.medium->broadcast(me_, std::move(f));
}

void ToraRouter::broadcast_qry(ToraInstance& ti) {
    std::uint32_t epoch = ++qry_epoch_;
    ti.seen_qry.insert({me_, epoch});
    Frame f;
    f.kind = FrameKind::kQry;
    f.src = me_;
    f.size_bytes = ctx_.sizes.qry;
    f.body = QryBody{ti.dest, me_, epoch};
    ctx_.medium->broadcast(me_, std::move(f));
}

void ToraRouter::broadcast_clr(ToraInstance& ti, SimTime tau, NodeId oid) {
    Frame f;
    f.kind = FrameKind::kClr;
    f.src = me_;
    f.size_bytes = ctx_.sizes.clr;
    f.body = ClrBody{ti.dest, tau, oid};
    ctx_.medium->broadcast(me_, std::move(f));
}

// ---- route discovery ----------------------------------------------------

void ToraRouter::originate_query(NodeId dest) {
    ToraInstance& ti = ensure_instance(dest);
    if (ti.height || ti.route_required)
        return; // has state or QRY already outstanding
    ti.route_required = true;
    if (ctx_.flow_pairs.count({me_, dest}) && !discovery_t0_.count(dest))
        discovery_t0_[dest] = ctx_.engine->now();
    broadcast_qry(ti);
}

void ToraRouter::handle_qry(const QryBody& q, NodeId from) {
    (void)from;
    ToraInstance& ti = ensure_instance(q.dest);
    if (!ti.seen_qry.insert({q.origin, q.epoch}).second)
        return; // duplicate of this flood epoch
    if (ti.height) { // destination included: its height is ZERO
        broadcast_upd(ti);
        return;
    }
    if (!ti.route_required) {
        ti.route_required = true;
        Frame f;
        f.kind = FrameKind::kQry;
        f.src = q.origin;
        f.size_bytes = ctx_.sizes.qry;
        f.body = q;
        ctx_.medium->broadcast(me_, std::move(f));
    }
    // route-required already set: suppressed
}

void ToraRouter::handle_upd(const UpdBody& u, NodeId from) {
    if (!neighbors_.count(from))
        return; // link vanished between completion and processing
    ToraInstance& ti = ensure_instance(u.dest);
    ti.nbr[from] = u.height;
    refresh_dirs(ti);
    if (me_ == ti.dest)
        return;

    // reflection bookkeeping while I originated the current level
    if (ti.height && ti.height->r == 0 && ti.height->oid == me_ && u.height.oid == me_ &&
        u.height.r == 1 && u.height.tau == ti.height->tau) {
        ti.reflections.insert(from);
        check_partition(ti);
        if (!ti.height)
            return; // partition handled
    }

    if (!ti.height) {
        if (ti.route_required) {
            Height h{u.height.tau, u.height.oid, u.height.r, u.height.delta + 1, me_};
            ti.route_required = false;
            set_height(ti, h);
            broadcast_upd(ti);
            note_route_state(ti.dest);
            try_drain(ti.dest);
        }
        return;
    }

    if (downstream_count(ti) == 0)
        react_no_downstream(ti);
    note_route_state(ti.dest);
    try_drain(ti.dest);
}

// A node with a defined height and no remaining downstream link reacts by
// the reference-level rules: adopt the highest level around with a lower
// offset, reflect it at an edge node, detect the partition at the origin,
// or start a fresh level when someone else's reflection closed in.
void ToraRouter::react_no_downstream(ToraInstance& ti) {
    if (me_ == ti.dest || !ti.height)
        return;
    if (ti.nbr.empty()) {
        set_height(ti, std::nullopt);
        if (!buffer_[ti.dest].empty())
            originate_query(ti.dest);
        return;
    }
    struct Lvl {
        SimTime tau;
        NodeId oid;
        int r;
        auto operator<=>(const Lvl&) const = default;
    };
    std::set<Lvl> levels;
    bool any_null = false;
    for (const auto& [id, h] : ti.nbr) {
        (void)id;
        if (!h)
            any_null = true;
        else
            levels.insert(Lvl{h->tau, h->oid, h->r});
    }
    if (levels.empty()) {
        set_height(ti, std::nullopt);
        if (!buffer_[ti.dest].empty())
            originate_query(ti.dest);
        return;
    }
    if (levels.size() == 1 && !any_null) {
        Lvl l = *levels.begin();
        if (l.r == 0) {
            // edge node: reflect the propagated level
            if (set_height(ti, Height{l.tau, l.oid, 1, 0, me_}))
                broadcast_upd(ti);
            return;
        }
        if (l.oid == me_ && ti.height->tau == l.tau && ti.height->oid == me_) {
            check_partition(ti);
            return;
        }
        // someone else's reflected level surrounded me: new reference level
        if (set_height(ti, Height{ctx_.engine->now(), me_, 0, 0, me_}))
            broadcast_upd(ti);
        return;
    }
    // mixed levels: adopt the highest and slot in below its holders
    Lvl hi = *levels.rbegin();
    int dmin = 0;
    bool first = true;
    for (const auto& [id, h] : ti.nbr) {
        (void)id;
        if (h && h->tau == hi.tau && h->oid == hi.oid && h->r == hi.r) {
            dmin = first ? h->delta : std::min(dmin, h->delta);
            first = false;
        }
    }
    Height nh{hi.tau, hi.oid, hi.r, dmin - 1, me_};
    if (compare(nh, ti.height) <= 0)
        return; // would not raise; nothing to propagate
    set_height(ti, nh);
    broadcast_upd(ti);
}

void ToraRouter::check_partition(ToraInstance& ti) {
    if (!ti.height || ti.height->oid != me_ || ti.height->r != 0)
        return;
    if (ti.nbr.empty())
        return; // silent NULL handled by the link-down path
    for (const auto& [id, h] : ti.nbr) {
        (void)h;
        if (!ti.reflections.count(id))
            return; // an alternate route may still exist
    }
    SimTime tau = ti.height->tau;
    set_height(ti, std::nullopt);
    ti.seen_clr.insert({tau, me_});
    if (ctx_.clr_events)
        ctx_.clr_events->push_back(ClrEvent{ctx_.engine->now(), me_, ti.dest});
    broadcast_clr(ti, tau, me_);
    if (!buffer_[ti.dest].empty())
        originate_query(ti.dest);
}

void ToraRouter::handle_clr(const ClrBody& c, NodeId from) {
    ToraInstance& ti = ensure_instance(c.dest);
    if (ti.nbr.count(from)) {
        ti.nbr[from] = std::nullopt; // the sender has erased its height
        refresh_dirs(ti);
    }
    if (!ti.seen_clr.insert({c.tau, c.oid}).second) {
        // duplicate; direction bookkeeping above still applies
    } else if (ti.height && ti.height->tau == c.tau && ti.height->oid == c.oid) {
        set_height(ti, std::nullopt);
        for (auto& [id, h] : ti.nbr)
            h = std::nullopt;
        refresh_dirs(ti);
        Frame f;
        f.kind = FrameKind::kClr;
        f.src = c.oid;
        f.size_bytes = ctx_.sizes.clr;
        f.body = c;
        ctx_.medium->broadcast(me_, std::move(f));
        if (!buffer_[c.dest].empty())
            originate_query(c.dest);
        return;
    }
    if (me_ != ti.dest && ti.height && downstream_count(ti) == 0)
        react_no_downstream(ti);
    try_drain(c.dest);
}

// ---- link events ---------------------------------------------------------

void ToraRouter::on_link_up(NodeId nbr) {
    if (!neighbors_.insert(nbr).second)
        return;
    for (auto& [dest, ti] : instances_) {
        (void)dest;
        ti.nbr[nbr] = std::nullopt;
        refresh_dirs(ti);
        // a node with an unanswered route request floods again when
        // connectivity improves
        if (ti.route_required)
            broadcast_qry(ti);
    }
}

void ToraRouter::on_link_down(NodeId nbr) {
    if (!neighbors_.erase(nbr))
        return;
    for (auto& [dest, ti] : instances_) {
        (void)dest;
        instance_link_down(ti, nbr);
    }
}

void ToraRouter::instance_link_down(ToraInstance& ti, NodeId nbr) {
    auto it = ti.nbr.find(nbr);
    if (it == ti.nbr.end())
        return;
    ti.nbr.erase(it);
    ti.reflections.erase(nbr);
    refresh_dirs(ti);
    if (me_ == ti.dest || !ti.height)
        return;
    if (ti.nbr.empty()) {
        set_height(ti, std::nullopt); // routes are moot without neighbors
        return;
    }
    if (downstream_count(ti) == 0) {
        // lost the last downstream link: new reference level
        set_height(ti, Height{ctx_.engine->now(), me_, 0, 0, me_});
        broadcast_upd(ti);
    } else {
        check_partition(ti); // remaining neighbors may all have reflected
    }
    note_route_state(ti.dest);
    try_drain(ti.dest);
}

// ---- data path -----------------------------------------------------------

void ToraRouter::send_data(const FlowSpec& flow, std::uint64_t uid) {
    DataBody b;
    b.uid = uid;
    b.flow_id = flow.id;
    b.flow_src = flow.src;
    b.flow_dst = flow.dst;
    b.payload = flow.payload;
    b.route_tag = "hop";
    b.trail.push_back(me_);
    route_or_buffer(std::move(b));
}

void ToraRouter::transmit_data(DataBody body, NodeId nh) {
    ToraInstance& ti = ensure_instance(body.flow_dst);
    // forwarding must strictly descend the height order
    if (!(ti.height && compare(ti.nbr[nh], ti.height) < 0) && ctx_.loop_violations)
        ++*ctx_.loop_violations;
    Frame f;
    f.kind = FrameKind::kData;
    f.src = body.flow_src;
    f.size_bytes = body.payload + ctx_.sizes.data_header;
    f.body = std::move(body);
    ctx_.medium->unicast(me_, nh, std::move(f));
}

void ToraRouter::route_or_buffer(DataBody body) {
    NodeId dest = body.flow_dst;
    ToraInstance& ti = ensure_instance(dest);
    auto nh = pick_next_hop(ti, &body.trail);
    if (nh) {
        transmit_data(std::move(body), *nh);
        return;
    }
    if (!ti.height && !ti.route_required)
        originate_query(dest);
    // route activity is now pending in every reachable case; buffer with
    // a bounded queue, oldest first out
    auto& q = buffer_[dest];
    q.push_back(std::move(body));
    if (q.size() > static_cast<std::size_t>(ctx_.buffer_cap)) {
        const DataBody& victim = q.front();
        ctx_.trace->drop(ctx_.engine->now(), me_, victim.uid,
                         me_ == victim.flow_src ? "source" : "transit", "buffer-overflow");
        q.pop_front();
    }
}

void ToraRouter::try_drain(NodeId dest) {
    auto it = buffer_.find(dest);
    if (it == buffer_.end())
        return;
    auto& q = it->second;
    ToraInstance& ti = ensure_instance(dest);
    while (!q.empty()) {
        auto nh = pick_next_hop(ti, &q.front().trail);
        if (!nh)
            return;
        DataBody b = std::move(q.front());
        q.pop_front();
        transmit_data(std::move(b), *nh);
    }
}

void ToraRouter::handle_data(const Frame& f, NodeId from) {
    (void)from;
    DataBody b = std::get<DataBody>(f.body);
    if (me_ == b.flow_dst) {
        ctx_.ledger->on_delivered(b.uid, ctx_.engine->now());
        ctx_.trace->deliver(ctx_.engine->now(), me_, b.uid, b.flow_id, b.payload);
        return;
    }
    if (std::find(b.trail.begin(), b.trail.end(), me_) != b.trail.end()) {
        if (ctx_.loop_violations)
            ++*ctx_.loop_violations;
        ctx_.trace->drop(ctx_.engine->now(), me_, b.uid, "transit", "revisit");
        return;
    }
    b.trail.push_back(me_);
    route_or_buffer(std::move(b));
}

void ToraRouter::on_receive(const Frame& f, NodeId from) {
    switch (f.kind) {
    case FrameKind::kQry: handle_qry(std::get<QryBody>(f.body), from); break;
    case FrameKind::kUpd: handle_upd(std::get<UpdBody>(f.body), from); break;
    case FrameKind::kClr: handle_clr(std::get<ClrBody>(f.body), from); break;
    case FrameKind::kData: handle_data(f, from); break;
    default: break; // not ours
    }
}

void ToraRouter::on_unicast_failed(const Frame& f, NodeId next_hop) {
    // treat as an observed link failure, then re-route the frame
    if (neighbors_.count(next_hop))
        on_link_down(next_hop);
    if (f.kind != FrameKind::kData)
        return;
    DataBody b = std::get<DataBody>(f.body);
    route_or_buffer(std::move(b));
}

void ToraRouter::note_route_state(NodeId dest) {
    auto it = discovery_t0_.find(dest);
    if (it == discovery_t0_.end())
        return;
    if (next_hop(dest)) {
        if (ctx_.route_latencies)
            ctx_.route_latencies->push_back(ctx_.engine->now() - it->second);
        discovery_t0_.erase(it);
    }
}

void ToraRouter::finish() {
    for (auto& [dest, q] : buffer_) {
        (void)dest;
        for (const DataBody& b : q)
            ctx_.trace->drop(ctx_.engine->now(), me_, b.uid,
                             me_ == b.flow_src ? "source" : "transit", "end-of-run");
        q.clear();
    }
}

} // namespace manet
