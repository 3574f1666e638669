#include "lmcast/netsim.hpp"

namespace lmcast::netsim {

NodeId Netsim::add_node() { return node_count_++; }

void Netsim::set_handler(NodeId node, DeliveryFn fn) {
    handlers_[node] = std::move(fn);
}

void Netsim::set_restart_hook(NodeId node, RestartFn fn) {
    restart_hooks_[node] = std::move(fn);
}

GroupId Netsim::create_group() {
    GroupId id = static_cast<GroupId>(groups_.size());
    groups_[id];
    return id;
}

void Netsim::join(GroupId group, NodeId node) {
    auto it = groups_.find(group);
    if (it == groups_.end()) throw RoutingError("unknown group");
    it->second.insert(node);
}

void Netsim::leave(GroupId group, NodeId node) {
    auto it = groups_.find(group);
    if (it == groups_.end()) throw RoutingError("unknown group");
    it->second.erase(node);
}

void Netsim::set_link(NodeId src, NodeId dst, LinkParams params) {
    links_[{src, dst}] = params;
}

void Netsim::set_reliable_link(NodeId src, NodeId dst, SimTime delay,
                               std::uint64_t rate) {
    links_[{src, dst}] = LinkParams{0.0, delay, 0xFFFFFFFF, rate};
}

const LinkParams& Netsim::link(NodeId src, NodeId dst) const {
    auto it = links_.find({src, dst});
    return it == links_.end() ? default_link_ : it->second;
}

void Netsim::unicast(NodeId src, NodeId dst,
                     const std::shared_ptr<const Bytes>& payload) {
    const LinkParams& lp = link(src, dst);
    auto& lm = metrics_.links[{src, dst}];
    lm.datagrams_sent += 1;
    lm.bytes_offered += payload->size();

    const std::uint64_t len = payload->size();
    const std::uint64_t frags =
        std::max<std::uint64_t>(1, (len + lp.mtu - 1) / lp.mtu);

    bool delivered = true;
    if (lp.loss_p > 0.0) {
        const std::uint64_t link_seed =
            splitmix64(seed_ ^ (std::uint64_t{src} << 32 | dst));
        Fnv1a h;
        h.update(payload->data(), payload->size());
        const std::uint64_t key =
            splitmix64(link_seed ^ h.digest() ^
                       static_cast<std::uint64_t>(now_) * 0x9e3779b97f4a7c15ull);
        const std::uint64_t trials =
            loss_mode_ == LossMode::PerDatagram ? 1 : frags;
        for (std::uint64_t f = 0; f < trials; ++f) {
            const std::uint64_t u = splitmix64(key + f);
            const double x = static_cast<double>(u >> 11) * 0x1.0p-53;
            if (x < lp.loss_p) {
                delivered = false;
                break;
            }
        }
    }

    if (!delivered) {
        lm.datagrams_lost += 1;
        return;
    }

    // Serialization occupies the link; back-to-back sends queue up.
    SimTime start = now_;
    SimTime finish = start;
    if (lp.rate > 0) {
        auto& busy = link_busy_until_[{src, dst}];
        start = std::max(now_, busy);
        finish = start + static_cast<SimTime>((len * 1'000'000 + lp.rate - 1) / lp.rate);
        busy = finish;
    }
    const SimTime arrive = finish + lp.delay;

    schedule(arrive, [this, src, dst, payload, arrive] {
        auto& lm2 = metrics_.links[{src, dst}];
        lm2.datagrams_delivered += 1;
        lm2.bytes_delivered += payload->size();
        auto it = handlers_.find(dst);
        if (it != handlers_.end() && it->second) it->second(src, *payload, arrive);
    });
}

void Netsim::send_datagram(NodeId src, Dest dest, Bytes payload) {
    if (src >= node_count_) throw RoutingError("unknown source node");
    auto shared = std::make_shared<const Bytes>(std::move(payload));

    if (dest.index() == 0) {
        NodeId dst = std::get<0>(dest);
        if (dst >= node_count_) throw RoutingError("unknown destination node");
        metrics_.offered_bytes[src] += shared->size();
        unicast(src, dst, shared);
        return;
    }

    GroupId g = std::get<1>(dest);
    auto it = groups_.find(g);
    if (it == groups_.end()) throw RoutingError("unknown group");
    // One copy onto the wire regardless of member count: the sender is
    // debited once, per-link counters track each member's delivery trial.
    metrics_.offered_bytes[src] += shared->size();
    metrics_.multicast_packets_sent[src] += 1;
    for (NodeId member : it->second) {
        if (member == src) continue;
        unicast(src, member, shared);
    }
}

void Netsim::schedule(SimTime at, std::function<void()> fn) {
    if (at < now_) at = now_;
    queue_.push(Event{at, next_seq_++, std::move(fn)});
}

void Netsim::restart_node(NodeId node, SimTime at) {
    schedule(at, [this, node] {
        auto it = restart_hooks_.find(node);
        if (it != restart_hooks_.end() && it->second) it->second(now_);
    });
}

bool Netsim::step() {
    if (queue_.empty()) return false;
    Event ev = queue_.top();
    queue_.pop();
    now_ = ev.at;
    metrics_.elapsed = now_;
    ev.fn();
    return true;
}

SimMetrics Netsim::run_until(SimTime t) {
    while (!queue_.empty() && queue_.top().at <= t) step();
    now_ = std::max(now_, t);
    metrics_.elapsed = now_;
    return metrics_;
}

SimMetrics Netsim::run_to_completion(std::uint64_t event_budget) {
    std::uint64_t processed = 0;
    while (step()) {
        if (++processed > event_budget)
            throw Livelock("event budget exhausted without quiescence");
    }
    return metrics_;
}

SimMetrics Netsim::run_while(const std::function<bool()>& quiesce,
                             std::uint64_t event_budget) {
    std::uint64_t processed = 0;
    while (!quiesce()) {
        if (!step()) break;
        if (++processed > event_budget)
            throw Livelock("event budget exhausted without quiescence");
    }
    return metrics_;
}

}  // namespace lmcast::netsim
