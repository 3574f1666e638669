#include "lmcast/session.hpp"

namespace lmcast::session {

namespace {

constexpr std::uint8_t kReplayTag = 0x52;  // 'R'

Bytes frame_replay(ObjectId id, const Bytes& payload) {
    Bytes out;
    out.reserve(5 + payload.size());
    out.push_back(kReplayTag);
    for (int s = 24; s >= 0; s -= 8)
        out.push_back(static_cast<std::uint8_t>(id >> s));
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

}  // namespace

SessionHarness::SessionHarness(netsim::Netsim& n, sender::SessionConfig config,
                               SimTime interval)
    : net(n), alc(std::move(config)), tick_interval(interval) {
    sender_node = net.add_node();
    for (std::uint32_t c = 0; c < alc.config().channel_count; ++c)
        channel_groups.push_back(net.create_group());
}

std::size_t SessionHarness::add_receiver(const std::set<std::uint8_t>& channels) {
    Rx rx;
    rx.node = net.add_node();
    rx.recv = std::make_unique<receiver::AlcReceiver>();
    rx.recv->subscribe(channels);
    for (std::uint8_t c : channels) net.join(channel_groups.at(c), rx.node);
    // Dedicated replay port: lossless, paced at the channel-0 rate, so the
    // replay path never shares loss state with the multicast links.
    rx.replay_node = net.add_node();
    net.set_reliable_link(sender_node, rx.replay_node, 0,
                          alc.config().base_rate);

    receivers.push_back(std::move(rx));
    scan_rx_ = 0;
    scan_obj_ = 0;
    const std::size_t idx = receivers.size() - 1;
    install_receiver(idx);
    return idx;
}

void SessionHarness::install_receiver(std::size_t idx) {
    Rx& rx = receivers[idx];
    receiver::AlcReceiver* recv = rx.recv.get();

    net.set_handler(rx.node, [recv](NodeId, const Bytes& datagram, SimTime at) {
        recv->note_time(at);
        recv->on_packet(wire::decode_packet(datagram));
    });
    net.set_handler(rx.replay_node,
                    [recv](NodeId, const Bytes& datagram, SimTime at) {
        if (datagram.size() < 5 || datagram[0] != kReplayTag)
            throw receiver::ReplayFailed("malformed replay frame");
        ObjectId id = 0;
        for (int i = 1; i <= 4; ++i) id = id << 8 | datagram[i];
        recv->deliver_replay(
            id, ByteView{datagram.data() + 5, datagram.size() - 5}, at);
    });
    net.set_restart_hook(rx.node, [this, idx](SimTime at) {
        receivers[idx].recv->reset();
        scan_rx_ = 0;
        scan_obj_ = 0;
        replay_begun_objects(idx, at);
    });
}

void SessionHarness::replay_begun_objects(std::size_t idx, SimTime at) {
    const Rx& rx = receivers[idx];
    // The journal survives reset; re-request everything it names.
    for (ObjectId id : rx.recv->begun_objects()) {
        Bytes payload;
        try {
            payload = alc.handle_unicast_request(id);
        } catch (const sender::NotLogged&) {
            throw receiver::ReplayFailed("sender log has evicted the object");
        }
        net.send_datagram(sender_node, netsim::to_node(rx.replay_node),
                          frame_replay(id, payload));
    }
    (void)at;
}

ObjectId SessionHarness::submit(ByteView payload) {
    ObjectId id = alc.submit_object(payload);
    submitted.push_back(id);
    scan_rx_ = 0;
    scan_obj_ = 0;
    if (payload.empty()) {
        // No packets ever carry an empty object; deliver the empty bytes
        // directly, standing in for delivery on OTI receipt.
        for (auto& rx : receivers) rx.recv->deliver_replay(id, {}, net.now());
    }
    if (!ticking_) {
        ticking_ = true;
        pump();
    }
    return id;
}

void SessionHarness::pump() {
    net.schedule(net.now() + tick_interval, [this] {
        auto packets = alc.tick(net.now());
        for (auto& [ch, pkt] : packets)
            net.send_datagram(sender_node, netsim::to_group(channel_groups[ch]),
                              wire::encode_packet(pkt));

        // Harness-driven advancement: move to the next object once every
        // receiver holds the current one.
        if (alc.config().cycles_per_object == 0 && alc.has_active_object()) {
            const ObjectId cur = *alc.active_object();
            bool everyone = !receivers.empty();
            for (auto& rx : receivers)
                if (!rx.recv->has(cur)) { everyone = false; break; }
            if (everyone) alc.advance_object();
        }

        if (alc.has_active_object() || alc.queued_objects() > 0) {
            pump();
        } else {
            ticking_ = false;
        }
    });
}

bool SessionHarness::all_complete() const {
    // Completion is monotone per receiver (a restart rewinds the cursor),
    // so a resumable scan keeps the per-event quiescence check cheap.
    while (scan_rx_ < receivers.size()) {
        if (scan_obj_ >= submitted.size()) {
            scan_rx_ += 1;
            scan_obj_ = 0;
            continue;
        }
        if (!receivers[scan_rx_].recv->has(submitted[scan_obj_])) return false;
        scan_obj_ += 1;
    }
    return true;
}

void SessionHarness::run(std::uint64_t event_budget) {
    net.run_while([this] { return all_complete(); }, event_budget);
    if (!all_complete())
        throw netsim::Livelock("event queue drained before every receiver completed");
}

void SessionHarness::run_for(SimTime duration) {
    net.run_until(net.now() + duration);
}

void SessionHarness::restart_receiver(std::size_t idx, SimTime at) {
    net.restart_node(receivers.at(idx).node, at);
}

}  // namespace lmcast::session
