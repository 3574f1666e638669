#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <vector>

#include "lmcast/netsim.hpp"
#include "lmcast/receiver.hpp"
#include "lmcast/sender.hpp"

// Glue that drives one multicast session over the simulator: periodic
// sender ticks feeding the channel groups, per-receiver delivery, the
// replay journal, and restart-with-replay over the lossless unicast path.
namespace lmcast::session {

struct SessionHarness {
    SessionHarness(netsim::Netsim& net, sender::SessionConfig config,
                   SimTime tick_interval = 1000);

    // Adds a receiver node subscribed to the given channels (empty set is
    // rejected by the receiver).
    std::size_t add_receiver(const std::set<std::uint8_t>& channels);

    ObjectId submit(ByteView payload);

    // Runs until every receiver has delivered every submitted object (or
    // throws Livelock). With cycles_per_object == 0 the harness advances
    // the carousel object once all receivers have it.
    void run(std::uint64_t event_budget = 200'000'000);
    // Runs for a fixed sim duration regardless of completion (used by
    // emission-trace experiments with auto-advancing objects).
    void run_for(SimTime duration);

    void restart_receiver(std::size_t idx, SimTime at);

    netsim::Netsim& net;
    sender::AlcSender alc;
    NodeId sender_node;
    std::vector<GroupId> channel_groups;

    struct Rx {
        NodeId node;
        NodeId replay_node;  // lossless unicast port for replay delivery
        std::unique_ptr<receiver::AlcReceiver> recv;
    };
    std::vector<Rx> receivers;
    std::vector<ObjectId> submitted;

    SimTime tick_interval;

private:
    void pump();
    void install_receiver(std::size_t idx);
    bool all_complete() const;
    void replay_begun_objects(std::size_t idx, SimTime at);

    bool ticking_ = false;
    mutable std::size_t scan_rx_ = 0;
    mutable std::size_t scan_obj_ = 0;
};

}  // namespace lmcast::session
