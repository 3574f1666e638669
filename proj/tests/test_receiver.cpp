#include <doctest.h>

#include <random>

#include "lmcast/netsim.hpp"
#include "lmcast/receiver.hpp"
#include "lmcast/sender.hpp"
#include "lmcast/session.hpp"

using namespace lmcast;
using receiver::AlcReceiver;
using receiver::Outcome;

namespace {

Bytes random_payload(std::mt19937_64& rng, std::size_t len) {
    Bytes out(len);
    for (auto& b : out) b = static_cast<std::uint8_t>(rng());
    return out;
}

// All packets of one object in carousel order, straight from the sender.
std::vector<wire::LctPacket> packets_for(const Bytes& payload,
                                         sender::SessionConfig cfg) {
    cfg.channel_count = 1;
    cfg.cycles_per_object = 1;
    sender::AlcSender alc(cfg);
    alc.submit_object(payload);
    std::vector<wire::LctPacket> out;
    SimTime t = 0;
    while (alc.has_active_object())
        for (auto& [ch, p] : alc.tick(t += 1000)) out.push_back(p);
    return out;
}

sender::SessionConfig no_compression() {
    sender::SessionConfig cfg;
    cfg.compression.enabled = false;
    return cfg;
}

}  // namespace

TEST_CASE("subscribe requires at least one channel") {
    AlcReceiver r;
    CHECK_THROWS_AS(r.subscribe({}), receiver::MustSubscribeOne);
    r.subscribe({0, 2});
    CHECK(r.subscribed() == std::set<std::uint8_t>{0, 2});
}

TEST_CASE("loss-free stream delivers exact bytes") {
    std::mt19937_64 rng(1);
    Bytes payload = random_payload(rng, 50000);
    auto pkts = packets_for(payload, no_compression());

    AlcReceiver r;
    r.subscribe({0});
    Outcome last = Outcome::Progress;
    for (auto& p : pkts) {
        if (r.has(p.object_id)) break;
        last = r.on_packet(p);
    }
    CHECK(last == Outcome::ObjectComplete);
    CHECK(r.delivered(pkts[0].object_id) == payload);
}

TEST_CASE("compressed stream delivers exact bytes") {
    std::mt19937_64 rng(2);
    Bytes payload;
    for (int i = 0; i < 30000; ++i)
        payload.push_back(static_cast<std::uint8_t>(i % 37));
    auto pkts = packets_for(payload, sender::SessionConfig{});

    AlcReceiver r;
    r.subscribe({0});
    for (auto& p : pkts) {
        if (r.has(p.object_id)) break;
        r.on_packet(p);
    }
    REQUIRE(r.has(pkts[0].object_id));
    CHECK(r.delivered(pkts[0].object_id) == payload);
    CHECK(r.decompress_wall_s(pkts[0].object_id) >= 0.0);
}

TEST_CASE("duplicates count but do not change state") {
    std::mt19937_64 rng(3);
    Bytes payload = random_payload(rng, 4096);
    auto pkts = packets_for(payload, no_compression());

    AlcReceiver r;
    r.subscribe({0});
    CHECK(r.on_packet(pkts[0]) == Outcome::Progress);
    CHECK(r.on_packet(pkts[0]) == Outcome::Progress);
    CHECK(r.stats().duplicates == 1);
    CHECK(r.stats().used == 1);
}

TEST_CASE("all-parity completion recovers the source") {
    std::mt19937_64 rng(4);
    Bytes payload = random_payload(rng, 8 * 1024);  // k=8, n=24 single block
    auto pkts = packets_for(payload, no_compression());

    AlcReceiver r;
    r.subscribe({0});
    int fed = 0;
    for (auto& p : pkts) {
        if (p.symbol_id < p.k) continue;  // every source symbol lost
        r.on_packet(p);
        ++fed;
        if (r.has(p.object_id)) break;
    }
    REQUIRE(r.has(pkts[0].object_id));
    CHECK(fed == 8);
    CHECK(r.delivered(pkts[0].object_id) == payload);
}

TEST_CASE("decoded blocks release their symbol memory") {
    std::mt19937_64 rng(5);
    Bytes payload = random_payload(rng, 200 * 1024);
    auto pkts = packets_for(payload, no_compression());

    AlcReceiver r;
    r.subscribe({0});
    std::uint64_t peak = 0;
    for (auto& p : pkts) {
        if (r.has(p.object_id)) break;
        r.on_packet(p);
        peak = std::max(peak, r.retained_symbol_bytes());
    }
    // Eager decode keeps at most one undecoded block's worth in flight
    // when symbols arrive in carousel order.
    CHECK(peak <= 64ull * 1024);
    CHECK(r.retained_symbol_bytes() == 0);
}

TEST_CASE("corrupted checksum aborts loudly") {
    std::mt19937_64 rng(6);
    Bytes payload = random_payload(rng, 4096);
    auto pkts = packets_for(payload, no_compression());
    for (auto& p : pkts) p.oti.checksum ^= 0xDEADBEEF;

    AlcReceiver r;
    r.subscribe({0});
    CHECK_THROWS_AS(
        {
            for (auto& p : pkts) r.on_packet(p);
        },
        receiver::IntegrityFailure);
}

TEST_CASE("replay delivery is idempotent and checked") {
    std::mt19937_64 rng(7);
    Bytes payload = random_payload(rng, 4096);
    auto pkts = packets_for(payload, no_compression());

    AlcReceiver r;
    r.subscribe({0});
    for (auto& p : pkts) {
        if (r.has(p.object_id)) break;
        r.on_packet(p);
    }
    const ObjectId id = pkts[0].object_id;
    REQUIRE(r.has(id));

    r.deliver_replay(id, payload, 123);  // idempotent
    CHECK(r.delivered(id) == payload);

    Bytes wrong = payload;
    wrong[0] ^= 1;
    CHECK_THROWS_AS(r.deliver_replay(id, wrong, 124),
                    receiver::IntegrityFailure);
}

TEST_CASE("journal survives reset") {
    std::mt19937_64 rng(8);
    Bytes payload = random_payload(rng, 4096);
    auto pkts = packets_for(payload, no_compression());

    AlcReceiver r;
    r.subscribe({0});
    r.on_packet(pkts[0]);
    CHECK(r.begun_objects().count(pkts[0].object_id) == 1);
    r.reset();
    CHECK(r.begun_objects().count(pkts[0].object_id) == 1);
    CHECK(r.stats().packets_seen == 0);
    CHECK_FALSE(r.has(pkts[0].object_id));
}

TEST_CASE("receivers never transmit on multicast groups") {
    netsim::Netsim net(9);
    session::SessionHarness h(net, no_compression());
    h.add_receiver({0, 1, 2, 3, 4});
    h.add_receiver({0});
    std::mt19937_64 rng(10);
    h.submit(random_payload(rng, 30000));
    h.run();

    for (auto& rx : h.receivers) {
        auto it = net.metrics().multicast_packets_sent.find(rx.node);
        CHECK((it == net.metrics().multicast_packets_sent.end() ||
               it->second == 0));
    }
}

TEST_CASE("more subscriptions never slow completion under shared seed") {
    auto completion_with = [](std::set<std::uint8_t> channels) {
        netsim::Netsim net(77);
        netsim::LinkParams lp;
        lp.loss_p = 0.05;
        net.set_default_link(lp);
        session::SessionHarness h(net, no_compression());
        h.add_receiver(channels);
        std::mt19937_64 rng(11);
        ObjectId id = h.submit(random_payload(rng, 60000));
        h.run();
        return *h.receivers[0].recv->completion_time(id);
    };
    const SimTime one = completion_with({0});
    const SimTime all = completion_with({0, 1, 2, 3, 4});
    CHECK(all <= one);
}

TEST_CASE("end-to-end under loss with expansion headroom") {
    netsim::Netsim net(13);
    netsim::LinkParams lp;
    lp.loss_p = 0.07;
    net.set_default_link(lp);
    session::SessionHarness h(net, sender::SessionConfig{});
    h.add_receiver({0, 1, 2, 3, 4});
    h.add_receiver({0, 1});
    std::mt19937_64 rng(12);
    Bytes a = random_payload(rng, 100000);
    Bytes b = random_payload(rng, 5000);
    ObjectId ia = h.submit(a);
    ObjectId ib = h.submit(b);
    h.run();
    for (auto& rx : h.receivers) {
        CHECK(rx.recv->delivered(ia) == a);
        CHECK(rx.recv->delivered(ib) == b);
    }
}
