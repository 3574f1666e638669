#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>

#include "lmcast/fec.hpp"
#include "lmcast/wire.hpp"

// Receiving side: symbol accumulation, eager per-block decode, object
// reassembly (pad strip, decompress, CRC verify) and completion
// detection. Feedback-free: this module never sends anything on a
// multicast group. Replay after a restart arrives through the unicast
// path (deliver_replay).
namespace lmcast::receiver {

struct ReceiverStats {
    std::uint64_t packets_seen = 0;
    std::uint64_t duplicates = 0;
    std::uint64_t used = 0;
};

class MustSubscribeOne : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// CRC mismatch after a full decode means a codec or wire bug; the run
// must abort loudly.
class IntegrityFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ReplayFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Outcome { Progress, ObjectComplete };

class AlcReceiver {
public:
    void subscribe(const std::set<std::uint8_t>& channels);
    const std::set<std::uint8_t>& subscribed() const { return subscribed_; }

    Outcome on_packet(const wire::LctPacket& pkt);

    bool has(ObjectId id) const { return completed_.count(id) != 0; }
    const Bytes& delivered(ObjectId id) const { return completed_.at(id); }
    std::optional<SimTime> completion_time(ObjectId id) const;
    void note_time(SimTime now) { now_ = now; }

    // Objects this receiver had begun (or finished); survives reset() and
    // feeds the replay journal.
    const std::set<ObjectId>& begun_objects() const { return begun_; }

    // Restart: drops all reception state, keeps the journal.
    void reset();

    // Unicast replay delivery of the original payload. Idempotent for
    // already-completed objects; a mismatch against a previous delivery is
    // an IntegrityFailure.
    void deliver_replay(ObjectId id, ByteView payload, SimTime at);

    const ReceiverStats& stats() const { return stats_; }
    std::size_t completed_count() const { return completed_.size(); }
    std::uint64_t retained_symbol_bytes() const { return retained_bytes_; }
    double decode_wall_s(ObjectId id) const;
    double decompress_wall_s(ObjectId id) const;

private:
    struct BlockState {
        std::map<std::uint8_t, Bytes> symbols;  // undecoded symbols by id
        Bytes decoded;                          // source bytes once decoded
        bool done = false;
    };
    struct ObjectState {
        wire::ObjectTransmissionInfo oti;
        std::map<std::uint32_t, BlockState> blocks;
        std::uint32_t blocks_done = 0;
    };

    void try_decode_block(ObjectId id, std::uint32_t block_no, BlockState& bs,
                          std::uint8_t k, std::uint8_t n);
    Outcome finish_object(ObjectId id, ObjectState& os);

    std::set<std::uint8_t> subscribed_;
    std::map<ObjectId, ObjectState> objects_;
    std::map<ObjectId, Bytes> completed_;
    std::map<ObjectId, SimTime> completion_times_;
    std::map<ObjectId, double> decode_wall_;
    std::map<ObjectId, double> decompress_wall_;
    std::set<ObjectId> begun_;
    ReceiverStats stats_;
    std::uint64_t retained_bytes_ = 0;
    SimTime now_ = 0;
};

}  // namespace lmcast::receiver
