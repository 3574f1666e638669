#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lmcast/compress.hpp"
#include "lmcast/fec.hpp"
#include "lmcast/wire.hpp"

// Sending side of a session: compress -> partition -> encode through a
// bounded staging buffer into a multi-channel rate-limited carousel, plus
// the sender-based object log that makes replay-as-unicast possible.
// Emission is a pure function of (config, submitted objects, tick
// sequence); receivers never influence it.
namespace lmcast::sender {

struct SessionConfig {
    std::uint32_t session_id = 1;
    std::uint32_t channel_count = 5;          // C, 1..16
    std::uint64_t base_rate = 1'000'000;      // bytes/sec on channel 0
    double layering_factor = 2.0;             // channel i rate = base * f^i
    Expansion expansion = Expansion::from_double(2.0);
    std::uint32_t symbol_size = 1024;
    std::uint16_t max_k = 64;
    std::uint32_t staging_buffer_len = 65536;
    compress::CompressionConfig compression;
    // 0 = the harness advances objects explicitly (e.g. on receiver
    // completion); >0 = auto-advance after that many full carousel cycles,
    // keeping emission independent of anything receivers do.
    std::uint32_t cycles_per_object = 0;

    void validate() const;
};

struct EmissionRecord {
    SimTime time = 0;
    std::uint8_t channel = 0;
    ObjectId object = 0;
    std::uint32_t block = 0;
    std::uint8_t symbol = 0;
};

// Pipeline event log; the log-write entry for an object always precedes
// its first packet entry (pessimistic logging).
struct SenderEvent {
    enum class Kind { LogWrite, StagingChunk, PacketEmit };
    Kind kind;
    ObjectId object;
    SimTime time;
    std::uint64_t bytes;
};

class SessionClosed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotLogged : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AlcSender {
public:
    explicit AlcSender(SessionConfig config);

    ObjectId submit_object(ByteView payload);

    // Emits whatever the per-channel token buckets allow at `now`.
    std::vector<std::pair<std::uint8_t, wire::LctPacket>> tick(SimTime now);

    // Replay path: returns the ORIGINAL payload from the sender log.
    const Bytes& handle_unicast_request(ObjectId object_id) const;
    const wire::ObjectTransmissionInfo& oti(ObjectId object_id) const;

    void evict(ObjectId object_id);
    void close() { closed_ = true; }

    bool has_active_object() const { return active_.has_value(); }
    std::optional<ObjectId> active_object() const;
    std::size_t queued_objects() const { return queue_.size(); }
    // Full carousel cycles the active object has completed (min over
    // channels of complete symbol-sequence walks).
    std::uint32_t active_cycles() const;
    void advance_object();

    const std::vector<EmissionRecord>& emission_trace() const { return trace_; }
    std::uint64_t trace_digest() const;
    const std::vector<SenderEvent>& event_log() const { return events_; }

    std::uint64_t emitted_payload_bytes() const { return payload_bytes_; }
    std::uint64_t emitted_header_bytes() const { return header_bytes_; }
    // Bytes of channel `ch`'s first complete walk over the active object's
    // symbol sequence (payload, header); zero until that walk finishes.
    std::pair<std::uint64_t, std::uint64_t> first_walk_bytes(std::uint8_t ch) const;

    const SessionConfig& config() const { return cfg_; }
    const compress::CompressionStats& compression_stats(ObjectId id) const;
    std::uint64_t symbols_per_cycle() const;  // n_total of the active object

private:
    struct CarouselSymbol {
        std::uint32_t block_no;
        std::uint8_t symbol_id;
        std::uint8_t k, n;
        bool parity;
        std::shared_ptr<const Bytes> data;
    };
    struct ActiveObject {
        ObjectId id;
        wire::ObjectTransmissionInfo oti;
        std::vector<CarouselSymbol> symbols;  // n_total entries, block order
    };
    struct Channel {
        std::uint64_t rate = 0;     // bytes/sec
        double tokens = 0.0;
        std::size_t cursor = 0;
        std::size_t start_offset = 0;
        std::uint64_t emitted_in_walk = 0;
        std::uint32_t walks_completed = 0;
        std::uint64_t first_walk_payload = 0;
        std::uint64_t first_walk_header = 0;
    };

    void activate_next();
    wire::LctPacket make_packet(const ActiveObject& obj, std::uint8_t channel,
                                const CarouselSymbol& sym) const;

    SessionConfig cfg_;
    bool closed_ = false;
    ObjectId next_id_ = 1;
    std::optional<SimTime> last_tick_;

    std::map<ObjectId, Bytes> log_;  // sender-based log, original payloads
    std::map<ObjectId, wire::ObjectTransmissionInfo> otis_;
    std::map<ObjectId, compress::CompressionStats> comp_stats_;

    std::deque<ActiveObject> queue_;
    std::optional<ActiveObject> active_;
    std::vector<Channel> channels_;

    std::vector<EmissionRecord> trace_;
    std::vector<SenderEvent> events_;
    std::uint64_t payload_bytes_ = 0;
    std::uint64_t header_bytes_ = 0;
};

}  // namespace lmcast::sender
