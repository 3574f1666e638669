#include "lmcast/sender.hpp"

#include <cmath>

namespace lmcast::sender {

void SessionConfig::validate() const {
    if (channel_count < 1 || channel_count > 16)
        throw std::invalid_argument("channel_count must be in [1, 16]");
    if (base_rate == 0) throw std::invalid_argument("base_rate must be > 0");
    if (layering_factor < 1.0)
        throw std::invalid_argument("layering_factor must be >= 1");
    if (symbol_size == 0) throw std::invalid_argument("symbol_size must be > 0");
    if (max_k < 1 || max_k > fec::kMaxK)
        throw std::invalid_argument("max_k must be in [1, 128]");
    if (staging_buffer_len < symbol_size)
        throw std::invalid_argument("staging buffer smaller than one symbol");
    if (expansion.total_symbols(max_k) > fec::kMaxN)
        throw fec::CodeTooWide("max_k * (1+expansion) exceeds 255");
}

AlcSender::AlcSender(SessionConfig config) : cfg_(std::move(config)) {
    cfg_.validate();
    channels_.resize(cfg_.channel_count);
    double rate = static_cast<double>(cfg_.base_rate);
    for (auto& ch : channels_) {
        ch.rate = static_cast<std::uint64_t>(std::llround(rate));
        rate *= cfg_.layering_factor;
    }
}

ObjectId AlcSender::submit_object(ByteView payload) {
    if (closed_) throw SessionClosed("submit on closed session");
    const ObjectId id = next_id_++;
    const SimTime t = last_tick_.value_or(0);

    // Pessimistic log: the payload copy lands in the sender log before any
    // packet for it can leave (the caller's buffer may be reused as soon
    // as we return).
    log_.emplace(id, Bytes(payload.begin(), payload.end()));
    events_.push_back({SenderEvent::Kind::LogWrite, id, t, payload.size()});

    wire::ObjectTransmissionInfo oti;
    oti.transfer_len = payload.size();
    oti.symbol_size = static_cast<std::uint16_t>(cfg_.symbol_size);
    oti.expansion = cfg_.expansion;
    oti.checksum = compress::crc32(payload);

    // The staging buffer bounds how many source symbols the encoder holds
    // at once; it also caps the block size.
    const auto cap_syms = static_cast<std::uint16_t>(std::min<std::uint64_t>(
        cfg_.max_k, cfg_.staging_buffer_len / cfg_.symbol_size));
    oti.max_k = static_cast<std::uint8_t>(std::min<std::uint16_t>(cap_syms, 255));

    ActiveObject obj;
    obj.id = id;

    if (payload.empty()) {
        oti.compressed_len = 0;
        oti.block_count = 0;
        oti.compressed = false;
        comp_stats_[id] = {};
    } else {
        Bytes wire_payload;
        if (cfg_.compression.enabled) {
            auto [stream, stats] = compress::deflate(payload, cfg_.compression);
            wire_payload = std::move(stream);
            comp_stats_[id] = stats;
            oti.compressed = true;
        } else {
            wire_payload.assign(payload.begin(), payload.end());
            comp_stats_[id] = {payload.size(), payload.size(), 0.0, 0.0};
            oti.compressed = false;
        }
        oti.compressed_len = wire_payload.size();

        auto blocks = fec::partition(wire_payload, cfg_.symbol_size, cap_syms, id);
        oti.block_count = static_cast<std::uint32_t>(blocks.size());

        // Encode block by block, flushing each filled staging chunk into
        // the carousel before pulling in the next one.
        std::uint64_t consumed = 0;
        std::uint64_t chunk_src_bytes = 0;
        for (const auto& blk : blocks) {
            const std::uint64_t blk_src =
                std::min<std::uint64_t>(static_cast<std::uint64_t>(blk.k) * cfg_.symbol_size,
                                        wire_payload.size() - consumed);
            if (chunk_src_bytes + blk_src > cfg_.staging_buffer_len &&
                chunk_src_bytes > 0) {
                events_.push_back(
                    {SenderEvent::Kind::StagingChunk, id, t, chunk_src_bytes});
                chunk_src_bytes = 0;
            }
            chunk_src_bytes += blk_src;
            consumed += blk_src;

            auto enc = fec::encode(blk, cfg_.expansion);
            for (auto& sym : enc.symbols) {
                obj.symbols.push_back({blk.block_no, sym.id,
                                       static_cast<std::uint8_t>(enc.k),
                                       static_cast<std::uint8_t>(enc.n),
                                       sym.id >= enc.k,
                                       std::make_shared<const Bytes>(std::move(sym.data))});
            }
        }
        if (chunk_src_bytes > 0)
            events_.push_back(
                {SenderEvent::Kind::StagingChunk, id, t, chunk_src_bytes});
    }

    oti.compressed = oti.compressed && cfg_.compression.enabled;
    otis_[id] = oti;
    obj.oti = oti;

    queue_.push_back(std::move(obj));
    if (!active_) activate_next();
    return id;
}

void AlcSender::activate_next() {
    if (queue_.empty()) {
        active_.reset();
        return;
    }
    active_ = std::move(queue_.front());
    queue_.pop_front();
    const std::size_t n_total = active_->symbols.size();
    const std::size_t c = channels_.size();
    for (std::size_t i = 0; i < c; ++i) {
        auto& ch = channels_[i];
        ch.start_offset = n_total == 0 ? 0 : i * n_total / c;
        ch.cursor = ch.start_offset;
        ch.emitted_in_walk = 0;
        ch.walks_completed = 0;
        ch.first_walk_payload = 0;
        ch.first_walk_header = 0;
    }
    // An empty object carries no symbols and completes with zero packets.
    if (n_total == 0) activate_next();
}

wire::LctPacket AlcSender::make_packet(const ActiveObject& obj,
                                       std::uint8_t channel,
                                       const CarouselSymbol& sym) const {
    wire::LctPacket p;
    p.flags = sym.parity ? wire::kFlagParity : 0;
    p.session_id = cfg_.session_id;
    p.channel_id = channel;
    p.object_id = obj.id;
    p.block_no = sym.block_no;
    p.symbol_id = sym.symbol_id;
    p.k = sym.k;
    p.n = sym.n;
    p.oti = obj.oti;
    p.payload = *sym.data;
    return p;
}

std::vector<std::pair<std::uint8_t, wire::LctPacket>> AlcSender::tick(SimTime now) {
    std::vector<std::pair<std::uint8_t, wire::LctPacket>> out;
    const SimTime last = last_tick_.value_or(now);
    const SimTime dt = now > last ? now - last : 0;
    last_tick_ = std::max(now, last);

    if (!active_) {
        for (auto& ch : channels_) ch.tokens = 0.0;
        return out;
    }

    const double pkt_bytes =
        static_cast<double>(wire::kFixedLen) + cfg_.symbol_size;

    for (std::size_t i = 0; i < channels_.size(); ++i) {
        auto& ch = channels_[i];
        ch.tokens += static_cast<double>(ch.rate) * dt / 1e6;
        while (active_ && ch.tokens >= pkt_bytes) {
            const std::size_t n_total = active_->symbols.size();
            const CarouselSymbol& sym = active_->symbols[ch.cursor];
            out.emplace_back(static_cast<std::uint8_t>(i),
                             make_packet(*active_, static_cast<std::uint8_t>(i), sym));
            ch.tokens -= pkt_bytes;
            payload_bytes_ += cfg_.symbol_size;
            header_bytes_ += wire::kFixedLen;
            trace_.push_back({now, static_cast<std::uint8_t>(i), active_->id,
                              sym.block_no, sym.symbol_id});
            events_.push_back({SenderEvent::Kind::PacketEmit, active_->id, now,
                               wire::kFixedLen + cfg_.symbol_size});
            if (ch.walks_completed == 0) {
                ch.first_walk_payload += cfg_.symbol_size;
                ch.first_walk_header += wire::kFixedLen;
            }
            ch.cursor = (ch.cursor + 1) % n_total;
            if (++ch.emitted_in_walk == n_total) {
                ch.emitted_in_walk = 0;
                ch.walks_completed += 1;
            }
            if (cfg_.cycles_per_object > 0 &&
                active_cycles() >= cfg_.cycles_per_object) {
                advance_object();
                break;
            }
        }
    }
    return out;
}

std::optional<ObjectId> AlcSender::active_object() const {
    if (!active_) return std::nullopt;
    return active_->id;
}

std::uint32_t AlcSender::active_cycles() const {
    if (!active_) return 0;
    std::uint32_t m = UINT32_MAX;
    for (const auto& ch : channels_) m = std::min(m, ch.walks_completed);
    return m;
}

void AlcSender::advance_object() { activate_next(); }

const Bytes& AlcSender::handle_unicast_request(ObjectId object_id) const {
    auto it = log_.find(object_id);
    if (it == log_.end()) throw NotLogged("object not in sender log");
    return it->second;
}

const wire::ObjectTransmissionInfo& AlcSender::oti(ObjectId object_id) const {
    auto it = otis_.find(object_id);
    if (it == otis_.end()) throw NotLogged("object has no OTI");
    return it->second;
}

void AlcSender::evict(ObjectId object_id) {
    if (log_.erase(object_id) == 0) throw NotLogged("evict of unknown object");
}

std::uint64_t AlcSender::trace_digest() const {
    Fnv1a h;
    for (const auto& r : trace_) {
        h.update_value(r.time);
        h.update_value(r.channel);
        h.update_value(r.object);
        h.update_value(r.block);
        h.update_value(r.symbol);
    }
    return h.digest();
}

std::pair<std::uint64_t, std::uint64_t> AlcSender::first_walk_bytes(
    std::uint8_t ch) const {
    const auto& c = channels_.at(ch);
    if (c.walks_completed == 0) return {0, 0};
    return {c.first_walk_payload, c.first_walk_header};
}

const compress::CompressionStats& AlcSender::compression_stats(ObjectId id) const {
    auto it = comp_stats_.find(id);
    if (it == comp_stats_.end()) throw NotLogged("object has no stats");
    return it->second;
}

std::uint64_t AlcSender::symbols_per_cycle() const {
    return active_ ? active_->symbols.size() : 0;
}

}  // namespace lmcast::sender
