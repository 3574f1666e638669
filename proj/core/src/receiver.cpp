#include "lmcast/receiver.hpp"

#include <chrono>

#include "lmcast/compress.hpp"

namespace lmcast::receiver {

void AlcReceiver::subscribe(const std::set<std::uint8_t>& channels) {
    if (channels.empty())
        throw MustSubscribeOne("must subscribe to at least one channel");
    subscribed_ = channels;
}

std::optional<SimTime> AlcReceiver::completion_time(ObjectId id) const {
    auto it = completion_times_.find(id);
    if (it == completion_times_.end()) return std::nullopt;
    return it->second;
}

void AlcReceiver::reset() {
    objects_.clear();
    completed_.clear();
    completion_times_.clear();
    decode_wall_.clear();
    decompress_wall_.clear();
    stats_ = {};
    retained_bytes_ = 0;
}

Outcome AlcReceiver::on_packet(const wire::LctPacket& pkt) {
    stats_.packets_seen += 1;
    begun_.insert(pkt.object_id);

    if (completed_.count(pkt.object_id)) {
        stats_.duplicates += 1;
        return Outcome::Progress;
    }

    auto& os = objects_[pkt.object_id];
    if (os.blocks.empty() && os.blocks_done == 0) os.oti = pkt.oti;

    auto& bs = os.blocks[pkt.block_no];
    if (bs.done) {
        stats_.duplicates += 1;
        return Outcome::Progress;
    }
    auto [it, inserted] = bs.symbols.try_emplace(pkt.symbol_id, pkt.payload);
    if (!inserted) {
        stats_.duplicates += 1;
        return Outcome::Progress;
    }
    stats_.used += 1;
    retained_bytes_ += pkt.payload.size();

    if (bs.symbols.size() >= pkt.k)
        try_decode_block(pkt.object_id, pkt.block_no, bs, pkt.k, pkt.n);

    if (bs.done) {
        os.blocks_done += 1;
        if (os.blocks_done == os.oti.block_count) return finish_object(pkt.object_id, os);
    }
    return Outcome::Progress;
}

void AlcReceiver::try_decode_block(ObjectId id, std::uint32_t block_no,
                                   BlockState& bs, std::uint8_t k,
                                   std::uint8_t n) {
    std::vector<fec::EncodedSymbol> received;
    received.reserve(bs.symbols.size());
    for (auto& [sid, data] : bs.symbols) received.push_back({sid, std::move(data)});

    const auto t0 = std::chrono::steady_clock::now();
    auto result = fec::decode(k, n, received);
    const auto t1 = std::chrono::steady_clock::now();
    decode_wall_[id] += std::chrono::duration<double>(t1 - t0).count();

    auto* src = std::get_if<fec::SourceBlock>(&result);
    if (src == nullptr) {
        // Not enough symbols cannot happen here (callers gate on k), but
        // restore the moved-out data either way.
        for (auto& s : received) bs.symbols[s.id] = std::move(s.data);
        return;
    }

    // Decoded blocks free their symbol store; memory stays bounded by the
    // undecoded blocks only.
    for (const auto& s : received) retained_bytes_ -= s.data.size();
    bs.symbols.clear();

    bs.decoded.reserve(static_cast<std::size_t>(k) * src->symbol_size);
    for (auto& sym : src->symbols)
        bs.decoded.insert(bs.decoded.end(), sym.begin(), sym.end());
    bs.done = true;
    (void)block_no;
}

Outcome AlcReceiver::finish_object(ObjectId id, ObjectState& os) {
    Bytes assembled;
    assembled.reserve(os.oti.compressed_len);
    for (auto& [no, blk] : os.blocks)
        assembled.insert(assembled.end(), blk.decoded.begin(), blk.decoded.end());
    // Strip the zero pad of the final symbol.
    assembled.resize(os.oti.compressed_len);

    Bytes original;
    if (os.oti.compressed) {
        const auto t0 = std::chrono::steady_clock::now();
        original = compress::inflate(assembled, os.oti.transfer_len);
        const auto t1 = std::chrono::steady_clock::now();
        decompress_wall_[id] += std::chrono::duration<double>(t1 - t0).count();
    } else {
        original = std::move(assembled);
        if (original.size() != os.oti.transfer_len)
            throw IntegrityFailure("reassembled length disagrees with OTI");
    }

    if (compress::crc32(original) != os.oti.checksum)
        throw IntegrityFailure("CRC mismatch after full decode");

    completed_[id] = std::move(original);
    completion_times_[id] = now_;
    objects_.erase(id);
    return Outcome::ObjectComplete;
}

void AlcReceiver::deliver_replay(ObjectId id, ByteView payload, SimTime at) {
    auto it = completed_.find(id);
    if (it != completed_.end()) {
        if (it->second.size() != payload.size() ||
            !std::equal(payload.begin(), payload.end(), it->second.begin()))
            throw IntegrityFailure("replay bytes disagree with delivered object");
        return;
    }
    begun_.insert(id);
    completed_[id] = Bytes(payload.begin(), payload.end());
    completion_times_[id] = at;
    objects_.erase(id);
}

double AlcReceiver::decode_wall_s(ObjectId id) const {
    auto it = decode_wall_.find(id);
    return it == decode_wall_.end() ? 0.0 : it->second;
}

double AlcReceiver::decompress_wall_s(ObjectId id) const {
    auto it = decompress_wall_.find(id);
    return it == decompress_wall_.end() ? 0.0 : it->second;
}

}  // namespace lmcast::receiver
