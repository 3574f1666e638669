#include "lmcast/wire.hpp"

#include <cstring>

namespace lmcast::wire {

// Layout (all multi-byte fields big-endian):
//   0  magic u16          17 symbol_id u8
//   2  version u8         18 k u8
//   3  flags u8           19 n u8
//   4  session_id u32     20 payload_len u16
//   8  channel_id u8      22 checksum u32 (CRC-32 of original payload)
//   9  object_id u32      26 reserved, 14 zero bytes
//   13 block_no u32
//   40 OTI: transfer_len u64, compressed_len u64, symbol_size u16,
//           max_k u8, expansion_num u8, expansion_den u8,
//           block_count u32, compressed u8
//   66 payload (payload_len bytes)

namespace {

struct Writer {
    Bytes& out;
    void u8(std::uint8_t v) { out.push_back(v); }
    void u16(std::uint16_t v) {
        out.push_back(static_cast<std::uint8_t>(v >> 8));
        out.push_back(static_cast<std::uint8_t>(v));
    }
    void u32(std::uint32_t v) {
        for (int s = 24; s >= 0; s -= 8)
            out.push_back(static_cast<std::uint8_t>(v >> s));
    }
    void u64(std::uint64_t v) {
        for (int s = 56; s >= 0; s -= 8)
            out.push_back(static_cast<std::uint8_t>(v >> s));
    }
};

struct Reader {
    ByteView in;
    std::size_t pos = 0;
    std::uint8_t u8() {
        if (pos + 1 > in.size()) throw Truncated("short datagram");
        return in[pos++];
    }
    std::uint16_t u16() {
        return static_cast<std::uint16_t>(std::uint16_t{u8()} << 8 | u8());
    }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = v << 8 | u8();
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = v << 8 | u8();
        return v;
    }
};

void check_invariants(const LctPacket& p) {
    if (p.payload.size() != p.oti.symbol_size)
        throw EncodeError("payload_len must equal symbol_size");
    if (p.k > p.n) throw EncodeError("k > n");
    if (p.symbol_id >= p.n) throw EncodeError("symbol_id >= n");
    if (p.oti.expansion.den < 1) throw EncodeError("expansion_den < 1");
    if (p.payload.size() > 0xFFFF) throw EncodeError("payload too large");
}

}  // namespace

Bytes encode_packet(const LctPacket& pkt) {
    check_invariants(pkt);

    Bytes out;
    out.reserve(kFixedLen + pkt.payload.size());
    Writer w{out};

    w.u16(pkt.magic);
    w.u8(pkt.version);
    w.u8(pkt.flags);
    w.u32(pkt.session_id);
    w.u8(pkt.channel_id);
    w.u32(pkt.object_id);
    w.u32(pkt.block_no);
    w.u8(pkt.symbol_id);
    w.u8(pkt.k);
    w.u8(pkt.n);
    w.u16(static_cast<std::uint16_t>(pkt.payload.size()));
    w.u32(pkt.oti.checksum);
    out.insert(out.end(), 14, 0);

    w.u64(pkt.oti.transfer_len);
    w.u64(pkt.oti.compressed_len);
    w.u16(pkt.oti.symbol_size);
    w.u8(pkt.oti.max_k);
    w.u8(pkt.oti.expansion.num);
    w.u8(pkt.oti.expansion.den);
    w.u32(pkt.oti.block_count);
    w.u8(pkt.oti.compressed ? 1 : 0);

    out.insert(out.end(), pkt.payload.begin(), pkt.payload.end());
    return out;
}

LctPacket decode_packet(ByteView datagram) {
    Reader r{datagram};

    LctPacket p;
    p.magic = r.u16();
    if (p.magic != kMagic) throw NotOurs("bad magic");
    p.version = r.u8();
    if (p.version != kVersion) throw UnsupportedVersion("unknown version");
    p.flags = r.u8();
    p.session_id = r.u32();
    p.channel_id = r.u8();
    p.object_id = r.u32();
    p.block_no = r.u32();
    p.symbol_id = r.u8();
    p.k = r.u8();
    p.n = r.u8();
    const std::uint16_t payload_len = r.u16();
    p.oti.checksum = r.u32();
    for (int i = 0; i < 14; ++i)
        if (r.u8() != 0) throw Malformed("nonzero reserved byte");

    p.oti.transfer_len = r.u64();
    p.oti.compressed_len = r.u64();
    p.oti.symbol_size = r.u16();
    p.oti.max_k = r.u8();
    p.oti.expansion.num = r.u8();
    p.oti.expansion.den = r.u8();
    p.oti.block_count = r.u32();
    const std::uint8_t compressed = r.u8();
    if (compressed > 1) throw Malformed("bad compressed flag");
    p.oti.compressed = compressed == 1;

    if (datagram.size() - r.pos < payload_len) throw Truncated("short payload");
    if (datagram.size() - r.pos > payload_len)
        throw Malformed("payload_len disagrees with datagram length");
    if (payload_len != p.oti.symbol_size)
        throw Malformed("payload_len != symbol_size");
    if (p.k > p.n || p.symbol_id >= p.n) throw Malformed("bad (k, n, symbol_id)");
    if (p.oti.expansion.den < 1) throw Malformed("expansion_den < 1");

    p.payload.assign(datagram.begin() + r.pos, datagram.end());
    return p;
}

}  // namespace lmcast::wire
