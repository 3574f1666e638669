#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "lmcast/wire.hpp"

using namespace lmcast;
using wire::LctPacket;

namespace {

LctPacket golden_packet() {
    LctPacket p;
    p.flags = wire::kFlagParity;
    p.session_id = 0x11223344;
    p.channel_id = 2;
    p.object_id = 0xAABBCCDD;
    p.block_no = 5;
    p.symbol_id = 7;
    p.k = 4;
    p.n = 12;
    p.oti.transfer_len = 1000;
    p.oti.compressed_len = 900;
    p.oti.symbol_size = 8;
    p.oti.max_k = 64;
    p.oti.expansion = Expansion{2, 1};
    p.oti.block_count = 3;
    p.oti.compressed = true;
    p.oti.checksum = 0xCAFEBABE;
    p.payload = {1, 2, 3, 4, 5, 6, 7, 8};
    return p;
}

LctPacket random_packet(std::mt19937_64& rng) {
    LctPacket p;
    p.flags = static_cast<std::uint8_t>(rng() & 1);
    p.session_id = static_cast<std::uint32_t>(rng());
    p.channel_id = static_cast<std::uint8_t>(rng() % 16);
    p.object_id = static_cast<std::uint32_t>(rng());
    p.block_no = static_cast<std::uint32_t>(rng() % 1000);
    p.n = static_cast<std::uint8_t>(1 + rng() % 255);
    p.k = static_cast<std::uint8_t>(1 + rng() % p.n);
    p.symbol_id = static_cast<std::uint8_t>(rng() % p.n);
    p.oti.transfer_len = rng() % (1ull << 40);
    p.oti.compressed_len = rng() % (1ull << 40);
    p.oti.symbol_size = static_cast<std::uint16_t>(rng() % 64);
    p.oti.max_k = static_cast<std::uint8_t>(1 + rng() % 128);
    p.oti.expansion = Expansion{static_cast<std::uint8_t>(rng() % 201),
                                static_cast<std::uint8_t>(1 + rng() % 100)};
    p.oti.block_count = static_cast<std::uint32_t>(rng() % 100000);
    p.oti.compressed = rng() & 1;
    p.oti.checksum = static_cast<std::uint32_t>(rng());
    p.payload.resize(p.oti.symbol_size);
    for (auto& b : p.payload) b = static_cast<std::uint8_t>(rng());
    return p;
}

std::string to_hex(const Bytes& b) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (auto byte : b) {
        out.push_back(digits[byte >> 4]);
        out.push_back(digits[byte & 0xF]);
    }
    return out;
}

std::string load_golden_hex(const std::string& path) {
    std::ifstream f(path);
    REQUIRE(f.good());
    std::string out, line;
    while (std::getline(f, line))
        for (char c : line)
            if (!isspace(static_cast<unsigned char>(c))) out.push_back(c);
    return out;
}

}  // namespace

TEST_CASE("golden packet layout is byte-stable") {
    Bytes encoded = wire::encode_packet(golden_packet());
    REQUIRE(encoded.size() == wire::kFixedLen + 8);
    CHECK(to_hex(encoded) ==
          load_golden_hex(std::string(TEST_GOLDEN_DIR) + "/lct_packet.hex"));
}

TEST_CASE("minimal packet is 66 bytes and starts with magic/version") {
    LctPacket p;
    p.n = 1;
    p.oti.symbol_size = 0;
    Bytes encoded = wire::encode_packet(p);
    REQUIRE(encoded.size() == 66);
    CHECK(encoded[0] == 0xA1);
    CHECK(encoded[1] == 0xC7);
    CHECK(encoded[2] == 0x01);
}

TEST_CASE("round-trip for random valid packets") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 2000; ++i) {
        LctPacket p = random_packet(rng);
        CHECK(wire::decode_packet(wire::encode_packet(p)) == p);
    }
}

TEST_CASE("packets differing only in symbol_id differ only at its offset") {
    LctPacket a = golden_packet();
    LctPacket b = a;
    b.symbol_id = 9;
    Bytes ea = wire::encode_packet(a);
    Bytes eb = wire::encode_packet(b);
    REQUIRE(ea.size() == eb.size());
    for (std::size_t i = 0; i < ea.size(); ++i) {
        if (i == 17)
            CHECK(ea[i] != eb[i]);
        else
            CHECK(ea[i] == eb[i]);
    }
}

TEST_CASE("decode error taxonomy") {
    Bytes valid = wire::encode_packet(golden_packet());

    CHECK_THROWS_AS(wire::decode_packet({}), wire::Truncated);

    Bytes cut(valid.begin(), valid.end() - 1);
    CHECK_THROWS_AS(wire::decode_packet(cut), wire::Truncated);

    Bytes header_cut(valid.begin(), valid.begin() + 30);
    CHECK_THROWS_AS(wire::decode_packet(header_cut), wire::Truncated);

    Bytes wrong_magic = valid;
    wrong_magic[0] = 0xFF;
    CHECK_THROWS_AS(wire::decode_packet(wrong_magic), wire::NotOurs);

    Bytes bad_version = valid;
    bad_version[2] = 9;
    CHECK_THROWS_AS(wire::decode_packet(bad_version), wire::UnsupportedVersion);

    Bytes extra = valid;
    extra.push_back(0);
    CHECK_THROWS_AS(wire::decode_packet(extra), wire::Malformed);
}

TEST_CASE("encode rejects invariant violations") {
    LctPacket p = golden_packet();
    p.payload.pop_back();
    CHECK_THROWS_AS(wire::encode_packet(p), wire::EncodeError);

    p = golden_packet();
    p.k = 13;  // k > n
    CHECK_THROWS_AS(wire::encode_packet(p), wire::EncodeError);

    p = golden_packet();
    p.symbol_id = 12;  // == n
    CHECK_THROWS_AS(wire::encode_packet(p), wire::EncodeError);

    p = golden_packet();
    p.oti.expansion.den = 0;
    CHECK_THROWS_AS(wire::encode_packet(p), wire::EncodeError);
}

// Seeded mutation fuzz; the acceptance suite runs the 1e5-case version.
TEST_CASE("fuzzed datagrams produce only declared errors") {
    std::mt19937_64 rng(47);
    Bytes valid = wire::encode_packet(golden_packet());

    for (int trial = 0; trial < 20000; ++trial) {
        Bytes input;
        if (trial % 3 == 0) {
            input.resize(rng() % 200);
            for (auto& b : input) b = static_cast<std::uint8_t>(rng());
        } else {
            input = valid;
            const int flips = 1 + rng() % 8;
            for (int i = 0; i < flips; ++i)
                input[rng() % input.size()] ^=
                    static_cast<std::uint8_t>(1u << (rng() % 8));
            if (rng() % 4 == 0) input.resize(rng() % (input.size() + 1));
        }
        try {
            LctPacket p = wire::decode_packet(input);
            // Success requires the input to be a valid encoding.
            CHECK(wire::encode_packet(p) == input);
        } catch (const wire::WireError&) {
        }
    }
}
