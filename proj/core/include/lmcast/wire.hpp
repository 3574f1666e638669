#pragma once

#include <cstdint>
#include <stdexcept>

#include "lmcast/common.hpp"

// The wire datagram: one encoding symbol plus full object transmission
// info, so a cold receiver can start decoding from any packet. Fixed
// big-endian layout, 40-byte header + 26-byte OTI + payload; documented
// byte-by-byte in docs/wire-format.md with golden hex fixtures.
namespace lmcast::wire {

constexpr std::uint16_t kMagic = 0xA1C7;
constexpr std::uint8_t kVersion = 1;
constexpr std::size_t kHeaderLen = 40;
constexpr std::size_t kOtiLen = 26;
constexpr std::size_t kFixedLen = kHeaderLen + kOtiLen;  // 66

constexpr std::uint8_t kFlagParity = 0x01;

struct ObjectTransmissionInfo {
    std::uint64_t transfer_len = 0;    // original payload bytes
    std::uint64_t compressed_len = 0;  // == transfer_len when compression off
    std::uint16_t symbol_size = 0;
    std::uint8_t max_k = 0;
    Expansion expansion;
    std::uint32_t block_count = 0;
    bool compressed = false;
    std::uint32_t checksum = 0;        // CRC-32 of the original payload

    bool operator==(const ObjectTransmissionInfo&) const = default;
};

struct LctPacket {
    std::uint16_t magic = kMagic;
    std::uint8_t version = kVersion;
    std::uint8_t flags = 0;
    std::uint32_t session_id = 0;
    std::uint8_t channel_id = 0;
    ObjectId object_id = 0;
    std::uint32_t block_no = 0;
    std::uint8_t symbol_id = 0;
    std::uint8_t k = 0;
    std::uint8_t n = 0;
    ObjectTransmissionInfo oti;
    Bytes payload;

    bool operator==(const LctPacket&) const = default;
};

class EncodeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// decode_packet error taxonomy; nothing else may escape.
class WireError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class NotOurs : public WireError {
public:
    using WireError::WireError;
};
class Truncated : public WireError {
public:
    using WireError::WireError;
};
class Malformed : public WireError {
public:
    using WireError::WireError;
};
class UnsupportedVersion : public WireError {
public:
    using WireError::WireError;
};

Bytes encode_packet(const LctPacket& pkt);
LctPacket decode_packet(ByteView datagram);

}  // namespace lmcast::wire
