#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>

#include "lmcast/common.hpp"

// Lossless compression stage: zlib-wrapped DEFLATE (RFC 1950/1951).
// Applied to the whole object before partitioning; incompressible data
// still goes through the format (stored blocks), never raw.
namespace lmcast::compress {

struct CompressionConfig {
    bool enabled = true;
    int level = 9;  // 0..9, 9 = best compression
};

struct CompressionStats {
    std::uint64_t original_len = 0;
    std::uint64_t compressed_len = 0;
    double ratio = 0.0;        // 1 - compressed/original; may be negative
    double wall_time_s = 0.0;
};

class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class LengthMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::pair<Bytes, CompressionStats> deflate(ByteView payload,
                                           const CompressionConfig& config);

// Exact inverse; throws DecodeError on a corrupt stream and LengthMismatch
// when the output length disagrees with expected_len.
Bytes inflate(ByteView stream, std::uint64_t expected_len);

// CRC-32, polynomial 0x04C11DB7 reflected (the ubiquitous convention).
std::uint32_t crc32(ByteView data);

}  // namespace lmcast::compress
