#include "lmcast/compress.hpp"

#include <zlib.h>

#include <chrono>

namespace lmcast::compress {

std::pair<Bytes, CompressionStats> deflate(ByteView payload,
                                           const CompressionConfig& config) {
    if (config.level < 0 || config.level > 9)
        throw std::invalid_argument("compression level must be in [0, 9]");

    const auto t0 = std::chrono::steady_clock::now();

    uLong bound = compressBound(static_cast<uLong>(payload.size()));
    Bytes out(bound);
    uLongf out_len = bound;
    int rc = compress2(out.data(), &out_len,
                       payload.empty() ? reinterpret_cast<const Bytef*>("")
                                       : payload.data(),
                       static_cast<uLong>(payload.size()), config.level);
    if (rc != Z_OK) throw std::runtime_error("zlib compress2 failed");
    out.resize(out_len);

    const auto t1 = std::chrono::steady_clock::now();

    CompressionStats stats;
    stats.original_len = payload.size();
    stats.compressed_len = out.size();
    stats.ratio = payload.empty()
                      ? 0.0
                      : 1.0 - static_cast<double>(out.size()) / payload.size();
    stats.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
    return {std::move(out), stats};
}

Bytes inflate(ByteView stream, std::uint64_t expected_len) {
    // One spare byte so a stream longer than declared shows up as
    // produced > expected_len instead of a buffer-full ambiguity.
    Bytes out(expected_len + 1);
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK) throw std::runtime_error("inflateInit failed");
    zs.next_in = const_cast<Bytef*>(stream.data());
    zs.avail_in = static_cast<uInt>(stream.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());

    int rc = ::inflate(&zs, Z_FINISH);
    const auto produced = static_cast<std::uint64_t>(zs.total_out);
    inflateEnd(&zs);

    if (rc == Z_STREAM_END) {
        if (produced != expected_len)
            throw LengthMismatch("decompressed length disagrees with metadata");
        out.resize(expected_len);
        return out;
    }
    if (produced > expected_len)
        throw LengthMismatch("stream longer than declared length");
    throw DecodeError("corrupt or truncated zlib stream");
}

std::uint32_t crc32(ByteView data) {
    return static_cast<std::uint32_t>(
        ::crc32(0L, data.empty() ? Z_NULL : data.data(),
                static_cast<uInt>(data.size())));
}

}  // namespace lmcast::compress
