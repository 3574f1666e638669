#include <benchmark/benchmark.h>

#include "lmcast/wire.hpp"

using namespace lmcast;

namespace {

wire::LctPacket sample_packet() {
    wire::LctPacket p;
    p.session_id = 7;
    p.object_id = 12;
    p.block_no = 3;
    p.symbol_id = 80;
    p.k = 64;
    p.n = 192;
    p.flags = wire::kFlagParity;
    p.oti.transfer_len = 1 << 20;
    p.oti.compressed_len = 1 << 18;
    p.oti.symbol_size = 1024;
    p.oti.max_k = 64;
    p.oti.expansion = Expansion{2, 1};
    p.oti.block_count = 4;
    p.oti.compressed = true;
    p.oti.checksum = 0x12345678;
    p.payload.assign(1024, 0x5A);
    return p;
}

}  // namespace

static void BM_EncodePacket(benchmark::State& state) {
    const auto p = sample_packet();
    for (auto _ : state) {
        auto out = wire::encode_packet(p);
        benchmark::DoNotOptimize(out);
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            (1024 + 66));
}
BENCHMARK(BM_EncodePacket);

static void BM_DecodePacket(benchmark::State& state) {
    const Bytes encoded = wire::encode_packet(sample_packet());
    for (auto _ : state) {
        auto p = wire::decode_packet(encoded);
        benchmark::DoNotOptimize(p);
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(encoded.size()));
}
BENCHMARK(BM_DecodePacket);
