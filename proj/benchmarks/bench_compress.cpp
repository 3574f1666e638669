#include <benchmark/benchmark.h>

#include <random>

#include "lmcast/compress.hpp"

using namespace lmcast;

namespace {

Bytes structured_payload(std::size_t len) {
    // Text-like repetitive content, similar to the matrix corpus.
    Bytes out;
    out.reserve(len);
    std::mt19937_64 rng(5);
    const char* words[] = {"1.0e-3 ", "42 17 ", "0.5 ", "128 64 "};
    while (out.size() < len) {
        const char* w = words[rng() % 4];
        out.insert(out.end(), w, w + std::char_traits<char>::length(w));
    }
    out.resize(len);
    return out;
}

}  // namespace

static void BM_Deflate(benchmark::State& state) {
    const Bytes payload = structured_payload(1 << 20);
    const compress::CompressionConfig cfg{
        true, static_cast<int>(state.range(0))};
    for (auto _ : state) {
        auto out = compress::deflate(payload, cfg);
        benchmark::DoNotOptimize(out);
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            payload.size());
}
BENCHMARK(BM_Deflate)->Arg(1)->Arg(6)->Arg(9);

static void BM_Inflate(benchmark::State& state) {
    const Bytes payload = structured_payload(1 << 20);
    auto [stream, stats] =
        compress::deflate(payload, compress::CompressionConfig{true, 9});
    for (auto _ : state) {
        auto out = compress::inflate(stream, payload.size());
        benchmark::DoNotOptimize(out);
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            payload.size());
}
BENCHMARK(BM_Inflate);

static void BM_Crc32(benchmark::State& state) {
    const Bytes payload = structured_payload(1 << 20);
    for (auto _ : state) {
        auto crc = compress::crc32(payload);
        benchmark::DoNotOptimize(crc);
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            payload.size());
}
BENCHMARK(BM_Crc32);
