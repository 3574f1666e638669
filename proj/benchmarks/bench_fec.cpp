#include <benchmark/benchmark.h>

#include <random>

#include "lmcast/fec.hpp"

using namespace lmcast;

namespace {

fec::SourceBlock random_block(std::uint16_t k, std::uint32_t symbol_size,
                              std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    fec::SourceBlock blk;
    blk.k = k;
    blk.symbol_size = symbol_size;
    for (std::uint16_t s = 0; s < k; ++s) {
        Bytes sym(symbol_size);
        for (auto& b : sym) b = static_cast<std::uint8_t>(rng());
        blk.symbols.push_back(std::move(sym));
    }
    return blk;
}

}  // namespace

static void BM_Encode(benchmark::State& state) {
    const auto k = static_cast<std::uint16_t>(state.range(0));
    const auto blk = random_block(k, 1024, 1);
    const auto e = Expansion::from_double(2.0);
    for (auto _ : state) {
        auto enc = fec::encode(blk, e);
        benchmark::DoNotOptimize(enc);
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * k *
                            1024);
}
BENCHMARK(BM_Encode)->Arg(16)->Arg(32)->Arg(64);

// Worst case: every source symbol lost, recovery entirely from parity.
static void BM_DecodeAllParity(benchmark::State& state) {
    const auto k = static_cast<std::uint16_t>(state.range(0));
    const auto blk = random_block(k, 1024, 2);
    const auto enc = fec::encode(blk, Expansion::from_double(2.0));
    std::vector<fec::EncodedSymbol> received(enc.symbols.begin() + k,
                                             enc.symbols.begin() + 2 * k);
    for (auto _ : state) {
        auto out = fec::decode(k, enc.n, received);
        benchmark::DoNotOptimize(out);
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * k *
                            1024);
}
BENCHMARK(BM_DecodeAllParity)->Arg(16)->Arg(32)->Arg(64);

// Typical case under light loss: mostly source symbols, a few parity.
static void BM_DecodeLightLoss(benchmark::State& state) {
    const std::uint16_t k = 64;
    const auto blk = random_block(k, 1024, 3);
    const auto enc = fec::encode(blk, Expansion::from_double(2.0));
    std::vector<fec::EncodedSymbol> received;
    for (std::uint16_t s = 0; s < k; ++s)
        received.push_back(enc.symbols[s % 13 == 0 ? k + s : s]);
    for (auto _ : state) {
        auto out = fec::decode(k, enc.n, received);
        benchmark::DoNotOptimize(out);
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * k *
                            1024);
}
BENCHMARK(BM_DecodeLightLoss);

static void BM_Partition(benchmark::State& state) {
    Bytes payload(static_cast<std::size_t>(state.range(0)));
    std::mt19937_64 rng(4);
    for (auto& b : payload) b = static_cast<std::uint8_t>(rng());
    for (auto _ : state) {
        auto blocks = fec::partition(payload, 1024, 64);
        benchmark::DoNotOptimize(blocks);
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            state.range(0));
}
BENCHMARK(BM_Partition)->Arg(1 << 20);
