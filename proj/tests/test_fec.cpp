#include <doctest.h>

#include <bit>
#include <numeric>
#include <random>

#include "lmcast/fec.hpp"

using namespace lmcast;
using fec::EncodedSymbol;
using fec::SourceBlock;

namespace {

SourceBlock random_block(std::mt19937_64& rng, std::uint16_t k,
                         std::uint32_t symbol_size) {
    SourceBlock b;
    b.k = k;
    b.symbol_size = symbol_size;
    for (std::uint16_t s = 0; s < k; ++s) {
        Bytes sym(symbol_size);
        for (auto& byte : sym) byte = static_cast<std::uint8_t>(rng());
        b.symbols.push_back(std::move(sym));
    }
    return b;
}

bool symbols_equal(const SourceBlock& a, const SourceBlock& b) {
    return a.k == b.k && a.symbols == b.symbols;
}

}  // namespace

TEST_CASE("partition splits with ceil arithmetic and zero pad") {
    Bytes payload(10);
    std::iota(payload.begin(), payload.end(), 0);
    auto blocks = fec::partition(payload, 4, 2);
    REQUIRE(blocks.size() == 2);
    CHECK(blocks[0].k == 2);
    CHECK(blocks[0].pad_len == 0);
    CHECK(blocks[1].k == 1);
    CHECK(blocks[1].pad_len == 2);
    CHECK(blocks[1].symbols[0] == Bytes{8, 9, 0, 0});

    // Concatenation minus pad equals the payload.
    Bytes cat;
    for (auto& b : blocks)
        for (auto& s : b.symbols) cat.insert(cat.end(), s.begin(), s.end());
    cat.resize(10);
    CHECK(cat == payload);
}

TEST_CASE("partition of empty payload is empty") {
    CHECK(fec::partition({}, 4, 2).empty());
    CHECK(fec::block_count_for(0, 1024, 64) == 0);
}

TEST_CASE("1 MiB at defaults yields 16 full blocks") {
    Bytes payload(1 << 20, 0x5A);
    auto blocks = fec::partition(payload, 1024, 64);
    REQUIRE(blocks.size() == 16);
    for (auto& b : blocks) {
        CHECK(b.k == 64);
        CHECK(b.pad_len == 0);
    }
    CHECK(fec::block_count_for(1 << 20, 1024, 64) == 16);
}

TEST_CASE("encode is systematic and respects the expansion ratio") {
    std::mt19937_64 rng(7);
    auto block = random_block(rng, 4, 64);

    auto enc = fec::encode(block, Expansion::from_double(2.0));
    REQUIRE(enc.n == 12);
    for (std::uint16_t s = 0; s < 4; ++s) {
        CHECK(enc.symbols[s].id == s);
        CHECK(enc.symbols[s].data == block.symbols[s]);
    }

    auto identity = fec::encode(block, Expansion::from_double(0.0));
    REQUIRE(identity.n == 4);
    for (std::uint16_t s = 0; s < 4; ++s)
        CHECK(identity.symbols[s].data == block.symbols[s]);
}

TEST_CASE("zero source yields zero parity") {
    SourceBlock b;
    b.k = 3;
    b.symbol_size = 16;
    b.symbols.assign(3, Bytes(16, 0));
    auto enc = fec::encode(b, Expansion::from_double(1.0));
    REQUIRE(enc.n == 6);
    for (auto& s : enc.symbols) CHECK(s.data == Bytes(16, 0));
}

TEST_CASE("encode is deterministic") {
    std::mt19937_64 rng(11);
    auto block = random_block(rng, 5, 32);
    auto a = fec::encode(block, Expansion::from_double(1.5));
    auto b = fec::encode(block, Expansion::from_double(1.5));
    REQUIRE(a.n == b.n);
    for (std::uint16_t i = 0; i < a.n; ++i)
        CHECK(a.symbols[i].data == b.symbols[i].data);
}

TEST_CASE("code wider than 255 symbols is rejected") {
    std::mt19937_64 rng(3);
    auto block = random_block(rng, 128, 8);
    CHECK_THROWS_AS(fec::encode(block, Expansion::from_double(2.0)),
                    fec::CodeTooWide);
}

TEST_CASE("decode from source symbols is identity reassembly") {
    std::mt19937_64 rng(13);
    auto block = random_block(rng, 4, 64);
    auto enc = fec::encode(block, Expansion::from_double(2.0));

    std::vector<EncodedSymbol> first_k(enc.symbols.begin(),
                                       enc.symbols.begin() + 4);
    auto result = fec::decode(4, 12, first_k);
    auto* src = std::get_if<SourceBlock>(&result);
    REQUIRE(src != nullptr);
    CHECK(symbols_equal(*src, block));
}

TEST_CASE("decode from parity only recovers the source") {
    std::mt19937_64 rng(17);
    auto block = random_block(rng, 4, 64);
    auto enc = fec::encode(block, Expansion::from_double(2.0));

    std::vector<EncodedSymbol> parity(enc.symbols.begin() + 4,
                                      enc.symbols.begin() + 8);
    auto result = fec::decode(4, 12, parity);
    auto* src = std::get_if<SourceBlock>(&result);
    REQUIRE(src != nullptr);
    CHECK(symbols_equal(*src, block));
}

TEST_CASE("too few symbols reports have/need") {
    std::mt19937_64 rng(19);
    auto block = random_block(rng, 4, 16);
    auto enc = fec::encode(block, Expansion::from_double(2.0));

    std::vector<EncodedSymbol> three(enc.symbols.begin(), enc.symbols.begin() + 3);
    auto result = fec::decode(4, 12, three);
    auto* miss = std::get_if<fec::NotEnoughSymbols>(&result);
    REQUIRE(miss != nullptr);
    CHECK(miss->have == 3);
    CHECK(miss->need == 4);
}

TEST_CASE("malformed symbols are rejected") {
    std::vector<EncodedSymbol> bad = {{0, Bytes(8, 1)}, {1, Bytes(4, 2)}};
    CHECK_THROWS_AS(fec::decode(2, 4, bad), fec::MalformedSymbol);

    std::vector<EncodedSymbol> dup = {{0, Bytes(8, 1)}, {0, Bytes(8, 2)}};
    CHECK_THROWS_AS(fec::decode(2, 4, dup), fec::MalformedSymbol);

    std::vector<EncodedSymbol> oob = {{9, Bytes(8, 1)}};
    CHECK_THROWS_AS(fec::decode(2, 4, oob), fec::MalformedSymbol);
}

// Round-trip exhaustion at reduced scale; the acceptance suite runs the
// full k<=6, n<=12, 50-blocks sweep.
TEST_CASE("every >=k subset decodes, small exhaustive sweep") {
    std::mt19937_64 rng(23);
    for (std::uint16_t k = 1; k <= 4; ++k) {
        for (std::uint16_t n = k; n <= 8; ++n) {
            auto exp = Expansion{static_cast<std::uint8_t>(n - k),
                                 static_cast<std::uint8_t>(k)};
            auto block = random_block(rng, k, 8);
            auto enc = fec::encode(block, exp);
            REQUIRE(enc.n == n);

            for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
                if (static_cast<std::uint16_t>(std::popcount(mask)) < k) continue;
                std::vector<EncodedSymbol> subset;
                for (std::uint16_t i = 0; i < n; ++i)
                    if (mask & (1u << i)) subset.push_back(enc.symbols[i]);
                auto result = fec::decode(k, n, subset);
                auto* src = std::get_if<SourceBlock>(&result);
                REQUIRE(src != nullptr);
                REQUIRE(symbols_equal(*src, block));
            }
        }
    }
}

TEST_CASE("total_symbols_for matches materialized encoding") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        const std::uint64_t len = 1 + rng() % 50000;
        const std::uint32_t symbol_size = 16 + rng() % 256;
        const auto max_k = static_cast<std::uint16_t>(1 + rng() % 64);
        auto exp = Expansion::from_double((rng() % 200) / 100.0);
        if (exp.total_symbols(max_k) > fec::kMaxN) continue;

        Bytes payload(len);
        for (auto& b : payload) b = static_cast<std::uint8_t>(rng());
        std::uint64_t total = 0;
        for (auto& blk : fec::partition(payload, symbol_size, max_k))
            total += fec::encode(blk, exp).n;
        CHECK(total == fec::total_symbols_for(len, symbol_size, max_k, exp));
    }
}
