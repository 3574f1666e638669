#pragma once

#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

#include "lmcast/common.hpp"

// Systematic erasure code over GF(2^8). An object is partitioned into
// source blocks of at most max_k symbols; each block is expanded with
// Cauchy-matrix parity rows so that any k of its n symbols recover the
// source exactly. Recovery never crosses block boundaries.
namespace lmcast::fec {

constexpr std::uint16_t kMaxK = 128;
constexpr std::uint16_t kMaxN = 255;

struct SourceBlock {
    ObjectId object_id = 0;
    std::uint32_t block_no = 0;
    std::uint16_t k = 0;
    std::uint32_t symbol_size = 0;
    std::vector<Bytes> symbols;     // exactly k entries of symbol_size bytes
    std::uint32_t pad_len = 0;      // trailing zero pad in the last symbol

    bool operator==(const SourceBlock&) const = default;
};

struct EncodedSymbol {
    std::uint8_t id = 0;            // 0..n-1; id < k means source symbol
    Bytes data;

    bool operator==(const EncodedSymbol&) const = default;
};

struct EncodedBlock {
    std::uint32_t block_no = 0;
    std::uint16_t k = 0;
    std::uint16_t n = 0;
    std::vector<EncodedSymbol> symbols;
};

struct NotEnoughSymbols {
    std::size_t have = 0;
    std::size_t need = 0;
};

class CodeTooWide : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class MalformedSymbol : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::vector<SourceBlock> partition(ByteView payload, std::uint32_t symbol_size,
                                   std::uint16_t max_k, ObjectId object_id = 0);

EncodedBlock encode(const SourceBlock& block, Expansion expansion);

using DecodeResult = std::variant<SourceBlock, NotEnoughSymbols>;

// Recovers a source block from any >= k of its symbols. Symbol ids must be
// unique and < n; all data lengths must agree.
DecodeResult decode(std::uint16_t k, std::uint16_t n,
                    const std::vector<EncodedSymbol>& received);

// Number of blocks partition() will produce, without materializing them.
std::uint32_t block_count_for(std::uint64_t payload_len,
                              std::uint32_t symbol_size, std::uint16_t max_k);

// Total encoded symbols across all blocks of a payload.
std::uint64_t total_symbols_for(std::uint64_t payload_len,
                                std::uint32_t symbol_size, std::uint16_t max_k,
                                Expansion expansion);

}  // namespace lmcast::fec
