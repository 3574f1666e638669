#include "lmcast/fec.hpp"

#include <algorithm>
#include <cassert>
#include <cstring>

#include "lmcast/gf256.hpp"

namespace lmcast::fec {

namespace {

// Cauchy generator entry for parity row r (r = id - k) and source column c:
// 1 / (x_r ^ y_c) with x_r = k + r drawn from [k, 255) and y_c = c from
// [0, k). The index sets are disjoint, so every square submatrix of the
// stacked [I; C] generator is invertible and any k of n symbols suffice.
inline std::uint8_t cauchy_coef(std::uint16_t k, std::uint16_t parity_row,
                                std::uint16_t col) {
    auto x = static_cast<std::uint8_t>(k + parity_row);
    auto y = static_cast<std::uint8_t>(col);
    return gf256::inv(static_cast<std::uint8_t>(x ^ y));
}

// Row of the generator matrix for encoded symbol `id`.
void generator_row(std::uint16_t k, std::uint16_t id, std::uint8_t* out) {
    std::memset(out, 0, k);
    if (id < k) {
        out[id] = 1;
    } else {
        for (std::uint16_t c = 0; c < k; ++c)
            out[c] = cauchy_coef(k, static_cast<std::uint16_t>(id - k), c);
    }
}

}  // namespace

std::vector<SourceBlock> partition(ByteView payload, std::uint32_t symbol_size,
                                   std::uint16_t max_k, ObjectId object_id) {
    if (symbol_size < 1) throw std::invalid_argument("symbol_size must be >= 1");
    if (max_k < 1 || max_k > kMaxK)
        throw std::invalid_argument("max_k must be in [1, 128]");
    std::vector<SourceBlock> blocks;
    if (payload.empty()) return blocks;

    const std::uint64_t total_symbols =
        (payload.size() + symbol_size - 1) / symbol_size;
    const auto block_count =
        static_cast<std::uint32_t>((total_symbols + max_k - 1) / max_k);
    blocks.reserve(block_count);

    std::size_t off = 0;
    std::uint64_t remaining_symbols = total_symbols;
    for (std::uint32_t b = 0; b < block_count; ++b) {
        SourceBlock blk;
        blk.object_id = object_id;
        blk.block_no = b;
        blk.symbol_size = symbol_size;
        blk.k = static_cast<std::uint16_t>(
            std::min<std::uint64_t>(max_k, remaining_symbols));
        blk.symbols.reserve(blk.k);
        for (std::uint16_t s = 0; s < blk.k; ++s) {
            std::size_t take = std::min<std::size_t>(symbol_size, payload.size() - off);
            Bytes sym(symbol_size, 0);
            std::memcpy(sym.data(), payload.data() + off, take);
            off += take;
            if (take < symbol_size) blk.pad_len = static_cast<std::uint32_t>(symbol_size - take);
            blk.symbols.push_back(std::move(sym));
        }
        remaining_symbols -= blk.k;
        blocks.push_back(std::move(blk));
    }
    assert(off == payload.size());
    return blocks;
}

EncodedBlock encode(const SourceBlock& block, Expansion expansion) {
    const std::uint16_t k = block.k;
    if (k < 1 || k > kMaxK) throw std::invalid_argument("bad k");
    const std::uint32_t n = expansion.total_symbols(k);
    if (n > kMaxN)
        throw CodeTooWide("k*(1+expansion) exceeds 255 symbols");

    EncodedBlock out;
    out.block_no = block.block_no;
    out.k = k;
    out.n = static_cast<std::uint16_t>(n);
    out.symbols.reserve(n);

    for (std::uint16_t s = 0; s < k; ++s)
        out.symbols.push_back({static_cast<std::uint8_t>(s), block.symbols[s]});

    const std::size_t len = block.symbol_size;
    for (std::uint16_t id = k; id < n; ++id) {
        Bytes parity(len, 0);
        for (std::uint16_t c = 0; c < k; ++c) {
            gf256::mul_add_row(parity.data(), block.symbols[c].data(),
                               cauchy_coef(k, static_cast<std::uint16_t>(id - k), c),
                               len);
        }
        out.symbols.push_back({static_cast<std::uint8_t>(id), std::move(parity)});
    }
    return out;
}

DecodeResult decode(std::uint16_t k, std::uint16_t n,
                    const std::vector<EncodedSymbol>& received) {
    if (k < 1 || k > kMaxK || n < k || n > kMaxN)
        throw std::invalid_argument("bad (k, n)");

    std::size_t symbol_size = 0;
    std::vector<bool> seen(n, false);
    for (const auto& s : received) {
        if (s.id >= n) throw MalformedSymbol("symbol id out of range");
        if (seen[s.id]) throw MalformedSymbol("duplicate symbol id");
        seen[s.id] = true;
        if (symbol_size == 0) symbol_size = s.data.size();
        if (s.data.size() != symbol_size || symbol_size == 0)
            throw MalformedSymbol("inconsistent symbol lengths");
    }
    if (received.size() < k)
        return NotEnoughSymbols{received.size(), k};

    // Pick k rows, source symbols first: their generator rows are unit
    // vectors, so elimination only does real work on the parity rows.
    std::vector<const EncodedSymbol*> rows;
    rows.reserve(k);
    for (const auto& s : received)
        if (s.id < k && rows.size() < k) rows.push_back(&s);
    for (const auto& s : received)
        if (s.id >= k && rows.size() < k) rows.push_back(&s);

    // Augmented system [A | data]: A row = generator row of the symbol.
    std::vector<std::vector<std::uint8_t>> mat(k, std::vector<std::uint8_t>(k));
    std::vector<Bytes> data(k);
    for (std::uint16_t r = 0; r < k; ++r) {
        generator_row(k, rows[r]->id, mat[r].data());
        data[r] = rows[r]->data;
    }

    // Gaussian elimination over GF(2^8). The Cauchy construction makes the
    // chosen submatrix invertible, so a zero pivot means caller corruption.
    for (std::uint16_t col = 0; col < k; ++col) {
        std::uint16_t piv = col;
        while (piv < k && mat[piv][col] == 0) ++piv;
        if (piv == k) throw MalformedSymbol("singular decode matrix");
        if (piv != col) {
            std::swap(mat[piv], mat[col]);
            std::swap(data[piv], data[col]);
        }
        const std::uint8_t inv = gf256::inv(mat[col][col]);
        gf256::scale_row(mat[col].data(), inv, k);
        gf256::scale_row(data[col].data(), inv, symbol_size);
        for (std::uint16_t r = 0; r < k; ++r) {
            if (r == col) continue;
            const std::uint8_t f = mat[r][col];
            if (f == 0) continue;
            gf256::mul_add_row(mat[r].data(), mat[col].data(), f, k);
            gf256::mul_add_row(data[r].data(), data[col].data(), f, symbol_size);
        }
    }

    SourceBlock out;
    out.k = k;
    out.symbol_size = static_cast<std::uint32_t>(symbol_size);
    out.symbols = std::move(data);
    return out;
}

std::uint32_t block_count_for(std::uint64_t payload_len,
                              std::uint32_t symbol_size, std::uint16_t max_k) {
    if (payload_len == 0) return 0;
    const std::uint64_t symbols = (payload_len + symbol_size - 1) / symbol_size;
    return static_cast<std::uint32_t>((symbols + max_k - 1) / max_k);
}

std::uint64_t total_symbols_for(std::uint64_t payload_len,
                                std::uint32_t symbol_size, std::uint16_t max_k,
                                Expansion expansion) {
    if (payload_len == 0) return 0;
    const std::uint64_t symbols = (payload_len + symbol_size - 1) / symbol_size;
    const std::uint64_t full_blocks = symbols / max_k;
    const auto tail = static_cast<std::uint16_t>(symbols % max_k);
    std::uint64_t total = full_blocks * expansion.total_symbols(max_k);
    if (tail) total += expansion.total_symbols(tail);
    return total;
}

}  // namespace lmcast::fec
