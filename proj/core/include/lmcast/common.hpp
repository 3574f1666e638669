#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace lmcast {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// Simulation time is integer microseconds; exact arithmetic keeps
// event ordering reproducible.
using SimTime = std::int64_t;

using NodeId = std::uint32_t;
using GroupId = std::uint32_t;
using ObjectId = std::uint32_t;

// Parity overhead as a small rational. expansion 2.0 means the encoder
// emits 200% extra symbols (n = 3k).
struct Expansion {
    std::uint8_t num = 0;
    std::uint8_t den = 1;

    static Expansion from_double(double e) {
        if (e < 0.0 || e > 2.0)
            throw std::invalid_argument("expansion must be in [0, 2]");
        auto num = static_cast<std::uint32_t>(e * 100.0 + 0.5);
        std::uint32_t den = 100;
        std::uint32_t g = std::gcd(num == 0 ? den : num, den);
        return Expansion{static_cast<std::uint8_t>(num / g),
                         static_cast<std::uint8_t>(den / g)};
    }

    double value() const { return static_cast<double>(num) / den; }

    // n = ceil(k * (1 + num/den)), integer arithmetic only.
    std::uint32_t total_symbols(std::uint32_t k) const {
        std::uint64_t d = den;
        return static_cast<std::uint32_t>((k * (d + num) + d - 1) / d);
    }

    bool operator==(const Expansion&) const = default;
};

// 64-bit FNV-1a, used for trace digests and the netsim loss hash.
struct Fnv1a {
    std::uint64_t state = 0xcbf29ce484222325ull;

    void update(const void* data, std::size_t len) {
        auto p = static_cast<const std::uint8_t*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            state ^= p[i];
            state *= 0x100000001b3ull;
        }
    }
    template <typename T>
    void update_value(const T& v) {
        static_assert(std::is_trivially_copyable_v<T>);
        update(&v, sizeof(v));
    }
    std::uint64_t digest() const { return state; }
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace lmcast
