#pragma once

#include <array>
#include <cstdint>

// GF(2^8) arithmetic with reduction polynomial 0x11D, table driven.
namespace lmcast::gf256 {

struct Tables {
    // exp is doubled so mul can skip the mod-255 reduction.
    std::array<std::uint8_t, 512> exp{};
    std::array<std::uint16_t, 256> log{};
};

constexpr Tables make_tables() {
    Tables t{};
    std::uint32_t x = 1;
    for (int i = 0; i < 255; ++i) {
        t.exp[i] = static_cast<std::uint8_t>(x);
        t.exp[i + 255] = static_cast<std::uint8_t>(x);
        t.log[x] = static_cast<std::uint16_t>(i);
        x <<= 1;
        if (x & 0x100) x ^= 0x11D;
    }
    t.exp[510] = t.exp[0];
    t.exp[511] = t.exp[1];
    t.log[0] = 0;  // log(0) is undefined; callers must special-case zero
    return t;
}

inline constexpr Tables kTab = make_tables();

inline std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
    if (a == 0 || b == 0) return 0;
    return kTab.exp[kTab.log[a] + kTab.log[b]];
}

inline std::uint8_t inv(std::uint8_t a) {
    return kTab.exp[255 - kTab.log[a]];
}

inline std::uint8_t div(std::uint8_t a, std::uint8_t b) {
    if (a == 0) return 0;
    return kTab.exp[kTab.log[a] + 255 - kTab.log[b]];
}

// dst ^= coef * src over len bytes.
inline void mul_add_row(std::uint8_t* dst, const std::uint8_t* src,
                        std::uint8_t coef, std::size_t len) {
    if (coef == 0) return;
    if (coef == 1) {
        for (std::size_t i = 0; i < len; ++i) dst[i] ^= src[i];
        return;
    }
    const std::uint16_t lc = kTab.log[coef];
    for (std::size_t i = 0; i < len; ++i) {
        if (src[i]) dst[i] ^= kTab.exp[lc + kTab.log[src[i]]];
    }
}

inline void scale_row(std::uint8_t* row, std::uint8_t coef, std::size_t len) {
    if (coef == 1) return;
    const std::uint16_t lc = kTab.log[coef];
    for (std::size_t i = 0; i < len; ++i) {
        if (row[i]) row[i] = kTab.exp[lc + kTab.log[row[i]]];
    }
}

}  // namespace lmcast::gf256
