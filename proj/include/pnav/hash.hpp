#pragma once

#include <bit>
#include <cstdint>
#include <string>

namespace pnav {

// FNV-1a over arbitrary 64-bit words.
struct Fnv1a64 {
    std::uint64_t state = 0xCBF29CE484222325ULL;

    void feed(std::uint64_t word) {
        for (int i = 0; i < 8; ++i) {
            state ^= (word >> (8 * i)) & 0xFFULL;
            state *= 0x100000001B3ULL;
        }
    }

    void feed(double value) { feed(std::bit_cast<std::uint64_t>(value)); }

    std::uint64_t digest() const { return state; }
};

inline std::string hash_to_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[h & 0xF];
        h >>= 4;
    }
    return s;
}

} // namespace pnav
