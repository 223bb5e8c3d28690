#pragma once

#include <cstdint>
#include <string_view>

namespace aiaudit {

// FNV-1a, 64-bit.
constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                std::uint64_t hash = 0xcbf29ce484222325ull) noexcept {
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x00000100000001b3ull;
    }
    return hash;
}

}  // namespace aiaudit
