#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>

namespace aiaudit {

/// SplitMix64 step; also the fixed seed-splitting rule used by the simulator.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Derives the seed for stream `index` from `base`:
/// splitmix64 applied to base ^ (index * golden-ratio constant).
constexpr std::uint64_t split_seed(std::uint64_t base, std::uint64_t index) noexcept {
    std::uint64_t s = base ^ (index * 0x9e3779b97f4a7c15ull);
    return splitmix64(s);
}

/// xoshiro256** with portable bounded sampling, so shuffles are identical on
/// every platform and standard library.
class Rng {
public:
    using State = std::array<std::uint64_t, 4>;

    Rng() : Rng(0) {}
    explicit Rng(std::uint64_t seed) noexcept {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64(sm);
    }
    explicit Rng(const State& state) noexcept : s_(state) {}

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound) noexcept {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

    /// Uniform double in [0, 1).
    double unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::span<T> items) noexcept {
        for (std::size_t i = items.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    const State& state() const noexcept { return s_; }

    bool operator==(const Rng&) const = default;

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    State s_{};
};

}  // namespace aiaudit
