#pragma once

#include <cstdint>
#include <limits>

namespace longmap {

inline constexpr std::int64_t kMinKey = std::numeric_limits<std::int64_t>::min();

/// Largest supported mask exponent: capacity is at most 2^30 slots.
inline constexpr int kMaxMaskExponent = 30;

/// Upper bound on probe iterations for every seek.
inline constexpr std::int32_t kMaxProbes = 2048;

/// True iff mask == 2^N - 1 for some 0 <= N <= 30.
constexpr bool valid_mask(std::int32_t mask) noexcept {
    if (mask < 0 || mask > (std::int32_t{1} << kMaxMaskExponent) - 1) return false;
    auto m = static_cast<std::uint32_t>(mask);
    return (m & (m + 1)) == 0;
}

constexpr std::int32_t mask_for_exponent(int exponent) noexcept {
    return static_cast<std::int32_t>((std::uint32_t{1} << exponent) - 1);
}

/// Exponent N of a valid mask 2^N - 1.
constexpr int mask_exponent(std::int32_t mask) noexcept {
    int n = 0;
    for (auto m = static_cast<std::uint32_t>(mask); m != 0; m >>= 1) ++n;
    return n;
}

/// 0 and MIN are the only keys equal to their own wrapping negation.
constexpr bool is_sentinel_key(std::int64_t key) noexcept {
    auto u = static_cast<std::uint64_t>(key);
    return u == std::uint64_t{0} - u;
}

constexpr bool is_valid_key(std::int64_t key) noexcept { return !is_sentinel_key(key); }

/// Home slot of `key`: fold to 32 bits, then a murmur-style finalizer step.
/// All shifts are logical and all 32-bit arithmetic wraps.
constexpr std::int32_t to_index(std::int64_t key, std::int32_t mask) noexcept {
    auto k = static_cast<std::uint64_t>(key);
    auto h = static_cast<std::uint32_t>(k ^ (k >> 32));
    std::uint32_t x = (h ^ (h >> 16)) * std::uint32_t{0x85EBCA6Bu};
    return static_cast<std::int32_t>((x ^ (x >> 13)) & static_cast<std::uint32_t>(mask));
}

/// Quadratic probe step; `x` is the already-incremented iteration counter.
constexpr std::int32_t next_probe(std::int32_t e, std::int32_t x, std::int32_t mask) noexcept {
    auto ux = static_cast<std::uint32_t>(x);
    std::uint32_t next = static_cast<std::uint32_t>(e) + 2u * (ux + 1u) * ux - 3u;
    return static_cast<std::int32_t>(next & static_cast<std::uint32_t>(mask));
}

}  // namespace longmap
