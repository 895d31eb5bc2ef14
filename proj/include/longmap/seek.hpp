#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <variant>

#include "longmap/hashing.hpp"

namespace longmap {

struct Found {
    std::int32_t index;
    friend bool operator==(const Found&, const Found&) = default;
};

/// Key absent; index points at the terminating 0 slot. When produced by
/// seek_entry the index is not meaningful and must not be used.
struct MissingZero {
    std::int32_t index;
    friend bool operator==(const MissingZero&, const MissingZero&) = default;
};

/// Key absent; index points at the first tombstone crossed on the probe path.
struct MissingVacant {
    std::int32_t index;
    friend bool operator==(const MissingVacant&, const MissingVacant&) = default;
};

/// Probe bound reached without a terminating slot.
struct Undefined {
    friend bool operator==(const Undefined&, const Undefined&) = default;
};

using SeekResult = std::variant<Found, MissingZero, MissingVacant, Undefined>;

inline std::ostream& operator<<(std::ostream& os, const SeekResult& r) {
    std::visit(
        [&os](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Found>) os << "Found(" << v.index << ")";
            else if constexpr (std::is_same_v<T, MissingZero>) os << "MissingZero(" << v.index << ")";
            else if constexpr (std::is_same_v<T, MissingVacant>) os << "MissingVacant(" << v.index << ")";
            else os << "Undefined";
        },
        r);
    return os;
}

namespace detail {

/// Result of the first probing phase. Never escapes the seek functions.
struct Intermediate {
    bool undefined;
    std::int32_t index;
    std::int32_t x;
    friend bool operator==(const Intermediate&, const Intermediate&) = default;
};

}  // namespace detail

/// Records the iteration counter a seek stopped at. `iterations` reaches
/// kMaxProbes exactly when the seek returns Undefined.
struct ProbeStats {
    std::int32_t iterations = 0;
    bool undefined = false;

    /// Number of distinct probe positions visited.
    std::int32_t probe_length() const noexcept { return undefined ? iterations : iterations + 1; }
};

struct NoProbeStats {};

namespace detail {

template <class Stats>
constexpr void record(Stats& stats, std::int32_t x, bool undefined) noexcept {
    if constexpr (std::is_same_v<Stats, ProbeStats>) {
        stats.iterations = x;
        stats.undefined = undefined;
    }
}

}  // namespace detail

/// First phase: probe from `e` until a slot holds `key`, 0 or MIN.
template <class Stats = NoProbeStats>
detail::Intermediate seek_key_or_zero_or_min(std::int32_t x, std::int32_t e, std::int64_t key,
                                             std::span<const std::int64_t> keys, std::int32_t mask,
                                             Stats& stats) {
    for (;;) {
        if (x >= kMaxProbes) {
            detail::record(stats, x, true);
            return {true, e, x};
        }
        std::int64_t q = keys[static_cast<std::size_t>(e)];
        if (q == key || is_sentinel_key(q)) {
            detail::record(stats, x, false);
            return {false, e, x};
        }
        ++x;
        e = next_probe(e, x, mask);
    }
}

inline detail::Intermediate seek_key_or_zero_or_min(std::int32_t x, std::int32_t e, std::int64_t key,
                                                    std::span<const std::int64_t> keys,
                                                    std::int32_t mask) {
    NoProbeStats none;
    return seek_key_or_zero_or_min(x, e, key, keys, mask, none);
}

/// Second phase: a tombstone was seen at `vacant`; continue until `key` or 0.
template <class Stats = NoProbeStats>
SeekResult seek_key_or_zero_return_vacant(std::int32_t x, std::int32_t e, std::int32_t vacant,
                                          std::int64_t key, std::span<const std::int64_t> keys,
                                          std::int32_t mask, Stats& stats) {
    for (;;) {
        if (x >= kMaxProbes) {
            detail::record(stats, x, true);
            return Undefined{};
        }
        std::int64_t q = keys[static_cast<std::size_t>(e)];
        if (q == key) {
            detail::record(stats, x, false);
            return Found{e};
        }
        if (q == 0) {
            detail::record(stats, x, false);
            return MissingVacant{vacant};
        }
        ++x;
        e = next_probe(e, x, mask);
    }
}

inline SeekResult seek_key_or_zero_return_vacant(std::int32_t x, std::int32_t e, std::int32_t vacant,
                                                 std::int64_t key, std::span<const std::int64_t> keys,
                                                 std::int32_t mask) {
    NoProbeStats none;
    return seek_key_or_zero_return_vacant(x, e, vacant, key, keys, mask, none);
}

/// Locate `key` or the best free slot for it. Requires is_valid_key(key)
/// and keys.size() == mask + 1.
template <class Stats = NoProbeStats>
SeekResult seek_entry_or_open(std::int64_t key, std::span<const std::int64_t> keys, std::int32_t mask,
                              Stats& stats) {
    auto first = seek_key_or_zero_or_min(0, to_index(key, mask), key, keys, mask, stats);
    if (first.undefined) return Undefined{};
    std::int64_t q = keys[static_cast<std::size_t>(first.index)];
    if (q == key) return Found{first.index};
    if (q == 0) return MissingZero{first.index};
    return seek_key_or_zero_return_vacant(first.x, first.index, first.index, key, keys, mask, stats);
}

inline SeekResult seek_entry_or_open(std::int64_t key, std::span<const std::int64_t> keys,
                                     std::int32_t mask) {
    NoProbeStats none;
    return seek_entry_or_open(key, keys, mask, none);
}

/// Lookup-only variant: same probe path as seek_entry_or_open, with
/// MissingVacant reported as MissingZero.
template <class Stats = NoProbeStats>
SeekResult seek_entry(std::int64_t key, std::span<const std::int64_t> keys, std::int32_t mask,
                      Stats& stats) {
    SeekResult r = seek_entry_or_open(key, keys, mask, stats);
    if (const auto* vacant = std::get_if<MissingVacant>(&r)) return MissingZero{vacant->index};
    return r;
}

inline SeekResult seek_entry(std::int64_t key, std::span<const std::int64_t> keys, std::int32_t mask) {
    NoProbeStats none;
    return seek_entry(key, keys, mask, none);
}

}  // namespace longmap
