#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "longmap/hashing.hpp"
#include "longmap/seek.hpp"

namespace longmap {

/// Raw storage of a FixedLongMap. Plain data so that checkers and the state
/// loader can inspect or build arbitrary (possibly invalid) states.
struct MapState {
    std::int32_t mask = 0;
    std::vector<std::int64_t> keys;
    std::vector<std::int64_t> values;
    /// Count of valid keys stored in `keys`.
    std::int32_t array_size = 0;
    /// Bit 0: key 0 mapped. Bit 1: key MIN mapped.
    std::int32_t extra_keys = 0;
    std::int64_t zero_value = 0;
    std::int64_t min_value = 0;

    static MapState empty(std::int32_t mask) {
        MapState s;
        s.mask = mask;
        s.keys.assign(static_cast<std::size_t>(mask) + 1, 0);
        s.values.assign(static_cast<std::size_t>(mask) + 1, 0);
        return s;
    }

    std::int32_t capacity() const noexcept { return mask + 1; }
    std::int32_t size() const noexcept { return array_size + (extra_keys + 1) / 2; }

    friend bool operator==(const MapState&, const MapState&) = default;
};

using DefaultEntry = std::function<std::int64_t(std::int64_t)>;

inline std::int64_t zero_default(std::int64_t) noexcept { return 0; }

/// Fixed-capacity open-addressing map from 64-bit keys to 64-bit values.
///
/// Keys 0 and MIN mark free and tombstoned slots in the key array, so their
/// mappings live in side fields. Probing is quadratic and bounded by
/// kMaxProbes iterations; an insert that cannot find a slot within the bound
/// is rejected rather than triggering a resize.
///
/// Single-owner: no internal synchronization.
class FixedLongMap {
public:
    explicit FixedLongMap(std::int32_t mask, DefaultEntry default_entry = zero_default)
        : state_(checked_empty(mask)), default_entry_(std::move(default_entry)) {}

    /// Wraps an existing state without validating it. Intended for loaders
    /// and tests; callers are responsible for the state being valid.
    static FixedLongMap adopt(MapState state, DefaultEntry default_entry = zero_default) {
        return FixedLongMap(std::move(state), std::move(default_entry), AdoptTag{});
    }

    std::int32_t mask() const noexcept { return state_.mask; }
    std::int32_t capacity() const noexcept { return state_.capacity(); }
    std::int32_t size() const noexcept { return state_.size(); }
    bool is_empty() const noexcept { return size() == 0; }
    const MapState& state() const noexcept { return state_; }
    std::int64_t default_value(std::int64_t key) const { return default_entry_(key); }
    const DefaultEntry& default_entry() const noexcept { return default_entry_; }

    bool contains(std::int64_t key) const {
        if (is_sentinel_key(key)) return (extra_bit(key) & state_.extra_keys) != 0;
        return std::holds_alternative<Found>(seek_entry(key, state_.keys, state_.mask));
    }

    std::int64_t get(std::int64_t key) const {
        if (is_sentinel_key(key)) {
            if ((extra_bit(key) & state_.extra_keys) == 0) return default_entry_(key);
            return key == 0 ? state_.zero_value : state_.min_value;
        }
        SeekResult r = seek_entry(key, state_.keys, state_.mask);
        if (const auto* found = std::get_if<Found>(&r))
            return state_.values[static_cast<std::size_t>(found->index)];
        return default_entry_(key);
    }

    /// Inserts or overwrites. Returns false, leaving the map unchanged, when
    /// no slot for `key` is reachable within the probe bound.
    bool update(std::int64_t key, std::int64_t value) {
        if (is_sentinel_key(key)) {
            if (key == 0) {
                state_.zero_value = value;
                state_.extra_keys |= 1;
            } else {
                state_.min_value = value;
                state_.extra_keys |= 2;
            }
            return true;
        }
        SeekResult r = seek_entry_or_open(key, state_.keys, state_.mask);
        return std::visit(
            [&](const auto& res) -> bool {
                using T = std::decay_t<decltype(res)>;
                if constexpr (std::is_same_v<T, Found>) {
                    state_.values[slot(res.index)] = value;
                    return true;
                } else if constexpr (std::is_same_v<T, Undefined>) {
                    return false;
                } else {
                    state_.keys[slot(res.index)] = key;
                    state_.values[slot(res.index)] = value;
                    ++state_.array_size;
                    return true;
                }
            },
            r);
    }

    /// Removes `key` if present; removing an absent key is a successful
    /// no-op. Returns false only when the probe bound is hit.
    bool remove(std::int64_t key) {
        if (is_sentinel_key(key)) {
            state_.extra_keys &= ~extra_bit(key);
            return true;
        }
        SeekResult r = seek_entry(key, state_.keys, state_.mask);
        if (const auto* found = std::get_if<Found>(&r)) {
            state_.keys[slot(found->index)] = kMinKey;
            state_.values[slot(found->index)] = 0;
            --state_.array_size;
            return true;
        }
        return !std::holds_alternative<Undefined>(r);
    }

private:
    struct AdoptTag {};

    FixedLongMap(MapState state, DefaultEntry default_entry, AdoptTag)
        : state_(std::move(state)), default_entry_(std::move(default_entry)) {}

    static MapState checked_empty(std::int32_t mask) {
        if (!valid_mask(mask))
            throw std::invalid_argument("mask must be 2^N - 1 with 0 <= N <= 30, got " +
                                        std::to_string(mask));
        return MapState::empty(mask);
    }

    // Bit 0 for key 0, bit 1 for MIN.
    static std::int32_t extra_bit(std::int64_t key) noexcept {
        return static_cast<std::int32_t>(static_cast<std::uint64_t>(key) >> 63) + 1;
    }

    static std::size_t slot(std::int32_t index) noexcept { return static_cast<std::size_t>(index); }

    MapState state_;
    DefaultEntry default_entry_;
};

}  // namespace longmap
