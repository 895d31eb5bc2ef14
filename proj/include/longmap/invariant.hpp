#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "longmap/fixed_long_map.hpp"
#include "longmap/hashing.hpp"
#include "longmap/seek.hpp"

namespace longmap {

/// Number of valid keys in a[from, to). Requires 0 <= from <= to <= a.size().
inline std::int32_t count_valid_keys(std::span<const std::int64_t> a, std::size_t from, std::size_t to) {
    std::int32_t n = 0;
    for (std::size_t i = from; i < to; ++i)
        if (is_valid_key(a[i])) ++n;
    return n;
}

/// Linear containment of a valid key in a[from, end).
inline bool array_contains_key(std::span<const std::int64_t> a, std::int64_t key, std::size_t from) {
    for (std::size_t i = from; i < a.size(); ++i)
        if (a[i] == key) return true;
    return false;
}

/// First index >= from holding `key`. Requires array_contains_key(a, key, from).
inline std::size_t array_scan_for_key(std::span<const std::int64_t> a, std::int64_t key, std::size_t from) {
    for (std::size_t i = from; i < a.size(); ++i)
        if (a[i] == key) return i;
    throw std::logic_error("array_scan_for_key: key " + std::to_string(key) + " not present");
}

/// True iff no valid key occurs twice across a[from, end) and `seen`.
/// Sentinels (0, MIN) may repeat freely.
inline bool array_no_duplicates(std::span<const std::int64_t> a, std::size_t from,
                                std::span<const std::int64_t> seen = {}) {
    std::unordered_set<std::int64_t> acc(seen.begin(), seen.end());
    for (std::size_t i = from; i < a.size(); ++i) {
        if (!is_valid_key(a[i])) continue;
        if (!acc.insert(a[i]).second) return false;
    }
    return true;
}

/// True iff every valid key stored at index i is found by
/// seek_entry_or_open at exactly index i.
inline bool all_keys_seekable(std::span<const std::int64_t> keys, std::int32_t mask) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (!is_valid_key(keys[i])) continue;
        if (seek_entry_or_open(keys[i], keys, mask) != SeekResult{Found{static_cast<std::int32_t>(i)}})
            return false;
    }
    return true;
}

struct InvariantReport {
    bool simple_valid = true;
    bool count_matches_size = true;
    bool all_keys_seekable = true;
    bool no_duplicates = true;
    std::optional<std::string> first_violation;

    bool valid() const noexcept {
        return simple_valid && count_matches_size && all_keys_seekable && no_duplicates;
    }
};

namespace detail {

inline void note(InvariantReport& r, std::string what) {
    if (!r.first_violation) r.first_violation = std::move(what);
}

inline std::optional<std::string> simple_valid_violation(const MapState& s) {
    if (!valid_mask(s.mask)) return "mask " + std::to_string(s.mask) + " is not 2^N - 1 with N <= 30";
    auto cap = static_cast<std::size_t>(s.mask) + 1;
    if (s.values.size() != cap)
        return "values length " + std::to_string(s.values.size()) + " != mask + 1";
    if (s.keys.size() != s.values.size())
        return "keys length " + std::to_string(s.keys.size()) + " != values length";
    if (s.array_size < 0 || s.array_size > s.mask + 1)
        return "array size " + std::to_string(s.array_size) + " outside [0, mask + 1]";
    if (s.extra_keys < 0 || s.extra_keys > 3)
        return "extraKeys " + std::to_string(s.extra_keys) + " outside [0, 3]";
    return std::nullopt;
}

}  // namespace detail

/// Evaluates the class invariant on an arbitrary state, reporting the first
/// failing condition instead of throwing. Deep conditions that need a
/// well-shaped state are marked failed when the shape itself is broken.
inline InvariantReport check(const MapState& s) {
    InvariantReport r;
    if (auto why = detail::simple_valid_violation(s)) {
        r.simple_valid = false;
        detail::note(r, "simpleValid: " + *why);
    }

    std::int32_t counted = count_valid_keys(s.keys, 0, s.keys.size());
    if (counted != s.array_size) {
        r.count_matches_size = false;
        detail::note(r, "count: " + std::to_string(counted) + " valid keys in array but size field is " +
                            std::to_string(s.array_size));
    }

    bool shaped = valid_mask(s.mask) && s.keys.size() == static_cast<std::size_t>(s.mask) + 1;
    if (!shaped) {
        r.all_keys_seekable = false;
        detail::note(r, "seekable: key array shape does not match mask");
    } else {
        for (std::size_t i = 0; i < s.keys.size(); ++i) {
            if (!is_valid_key(s.keys[i])) continue;
            SeekResult got = seek_entry_or_open(s.keys[i], s.keys, s.mask);
            if (got != SeekResult{Found{static_cast<std::int32_t>(i)}}) {
                r.all_keys_seekable = false;
                std::ostringstream os;
                os << "seekable: key " << s.keys[i] << " at index " << i << " but seek_entry_or_open gives "
                   << got;
                detail::note(r, os.str());
                break;
            }
        }
    }

    std::unordered_set<std::int64_t> seen;
    for (std::size_t i = 0; i < s.keys.size(); ++i) {
        if (!is_valid_key(s.keys[i])) continue;
        if (!seen.insert(s.keys[i]).second) {
            r.no_duplicates = false;
            detail::note(r, "duplicates: key " + std::to_string(s.keys[i]) + " repeated at index " +
                                std::to_string(i));
            break;
        }
    }
    return r;
}

inline InvariantReport check(const FixedLongMap& m) { return check(m.state()); }

}  // namespace longmap
