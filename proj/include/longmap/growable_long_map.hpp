#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>

#include "longmap/conformance.hpp"
#include "longmap/fixed_long_map.hpp"
#include "longmap/hashing.hpp"

namespace longmap {

struct GrowthPolicy {
    int start_mask_exponent = 4;
    int max_mask_exponent = kMaxMaskExponent;
    /// Largest allowed array occupancy (valid keys / capacity) after a
    /// successful insert, in (0, 1].
    double growth_threshold = 0.5;
};

/// Decorator over FixedLongMap that reallocates at the next power of two and
/// reinserts every pair when an insert would push array occupancy past the
/// threshold, or when the inner map rejects an insert.
///
/// Keys 0 and MIN live outside the array and never cause growth. The map
/// never shrinks, and tombstones alone do not trigger reallocation.
class GrowableLongMap {
public:
    /// Called with the map before and after each reallocation.
    using GrowthObserver = std::function<void(const FixedLongMap& before, const FixedLongMap& after)>;

    explicit GrowableLongMap(GrowthPolicy policy = {}, DefaultEntry default_entry = zero_default)
        : policy_(validated(policy)),
          inner_(mask_for_exponent(policy.start_mask_exponent), std::move(default_entry)) {}

    void set_growth_observer(GrowthObserver observer) { observer_ = std::move(observer); }

    bool contains(std::int64_t key) const { return inner_.contains(key); }
    std::int64_t get(std::int64_t key) const { return inner_.get(key); }
    std::int32_t size() const noexcept { return inner_.size(); }
    bool is_empty() const noexcept { return inner_.is_empty(); }
    std::int32_t capacity() const noexcept { return inner_.capacity(); }
    std::int64_t default_value(std::int64_t key) const { return inner_.default_value(key); }

    const FixedLongMap& inner() const noexcept { return inner_; }
    const MapState& state() const noexcept { return inner_.state(); }
    const GrowthPolicy& policy() const noexcept { return policy_; }
    std::size_t growth_events() const noexcept { return growth_events_; }

    double occupancy() const noexcept {
        return static_cast<double>(inner_.state().array_size) / static_cast<double>(inner_.capacity());
    }

    /// Returns false only when the map is at its largest capacity and that
    /// map rejects the insert.
    bool update(std::int64_t key, std::int64_t value) {
        if (is_valid_key(key) && !inner_.contains(key)) {
            while (!at_max() && exceeds_threshold(inner_.state().array_size + 1, inner_.capacity()))
                if (!grow()) break;
        }
        while (!inner_.update(key, value)) {
            if (at_max() || !grow()) return false;
        }
        return true;
    }

    bool remove(std::int64_t key) { return inner_.remove(key); }

private:
    static GrowthPolicy validated(const GrowthPolicy& p) {
        if (p.start_mask_exponent < 0 || p.start_mask_exponent > kMaxMaskExponent ||
            p.max_mask_exponent < p.start_mask_exponent || p.max_mask_exponent > kMaxMaskExponent)
            throw std::invalid_argument("growth policy exponents must satisfy 0 <= start <= max <= 30");
        if (!(p.growth_threshold > 0.0 && p.growth_threshold <= 1.0))
            throw std::invalid_argument("growth threshold must be in (0, 1]");
        return p;
    }

    bool exceeds_threshold(std::int32_t stored, std::int32_t capacity) const noexcept {
        return static_cast<double>(stored) > policy_.growth_threshold * static_cast<double>(capacity);
    }

    bool at_max() const noexcept { return mask_exponent(inner_.mask()) >= policy_.max_mask_exponent; }

    /// Reinserts all pairs into the smallest larger map that accepts them.
    /// Returns false, leaving the map untouched, if even the largest allowed
    /// map rejects one of them.
    bool grow() {
        LongListMap pairs = snapshot_model(inner_);
        int exponent = mask_exponent(inner_.mask()) + 1;
        for (;;) {
            FixedLongMap next(mask_for_exponent(exponent), inner_.default_entry());
            bool all_inserted = true;
            for (const auto& [k, v] : pairs.entries()) {
                if (!next.update(k, v)) {
                    all_inserted = false;
                    break;
                }
            }
            if (all_inserted) {
                if (observer_) observer_(inner_, next);
                inner_ = std::move(next);
                ++growth_events_;
                return true;
            }
            if (exponent >= policy_.max_mask_exponent) return false;
            ++exponent;
        }
    }

    GrowthPolicy policy_;
    FixedLongMap inner_;
    GrowthObserver observer_;
    std::size_t growth_events_ = 0;
};

}  // namespace longmap
