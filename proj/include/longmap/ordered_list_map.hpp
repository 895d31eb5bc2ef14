#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace longmap {

/// Association list kept strictly ascending by signed key. The
/// representation is canonical: two maps with the same bindings have equal
/// entry sequences, so structural equality is map equality.
///
/// Value semantics: insert and remove return new maps.
template <class Value>
class OrderedListMap {
public:
    using Entry = std::pair<std::int64_t, Value>;

    OrderedListMap() = default;

    static OrderedListMap empty() { return {}; }

    /// Builds from entries that are already strictly ascending.
    static OrderedListMap from_sorted(std::vector<Entry> entries) {
        for (std::size_t i = 1; i < entries.size(); ++i)
            if (!(entries[i - 1].first < entries[i].first))
                throw std::invalid_argument("OrderedListMap entries must be strictly ascending");
        OrderedListMap m;
        m.entries_ = std::move(entries);
        return m;
    }

    [[nodiscard]] OrderedListMap insert(std::int64_t key, Value value) const {
        OrderedListMap out = *this;
        out.insert_in_place(key, std::move(value));
        return out;
    }

    [[nodiscard]] OrderedListMap remove(std::int64_t key) const {
        OrderedListMap out = *this;
        out.remove_in_place(key);
        return out;
    }

    bool contains(std::int64_t key) const { return find(key) != entries_.end(); }

    std::optional<Value> get(std::int64_t key) const {
        auto it = find(key);
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    /// Requires contains(key).
    const Value& apply(std::int64_t key) const {
        auto it = find(key);
        if (it == entries_.end()) throw std::out_of_range("OrderedListMap::apply on absent key");
        return it->second;
    }

    std::size_t size() const noexcept { return entries_.size(); }
    bool is_empty() const noexcept { return entries_.empty(); }
    const std::vector<Entry>& entries() const noexcept { return entries_; }

    bool strictly_ordered() const {
        return std::adjacent_find(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
                   return !(a.first < b.first);
               }) == entries_.end();
    }

    friend bool operator==(const OrderedListMap&, const OrderedListMap&) = default;

    // Mutating forms, for folds that own their accumulator.
    void insert_in_place(std::int64_t key, Value value) {
        auto it = lower_bound(key);
        if (it != entries_.end() && it->first == key) it->second = std::move(value);
        else entries_.insert(it, Entry{key, std::move(value)});
    }

    void remove_in_place(std::int64_t key) {
        auto it = lower_bound(key);
        if (it != entries_.end() && it->first == key) entries_.erase(it);
    }

private:
    typename std::vector<Entry>::iterator lower_bound(std::int64_t key) {
        return std::lower_bound(entries_.begin(), entries_.end(), key,
                                [](const Entry& e, std::int64_t k) { return e.first < k; });
    }

    typename std::vector<Entry>::const_iterator find(std::int64_t key) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                                   [](const Entry& e, std::int64_t k) { return e.first < k; });
        return (it != entries_.end() && it->first == key) ? it : entries_.end();
    }

    std::vector<Entry> entries_;
};

}  // namespace longmap
