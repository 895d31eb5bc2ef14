#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "longmap/fixed_long_map.hpp"
#include "longmap/hashing.hpp"
#include "longmap/invariant.hpp"
#include "longmap/ordered_list_map.hpp"
#include "longmap/seek.hpp"

namespace longmap {

using LongListMap = OrderedListMap<std::int64_t>;

// --------------------------------------------------------------------------
// Model extraction

/// Reference model of a map state: every valid-key slot, then the side
/// entries for 0 and MIN when their extraKeys bits are set.
///
/// Slots are folded from the last index down to the first, so when a state
/// holds duplicate keys (an invalid state) the lowest index wins. Sorting
/// replaces the quadratic insert fold; snapshot_model_by_fold keeps the
/// literal form for cross-checking.
inline LongListMap snapshot_model(const MapState& s) {
    std::vector<LongListMap::Entry> entries;
    entries.reserve(static_cast<std::size_t>(s.array_size > 0 ? s.array_size : 0) + 2);
    for (std::size_t i = 0; i < s.keys.size(); ++i)
        if (is_valid_key(s.keys[i])) entries.emplace_back(s.keys[i], s.values[i]);
    if ((s.extra_keys & 1) != 0) entries.emplace_back(0, s.zero_value);
    if ((s.extra_keys & 2) != 0) entries.emplace_back(kMinKey, s.min_value);
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    entries.erase(std::unique(entries.begin(), entries.end(),
                              [](const auto& a, const auto& b) { return a.first == b.first; }),
                  entries.end());
    return LongListMap::from_sorted(std::move(entries));
}

/// Literal recursive-fold form of snapshot_model. Quadratic.
inline LongListMap snapshot_model_by_fold(const MapState& s) {
    LongListMap acc;
    for (std::size_t i = s.keys.size(); i-- > 0;)
        if (is_valid_key(s.keys[i])) acc = acc.insert(s.keys[i], s.values[i]);
    switch (s.extra_keys & 3) {
        case 3: return acc.insert(0, s.zero_value).insert(kMinKey, s.min_value);
        case 1: return acc.insert(0, s.zero_value);
        case 2: return acc.insert(kMinKey, s.min_value);
        default: return acc;
    }
}

inline LongListMap snapshot_model(const FixedLongMap& m) { return snapshot_model(m.state()); }

// --------------------------------------------------------------------------
// Array/model equivalence

struct EquivalenceReport {
    bool holds = true;
    std::optional<std::string> witness;
};

/// Checks a state against a model with the four array/model equivalence
/// properties:
///   (a) every valid model key occurs in the key array;
///   (b) every valid key at any index is in the model;
///   (c) a key the array contains is in the model;
///   (d) model values match the value slot at the key's index, and the side
///       entries for 0 and MIN match extraKeys, zeroValue and minValue.
inline EquivalenceReport check_equivalence(const MapState& s, const LongListMap& model) {
    EquivalenceReport r;
    auto fail = [&r](std::string w) {
        r.holds = false;
        r.witness = std::move(w);
        return r;
    };
    std::span<const std::int64_t> keys = s.keys;

    for (const auto& [k, v] : model.entries()) {
        if (is_valid_key(k) && !array_contains_key(keys, k, 0))
            return fail("(a) model key " + std::to_string(k) + " missing from key array");
    }
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (is_valid_key(keys[i]) && !model.contains(keys[i]))
            return fail("(b) key " + std::to_string(keys[i]) + " at index " + std::to_string(i) +
                        " missing from model");
    }
    for (std::size_t i = 0; i < keys.size(); ++i) {
        std::int64_t k = keys[i];
        if (is_valid_key(k) && array_contains_key(keys, k, 0) && !model.contains(k))
            return fail("(c) array contains " + std::to_string(k) + " but model does not");
    }
    for (const auto& [k, v] : model.entries()) {
        if (!is_valid_key(k)) continue;
        std::size_t i = array_scan_for_key(keys, k, 0);
        if (s.values.size() <= i || s.values[i] != v)
            return fail("(d) key " + std::to_string(k) + " at index " + std::to_string(i) + ": model value " +
                        std::to_string(v) + " differs from value slot");
    }
    bool zero_in_model = model.contains(0);
    if (zero_in_model != ((s.extra_keys & 1) != 0) || (zero_in_model && model.apply(0) != s.zero_value))
        return fail("(d) key 0 disagrees with extraKeys bit 0 / zeroValue");
    bool min_in_model = model.contains(kMinKey);
    if (min_in_model != ((s.extra_keys & 2) != 0) || (min_in_model && model.apply(kMinKey) != s.min_value))
        return fail("(d) key MIN disagrees with extraKeys bit 1 / minValue");
    return r;
}

inline EquivalenceReport check_equivalence(const MapState& s) { return check_equivalence(s, snapshot_model(s)); }

// --------------------------------------------------------------------------
// Seek agreement

/// seek_entry and seek_entry_or_open agree on Found and Undefined, and a
/// MissingVacant(i) from the latter shows up as MissingZero(i) from the
/// former. A key present in the array is never reported missing.
/// Requires all_keys_seekable(keys, mask), no duplicates and a valid key.
inline bool seek_agreement_property(std::span<const std::int64_t> keys, std::int32_t mask, std::int64_t key) {
    SeekResult lookup = seek_entry(key, keys, mask);
    SeekResult open = seek_entry_or_open(key, keys, mask);
    bool agree = std::visit(
        [&lookup](const auto& o) -> bool {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, MissingVacant>) return lookup == SeekResult{MissingZero{o.index}};
            else return lookup == SeekResult{o};
        },
        open);
    if (!agree) return false;
    if (array_contains_key(keys, key, 0)) {
        auto at = static_cast<std::int32_t>(array_scan_for_key(keys, key, 0));
        return open == SeekResult{Found{at}};
    }
    return !std::holds_alternative<Found>(open);
}

// --------------------------------------------------------------------------
// Traces

enum class OpKind : char { Update = 'U', Remove = 'R', Get = 'G', Contains = 'C' };

struct TraceOp {
    OpKind kind;
    std::int64_t key = 0;
    std::int64_t value = 0;

    static TraceOp update(std::int64_t k, std::int64_t v) { return {OpKind::Update, k, v}; }
    static TraceOp remove(std::int64_t k) { return {OpKind::Remove, k, 0}; }
    static TraceOp get(std::int64_t k) { return {OpKind::Get, k, 0}; }
    static TraceOp contains(std::int64_t k) { return {OpKind::Contains, k, 0}; }

    friend bool operator==(const TraceOp&, const TraceOp&) = default;
};

inline std::string to_string(const TraceOp& op) {
    std::string s(1, static_cast<char>(op.kind));
    s += ' ';
    s += std::to_string(op.key);
    if (op.kind == OpKind::Update) {
        s += ' ';
        s += std::to_string(op.value);
    }
    return s;
}

struct FuzzConfig {
    std::uint64_t seed = 1;
    std::size_t op_count = 10'000;
    int mask_exponent = 8;
    /// Distinct valid keys to draw from; 0 selects 2 * capacity.
    std::size_t key_pool_size = 0;
    /// Probability of drawing 0, and separately of drawing MIN.
    double sentinel_weight = 0.05;
};

inline void validate(const FuzzConfig& cfg) {
    if (cfg.mask_exponent < 0 || cfg.mask_exponent > kMaxMaskExponent)
        throw std::invalid_argument("mask exponent must be in [0, 30]");
    if (cfg.op_count == 0) throw std::invalid_argument("op count must be positive");
    if (!(cfg.sentinel_weight >= 0.0 && cfg.sentinel_weight <= 0.5))
        throw std::invalid_argument("sentinel weight must be in [0, 0.5]");
}

/// Deterministic random trace. Small key pools force collisions, tombstone
/// reuse and capacity exhaustion.
inline std::vector<TraceOp> generate_trace(const FuzzConfig& cfg) {
    validate(cfg);
    std::mt19937_64 rng(cfg.seed);
    std::size_t capacity = std::size_t{1} << cfg.mask_exponent;
    std::size_t pool_size = cfg.key_pool_size != 0 ? cfg.key_pool_size : 2 * capacity;

    std::vector<std::int64_t> pool;
    pool.reserve(pool_size);
    std::unordered_set<std::int64_t> used;
    while (pool.size() < pool_size) {
        auto k = static_cast<std::int64_t>(rng());
        if (is_valid_key(k) && used.insert(k).second) pool.push_back(k);
    }

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, pool_size - 1);
    std::uniform_int_distribution<int> kind(0, 9);
    auto draw_key = [&]() -> std::int64_t {
        double u = unit(rng);
        if (u < cfg.sentinel_weight) return 0;
        if (u < 2 * cfg.sentinel_weight) return kMinKey;
        return pool[pick(rng)];
    };

    std::vector<TraceOp> ops;
    ops.reserve(cfg.op_count);
    for (std::size_t i = 0; i < cfg.op_count; ++i) {
        int c = kind(rng);
        std::int64_t k = draw_key();
        if (c < 4) ops.push_back(TraceOp::update(k, static_cast<std::int64_t>(rng())));
        else if (c < 6) ops.push_back(TraceOp::remove(k));
        else if (c < 8) ops.push_back(TraceOp::get(k));
        else ops.push_back(TraceOp::contains(k));
    }
    return ops;
}

/// Invariant-check stride: every op for small maps, every 64 ops otherwise.
constexpr std::size_t default_check_stride(std::int32_t mask) noexcept { return mask + 1 <= 64 ? 1 : 64; }

struct CheckOptions {
    /// 0 selects default_check_stride.
    std::size_t invariant_stride = 0;
    /// 0 selects the invariant stride.
    std::size_t equivalence_stride = 0;
    bool verify_probe_bound = true;
    bool shrink = true;
};

struct Divergence {
    std::size_t op_index;
    TraceOp op;
    std::string description;
};

struct TraceResult {
    std::size_t ops_executed = 0;
    std::size_t updates_rejected = 0;
    std::size_t invariant_checks = 0;
    std::size_t equivalence_checks = 0;
    std::size_t probe_checks = 0;
    std::size_t undefined_seeks = 0;
    std::int32_t max_probe_iterations = 0;
    std::size_t growth_events = 0;
    std::int32_t final_size = 0;
    /// FNV-1a over the per-op observable results.
    std::uint64_t results_digest = 0xcbf29ce484222325ULL;
    std::vector<std::int64_t> results;
    std::optional<Divergence> divergence;
    /// Minimized op list that still diverges; empty when no divergence.
    std::vector<TraceOp> minimized;

    bool ok() const noexcept { return !divergence.has_value(); }
};

/// Delta-debugging reduction: drops chunks of ops while `still_fails`
/// holds, halving the chunk size down to single ops.
inline std::vector<TraceOp> shrink_trace(std::vector<TraceOp> ops,
                                         const std::function<bool(std::span<const TraceOp>)>& still_fails) {
    std::size_t chunk = std::max<std::size_t>(ops.size() / 2, 1);
    while (!ops.empty()) {
        bool removed = false;
        for (std::size_t start = 0; start < ops.size();) {
            std::vector<TraceOp> candidate;
            candidate.reserve(ops.size());
            candidate.insert(candidate.end(), ops.begin(), ops.begin() + static_cast<std::ptrdiff_t>(start));
            std::size_t end = std::min(start + chunk, ops.size());
            candidate.insert(candidate.end(), ops.begin() + static_cast<std::ptrdiff_t>(end), ops.end());
            if (still_fails(candidate)) {
                ops = std::move(candidate);
                removed = true;
            } else {
                start += chunk;
            }
        }
        if (chunk == 1 && !removed) break;
        if (!removed) chunk = std::max<std::size_t>(chunk / 2, 1);
    }
    return ops;
}

namespace detail {

inline void mix_digest(std::uint64_t& h, std::int64_t v) {
    auto u = static_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
        h ^= (u >> (8 * i)) & 0xff;
        h *= 0x100000001b3ULL;
    }
}

/// Independent walk of the first kMaxProbes probe positions: true iff one of
/// them holds `key` or 0, i.e. any correct seek must terminate.
inline bool probe_path_terminates(std::int64_t key, std::span<const std::int64_t> keys, std::int32_t mask) {
    std::int32_t e = to_index(key, mask);
    for (std::int32_t x = 0; x < kMaxProbes; ++x) {
        if (x > 0) e = next_probe(e, x, mask);
        std::int64_t q = keys[static_cast<std::size_t>(e)];
        if (q == key || q == 0) return true;
    }
    return false;
}

template <class Map>
std::size_t growth_events_of(const Map& m) {
    if constexpr (requires { m.growth_events(); }) return m.growth_events();
    else return 0;
}

/// Single pass over `ops` with full contract checking; no shrinking.
template <class Map>
TraceResult run_checked(std::span<const TraceOp> ops, Map map, const CheckOptions& opts, bool keep_results) {
    TraceResult res;
    LongListMap model = snapshot_model(map.state());
    const std::size_t inv_stride =
        opts.invariant_stride != 0 ? opts.invariant_stride : default_check_stride(map.state().mask);
    const std::size_t eq_stride = opts.equivalence_stride != 0 ? opts.equivalence_stride : inv_stride;

    auto diverge = [&](std::size_t i, const TraceOp& op, std::string why) {
        res.divergence = Divergence{i, op, std::move(why)};
    };
    auto record = [&](std::int64_t v) {
        mix_digest(res.results_digest, v);
        if (keep_results) res.results.push_back(v);
    };

    for (std::size_t i = 0; i < ops.size(); ++i) {
        const TraceOp& op = ops[i];
        std::ostringstream why;

        std::optional<SeekResult> predicted;
        if (opts.verify_probe_bound && is_valid_key(op.key)) {
            const MapState& s = map.state();
            ProbeStats stats;
            predicted = seek_entry_or_open(op.key, s.keys, s.mask, stats);
            ++res.probe_checks;
            res.max_probe_iterations = std::max(res.max_probe_iterations, stats.iterations);
            bool undefined = std::holds_alternative<Undefined>(*predicted);
            if (undefined) ++res.undefined_seeks;
            if (stats.iterations > kMaxProbes || undefined != (stats.iterations == kMaxProbes) ||
                undefined != stats.undefined) {
                why << "probe bound: " << stats.iterations << " iterations for result " << *predicted;
                diverge(i, op, why.str());
                break;
            }
            if (undefined == probe_path_terminates(op.key, s.keys, s.mask)) {
                why << "probe bound: result " << *predicted << " contradicts the probe path";
                diverge(i, op, why.str());
                break;
            }
        }

        switch (op.kind) {
            case OpKind::Contains: {
                bool got = map.contains(op.key);
                record(got);
                if (got != model.contains(op.key)) why << "contains returned " << got;
                break;
            }
            case OpKind::Get: {
                std::int64_t got = map.get(op.key);
                record(got);
                std::int64_t want = model.contains(op.key) ? model.apply(op.key) : map.default_value(op.key);
                if (got != want) why << "get returned " << got << ", expected " << want;
                break;
            }
            case OpKind::Update: {
                bool ok = map.update(op.key, op.value);
                record(ok);
                if (ok) {
                    model = model.insert(op.key, op.value);
                    if (!map.contains(op.key)) why << "update succeeded but key not contained";
                } else {
                    ++res.updates_rejected;
                }
                if constexpr (std::is_same_v<Map, FixedLongMap>) {
                    if (predicted && ok == std::holds_alternative<Undefined>(*predicted))
                        why << "update returned " << ok << " but seek predicted " << *predicted;
                }
                break;
            }
            case OpKind::Remove: {
                bool ok = map.remove(op.key);
                record(ok);
                if (ok) model = model.remove(op.key);
                if constexpr (std::is_same_v<Map, FixedLongMap>) {
                    if (predicted && ok == std::holds_alternative<Undefined>(*predicted))
                        why << "remove returned " << ok << " but seek predicted " << *predicted;
                }
                break;
            }
        }
        if (why.tellp() > 0) {
            diverge(i, op, why.str());
            break;
        }

        const MapState& s = map.state();
        LongListMap snap = snapshot_model(s);
        if (snap != model) {
            diverge(i, op, "snapshot differs from reference model");
            break;
        }
        if (map.size() != static_cast<std::int32_t>(model.size()) || map.is_empty() != model.is_empty()) {
            why << "size " << map.size() << " but model has " << model.size();
            diverge(i, op, why.str());
            break;
        }
        if ((i + 1) % inv_stride == 0 || i + 1 == ops.size()) {
            ++res.invariant_checks;
            InvariantReport inv = check(s);
            if (!inv.valid()) {
                diverge(i, op, "invariant: " + inv.first_violation.value_or("?"));
                break;
            }
        }
        if ((i + 1) % eq_stride == 0 || i + 1 == ops.size()) {
            ++res.equivalence_checks;
            EquivalenceReport eq = check_equivalence(s, model);
            if (!eq.holds) {
                diverge(i, op, "equivalence: " + eq.witness.value_or("?"));
                break;
            }
        }
        ++res.ops_executed;
    }
    res.final_size = map.size();
    res.growth_events = growth_events_of(map);
    return res;
}

}  // namespace detail

/// Replays `ops` on a fresh map from `make_map` and on the reference model,
/// checking after every op that observable results agree, update/remove
/// contracts hold, the snapshot equals the model, and (at the configured
/// strides) the invariant and equivalence properties. On divergence the
/// failing prefix is shrunk to a minimal reproducer.
template <class MakeMap>
TraceResult run_trace(std::span<const TraceOp> ops, MakeMap make_map, const CheckOptions& opts = {},
                      bool keep_results = false) {
    TraceResult res = detail::run_checked(ops, make_map(), opts, keep_results);
    if (res.divergence && opts.shrink) {
        std::vector<TraceOp> prefix(ops.begin(), ops.begin() + static_cast<std::ptrdiff_t>(res.divergence->op_index + 1));
        CheckOptions quiet = opts;
        quiet.shrink = false;
        res.minimized = shrink_trace(std::move(prefix), [&](std::span<const TraceOp> candidate) {
            return !detail::run_checked(candidate, make_map(), quiet, false).ok();
        });
    }
    return res;
}

inline TraceResult run_trace(const FuzzConfig& cfg, const CheckOptions& opts = {}) {
    std::vector<TraceOp> ops = generate_trace(cfg);
    std::int32_t mask = mask_for_exponent(cfg.mask_exponent);
    return run_trace(ops, [mask] { return FixedLongMap(mask); }, opts);
}

}  // namespace longmap
