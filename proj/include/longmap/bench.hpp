#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "longmap/fixed_long_map.hpp"
#include "longmap/growable_long_map.hpp"
#include "longmap/hashing.hpp"
#include "longmap/seek.hpp"

namespace longmap {

struct BenchConfig {
    int mask_exponent = 16;
    std::vector<double> levels{0.1, 0.25, 0.5, 0.7, 0.9};
    std::size_t ops_per_level = 20'000;
    bool growable = false;
    double growth_threshold = 0.5;
    std::uint64_t seed = 1;
};

struct LatencySummary {
    std::size_t count = 0;
    double median_ns = 0;
    double p99_ns = 0;
};

struct BenchLevel {
    double requested_occupancy = 0;
    /// Valid keys in the array divided by the capacity actually reached.
    double achieved_occupancy = 0;
    std::int32_t capacity = 0;
    std::size_t stored_keys = 0;
    std::size_t insert_failures = 0;
    LatencySummary get;
    LatencySummary update;
    LatencySummary remove;
    /// Probe length of each timed get (hits and misses), length -> count.
    std::map<std::int32_t, std::size_t> probe_histogram;
    double mean_probe_length = 0;
    double mean_probe_length_hit = 0;
    double mean_probe_length_miss = 0;
};

struct BenchReport {
    std::int32_t capacity = 0;
    std::string mode;
    std::uint64_t seed = 0;
    std::vector<BenchLevel> levels;
};

inline void validate(const BenchConfig& cfg) {
    if (cfg.mask_exponent < 0 || cfg.mask_exponent > kMaxMaskExponent)
        throw std::invalid_argument("mask exponent must be in [0, 30]");
    if (cfg.levels.empty()) throw std::invalid_argument("at least one occupancy level is required");
    for (std::size_t i = 0; i < cfg.levels.size(); ++i) {
        if (!(cfg.levels[i] >= 0.0 && cfg.levels[i] <= 1.0))
            throw std::invalid_argument("occupancy levels must be in [0, 1]");
        if (i > 0 && !(cfg.levels[i - 1] < cfg.levels[i]))
            throw std::invalid_argument("occupancy levels must be strictly increasing");
    }
    if (cfg.ops_per_level == 0) throw std::invalid_argument("ops per level must be positive");
    if (cfg.growable && !(cfg.growth_threshold > 0.0 && cfg.growth_threshold <= 1.0))
        throw std::invalid_argument("growth threshold must be in (0, 1]");
}

namespace detail {

inline LatencySummary summarize(std::vector<double>& ns) {
    LatencySummary s;
    s.count = ns.size();
    if (ns.empty()) return s;
    std::sort(ns.begin(), ns.end());
    s.median_ns = ns[ns.size() / 2];
    auto rank = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(ns.size())));
    s.p99_ns = ns[std::min(ns.size() - 1, rank == 0 ? 0 : rank - 1)];
    return s;
}

inline void keep_alive(std::int64_t v) {
#if defined(__GNUC__)
    asm volatile("" : : "r"(v) : "memory");
#else
    static volatile std::int64_t sink;
    sink = v;
#endif
}

template <class F>
double time_ns(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    return static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
}

template <class Map>
BenchLevel bench_level(Map& map, std::int32_t base_capacity, double level, std::size_t ops,
                       std::mt19937_64& rng) {
    BenchLevel out;
    out.requested_occupancy = level;

    std::unordered_set<std::int64_t> used;
    auto fresh_key = [&]() {
        for (;;) {
            auto k = static_cast<std::int64_t>(rng());
            if (is_valid_key(k) && used.insert(k).second) return k;
        }
    };

    auto target = static_cast<std::size_t>(std::llround(level * static_cast<double>(base_capacity)));
    std::vector<std::int64_t> present;
    present.reserve(target);
    std::size_t attempts_left = target + static_cast<std::size_t>(base_capacity);
    while (present.size() < target && attempts_left-- > 0) {
        std::int64_t k = fresh_key();
        if (map.update(k, static_cast<std::int64_t>(rng()))) present.push_back(k);
        else ++out.insert_failures;
    }

    std::vector<std::int64_t> queries;
    std::vector<bool> query_hits;
    queries.reserve(ops);
    std::uniform_int_distribution<std::size_t> pick(0, present.empty() ? 0 : present.size() - 1);
    for (std::size_t i = 0; i < ops; ++i) {
        bool hit = !present.empty() && (i % 2 == 0);
        queries.push_back(hit ? present[pick(rng)] : fresh_key());
        query_hits.push_back(hit);
    }

    std::vector<double> ns;
    ns.reserve(ops);
    std::int64_t sink = 0;
    for (std::int64_t k : queries) ns.push_back(time_ns([&] { sink ^= map.get(k); }));
    out.get = summarize(ns);

    double total = 0, total_hit = 0, total_miss = 0;
    std::size_t hits = 0;
    const MapState& s = map.state();
    for (std::size_t i = 0; i < queries.size(); ++i) {
        ProbeStats stats;
        seek_entry(queries[i], s.keys, s.mask, stats);
        std::int32_t len = stats.probe_length();
        ++out.probe_histogram[len];
        total += len;
        if (query_hits[i]) {
            total_hit += len;
            ++hits;
        } else {
            total_miss += len;
        }
    }
    out.mean_probe_length = total / static_cast<double>(queries.size());
    out.mean_probe_length_hit = hits ? total_hit / static_cast<double>(hits) : 0.0;
    out.mean_probe_length_miss = queries.size() > hits ? total_miss / static_cast<double>(queries.size() - hits) : 0.0;

    // Remove/reinsert pairs keep occupancy constant across the timing loop.
    std::vector<double> update_ns, remove_ns;
    update_ns.reserve(ops);
    remove_ns.reserve(ops);
    for (std::size_t i = 0; i < ops; ++i) {
        auto v = static_cast<std::int64_t>(rng());
        if (!present.empty()) {
            std::int64_t k = present[pick(rng)];
            remove_ns.push_back(time_ns([&] { sink ^= map.remove(k); }));
            update_ns.push_back(time_ns([&] { sink ^= map.update(k, v); }));
        } else {
            std::int64_t k = fresh_key();
            update_ns.push_back(time_ns([&] { sink ^= map.update(k, v); }));
            remove_ns.push_back(time_ns([&] { sink ^= map.remove(k); }));
        }
    }
    out.update = summarize(update_ns);
    out.remove = summarize(remove_ns);

    out.capacity = map.capacity();
    out.stored_keys = static_cast<std::size_t>(map.state().array_size);
    out.achieved_occupancy = static_cast<double>(map.state().array_size) / static_cast<double>(map.capacity());
    keep_alive(sink);
    return out;
}

}  // namespace detail

/// Fills a fresh map to each occupancy level and measures get, update and
/// remove latency plus the probe-length distribution of lookups. Half of the
/// lookups hit stored keys; the rest use keys never inserted.
inline BenchReport run_bench(const BenchConfig& cfg) {
    validate(cfg);
    BenchReport report;
    report.capacity = mask_for_exponent(cfg.mask_exponent) + 1;
    report.mode = cfg.growable ? "growable" : "fixed";
    report.seed = cfg.seed;
    std::mt19937_64 rng(cfg.seed);
    for (double level : cfg.levels) {
        if (cfg.growable) {
            GrowableLongMap map(GrowthPolicy{cfg.mask_exponent, kMaxMaskExponent, cfg.growth_threshold});
            report.levels.push_back(detail::bench_level(map, report.capacity, level, cfg.ops_per_level, rng));
        } else {
            FixedLongMap map(mask_for_exponent(cfg.mask_exponent));
            report.levels.push_back(detail::bench_level(map, report.capacity, level, cfg.ops_per_level, rng));
        }
    }
    return report;
}

inline void print_table(std::ostream& os, const BenchReport& r) {
    os << "mode " << r.mode << ", capacity " << r.capacity << ", seed " << r.seed << '\n';
    os << std::left << std::setw(8) << "level" << std::setw(10) << "achieved" << std::setw(10) << "capacity"
       << std::setw(10) << "probe" << std::setw(10) << "hit" << std::setw(10) << "miss" << std::setw(12)
       << "get p50/p99" << "  " << std::setw(14) << "update p50/p99" << "  " << "remove p50/p99" << '\n';
    os << std::fixed;
    for (const BenchLevel& l : r.levels) {
        os << std::setw(8) << std::setprecision(2) << l.requested_occupancy << std::setw(10) << std::setprecision(3)
           << l.achieved_occupancy << std::setw(10) << l.capacity << std::setw(10) << std::setprecision(3)
           << l.mean_probe_length << std::setw(10) << l.mean_probe_length_hit << std::setw(10)
           << l.mean_probe_length_miss << std::setprecision(0) << std::setw(12)
           << (std::to_string(static_cast<long>(l.get.median_ns)) + "/" + std::to_string(static_cast<long>(l.get.p99_ns)))
           << "  " << std::setw(14)
           << (std::to_string(static_cast<long>(l.update.median_ns)) + "/" +
               std::to_string(static_cast<long>(l.update.p99_ns)))
           << "  "
           << (std::to_string(static_cast<long>(l.remove.median_ns)) + "/" +
               std::to_string(static_cast<long>(l.remove.p99_ns)))
           << '\n';
    }
    os.unsetf(std::ios::fixed);
}

}  // namespace longmap
