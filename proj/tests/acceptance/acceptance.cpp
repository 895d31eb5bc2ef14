// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "longmap.hpp"
#include "oracles/hash_oracle.hpp"
#include "support/list_map_lemmas.hpp"

using namespace longmap;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const char* title, const Verdict& v, double secs) {
    char line[512];
    std::snprintf(line, sizeof line, "[%s] C%-2d %-28s %s (%.2f s)", v.pass ? "PASS" : "FAIL", id, title,
                  v.detail.c_str(), secs);
    std::cout << line << std::endl;
    if (!v.pass) ++failures;
}

template <class F>
void criterion(int id, const char* title, double time_limit_s, F&& body) {
    auto t0 = Clock::now();
    Verdict v = body();
    double secs = seconds_since(t0);
    if (time_limit_s > 0 && secs >= time_limit_s) {
        v.pass = false;
        v.detail += "; exceeded time limit of " + std::to_string(time_limit_s) + " s";
    }
    report(id, title, v, secs);
}

// ---------------------------------------------------------------------------
// C1

std::vector<std::int64_t> hash_test_keys() {
    std::vector<std::int64_t> keys{0,         1,         -1,          kMinKey, INT64_MAX, kMinKey + 1, INT64_MAX - 1,
                                   -(std::int64_t{1} << 32), (std::int64_t{1} << 32) - 1};
    for (int p = 1; p <= 55; ++p) keys.push_back(std::int64_t{1} << p);
    return keys;
}

Verdict hash_bit_exactness() {
    auto keys = hash_test_keys();
    std::size_t total = 0, matched = 0;
    std::string first_mismatch;
    for (int exponent : {0, 4, 10, 30}) {
        std::int32_t mask = mask_for_exponent(exponent);
        for (std::int64_t k : keys) {
            ++total;
            std::int64_t want = oracle::to_index(k, mask);
            if (to_index(k, mask) == want) ++matched;
            else if (first_mismatch.empty())
                first_mismatch = "; first mismatch key " + std::to_string(k) + " mask " + std::to_string(mask);
        }
    }
    Verdict v;
    v.pass = keys.size() == 64 && matched == total && total == 256;
    v.detail = std::to_string(keys.size()) + " keys x 4 masks: " + std::to_string(matched) + "/" +
               std::to_string(total) + " bit-exact" + first_mismatch;
    return v;
}

// ---------------------------------------------------------------------------
// C2

Verdict list_map_lemmas() {
    constexpr std::size_t kCases = 10'000;
    Verdict v;
    std::size_t failed = 0;
    std::ostringstream os;
    for (std::size_t i = 0; i < lemmas::all().size(); ++i) {
        const auto& lemma = lemmas::all()[i];
        lemmas::Outcome out = lemmas::run(lemma, kCases, 0xC2 + i);
        failed += out.failures;
        if (out.failures != 0 || !out.ordered || out.cases < kCases) {
            v.pass = false;
            os << " " << lemma.name << " failed " << out.failures;
        }
    }
    v.detail = "9 lemmas x " + std::to_string(kCases) + " cases, 16-key pool, " + std::to_string(failed) +
               " failures" + os.str();
    return v;
}

// ---------------------------------------------------------------------------
// C3, C4, C5, C7 share the conformance corpus.

struct CorpusSpec {
    FuzzConfig cfg;
};

const std::vector<int> kCorpusExponents{0, 1, 2, 4, 6, 8, 10};

/// Per exponent: eight traces over the default 2x-capacity pool and two over
/// a half-capacity pool, 2000 ops each.
std::vector<FuzzConfig> corpus() {
    std::vector<FuzzConfig> out;
    for (int e : kCorpusExponents) {
        std::size_t cap = std::size_t{1} << e;
        for (std::uint64_t s = 0; s < 10; ++s) {
            FuzzConfig cfg;
            cfg.seed = 0xC0DE0000ULL + static_cast<std::uint64_t>(e) * 100 + s;
            cfg.op_count = 2000;
            cfg.mask_exponent = e;
            cfg.sentinel_weight = 0.05;
            cfg.key_pool_size = s < 8 ? 0 : std::max<std::size_t>(cap / 2, 1);
            out.push_back(cfg);
        }
    }
    return out;
}

struct CorpusStats {
    std::size_t ops = 0;
    std::size_t divergences = 0;
    std::string first_divergence;
    std::size_t invariant_checks = 0;
    std::size_t invariant_violations = 0;
    std::map<int, std::size_t> equivalence_checks;
    std::size_t equivalence_failures = 0;
    std::size_t probe_checks = 0;
    std::size_t undefined_seeks = 0;
    std::int32_t max_probe_iterations = 0;
    std::size_t probe_violations = 0;
    std::size_t updates_rejected = 0;
    std::map<int, std::size_t> expected_invariant_checks;
};

CorpusStats run_corpus() {
    CorpusStats st;
    for (const FuzzConfig& cfg : corpus()) {
        auto ops = generate_trace(cfg);
        std::int32_t mask = mask_for_exponent(cfg.mask_exponent);
        CheckOptions opts;
        opts.invariant_stride = cfg.mask_exponent <= 6 ? 1 : 64;
        opts.equivalence_stride = cfg.mask_exponent <= 6 ? 1 : 16;
        TraceResult r = run_trace(ops, [mask] { return FixedLongMap(mask); }, opts);
        st.ops += r.ops_executed + (r.divergence ? 1 : 0);
        st.invariant_checks += r.invariant_checks;
        st.equivalence_checks[cfg.mask_exponent] += r.equivalence_checks;
        st.probe_checks += r.probe_checks;
        st.undefined_seeks += r.undefined_seeks;
        st.updates_rejected += r.updates_rejected;
        st.max_probe_iterations = std::max(st.max_probe_iterations, r.max_probe_iterations);
        st.expected_invariant_checks[cfg.mask_exponent] +=
            ops.size() / opts.invariant_stride + (ops.size() % opts.invariant_stride ? 1 : 0);
        if (r.divergence) {
            ++st.divergences;
            const std::string& d = r.divergence->description;
            if (d.rfind("invariant", 0) == 0) ++st.invariant_violations;
            if (d.rfind("equivalence", 0) == 0) ++st.equivalence_failures;
            if (d.rfind("probe bound", 0) == 0) ++st.probe_violations;
            if (st.first_divergence.empty())
                st.first_divergence = "seed " + std::to_string(cfg.seed) + " op " +
                                      std::to_string(r.divergence->op_index) + ": " + d;
        }
    }
    return st;
}

// ---------------------------------------------------------------------------
// C6 (and the seek half of C7)

struct SeekAgreementStats {
    std::size_t arrays = 0;
    std::size_t invalid_arrays = 0;
    std::size_t keys_checked = 0;
    std::size_t disagreements = 0;
    std::size_t present_missing = 0;
    std::size_t vacant_relabels = 0;
    std::size_t undefined = 0;
    std::size_t probe_violations = 0;
    std::int32_t max_iterations = 0;
};

SeekAgreementStats run_seek_agreement() {
    constexpr std::size_t kArrays = 10'000;
    SeekAgreementStats st;
    std::mt19937_64 rng(0xF161);
    while (st.arrays < kArrays) {
        int e = static_cast<int>(rng() % 7);
        std::int32_t mask = mask_for_exponent(e);
        std::size_t cap = std::size_t{1} << e;
        std::vector<std::int64_t> pool;
        std::size_t pool_size = cap + 1 + rng() % (2 * cap);
        for (std::size_t i = 0; i < pool_size; ++i) {
            std::int64_t k = static_cast<std::int64_t>(rng());
            if (is_valid_key(k)) pool.push_back(k);
        }
        FixedLongMap m(mask);
        std::size_t steps = rng() % (4 * cap + 4);
        for (std::size_t i = 0; i < steps; ++i) {
            std::int64_t k = pool[rng() % pool.size()];
            if (rng() % 3 == 0) m.remove(k);
            else m.update(k, static_cast<std::int64_t>(i));
        }
        ++st.arrays;
        const auto& keys = m.state().keys;
        if (!all_keys_seekable(keys, mask) || !array_no_duplicates(keys, 0)) {
            ++st.invalid_arrays;
            continue;
        }
        std::vector<std::int64_t> probes = pool;
        for (int i = 0; i < 4; ++i) probes.push_back(static_cast<std::int64_t>(rng() | 1));
        for (std::int64_t k : probes) {
            if (!is_valid_key(k)) continue;
            ++st.keys_checked;
            if (!seek_agreement_property(keys, mask, k)) ++st.disagreements;

            ProbeStats open_stats, lookup_stats;
            SeekResult open = seek_entry_or_open(k, keys, mask, open_stats);
            SeekResult lookup = seek_entry(k, keys, mask, lookup_stats);
            bool present = array_contains_key(keys, k, 0);
            if (present && !std::holds_alternative<Found>(open)) ++st.present_missing;
            if (std::holds_alternative<MissingVacant>(open)) ++st.vacant_relabels;
            bool undefined = std::holds_alternative<Undefined>(open);
            if (undefined) ++st.undefined;
            st.max_iterations = std::max({st.max_iterations, open_stats.iterations, lookup_stats.iterations});
            bool bound_ok = open_stats.iterations <= kMaxProbes && lookup_stats.iterations <= kMaxProbes &&
                            undefined == (open_stats.iterations == kMaxProbes) &&
                            std::holds_alternative<Undefined>(lookup) == (lookup_stats.iterations == kMaxProbes) &&
                            undefined != detail::probe_path_terminates(k, keys, mask);
            if (!bound_ok) ++st.probe_violations;
        }
    }
    return st;
}

// ---------------------------------------------------------------------------
// C8

Verdict capacity_semantics() {
    FixedLongMap m(1);
    bool ok = m.update(101, 1) && m.update(202, 2);
    LongListMap before = snapshot_model(m);
    bool third = m.update(303, 3);
    bool unchanged = snapshot_model(m) == before && !m.contains(303);
    bool zero = m.update(0, 4);
    bool min = m.update(kMinKey, 5);
    Verdict v;
    v.pass = ok && !third && unchanged && zero && min && m.size() == 4 && check(m).valid();
    v.detail = std::string("2 keys ") + (ok ? "stored" : "REJECTED") + ", 3rd " +
               (third ? "ACCEPTED" : "rejected") + (unchanged ? " with model unchanged" : " but model CHANGED") +
               ", sentinels " + (zero && min ? "stored" : "REJECTED") + ", size " + std::to_string(m.size());
    return v;
}

// ---------------------------------------------------------------------------
// C9

Verdict growable_decorator() {
    std::size_t ops_total = 0, divergences = 0, growths = 0, growth_mismatches = 0, rejections = 0;
    std::string first;
    auto mismatches = std::make_shared<std::size_t>(0);
    auto observed = std::make_shared<std::size_t>(0);
    auto make = [mismatches, observed] {
        GrowableLongMap g(GrowthPolicy{1, kMaxMaskExponent, 0.5});
        g.set_growth_observer([mismatches, observed](const FixedLongMap& before, const FixedLongMap& after) {
            ++*observed;
            if (snapshot_model(before) != snapshot_model(after) || !check(after).valid()) ++*mismatches;
        });
        return g;
    };
    CheckOptions opts;
    opts.invariant_stride = 8;
    opts.equivalence_stride = 64;
    opts.shrink = false;
    for (const FuzzConfig& cfg : corpus()) {
        auto ops = generate_trace(cfg);
        TraceResult r = run_trace(ops, make, opts);
        ops_total += r.ops_executed;
        growths += r.growth_events;
        rejections += r.updates_rejected;
        if (r.divergence) {
            ++divergences;
            if (first.empty()) first = "; first: seed " + std::to_string(cfg.seed) + " " + r.divergence->description;
        }
    }
    growth_mismatches = *mismatches;
    Verdict v;
    v.pass = divergences == 0 && growth_mismatches == 0 && rejections == 0 && growths > 0 && *observed >= growths;
    v.detail = std::to_string(ops_total) + " ops, " + std::to_string(divergences) + " divergences, " +
               std::to_string(growths) + " growth events, " + std::to_string(growth_mismatches) +
               " snapshot mismatches across growth, " + std::to_string(rejections) + " rejected updates" + first;
    return v;
}

// ---------------------------------------------------------------------------
// C10

Verdict bench_sanity() {
    BenchConfig cfg;
    cfg.mask_exponent = 16;
    cfg.levels = {0.1, 0.25, 0.5, 0.7, 0.9};
    cfg.ops_per_level = 20'000;
    cfg.seed = 10;
    BenchReport r = run_bench(cfg);
    Verdict v;
    std::ostringstream os;
    os << "mean probe length";
    for (std::size_t i = 0; i < r.levels.size(); ++i) {
        os << (i ? " < " : " ") << r.levels[i].mean_probe_length;
        if (i > 0 && !(r.levels[i].mean_probe_length > r.levels[i - 1].mean_probe_length)) v.pass = false;
    }
    os << " at occupancy 0.1..0.9, capacity " << r.capacity;
    v.pass = v.pass && r.capacity == 65536 && r.levels.size() == 5;
    v.detail = os.str();
    return v;
}

}  // namespace

int main() {
    std::cout << "acceptance suite\n";

    criterion(1, "hash bit-exactness", 1.0, hash_bit_exactness);
    criterion(2, "list-map lemma suite", 30.0, list_map_lemmas);

    auto t0 = Clock::now();
    CorpusStats corpus_stats = run_corpus();
    double corpus_secs = seconds_since(t0);

    {
        Verdict v;
        v.pass = corpus_stats.ops >= 100'000 && corpus_stats.divergences == 0 && corpus_secs < 300.0;
        v.detail = std::to_string(corpus_stats.ops) + " ops over mask exponents {0,1,2,4,6,8,10}, " +
                   std::to_string(corpus_stats.divergences) + " divergences, " +
                   std::to_string(corpus_stats.updates_rejected) + " rejected updates";
        if (!corpus_stats.first_divergence.empty()) v.detail += "; first: " + corpus_stats.first_divergence;
        report(3, "model conformance fuzz", v, corpus_secs);
    }
    {
        std::size_t expected = 0;
        for (const auto& [e, n] : corpus_stats.expected_invariant_checks) expected += n;
        Verdict v;
        v.pass = corpus_stats.invariant_violations == 0 && corpus_stats.divergences == 0 &&
                 corpus_stats.invariant_checks == expected;
        v.detail = std::to_string(corpus_stats.invariant_checks) + "/" + std::to_string(expected) +
                   " checks (stride 1 at exp <= 6, 64 above), " + std::to_string(corpus_stats.invariant_violations) +
                   " violations";
        report(4, "invariant preservation", v, 0.0);
    }
    {
        Verdict v;
        std::ostringstream os;
        std::size_t least = SIZE_MAX;
        for (int e : kCorpusExponents) {
            std::size_t n = corpus_stats.equivalence_checks[e];
            least = std::min(least, n);
            if (n < 1000) v.pass = false;
        }
        v.pass = v.pass && corpus_stats.equivalence_failures == 0 && corpus_stats.divergences == 0;
        os << "min " << least << " states per exponent (need >= 1000), " << corpus_stats.equivalence_failures
           << " failures";
        v.detail = os.str();
        report(5, "equivalence lemmas", v, 0.0);
    }

    t0 = Clock::now();
    SeekAgreementStats seek = run_seek_agreement();
    {
        Verdict v;
        v.pass = seek.arrays >= 10'000 && seek.invalid_arrays == 0 && seek.disagreements == 0 &&
                 seek.present_missing == 0;
        v.detail = std::to_string(seek.arrays) + " arrays, " + std::to_string(seek.keys_checked) + " keys, " +
                   std::to_string(seek.disagreements) + " disagreements, " + std::to_string(seek.present_missing) +
                   " present-but-missing, " + std::to_string(seek.vacant_relabels) + " vacant relabels, " +
                   std::to_string(seek.invalid_arrays) + " invalid arrays";
        report(6, "seek agreement", v, seconds_since(t0));
    }
    {
        Verdict v;
        std::int32_t max_iter = std::max(seek.max_iterations, corpus_stats.max_probe_iterations);
        v.pass = seek.probe_violations == 0 && corpus_stats.probe_violations == 0 && max_iter <= kMaxProbes &&
                 corpus_stats.probe_checks > 0;
        v.detail = "max " + std::to_string(max_iter) + " iterations (bound " + std::to_string(kMaxProbes) + "), " +
                   std::to_string(corpus_stats.undefined_seeks + seek.undefined) + " Undefined results over " +
                   std::to_string(corpus_stats.probe_checks + seek.keys_checked) + " seeks, " +
                   std::to_string(corpus_stats.probe_violations + seek.probe_violations) + " bound violations";
        report(7, "probe bound", v, 0.0);
    }

    criterion(8, "capacity semantics", 0.0, capacity_semantics);
    criterion(9, "growable decorator", 0.0, growable_decorator);
    criterion(10, "bench sanity", 120.0, bench_sanity);

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
    return failures == 0 ? 0 : 1;
}
