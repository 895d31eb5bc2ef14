// Command-line harness: differential fuzzing, trace replay, state checking
// and occupancy benchmarks for the fixed-capacity long map.
//
// Exit codes: 0 success, 1 contract/invariant violation, 2 usage or parse error.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "longmap.hpp"

namespace {

using namespace longmap;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct FuzzArgs {
    std::uint64_t seed = 1;
    std::size_t ops = 10'000;
    int mask_exp = 8;
    double sentinel_weight = 0.05;
    std::size_t pool = 0;
    bool growable = false;
    double growth_threshold = 0.5;
    std::size_t invariant_stride = 0;
    std::string trace_out;
    std::string repro_out;
    std::string dump_state;
};

struct ReplayArgs {
    std::string path;
    bool growable = false;
    double growth_threshold = 0.5;
    std::string results_out;
};

struct BenchArgs {
    int mask_exp = 16;
    std::vector<double> levels{0.1, 0.25, 0.5, 0.7, 0.9};
    std::size_t ops_per_level = 20'000;
    bool growable = false;
    double growth_threshold = 0.5;
    std::uint64_t seed = 1;
    std::string out;
};

std::string hex(std::uint64_t v) {
    std::ostringstream os;
    os << "0x" << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

void print_result(std::ostream& os, const TraceResult& r) {
    os << "ops_executed " << r.ops_executed << '\n'
       << "updates_rejected " << r.updates_rejected << '\n'
       << "invariant_checks " << r.invariant_checks << '\n'
       << "equivalence_checks " << r.equivalence_checks << '\n'
       << "undefined_seeks " << r.undefined_seeks << '\n'
       << "max_probe_iterations " << r.max_probe_iterations << '\n'
       << "growth_events " << r.growth_events << '\n'
       << "final_size " << r.final_size << '\n'
       << "results_digest " << hex(r.results_digest) << '\n';
}

void print_divergence(std::ostream& os, const Divergence& d) {
    os << "divergence at op " << d.op_index << " (" << to_string(d.op) << "): " << d.description << '\n';
}

template <class MakeMap>
TraceResult run_checked_trace(std::span<const TraceOp> ops, MakeMap make, std::size_t stride, bool keep) {
    CheckOptions opts;
    opts.invariant_stride = stride;
    return run_trace(ops, make, opts, keep);
}

GrowthPolicy growth_policy(std::int32_t mask, double threshold) {
    return GrowthPolicy{mask_exponent(mask), kMaxMaskExponent, threshold};
}

bool write_file(const std::string& path, const auto& writer) {
    std::ofstream out(path);
    if (!out) {
        std::cerr << "error: cannot write " << path << '\n';
        return false;
    }
    writer(out);
    return static_cast<bool>(out);
}

int cmd_fuzz(const FuzzArgs& a) {
    FuzzConfig cfg{a.seed, a.ops, a.mask_exp, a.pool, a.sentinel_weight};
    std::vector<TraceOp> ops;
    try {
        ops = generate_trace(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    if (a.growable && !(a.growth_threshold > 0.0 && a.growth_threshold <= 1.0)) {
        std::cerr << "error: growth threshold must be in (0, 1]\n";
        return kExitUsage;
    }
    std::int32_t mask = mask_for_exponent(a.mask_exp);

    std::cout << "fuzz seed " << a.seed << " ops " << a.ops << " mask_exp " << a.mask_exp << " mode "
              << (a.growable ? "growable" : "fixed") << '\n';
    if (!a.trace_out.empty() && !write_file(a.trace_out, [&](std::ostream& o) { write_trace(o, mask, ops); }))
        return kExitUsage;

    TraceResult r;
    MapState final_state;
    if (a.growable) {
        auto make = [&] { return GrowableLongMap(growth_policy(mask, a.growth_threshold)); };
        r = run_checked_trace(ops, make, a.invariant_stride, false);
        if (!a.dump_state.empty()) {
            GrowableLongMap m = make();
            for (const TraceOp& op : ops) {
                if (op.kind == OpKind::Update) m.update(op.key, op.value);
                else if (op.kind == OpKind::Remove) m.remove(op.key);
            }
            final_state = m.state();
        }
    } else {
        auto make = [mask] { return FixedLongMap(mask); };
        r = run_checked_trace(ops, make, a.invariant_stride, false);
        if (!a.dump_state.empty()) {
            FixedLongMap m = make();
            for (const TraceOp& op : ops) {
                if (op.kind == OpKind::Update) m.update(op.key, op.value);
                else if (op.kind == OpKind::Remove) m.remove(op.key);
            }
            final_state = m.state();
        }
    }
    print_result(std::cout, r);
    if (!a.dump_state.empty() && !write_file(a.dump_state, [&](std::ostream& o) { write_state(o, final_state); }))
        return kExitUsage;

    if (r.divergence) {
        print_divergence(std::cout, *r.divergence);
        std::string path = a.repro_out.empty() ? "fuzz-repro-seed" + std::to_string(a.seed) + ".trace" : a.repro_out;
        if (write_file(path, [&](std::ostream& o) { write_trace(o, mask, r.minimized); }))
            std::cout << "minimized trace (" << r.minimized.size() << " ops) written to " << path << '\n';
        std::cout << "result DIVERGENCE\n";
        return kExitViolation;
    }
    std::cout << "result OK\n";
    return kExitOk;
}

int cmd_replay(const ReplayArgs& a) {
    std::ifstream in(a.path);
    if (!in) {
        std::cerr << "error: cannot open " << a.path << '\n';
        return kExitUsage;
    }
    Trace t;
    try {
        t = read_trace(in);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << a.path << ": " << e.what() << '\n';
        return kExitUsage;
    }
    if (a.growable && !(a.growth_threshold > 0.0 && a.growth_threshold <= 1.0)) {
        std::cerr << "error: growth threshold must be in (0, 1]\n";
        return kExitUsage;
    }

    bool keep = !a.results_out.empty();
    TraceResult r = a.growable
                        ? run_checked_trace(
                              t.ops, [&] { return GrowableLongMap(growth_policy(t.mask, a.growth_threshold)); }, 0, keep)
                        : run_checked_trace(t.ops, [&] { return FixedLongMap(t.mask); }, 0, keep);

    std::cout << "replay " << a.path << " mask " << t.mask << " ops " << t.ops.size() << '\n';
    print_result(std::cout, r);
    if (keep && !write_file(a.results_out, [&](std::ostream& o) {
            for (std::int64_t v : r.results) o << v << '\n';
        }))
        return kExitUsage;
    if (r.divergence) {
        print_divergence(std::cout, *r.divergence);
        std::cout << "result VIOLATION\n";
        return kExitViolation;
    }
    std::cout << "result OK\n";
    return kExitOk;
}

int cmd_check(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open " << path << '\n';
        return kExitUsage;
    }
    MapState s;
    try {
        s = read_state(in);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << path << ": " << e.what() << '\n';
        return kExitUsage;
    }
    InvariantReport inv = check(s);
    EquivalenceReport eq = check_equivalence(s);
    auto yn = [](bool b) { return b ? "true" : "false"; };
    std::cout << "simple_valid " << yn(inv.simple_valid) << '\n'
              << "count_matches_size " << yn(inv.count_matches_size) << '\n'
              << "all_keys_seekable " << yn(inv.all_keys_seekable) << '\n'
              << "no_duplicates " << yn(inv.no_duplicates) << '\n'
              << "equivalence " << yn(eq.holds) << '\n';
    if (inv.first_violation) std::cout << "first_violation " << *inv.first_violation << '\n';
    if (eq.witness) std::cout << "equivalence_witness " << *eq.witness << '\n';
    bool ok = inv.valid() && eq.holds;
    std::cout << "valid " << yn(ok) << '\n';
    return ok ? kExitOk : kExitViolation;
}

nlohmann::json to_json(const LatencySummary& s) {
    return {{"count", s.count}, {"median_ns", s.median_ns}, {"p99_ns", s.p99_ns}};
}

nlohmann::json to_json(const BenchReport& r) {
    nlohmann::json levels = nlohmann::json::array();
    for (const BenchLevel& l : r.levels) {
        nlohmann::json hist = nlohmann::json::array();
        for (const auto& [len, count] : l.probe_histogram) hist.push_back({{"probe_length", len}, {"count", count}});
        levels.push_back({{"occupancy", l.requested_occupancy},
                          {"achieved_occupancy", l.achieved_occupancy},
                          {"capacity", l.capacity},
                          {"stored_keys", l.stored_keys},
                          {"insert_failures", l.insert_failures},
                          {"get", to_json(l.get)},
                          {"update", to_json(l.update)},
                          {"remove", to_json(l.remove)},
                          {"mean_probe_length", l.mean_probe_length},
                          {"mean_probe_length_hit", l.mean_probe_length_hit},
                          {"mean_probe_length_miss", l.mean_probe_length_miss},
                          {"probe_histogram", hist}});
    }
    return {{"capacity", r.capacity}, {"mode", r.mode}, {"seed", r.seed}, {"levels", levels}};
}

int cmd_bench(const BenchArgs& a) {
    BenchConfig cfg;
    cfg.mask_exponent = a.mask_exp;
    cfg.levels = a.levels;
    cfg.ops_per_level = a.ops_per_level;
    cfg.growable = a.growable;
    cfg.growth_threshold = a.growth_threshold;
    cfg.seed = a.seed;
    BenchReport report;
    try {
        report = run_bench(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    print_table(std::cout, report);
    if (!a.out.empty() &&
        !write_file(a.out, [&](std::ostream& o) { o << to_json(report).dump(2) << '\n'; }))
        return kExitUsage;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fixed-capacity open-addressing long map: fuzzing, replay, checking, benchmarks"};
    app.require_subcommand(1);

    FuzzArgs fuzz;
    auto* fuzz_cmd = app.add_subcommand("fuzz", "Differential fuzzing against the ordered list-map model");
    fuzz_cmd->add_option("--seed", fuzz.seed, "RNG seed");
    fuzz_cmd->add_option("--ops", fuzz.ops, "Number of operations")->check(CLI::PositiveNumber);
    fuzz_cmd->add_option("--mask-exp", fuzz.mask_exp, "Capacity exponent (mask = 2^N - 1)")
        ->check(CLI::Range(0, kMaxMaskExponent));
    fuzz_cmd->add_option("--sentinel-weight", fuzz.sentinel_weight, "Probability of drawing 0, and of drawing MIN")
        ->check(CLI::Range(0.0, 0.5));
    fuzz_cmd->add_option("--pool", fuzz.pool, "Key pool size (default 2 * capacity)");
    fuzz_cmd->add_flag("--growable", fuzz.growable, "Fuzz the growable decorator");
    fuzz_cmd->add_option("--growth-threshold", fuzz.growth_threshold, "Growable occupancy threshold");
    fuzz_cmd->add_option("--invariant-stride", fuzz.invariant_stride, "Ops between invariant checks (0 = default)");
    fuzz_cmd->add_option("--trace-out", fuzz.trace_out, "Write the generated trace here");
    fuzz_cmd->add_option("--repro-out", fuzz.repro_out, "Where to write a minimized failing trace");
    fuzz_cmd->add_option("--dump-state", fuzz.dump_state, "Write the final map state here");

    ReplayArgs replay;
    auto* replay_cmd = app.add_subcommand("replay", "Replay a trace file with full contract checking");
    replay_cmd->add_option("trace", replay.path, "Trace file")->required();
    replay_cmd->add_flag("--growable", replay.growable, "Replay on the growable decorator");
    replay_cmd->add_option("--growth-threshold", replay.growth_threshold, "Growable occupancy threshold");
    replay_cmd->add_option("--results-out", replay.results_out, "Write per-op results, one per line");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Latency and probe-length benchmark per occupancy level");
    bench_cmd->add_option("--mask-exp", bench.mask_exp, "Capacity exponent")->check(CLI::Range(0, kMaxMaskExponent));
    bench_cmd->add_option("--levels", bench.levels, "Comma-separated occupancy levels")->delimiter(',');
    bench_cmd->add_option("--ops-per-level", bench.ops_per_level, "Timed operations per level")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_flag("--growable", bench.growable, "Benchmark the growable decorator");
    bench_cmd->add_option("--growth-threshold", bench.growth_threshold, "Growable occupancy threshold");
    bench_cmd->add_option("--seed", bench.seed, "RNG seed");
    bench_cmd->add_option("--out", bench.out, "Write a JSON report here");

    std::string state_path;
    auto* check_cmd = app.add_subcommand("check", "Check the invariant of a serialized map state");
    check_cmd->add_option("state", state_path, "State dump file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (*fuzz_cmd) return cmd_fuzz(fuzz);
    if (*replay_cmd) return cmd_replay(replay);
    if (*bench_cmd) return cmd_bench(bench);
    return cmd_check(state_path);
}
