#pragma once

// Text formats for traces and map-state dumps. Both are line-oriented ASCII
// with signed decimal 64-bit integers; blank lines are ignored.
//
// Trace:
//   mask <M>
//   U <key> <value> | R <key> | G <key> | C <key>
//
// State dump:
//   mask <M>
//   extra <extraKeys> <zeroValue> <minValue>
//   [size <arraySize>]            optional; derived from the slots if absent
//   slot <index> <key> <value>    one per slot whose key or value is nonzero

#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "longmap/conformance.hpp"
#include "longmap/fixed_long_map.hpp"
#include "longmap/hashing.hpp"
#include "longmap/invariant.hpp"

namespace longmap {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct Trace {
    std::int32_t mask = 0;
    std::vector<TraceOp> ops;
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

inline std::int64_t parse_int(std::string_view field, std::size_t line) {
    std::int64_t v = 0;
    auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || end != field.data() + field.size())
        throw ParseError(line, "expected a signed 64-bit integer, got '" + std::string(field) + "'");
    return v;
}

inline void expect_arity(const std::vector<std::string_view>& f, std::size_t n, std::size_t line) {
    if (f.size() != n)
        throw ParseError(line, "'" + std::string(f[0]) + "' takes " + std::to_string(n - 1) + " argument(s)");
}

/// Reads the `mask <M>` header. With `require_valid` the mask must be
/// 2^N - 1; otherwise any value in [0, 2^30 - 1] is accepted so that the
/// invariant checker can report it.
inline std::int32_t parse_mask_header(const std::vector<std::string_view>& f, std::size_t line,
                                      bool require_valid) {
    if (f.empty() || f[0] != "mask") throw ParseError(line, "expected header 'mask <M>'");
    expect_arity(f, 2, line);
    std::int64_t m = parse_int(f[1], line);
    if (m < 0 || m > mask_for_exponent(kMaxMaskExponent))
        throw ParseError(line, "mask " + std::to_string(m) + " out of range");
    if (require_valid && !valid_mask(static_cast<std::int32_t>(m)))
        throw ParseError(line, "mask " + std::to_string(m) + " is not 2^N - 1");
    return static_cast<std::int32_t>(m);
}

}  // namespace detail

inline Trace read_trace(std::istream& in) {
    Trace t;
    bool have_header = false;
    std::string raw;
    for (std::size_t line = 1; std::getline(in, raw); ++line) {
        auto f = detail::split_fields(raw);
        if (f.empty()) continue;
        if (!have_header) {
            t.mask = detail::parse_mask_header(f, line, true);
            have_header = true;
            continue;
        }
        if (f[0].size() != 1) throw ParseError(line, "unknown op '" + std::string(f[0]) + "'");
        switch (f[0][0]) {
            case 'U':
                detail::expect_arity(f, 3, line);
                t.ops.push_back(TraceOp::update(detail::parse_int(f[1], line), detail::parse_int(f[2], line)));
                break;
            case 'R':
                detail::expect_arity(f, 2, line);
                t.ops.push_back(TraceOp::remove(detail::parse_int(f[1], line)));
                break;
            case 'G':
                detail::expect_arity(f, 2, line);
                t.ops.push_back(TraceOp::get(detail::parse_int(f[1], line)));
                break;
            case 'C':
                detail::expect_arity(f, 2, line);
                t.ops.push_back(TraceOp::contains(detail::parse_int(f[1], line)));
                break;
            default:
                throw ParseError(line, "unknown op '" + std::string(f[0]) + "'");
        }
    }
    if (!have_header) throw ParseError(1, "missing 'mask <M>' header");
    return t;
}

inline void write_trace(std::ostream& out, std::int32_t mask, std::span<const TraceOp> ops) {
    out << "mask " << mask << '\n';
    for (const TraceOp& op : ops) out << to_string(op) << '\n';
}

/// Parses a state dump into a raw state. The result is not validated beyond
/// its shape; run check() on it.
inline MapState read_state(std::istream& in) {
    MapState s;
    bool have_header = false;
    bool have_extra = false;
    bool have_size = false;
    std::vector<bool> seen_slot;
    std::string raw;
    std::size_t line = 1;
    for (; std::getline(in, raw); ++line) {
        auto f = detail::split_fields(raw);
        if (f.empty()) continue;
        if (!have_header) {
            s.mask = detail::parse_mask_header(f, line, false);
            s.keys.assign(static_cast<std::size_t>(s.mask) + 1, 0);
            s.values.assign(static_cast<std::size_t>(s.mask) + 1, 0);
            seen_slot.assign(s.keys.size(), false);
            have_header = true;
        } else if (f[0] == "extra") {
            detail::expect_arity(f, 4, line);
            if (have_extra) throw ParseError(line, "duplicate 'extra' line");
            std::int64_t e = detail::parse_int(f[1], line);
            if (e < INT32_MIN || e > INT32_MAX) throw ParseError(line, "extraKeys out of 32-bit range");
            s.extra_keys = static_cast<std::int32_t>(e);
            s.zero_value = detail::parse_int(f[2], line);
            s.min_value = detail::parse_int(f[3], line);
            have_extra = true;
        } else if (f[0] == "size") {
            detail::expect_arity(f, 2, line);
            if (have_size) throw ParseError(line, "duplicate 'size' line");
            std::int64_t n = detail::parse_int(f[1], line);
            if (n < INT32_MIN || n > INT32_MAX) throw ParseError(line, "size out of 32-bit range");
            s.array_size = static_cast<std::int32_t>(n);
            have_size = true;
        } else if (f[0] == "slot") {
            detail::expect_arity(f, 4, line);
            std::int64_t i = detail::parse_int(f[1], line);
            if (i < 0 || i > s.mask) throw ParseError(line, "slot index " + std::to_string(i) + " out of range");
            auto idx = static_cast<std::size_t>(i);
            if (seen_slot[idx]) throw ParseError(line, "slot " + std::to_string(i) + " listed twice");
            seen_slot[idx] = true;
            s.keys[idx] = detail::parse_int(f[2], line);
            s.values[idx] = detail::parse_int(f[3], line);
        } else {
            throw ParseError(line, "unknown directive '" + std::string(f[0]) + "'");
        }
    }
    if (!have_header) throw ParseError(1, "missing 'mask <M>' header");
    if (!have_extra) throw ParseError(line, "missing 'extra <E> <Z> <M>' line");
    if (!have_size) s.array_size = count_valid_keys(s.keys, 0, s.keys.size());
    return s;
}

inline void write_state(std::ostream& out, const MapState& s) {
    out << "mask " << s.mask << '\n';
    out << "extra " << s.extra_keys << ' ' << s.zero_value << ' ' << s.min_value << '\n';
    out << "size " << s.array_size << '\n';
    for (std::size_t i = 0; i < s.keys.size(); ++i) {
        std::int64_t v = i < s.values.size() ? s.values[i] : 0;
        if (s.keys[i] != 0 || v != 0) out << "slot " << i << ' ' << s.keys[i] << ' ' << v << '\n';
    }
}

}  // namespace longmap
