#pragma once

// Timing and counter runs over the variant registry, and the tables built
// from them.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "core.hpp"
#include "variants.hpp"

namespace eulersieve::bench {

struct RunStats {
  std::string variant;
  std::uint64_t n = 0;
  natural p_n = 0;
  std::optional<std::uint64_t> wall_ns;  // nullopt: timed out
  std::uint64_t composites = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t pulls = 0;
  std::int64_t peak_buffer = 0;
};

/// Streaming variants in the column order of the stream-program tables.
inline std::vector<SieveVariant> table_order() {
  return {{Algorithm::TD, 0}, {Algorithm::BS, 0}, {Algorithm::BS, 4},
          {Algorithm::H, 0},  {Algorithm::W, 0},  {Algorithm::ES, 0},
          {Algorithm::H, 4},  {Algorithm::W, 4},  {Algorithm::ES, 4}};
}

/// Priority-queue variants.
inline std::vector<SieveVariant> pq_order() {
  return {{Algorithm::ONEILL, 0}, {Algorithm::ONEILL, 4}, {Algorithm::EPQ, 0},
          {Algorithm::EPQ, 4},    {Algorithm::WPQ, 0},    {Algorithm::WPQ, 4}};
}

using clock = std::chrono::steady_clock;

/// Pulls p_1..p_n. Returns p_n and the elapsed time, or nullopt when the
/// deadline passes (checked every 1024 primes).
inline std::optional<std::pair<natural, std::uint64_t>> timed_nth(
    SieveVariant v, std::uint64_t n, std::optional<clock::duration> timeout,
    Instrument* inst = nullptr, std::size_t cap = default_naive_cap) {
  auto start = clock::now();
  natural last = 0;
  {
    OrderedStream s = make_sieve(v, inst, cap);
    for (std::uint64_t i = 0; i < n; ++i) {
      last = s.next();
      if (timeout && (i & 1023) == 1023 && clock::now() - start > *timeout)
        return std::nullopt;
    }
  }
  auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - start).count();
  return std::make_pair(last, static_cast<std::uint64_t>(ns));
}

struct BenchConfig {
  int repeats = 5;
  std::optional<double> timeout_seconds;
  bool counters = true;
  std::size_t cap = default_naive_cap;
};

inline std::optional<clock::duration> to_duration(std::optional<double> seconds) {
  if (!seconds)
    return std::nullopt;
  return std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(*seconds));
}

/// One warm-up and `repeats` timed runs (median reported), then one
/// instrumented run for the counters. A timeout in any run marks the cell.
inline RunStats bench_cell(SieveVariant v, std::uint64_t n, const BenchConfig& cfg) {
  RunStats row;
  row.variant = variant_name(v);
  row.n = n;
  auto timeout = to_duration(cfg.timeout_seconds);
  auto warm = timed_nth(v, n, timeout, nullptr, cfg.cap);
  if (!warm)
    return row;
  row.p_n = warm->first;
  std::vector<std::uint64_t> times;
  for (int r = 0; r < std::max(1, cfg.repeats); ++r) {
    auto t = timed_nth(v, n, timeout, nullptr, cfg.cap);
    if (!t)
      return row;
    times.push_back(t->second);
  }
  std::sort(times.begin(), times.end());
  row.wall_ns = times[times.size() / 2];
  if (cfg.counters && instrumentation_enabled) {
    Instrument inst;
    if (timed_nth(v, n, timeout, &inst, cfg.cap)) {
      row.composites = inst.composites;
      row.comparisons = inst.comparisons;
      row.pulls = inst.pulls;
      row.peak_buffer = inst.peak_buffered;
    }
  }
  return row;
}

/// Counters for generating every prime <= bound. Only composites <= bound
/// are counted, so Euler variants report each composite once.
inline RunStats stats_upto(SieveVariant v, natural bound, std::size_t cap = default_naive_cap) {
  RunStats row;
  row.variant = variant_name(v);
  Instrument inst;
  std::uint64_t in_range = 0;
  inst.on_composite = [&](natural c) {
    if (c <= bound)
      ++in_range;
  };
  auto start = clock::now();
  {
    OrderedStream s = make_sieve(v, &inst, cap);
    for (natural p = s.next(); p <= bound; p = s.next()) {
      ++row.n;
      row.p_n = p;
    }
  }
  row.wall_ns = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - start).count());
  row.composites = in_range;
  row.comparisons = inst.comparisons;
  row.pulls = inst.pulls;
  row.peak_buffer = inst.peak_buffered;
  return row;
}

// ---------------------------------------------------------------------------
// Formatting

/// Minutes, seconds and tenths as m'ss^t.
inline std::string minutes_time(std::uint64_t ns) {
  std::uint64_t tenths = (ns + 50'000'000) / 100'000'000;
  std::uint64_t minutes = tenths / 600;
  std::uint64_t seconds = (tenths / 10) % 60;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%llu'%02llu^%llu", static_cast<unsigned long long>(minutes),
                static_cast<unsigned long long>(seconds),
                static_cast<unsigned long long>(tenths % 10));
  return buf;
}

inline std::string millis(std::uint64_t ns) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.1f", static_cast<double>(ns) / 1e6);
  return buf;
}

inline std::string time_cell(const RunStats& r, bool minutes_format) {
  if (!r.wall_ns)
    return "-";
  return minutes_format ? minutes_time(*r.wall_ns) : millis(*r.wall_ns);
}

struct BenchReport {
  std::vector<RunStats> rows;
  std::string environment;

  static constexpr const char* csv_header =
      "variant,n,p_n,wall_ns,composites,comparisons,pulls,peak_buffer";

  std::string csv() const {
    std::ostringstream out;
    out << csv_header << '\n';
    for (const auto& r : rows) {
      out << r.variant << ',' << r.n << ',';
      if (r.wall_ns)
        out << r.p_n << ',' << *r.wall_ns;
      else
        out << "-,-";
      out << ',' << r.composites << ',' << r.comparisons << ',' << r.pulls << ','
          << r.peak_buffer << '\n';
    }
    return out.str();
  }

  /// One line per n, one column per variant, in first-appearance order.
  std::string markdown(bool minutes_format) const {
    std::vector<std::string> variants;
    std::vector<std::uint64_t> ns;
    for (const auto& r : rows) {
      if (std::find(variants.begin(), variants.end(), r.variant) == variants.end())
        variants.push_back(r.variant);
      if (std::find(ns.begin(), ns.end(), r.n) == ns.end())
        ns.push_back(r.n);
    }
    std::ostringstream out;
    if (!environment.empty())
      out << "Environment: " << environment << "\n\n";
    out << "| n |";
    for (const auto& v : variants)
      out << ' ' << v << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < variants.size(); ++i)
      out << "---|";
    out << '\n';
    for (std::uint64_t n : ns) {
      out << "| " << n_label(n) << " |";
      for (const auto& v : variants) {
        auto it = std::find_if(rows.begin(), rows.end(),
                               [&](const RunStats& r) { return r.n == n && r.variant == v; });
        out << ' ' << (it == rows.end() ? std::string("-") : time_cell(*it, minutes_format))
            << " |";
      }
      out << '\n';
    }
    return out.str();
  }

  std::string json_lines() const {
    std::ostringstream out;
    for (const auto& r : rows)
      out << json(r) << '\n';
    return out.str();
  }

  static std::string json(const RunStats& r) {
    std::ostringstream out;
    out << "{\"variant\":\"" << r.variant << "\",\"n\":" << r.n << ",\"p_n\":";
    if (r.wall_ns)
      out << r.p_n << ",\"wall_ns\":" << *r.wall_ns;
    else
      out << "null,\"wall_ns\":null";
    out << ",\"composites\":" << r.composites << ",\"comparisons\":" << r.comparisons
        << ",\"pulls\":" << r.pulls << ",\"peak_buffer\":" << r.peak_buffer << '}';
    return out.str();
  }

private:
  static std::string n_label(std::uint64_t n) {
    if (n && (n & (n - 1)) == 0) {
      int e = 0;
      while ((std::uint64_t{1} << e) != n)
        ++e;
      return "2^" + std::to_string(e);
    }
    return std::to_string(n);
  }
};

}  // namespace eulersieve::bench
