// primegen: generate, count, verify and benchmark prime streams.
//
// Exit codes: 0 ok, 1 usage, 2 resource limit (cap, overflow, memory,
// instrumentation disabled), 3 verification failure.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <mutex>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <eulersieve/bench.hpp>
#include <eulersieve/eulersieve.hpp>
#include <eulersieve/oracle.hpp>

namespace es = eulersieve;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_resource = 2;
constexpr int exit_verify = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::vector<std::string> algos;
  std::optional<std::uint64_t> n;
  std::optional<std::uint64_t> bound;
  int wheel = 0;
  std::string format = "csv";
  int repeats = 5;
  std::optional<double> timeout;
  bool parallel = false;
  bool minutes_format = false;
  std::string exponents = "16..18";
  std::size_t cap = es::default_naive_cap;
  std::string environment;
};

es::SieveVariant parse_one(const std::string& name, int wheel) {
  auto v = es::parse_variant(name, wheel);
  if (!v)
    throw UsageError("unknown variant: " + name);
  return *v;
}

// Splits repeated and comma-separated --algo values.
std::vector<es::SieveVariant> parse_list(const std::vector<std::string>& names, int wheel) {
  std::vector<es::SieveVariant> out;
  for (const auto& item : names) {
    std::stringstream ss(item);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty())
        out.push_back(parse_one(tok, wheel));
  }
  return out;
}

es::SieveVariant single_variant(const Options& o) {
  if (o.algos.empty())
    return es::SieveVariant{es::Algorithm::ES, o.wheel};
  auto vs = parse_list(o.algos, o.wheel);
  if (vs.size() != 1)
    throw UsageError("exactly one --algo expected");
  return vs.front();
}

std::vector<std::uint64_t> parse_exponents(const std::string& text) {
  std::vector<std::uint64_t> out;
  auto dots = text.find("..");
  auto value = [](const std::string& s) {
    std::size_t used = 0;
    unsigned long v = std::stoul(s, &used);
    if (used != s.size() || v >= 40)
      throw UsageError("bad exponent: " + s);
    return static_cast<std::uint64_t>(v);
  };
  try {
    if (dots != std::string::npos) {
      auto lo = value(text.substr(0, dots));
      auto hi = value(text.substr(dots + 2));
      if (lo > hi)
        throw UsageError("empty exponent range");
      for (auto e = lo; e <= hi; ++e)
        out.push_back(e);
    } else {
      std::stringstream ss(text);
      std::string tok;
      while (std::getline(ss, tok, ','))
        out.push_back(value(tok));
    }
  } catch (const std::logic_error&) {
    throw UsageError("bad --exponents: " + text);
  }
  if (out.empty())
    throw UsageError("no exponents given");
  return out;
}

void require_n(const Options& o) {
  if (!o.n || *o.n < 1)
    throw UsageError("--n >= 1 required");
}

int cmd_nth(const Options& o) {
  require_n(o);
  auto v = single_variant(o);
  es::OrderedStream s = es::make_sieve(v, nullptr, o.cap);
  es::natural p = 0;
  for (std::uint64_t i = 0; i < *o.n; ++i)
    p = s.next();
  std::cout << p << '\n';
  return exit_ok;
}

int cmd_list(const Options& o) {
  if (!o.n && !o.bound)
    throw UsageError("--n or --bound required");
  auto v = single_variant(o);
  es::OrderedStream s = es::make_sieve(v, nullptr, o.cap);
  std::string out;
  std::uint64_t count = 0;
  for (;;) {
    if (o.n && count == *o.n)
      break;
    if (o.bound && s.peek() > *o.bound)
      break;
    out += std::to_string(s.next());
    out += '\n';
    ++count;
  }
  std::cout << out;
  return exit_ok;
}

int cmd_count(const Options& o) {
  if (!o.bound)
    throw UsageError("--bound required");
  auto v = single_variant(o);
  es::OrderedStream s = es::make_sieve(v, nullptr, o.cap);
  std::uint64_t count = 0;
  while (s.next() <= *o.bound)
    ++count;
  std::cout << count << '\n';
  return exit_ok;
}

bool check_prefix(es::SieveVariant v, std::uint64_t n, const std::vector<es::natural>& ref,
                  std::size_t cap) {
  es::OrderedStream s = es::make_sieve(v, nullptr, cap);
  for (std::uint64_t i = 0; i < n; ++i)
    if (s.next() != ref[i])
      return false;
  return true;
}

int cmd_verify(const Options& o, bool algo_given) {
  std::vector<es::SieveVariant> variants;
  if (algo_given) {
    variants = parse_list(o.algos, o.wheel);
    if (variants.empty())
      throw UsageError("empty variant list");
  } else {
    variants = es::full_scale_variants();
    for (auto v : es::capped_variants())
      variants.push_back(v);
  }
  std::uint64_t n = o.n.value_or(100000);
  std::uint64_t capped_n = std::min<std::uint64_t>(n, 2000);
  auto ref = es::oracle::first_primes(static_cast<std::size_t>(n));
  bool all = true;
  for (auto v : variants) {
    std::uint64_t m = es::is_capped(v.algo) ? capped_n : n;
    bool ok = check_prefix(v, m, ref, o.cap);
    all = all && ok;
    std::cout << (ok ? "PASS " : "FAIL ") << es::variant_name(v) << " first " << m
              << " primes match the array sieve\n";
  }
  return all ? exit_ok : exit_verify;
}

int cmd_bench(const Options& o) {
  std::vector<es::SieveVariant> variants =
      o.algos.empty() ? es::bench::table_order() : parse_list(o.algos, o.wheel);
  if (variants.empty())
    throw UsageError("empty variant list");
  if (o.format != "csv" && o.format != "md" && o.format != "json")
    throw UsageError("--format must be csv, md or json");
  std::vector<std::uint64_t> ns;
  if (o.n)
    ns.push_back(*o.n);
  else
    for (auto e : parse_exponents(o.exponents))
      ns.push_back(std::uint64_t{1} << e);

  es::bench::BenchConfig cfg;
  cfg.repeats = o.repeats;
  cfg.timeout_seconds = o.timeout;
  cfg.cap = o.cap;

  es::bench::BenchReport report;
  report.environment = o.environment;
  std::vector<std::pair<es::SieveVariant, std::uint64_t>> cells;
  for (auto n : ns)
    for (auto v : variants)
      cells.emplace_back(v, n);
  report.rows.resize(cells.size());

  auto run_cell = [&](std::size_t i) {
    auto [v, n] = cells[i];
    try {
      report.rows[i] = es::bench::bench_cell(v, n, cfg);
    } catch (const std::exception&) {
      es::bench::RunStats r;  // capped or failed cells print as "-"
      r.variant = es::variant_name(v);
      r.n = n;
      report.rows[i] = r;
    }
  };
  if (o.parallel) {
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < cells.size(); ++i)
      threads.emplace_back(run_cell, i);
    for (auto& t : threads)
      t.join();
  } else {
    for (std::size_t i = 0; i < cells.size(); ++i)
      run_cell(i);
  }

  if (o.format == "csv")
    std::cout << report.csv();
  else if (o.format == "md")
    std::cout << report.markdown(o.minutes_format);
  else
    std::cout << report.json_lines();
  return exit_ok;
}

int cmd_stats(const Options& o) {
  if (!es::instrumentation_enabled) {
    std::cerr << "primegen: built without instrumentation\n";
    return exit_resource;
  }
  if (!o.bound)
    throw UsageError("--bound required");
  auto v = single_variant(o);
  auto row = es::bench::stats_upto(v, *o.bound, o.cap);
  std::cout << es::bench::BenchReport::json(row) << '\n';
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prime stream generators: Euler and Eratosthenes sieves over lazy streams"};
  app.require_subcommand(1, 1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool many_algos) {
    sub->add_option("--algo,-a", o.algos,
                    many_algos ? "Variants (repeat or comma-separate)" : "Variant name, e.g. ES, W4, EPQ");
    sub->add_option("--wheel", o.wheel, "Mount the w4 wheel (0 or 4)")->check(CLI::IsMember({0, 4}));
    sub->add_option("--cap", o.cap, "Prime cap for TURNER and NAIVE_EULER");
  };

  auto* nth = app.add_subcommand("nth", "Print the n-th prime");
  add_common(nth, false);
  nth->add_option("--n,-n", o.n, "Index (1-based)")->required();

  auto* list = app.add_subcommand("list", "Print the first n primes or all primes <= bound");
  add_common(list, false);
  list->add_option("--n,-n", o.n, "How many primes");
  list->add_option("--bound,-b", o.bound, "Upper bound");

  auto* count = app.add_subcommand("count", "Count the primes <= bound");
  add_common(count, false);
  count->add_option("--bound,-b", o.bound, "Upper bound")->required();

  auto* verify = app.add_subcommand("verify", "Check variants against the array sieve");
  add_common(verify, true);
  verify->add_option("--n,-n", o.n, "Primes to compare (default 100000; capped variants 2000)");

  auto* bench = app.add_subcommand("bench", "Time variants to p_n");
  add_common(bench, true);
  bench->add_option("--n,-n", o.n, "Single n instead of --exponents");
  bench->add_option("--exponents", o.exponents, "n = 2^e for e in a..b or a,b,c");
  bench->add_option("--format", o.format, "csv, md or json");
  bench->add_option("--repeats", o.repeats, "Timed runs per cell (median reported)")
      ->check(CLI::PositiveNumber);
  bench->add_option("--timeout", o.timeout, "Seconds per run before the cell is marked -");
  bench->add_flag("--parallel", o.parallel, "One thread per cell");
  bench->add_flag("--paper-format", o.minutes_format, "Markdown times as m'ss^t");
  bench->add_option("--environment", o.environment, "Machine description for the table header");

  auto* stats = app.add_subcommand("stats", "Instrumentation counters up to a bound (JSON)");
  add_common(stats, false);
  stats->add_option("--bound,-b", o.bound, "Upper bound")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (*nth)
      return cmd_nth(o);
    if (*list)
      return cmd_list(o);
    if (*count)
      return cmd_count(o);
    if (*verify)
      return cmd_verify(o, verify->count("--algo") > 0);
    if (*bench)
      return cmd_bench(o);
    if (*stats)
      return cmd_stats(o);
  } catch (const UsageError& e) {
    std::cerr << "primegen: " << e.what() << '\n';
    return exit_usage;
  } catch (const es::cap_exceeded_error& e) {
    std::cerr << "primegen: " << e.what() << '\n';
    return exit_resource;
  } catch (const es::overflow_error& e) {
    std::cerr << "primegen: " << e.what() << '\n';
    return exit_resource;
  } catch (const std::bad_alloc&) {
    std::cerr << "primegen: out of memory\n";
    return exit_resource;
  }
  return exit_usage;
}
