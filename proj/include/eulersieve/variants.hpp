#pragma once

// Name-based construction of every prime generator.

#include <algorithm>
#include <array>
#include <cctype>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core.hpp"
#include "pq.hpp"
#include "sieves.hpp"
#include "streams.hpp"

namespace eulersieve {

enum class Algorithm { TD, TURNER, NAIVE_EULER, BS, H, NAIVE_W, W, ES, ONEILL, EPQ, WPQ };

struct SieveVariant {
  Algorithm algo = Algorithm::ES;
  int wheel = 0;  // 0, or 4 for the w4-mounted form

  friend bool operator==(const SieveVariant&, const SieveVariant&) = default;
};

inline bool supports_w4(Algorithm a) {
  switch (a) {
    case Algorithm::BS:
    case Algorithm::H:
    case Algorithm::W:
    case Algorithm::ES:
    case Algorithm::ONEILL:
    case Algorithm::EPQ:
    case Algorithm::WPQ:
      return true;
    default:
      return false;
  }
}

inline bool is_capped(Algorithm a) { return a == Algorithm::TURNER || a == Algorithm::NAIVE_EULER; }

/// True for the variants that generate every composite exactly once.
inline bool is_euler(Algorithm a) {
  switch (a) {
    case Algorithm::H:
    case Algorithm::NAIVE_W:
    case Algorithm::W:
    case Algorithm::ES:
    case Algorithm::EPQ:
    case Algorithm::WPQ:
      return true;
    default:
      return false;
  }
}

inline std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::TD: return "TD";
    case Algorithm::TURNER: return "TURNER";
    case Algorithm::NAIVE_EULER: return "NAIVE_EULER";
    case Algorithm::BS: return "BS";
    case Algorithm::H: return "H";
    case Algorithm::NAIVE_W: return "NAIVE_W";
    case Algorithm::W: return "W";
    case Algorithm::ES: return "ES";
    case Algorithm::ONEILL: return "ON";
    case Algorithm::EPQ: return "EPQ";
    case Algorithm::WPQ: return "WPQ";
  }
  return "?";
}

inline std::string variant_name(SieveVariant v) {
  std::string s(algorithm_name(v.algo));
  if (v.wheel == 4)
    s += '4';
  return s;
}

inline constexpr std::array<Algorithm, 11> all_algorithms{
    Algorithm::TD, Algorithm::TURNER, Algorithm::NAIVE_EULER, Algorithm::BS,
    Algorithm::H,  Algorithm::NAIVE_W, Algorithm::W,          Algorithm::ES,
    Algorithm::ONEILL, Algorithm::EPQ, Algorithm::WPQ};

/// Parses "ES", "es4", "O'N4", "oneill", ... An explicit `wheel` of 4 mounts
/// the wheel on a name without the suffix.
inline std::optional<SieveVariant> parse_variant(std::string_view name, int wheel = 0) {
  std::string s;
  for (char c : name) {
    if (c == '\'' || c == '-')
      continue;
    s += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  if (s.empty())
    return std::nullopt;
  int w = wheel;
  auto match = [&](std::string_view base) -> bool {
    if (s == base)
      return true;
    if (s.size() == base.size() + 1 && s.back() == '4' && s.compare(0, base.size(), base) == 0) {
      w = 4;
      return true;
    }
    return false;
  };
  std::optional<Algorithm> algo;
  for (Algorithm a : all_algorithms)
    if (match(algorithm_name(a)))
      algo = a;
  if (!algo) {
    if (match("ONEILL"))
      algo = Algorithm::ONEILL;
    else if (match("NAIVEEULER"))
      algo = Algorithm::NAIVE_EULER;
    else if (match("NAIVEW"))
      algo = Algorithm::NAIVE_W;
  }
  if (!algo || (w != 0 && w != 4))
    return std::nullopt;
  if (w == 4 && !supports_w4(*algo))
    return std::nullopt;
  return SieveVariant{*algo, w};
}

/// The fifteen variants that run at full scale, plus the two capped ones.
inline std::vector<SieveVariant> full_scale_variants() {
  return {{Algorithm::TD, 0},     {Algorithm::BS, 0},  {Algorithm::BS, 4},
          {Algorithm::H, 0},      {Algorithm::H, 4},   {Algorithm::W, 0},
          {Algorithm::W, 4},      {Algorithm::ES, 0},  {Algorithm::ES, 4},
          {Algorithm::ONEILL, 0}, {Algorithm::ONEILL, 4}, {Algorithm::EPQ, 0},
          {Algorithm::EPQ, 4},    {Algorithm::WPQ, 0}, {Algorithm::WPQ, 4}};
}

inline std::vector<SieveVariant> capped_variants() {
  return {{Algorithm::TURNER, 0}, {Algorithm::NAIVE_EULER, 0}};
}

struct SieveOptions {
  std::shared_ptr<Instrument> instrument;  // optional; kept alive by the stream
  std::size_t cap = default_naive_cap;     // for TURNER and NAIVE_EULER
};

namespace detail {

// Owns the instrument; the stream member is declared last so that it is
// destroyed first.
class KeepAlive final : public Source {
public:
  KeepAlive(std::shared_ptr<Instrument> inst, OrderedStream xs)
      : inst_(std::move(inst)), xs_(std::move(xs)) {}
  natural pull() override { return xs_.next(); }

private:
  std::shared_ptr<Instrument> inst_;
  OrderedStream xs_;
};

}  // namespace detail

/// The prime stream of variant v with a raw instrument that must outlive it.
inline OrderedStream make_sieve(SieveVariant v, Instrument* inst, std::size_t cap = default_naive_cap) {
  bool w4 = v.wheel == 4;
  if (w4 && !supports_w4(v.algo))
    throw std::invalid_argument("variant has no wheel-mounted form");
  switch (v.algo) {
    case Algorithm::TD: return trial_division(inst);
    case Algorithm::TURNER: return turner_sieve(cap, inst);
    case Algorithm::NAIVE_EULER: return naive_euler(cap, inst);
    case Algorithm::BS: return w4 ? bird_sieve_w4(inst) : bird_sieve(inst);
    case Algorithm::H: return w4 ? primes_h4(inst) : primes_h(inst);
    case Algorithm::NAIVE_W: return naive_wheel_euler(inst);
    case Algorithm::W: return w4 ? wheel_euler_w4(inst) : wheel_euler(inst);
    case Algorithm::ES: return w4 ? es_euler_w4(inst) : es_euler(inst);
    case Algorithm::ONEILL: return oneill_sieve(w4, inst);
    case Algorithm::EPQ: return epq_sieve(w4, inst);
    case Algorithm::WPQ: return wpq_sieve(w4, inst);
  }
  throw std::invalid_argument("unknown variant");
}

inline OrderedStream make_sieve(SieveVariant v, const SieveOptions& opts = {}) {
  OrderedStream xs = make_sieve(v, opts.instrument.get(), opts.cap);
  if (!opts.instrument)
    return xs;
  return make_stream<detail::KeepAlive>(opts.instrument, std::move(xs));
}

}  // namespace eulersieve
