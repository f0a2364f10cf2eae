#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#ifndef EULERSIEVE_INSTRUMENTATION
#define EULERSIEVE_INSTRUMENTATION 1
#endif

// Precondition checks for the disjoint/subset combinators. Enabled in debug
// builds or when EULERSIEVE_CHECKED is defined; a violation throws
// precondition_error so it can be observed by tests.
#if !defined(EULERSIEVE_CHECKED) && !defined(NDEBUG)
#define EULERSIEVE_CHECKED 1
#endif

namespace eulersieve {

using natural = std::uint64_t;

/// Sentinel yielded forever by an exhausted stream. Combinators treat it as
/// +infinity, so merging with an empty stream needs no special case.
inline constexpr natural stream_end = std::numeric_limits<natural>::max();

inline constexpr bool instrumentation_enabled = EULERSIEVE_INSTRUMENTATION != 0;

#if defined(EULERSIEVE_CHECKED) && EULERSIEVE_CHECKED
inline constexpr bool checked_build = true;
#else
inline constexpr bool checked_build = false;
#endif

class overflow_error : public std::overflow_error {
public:
  using std::overflow_error::overflow_error;
};

/// A self-referential stream demanded an element it has not produced yet.
class non_productive_error : public std::logic_error {
public:
  non_productive_error() : std::logic_error("non-productive definition") {}
};

class precondition_error : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// A capped variant (or a resource-limited oracle) was asked for too much.
class cap_exceeded_error : public std::length_error {
public:
  using std::length_error::length_error;
};

inline natural checked_add(natural a, natural b) {
  natural r;
  if (__builtin_add_overflow(a, b, &r) || r == stream_end)
    throw overflow_error("64-bit overflow in addition");
  return r;
}

inline natural checked_mul(natural a, natural b) {
  natural r;
  if (__builtin_mul_overflow(a, b, &r) || r == stream_end)
    throw overflow_error("64-bit overflow in multiplication");
  return r;
}

inline void check_precondition(bool ok, const char* what) {
  if constexpr (checked_build) {
    if (!ok)
      throw precondition_error(what);
  }
}

/// Counters shared by every stream of one sieve instance. Streams hold a raw
/// pointer; the owner of the sieve keeps the instrument alive.
struct Instrument {
  std::uint64_t composites = 0;   // values emitted by composite generators
  std::uint64_t comparisons = 0;  // merge decisions and heap comparisons
  std::uint64_t pulls = 0;        // candidates examined by the top-level sieve
  std::uint64_t forced_streams = 0;
  std::int64_t buffered = 0;      // live elements in shared buffers
  std::int64_t peak_buffered = 0;

  /// Optional per-value tally of generated composites.
  std::function<void(natural)> on_composite;
  /// Optional trace of keys popped from a priority queue.
  std::function<void(natural)> on_pop;

  void composite(natural v) {
    ++composites;
    if (on_composite)
      on_composite(v);
  }
  void popped(natural key) {
    if (on_pop)
      on_pop(key);
  }
  void grow_buffer() {
    if (++buffered > peak_buffered)
      peak_buffered = buffered;
  }
  void shrink_buffer(std::size_t n) { buffered -= static_cast<std::int64_t>(n); }
};

}  // namespace eulersieve
