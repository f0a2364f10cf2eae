#pragma once

// The wheels w_0, w_1, ...: rolling w_k from p_{k+1} enumerates the naturals
// >= p_{k+1} coprime to the first k primes. w_k has circumference
// p_1 * ... * p_k and phi(p_1 * ... * p_k) deltas.

#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "core.hpp"
#include "streams.hpp"

namespace eulersieve {

struct Wheel {
  std::vector<natural> deltas;
  std::size_t index = 0;  // k, for w_k

  std::size_t size() const { return deltas.size(); }
  natural circumference() const {
    return std::accumulate(deltas.begin(), deltas.end(), natural{0});
  }
  /// Fraction of naturals skipped when rolling this wheel.
  double skipped_fraction() const {
    return 1.0 - static_cast<double>(size()) / static_cast<double>(circumference());
  }

  friend bool operator==(const Wheel&, const Wheel&) = default;
};

/// w_k by trial division over one circumference: deltas between successive
/// naturals of (p, p + P] coprime to every element of `prefix`, where P is
/// the product of `prefix` and p = p_{k+1}.
inline Wheel wheel_from_primes(std::span<const natural> prefix, natural p) {
  natural span_width = 1;
  for (natural q : prefix) {
    if (__builtin_mul_overflow(span_width, q, &span_width))
      throw overflow_error("wheel window exceeds 64 bits");
  }
  natural last = checked_add(p, span_width);
  Wheel w;
  w.index = prefix.size();
  natural prev = p;
  for (natural n = p + 1; n <= last; ++n) {
    bool coprime = true;
    for (natural q : prefix) {
      if (n % q == 0) {
        coprime = false;
        break;
      }
    }
    if (coprime) {
      w.deltas.push_back(n - prev);
      prev = n;
    }
  }
  return w;
}

inline Wheel wheel_from_primes(std::initializer_list<natural> prefix, natural p) {
  return wheel_from_primes(std::span<const natural>(prefix.begin(), prefix.size()), p);
}

namespace detail {

struct VectorCursor {
  const std::vector<natural>* v;
  std::size_t i;
  natural next() { return i < v->size() ? (*v)[i++] : stream_end; }
};

/// Streams w_k from w_{k-1}: p copies of the wheel with its first delta moved
/// to the end, folding a delta into its successor whenever the running
/// position (starting at np) lands on a multiple of p.
///
/// `tail` must be positioned at the second delta of the input wheel; `first`
/// is its first delta.
template <class Cursor>
class NextWheelCore {
public:
  NextWheelCore(Cursor tail, natural first, natural p, natural np)
      : origin_(tail), cur_(std::move(tail)), first_(first), p_(p), pos_(np) {}

  natural next() {
    natural w = take();
    if (w == stream_end)
      return stream_end;
    for (;;) {
      if (peek() == stream_end)
        break;
      if ((w + pos_) % p_ == 0) {
        w += take();
        continue;
      }
      break;
    }
    pos_ += w;
    return w;
  }

private:
  natural repeated_next() {
    if (reps_ == p_)
      return stream_end;
    natural v = cur_.next();
    if (v != stream_end)
      return v;
    ++reps_;
    cur_ = origin_;
    return first_;
  }
  natural peek() {
    if (!has_ahead_) {
      ahead_ = repeated_next();
      has_ahead_ = true;
    }
    return ahead_;
  }
  natural take() {
    natural v = peek();
    has_ahead_ = false;
    return v;
  }

  Cursor origin_;
  Cursor cur_;
  natural first_;
  natural p_;
  natural pos_;
  natural reps_ = 0;
  natural ahead_ = 0;
  bool has_ahead_ = false;
};

template <class Cursor>
class NextWheelSource final : public Source {
public:
  NextWheelSource(Cursor tail, natural first, natural p, natural np)
      : core_(std::move(tail), first, p, np) {}
  natural pull() override { return core_.next(); }

private:
  NextWheelCore<Cursor> core_;
};

class CoprimeScanSource final : public Source {
public:
  CoprimeScanSource(std::vector<natural> prefix, natural start)
      : prefix_(std::move(prefix)), pos_(start) {}
  natural pull() override {
    natural n = pos_;
    for (;;) {
      n = checked_add(n, 1);
      bool coprime = true;
      for (natural q : prefix_) {
        if (n % q == 0) {
          coprime = false;
          break;
        }
      }
      if (coprime)
        break;
    }
    natural d = n - pos_;
    pos_ = n;
    return d;
  }

private:
  std::vector<natural> prefix_;
  natural pos_;
};

}  // namespace detail

/// w_k from w_{k-1}, where w is rotated to start at p = p_k and np = p_{k+1}.
/// nextWheel [] _ _ = [1].
inline Wheel next_wheel(const Wheel& w, natural p, natural np) {
  if (w.deltas.empty())
    return Wheel{{1}, 0};
  detail::NextWheelCore<detail::VectorCursor> core(detail::VectorCursor{&w.deltas, 1},
                                                   w.deltas.front(), p, np);
  Wheel out;
  out.index = w.index + 1;
  out.deltas.reserve(w.deltas.size() * static_cast<std::size_t>(p - 1));
  for (natural d = core.next(); d != stream_end; d = core.next())
    out.deltas.push_back(d);
  return out;
}

/// next_wheel with np = p + head(w), which is always p_{k+1}.
inline Wheel next_wheel1(const Wheel& w, natural p) {
  if (w.deltas.empty())
    throw std::invalid_argument("nextWheel1: empty wheel");
  return next_wheel(w, p, checked_add(p, w.deltas.front()));
}

/// w_0 = [1].
inline Wheel wheel0() { return Wheel{{1}, 0}; }

/// w_k by iterating next_wheel1 from w_0 at p = 2. Each step's np is the
/// next prime, so the chain walks p_1, p_2, ...
inline Wheel wheel_chain(std::size_t k) {
  Wheel w = wheel0();
  natural p = 2;
  for (std::size_t i = 0; i < k; ++i) {
    natural np = checked_add(p, w.deltas.front());
    w = next_wheel(w, p, np);
    p = np;
  }
  return w;
}

/// w_4, computed once.
inline const Wheel& w4() {
  static const Wheel wheel = wheel_chain(4);
  return wheel;
}

/// spin (circ w) start.
inline OrderedStream roll(const Wheel& w, natural start) {
  return spin(circ(w.deltas), start);
}

/// s_4 = spin (circ w4) 11: the naturals >= 11 coprime to 2, 3, 5 and 7.
inline OrderedStream s4() { return roll(w4(), 11); }

/// (w_4, s_4).
inline std::pair<Wheel, OrderedStream> precomputed_w4() { return {w4(), s4()}; }

/// Rolls w (anchored at `origin`) starting from x, which must lie on the
/// wheel: x = origin + a partial sum of the cyclic deltas.
inline OrderedStream roll_at(const Wheel& w, natural origin, natural x) {
  if (w.deltas.empty())
    throw std::invalid_argument("roll_at: empty wheel");
  if (x < origin)
    throw std::invalid_argument("roll_at: start below the wheel origin");
  natural target = origin + (x - origin) % w.circumference();
  natural pos = origin;
  std::size_t i = 0;
  while (pos < target) {
    pos += w.deltas[i];
    i = (i + 1) % w.deltas.size();
  }
  if (pos != target)
    throw std::invalid_argument("roll_at: start is not on the wheel");
  std::vector<natural> rotated(w.deltas.begin() + static_cast<std::ptrdiff_t>(i),
                               w.deltas.end());
  rotated.insert(rotated.end(), w.deltas.begin(),
                 w.deltas.begin() + static_cast<std::ptrdiff_t>(i));
  return spin(circ(std::move(rotated)), x);
}

// ---------------------------------------------------------------------------
// Lazily computed wheels, for sieves that need w_k with k far beyond what can
// be materialized. A lazy wheel is a memoized delta stream; it keeps every
// delta computed so far so that circ can restart it.

using LazyWheel = SharedStream;

inline LazyWheel lazy_wheel(const Wheel& w, Instrument* inst = nullptr) {
  return share(from_values(w.deltas), inst);
}

/// nextWheel1 over a lazy wheel. Nothing of w is read until the result is.
inline LazyWheel next_wheel1_lazy(const LazyWheel& w, natural p, Instrument* inst = nullptr) {
  return share(defer([w, p]() -> OrderedStream {
                 SharedReader head = w.reader();
                 natural first = head.next();
                 if (first == stream_end)
                   throw std::invalid_argument("nextWheel1: empty wheel");
                 natural np = checked_add(p, first);
                 return make_stream<detail::NextWheelSource<SharedReader>>(w.reader(1), first, p,
                                                                           np);
               }),
               inst);
}

/// The wheel of the primes in `prefix` rolled from p, found by trial division
/// of successive naturals. Same values as roll(wheel_from_primes(prefix, p), p)
/// but never materializes the window, so any prefix length works.
inline OrderedStream scan_wheel(std::vector<natural> prefix, natural p) {
  return spin(make_stream<detail::CoprimeScanSource>(std::move(prefix), p), p);
}

}  // namespace eulersieve
