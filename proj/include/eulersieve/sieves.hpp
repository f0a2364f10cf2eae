#pragma once

// Stream-based prime generators. Every constructor returns the unbounded
// stream 2, 3, 5, 7, ...; an optional Instrument records generated
// composites, merge comparisons and top-level candidate pulls. The instrument
// must outlive the returned stream.

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

#include "core.hpp"
#include "hamming.hpp"
#include "streams.hpp"
#include "wheels.hpp"

namespace eulersieve {

inline constexpr std::size_t default_naive_cap = 10000;

namespace detail {

// Counts each value pulled through it as one examined candidate.
class PullCounter final : public Source {
public:
  PullCounter(OrderedStream xs, Instrument* inst) : xs_(std::move(xs)), inst_(inst) {}
  natural pull() override {
    ++inst_->pulls;
    return xs_.next();
  }

private:
  OrderedStream xs_;
  Instrument* inst_;
};

inline OrderedStream candidates(OrderedStream xs, Instrument* inst) {
  if (!instrumentation_enabled || !inst)
    return xs;
  return make_stream<PullCounter>(std::move(xs), inst);
}

inline const std::vector<natural>& mounted_primes() {
  static const std::vector<natural> ps{2, 3, 5, 7, 11};
  return ps;
}

// 2:3:5:7:11: (tail s4 `sMinus` composites).
inline OrderedStream mounted(OrderedStream composites, Instrument* inst) {
  return prepend(mounted_primes(), s_minus(candidates(drop(1, s4()), inst),
                                           std::move(composites), inst));
}

// ---- trial division ------------------------------------------------------

class TrialDivisionSource final : public Source {
public:
  TrialDivisionSource(SharedReader primes, Instrument* inst)
      : primes_(std::move(primes)), inst_(inst) {}
  natural pull() override {
    for (;;) {
      natural n = next_++;
      if (inst_)
        ++inst_->pulls;
      SharedReader r = primes_;
      bool prime = true;
      for (;;) {
        natural p = r.next();
        if (p > n / p)
          break;
        if (inst_)
          ++inst_->comparisons;
        if (n % p == 0) {
          prime = false;
          break;
        }
      }
      if (prime)
        return n;
    }
  }

private:
  SharedReader primes_;
  Instrument* inst_;
  natural next_ = 3;
};

// ---- Turner ----------------------------------------------------------------

class FilterSource final : public Source {
public:
  FilterSource(OrderedStream xs, natural p, Instrument* inst)
      : xs_(std::move(xs)), p_(p), inst_(inst) {}
  natural pull() override {
    for (;;) {
      natural x = xs_.next();
      if (x == stream_end)
        return x;
      if (inst_)
        ++inst_->comparisons;
      if (x % p_ != 0)
        return x;
    }
  }

private:
  OrderedStream xs_;
  natural p_;
  Instrument* inst_;
};

class TurnerSource final : public Source {
public:
  TurnerSource(std::size_t cap, Instrument* inst)
      : xs_(candidates(from(2), inst)), cap_(cap), inst_(inst) {}
  natural pull() override {
    if (count_ == cap_)
      throw cap_exceeded_error("Turner sieve: prime cap reached");
    natural p = xs_.next();
    ++count_;
    xs_ = make_stream<FilterSource>(std::move(xs_), p, inst_);
    return p;
  }

private:
  OrderedStream xs_;
  std::size_t cap_;
  Instrument* inst_;
  std::size_t count_ = 0;
};

// ---- naive Euler -----------------------------------------------------------

class NaiveEulerSource final : public Source {
public:
  NaiveEulerSource(std::size_t cap, Instrument* inst)
      : cs_(candidates(from(2), inst)), cap_(cap), inst_(inst) {}
  natural pull() override {
    if (count_ == cap_)
      throw cap_exceeded_error("naive Euler sieve: prime cap reached");
    ++count_;
    SharedStream cs = share(std::move(cs_), inst_);
    SharedReader head = cs.reader();
    natural p = head.next();
    // eulerSieve cs@(p:tcs) = p : eulerSieve (tcs `minus` map (p*) cs)
    cs_ = minus(cs.reader(1).stream(), tap(scale(p, cs.reader().stream()), inst_), inst_);
    return p;
  }

private:
  OrderedStream cs_;
  std::size_t cap_;
  Instrument* inst_;
  std::size_t count_ = 0;
};

// ---- wheel sieves ----------------------------------------------------------

inline OrderedStream wheel_composites(SharedReader ps, LazyWheel w, Instrument* inst) {
  return defer([ps, w, inst]() mutable -> OrderedStream {
    natural p = ps.next();
    OrderedStream multiples = tap(scale(p, spin(circ(w), p)), inst);
    LazyWheel next = next_wheel1_lazy(w, p, nullptr);
    return d_union_p(std::move(multiples), wheel_composites(ps, std::move(next), inst), inst);
  });
}

// ---- ES --------------------------------------------------------------------

inline OrderedStream es_composites(SharedReader ps, OrderedStream ss, Instrument* inst);

}  // namespace detail

/// One step of the mutual induction on erased and surviving sets.
struct EulerStep {
  OrderedStream erased;     // E_k = p_k * S_{k-1}|^k
  OrderedStream survivors;  // S_k|^{k+1} = tail(S_{k-1}|^k) \ E_k
};

/// Given p = p_k and ss = S_{k-1}|^k (whose head is p), the next erased set
/// and survivor suffix. Erased values are reported to `inst` unless
/// `tally_erased` is false.
inline EulerStep euler_step(natural p, OrderedStream ss, Instrument* inst = nullptr,
                            bool tally_erased = true) {
  SharedStream shared_ss = share(std::move(ss), inst);
  OrderedStream multiples = scale(p, shared_ss.reader().stream());
  if (tally_erased)
    multiples = tap(std::move(multiples), inst);
  SharedStream es = share(std::move(multiples), inst);
  OrderedStream next = s_minus(shared_ss.reader(1).stream(), es.reader().stream(), inst);
  return EulerStep{es.reader().stream(), std::move(next)};
}

/// euler_step with p read from the head of ss.
inline EulerStep euler_step(OrderedStream ss, Instrument* inst = nullptr) {
  natural p = ss.peek();
  return euler_step(p, std::move(ss), inst);
}

namespace detail {

inline OrderedStream es_composites(SharedReader ps, OrderedStream ss, Instrument* inst) {
  auto pending = std::make_shared<OrderedStream>(std::move(ss));
  return defer([ps, pending, inst]() mutable -> OrderedStream {
    natural p = ps.next();
    EulerStep step = euler_step(p, std::move(*pending), inst);
    return d_union_p(std::move(step.erased),
                     es_composites(ps, std::move(step.survivors), inst), inst);
  });
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Constructors

/// Trial division by the primes up to the square root of each candidate.
inline OrderedStream trial_division(Instrument* inst = nullptr) {
  if (!instrumentation_enabled)
    inst = nullptr;
  return fix_stream(
      [inst](FixHandle h) {
        return cons(2, make_stream<detail::TrialDivisionSource>(h.reader(), inst));
      },
      Retention::keep_all, inst);
}

/// Nested remainder filters. Throws cap_exceeded_error past `cap` primes.
inline OrderedStream turner_sieve(std::size_t cap = default_naive_cap,
                                  Instrument* inst = nullptr) {
  if (!instrumentation_enabled)
    inst = nullptr;
  return make_stream<detail::TurnerSource>(cap, inst);
}

/// Nested stream complements. Throws cap_exceeded_error past `cap` primes.
inline OrderedStream naive_euler(std::size_t cap = default_naive_cap,
                                 Instrument* inst = nullptr) {
  if (!instrumentation_enabled)
    inst = nullptr;
  return make_stream<detail::NaiveEulerSource>(cap, inst);
}

/// 2 : ([3..] `minus` foldr unionP [] [map (p*) [p..] | p <- primes]).
inline OrderedStream bird_sieve(Instrument* inst = nullptr) {
  return fix_stream(
      [inst](FixHandle h) {
        auto ps = std::make_shared<SharedReader>(h.reader());
        StreamGenerator multiples = [ps, inst]() -> std::optional<OrderedStream> {
          natural p = ps->next();
          return tap(arithmetic(checked_mul(p, p), p), inst);
        };
        OrderedStream composites = fold_union_p(std::move(multiples), false, inst);
        return cons(2, minus(detail::candidates(from(3), inst), std::move(composites), inst));
      },
      Retention::keep_all, inst);
}

/// Bird's sieve on s4 candidates; the multiples of p >= 11 are p * S_4|^p.
inline OrderedStream bird_sieve_w4(Instrument* inst = nullptr) {
  return fix_stream(
      [inst](FixHandle h) {
        auto ps = std::make_shared<SharedReader>(h.reader(4));
        StreamGenerator multiples = [ps, inst]() -> std::optional<OrderedStream> {
          natural p = ps->next();
          return tap(scale(p, roll_at(w4(), 11, p)), inst);
        };
        return detail::mounted(fold_union_p(std::move(multiples), false, inst), inst);
      },
      Retention::keep_all, inst);
}

/// Each prime's multiples over a wheel recomputed from scratch by trial
/// division against the smaller primes.
inline OrderedStream naive_wheel_euler(Instrument* inst = nullptr) {
  return fix_stream(
      [inst](FixHandle h) {
        auto ps = std::make_shared<SharedReader>(h.reader());
        auto index = std::make_shared<std::size_t>(0);
        SharedReader origin = h.reader();
        StreamGenerator multiples = [ps, index, origin, inst]() -> std::optional<OrderedStream> {
          natural p = ps->next();
          std::vector<natural> smaller;
          SharedReader r = origin;
          for (std::size_t i = 0; i < *index; ++i)
            smaller.push_back(r.next());
          ++*index;
          return tap(scale(p, scan_wheel(std::move(smaller), p)), inst);
        };
        OrderedStream composites = fold_union_p(std::move(multiples), true, inst);
        return cons(2, s_minus(detail::candidates(from(3), inst), std::move(composites), inst));
      },
      Retention::keep_all, inst);
}

/// Sieve W: composites = p_k * S_{k-1}|^k over incrementally advanced wheels.
inline OrderedStream wheel_euler(Instrument* inst = nullptr) {
  return fix_stream(
      [inst](FixHandle h) {
        OrderedStream composites =
            detail::wheel_composites(h.reader(), lazy_wheel(wheel0()), inst);
        return cons(2, s_minus(detail::candidates(from(3), inst), std::move(composites), inst));
      },
      Retention::keep_all, inst);
}

inline OrderedStream wheel_euler_w4(Instrument* inst = nullptr) {
  return fix_stream(
      [inst](FixHandle h) {
        return detail::mounted(detail::wheel_composites(h.reader(4), lazy_wheel(w4()), inst),
                               inst);
      },
      Retention::keep_all, inst);
}

/// Sieve ES: the erased sets E_k computed from the survivor streams.
inline OrderedStream es_euler(Instrument* inst = nullptr) {
  return fix_stream(
      [inst](FixHandle h) {
        OrderedStream composites = detail::es_composites(h.reader(), from(2), inst);
        return cons(2, s_minus(detail::candidates(from(3), inst), std::move(composites), inst));
      },
      Retention::keep_all, inst);
}

inline OrderedStream es_euler_w4(Instrument* inst = nullptr) {
  return fix_stream(
      [inst](FixHandle h) {
        return detail::mounted(detail::es_composites(h.reader(4), s4(), inst), inst);
      },
      Retention::keep_all, inst);
}

/// Sieve H: the primes minus the Hamming composites of the primes.
inline OrderedStream primes_h(Instrument* inst = nullptr) {
  return fix_stream(
      [inst](FixHandle h) {
        OrderedStream composites = composites_of_primes(h.reader(), inst);
        return cons(2, s_minus(detail::candidates(from(3), inst), std::move(composites), inst));
      },
      Retention::keep_all, inst);
}

inline OrderedStream primes_h4(Instrument* inst = nullptr) {
  return fix_stream(
      [inst](FixHandle h) {
        return detail::mounted(composites_of_primes(h.reader(4), inst), inst);
      },
      Retention::keep_all, inst);
}

}  // namespace eulersieve
