#pragma once

// Generalized Hamming numbers over a generator list P, via the disjoint
// decomposition H'(P) = p * H(P) + H'(P \ {p}), and the composites
// C(P) = H'(P) \ P that sieve H subtracts from the candidates.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "core.hpp"
#include "streams.hpp"

namespace eulersieve {

namespace detail {

// x, then rest; x is reported to the instrument when emitted.
class LeadSource final : public Source {
public:
  LeadSource(natural x, OrderedStream rest, Instrument* inst)
      : x_(x), rest_(std::move(rest)), inst_(inst) {}
  natural pull() override {
    if (!emitted_) {
      emitted_ = true;
      if (instrumentation_enabled && inst_)
        inst_->composite(x_);
      return x_;
    }
    return rest_.next();
  }

private:
  natural x_;
  OrderedStream rest_;
  Instrument* inst_;
  bool emitted_ = false;
};

inline OrderedStream lead(natural x, OrderedStream rest, Instrument* inst) {
  return make_stream<LeadSource>(x, std::move(rest), inst);
}

inline OrderedStream hamming_from(std::shared_ptr<OrderedStream> gens, Instrument* inst) {
  return defer([gens, inst]() -> OrderedStream {
    natural x = gens->next();
    if (x == stream_end)
      return OrderedStream{};
    return fix_stream(
        [x, gens, inst](FixHandle h) {
          return lead(x,
                      d_union(tap(scale(x, h.reader().stream()), inst), hamming_from(gens, inst),
                              inst),
                      inst);
        },
        Retention::release_consumed, inst);
  });
}

inline OrderedStream composites_from(SharedReader ps, Instrument* inst) {
  return defer([ps, inst]() mutable -> OrderedStream {
    natural x = ps.next();
    if (x == stream_end)
      return OrderedStream{};
    natural square = checked_mul(x, x);
    return fix_stream(
        [x, square, ps, inst](FixHandle h) {
          OrderedStream multiples =
              tap(scale(x, d_union(ps.stream(), h.reader().stream(), inst)), inst);
          return lead(square, d_union(std::move(multiples), composites_from(ps, inst), inst),
                      inst);
        },
        Retention::release_consumed, inst);
  });
}

}  // namespace detail

/// H'(gens) = H(gens) \ {1} in increasing order. With prime generators every
/// value is generated once; generated values are reported to `inst`.
inline OrderedStream hamming_stream(OrderedStream gens, Instrument* inst = nullptr) {
  return detail::hamming_from(std::make_shared<OrderedStream>(std::move(gens)), inst);
}

inline OrderedStream hamming_stream(std::vector<natural> gens, Instrument* inst = nullptr) {
  return hamming_stream(from_values(std::move(gens)), inst);
}

/// C(ps) = H'(ps) \ ps for a strictly increasing stream of primes, each
/// composite exactly once. Reading from a replayable cursor lets the prime
/// stream be the fixpoint that subtracts these composites.
inline OrderedStream composites_of_primes(SharedReader ps, Instrument* inst = nullptr) {
  return detail::composites_from(std::move(ps), inst);
}

inline OrderedStream composites_of_primes(OrderedStream ps, Instrument* inst = nullptr) {
  SharedStream shared = share(std::move(ps), nullptr);
  return detail::composites_from(shared.reader(), inst);
}

/// The classic three-way merge h = 1 : merge(2h, 3h, 5h). Besides the values
/// it tracks how often a tree-shaped evaluation of that definition would
/// produce each one: count(1) = 1, count(v) = sum of count(v/p) over
/// p in {2, 3, 5} dividing v.
class ClassicHamming3 {
public:
  natural next() {
    natural v;
    natural count;
    if (values_.empty()) {
      v = 1;
      count = 1;
    } else {
      natural c2 = checked_mul(2, values_[i2_]);
      natural c3 = checked_mul(3, values_[i3_]);
      natural c5 = checked_mul(5, values_[i5_]);
      v = std::min({c2, c3, c5});
      count = 0;
      if (c2 == v)
        count = saturating_add(count, counts_[i2_++]);
      if (c3 == v)
        count = saturating_add(count, counts_[i3_++]);
      if (c5 == v)
        count = saturating_add(count, counts_[i5_++]);
    }
    values_.push_back(v);
    counts_.push_back(count);
    return v;
  }

  /// Generation count of the value most recently returned by next().
  natural last_generation_count() const { return counts_.back(); }

private:
  static natural saturating_add(natural a, natural b) {
    natural r;
    return __builtin_add_overflow(a, b, &r) ? std::numeric_limits<natural>::max() - 1 : r;
  }

  std::vector<natural> values_;
  std::vector<natural> counts_;
  std::size_t i2_ = 0, i3_ = 0, i5_ = 0;
};

namespace detail {

class ClassicHammingSource final : public Source {
public:
  explicit ClassicHammingSource(Instrument* inst) : inst_(inst) {}
  natural pull() override {
    natural v = h_.next();
    if (instrumentation_enabled && inst_) {
      natural count = h_.last_generation_count();
      inst_->composites += count;
      if (inst_->on_composite)
        for (natural i = 0; i < count && i < 64; ++i)
          inst_->on_composite(v);
    }
    return v;
  }

private:
  ClassicHamming3 h_;
  Instrument* inst_;
};

}  // namespace detail

/// The classic 5-smooth stream, 1 included. `inst->composites` accumulates
/// generation counts; on_composite sees each value once per generation
/// (at most 64 times per value).
inline OrderedStream classic_hamming3(Instrument* inst = nullptr) {
  return make_stream<detail::ClassicHammingSource>(inst);
}

}  // namespace eulersieve
