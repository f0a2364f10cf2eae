#pragma once

#include <cstddef>
#include <deque>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "core.hpp"
#include "sieves.hpp"
#include "streams.hpp"
#include "wheels.hpp"

namespace eulersieve {

/// Binary min-heap from the next composite of a generator to the generator.
/// Duplicate keys are allowed; among equal keys the pop order is unspecified.
template <class Gen>
class CompositePQ {
public:
  struct Entry {
    natural key;
    Gen gen;
  };

  explicit CompositePQ(Instrument* inst = nullptr) : inst_(inst) {}

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

  void insert(natural key, Gen gen) {
    heap_.push_back(Entry{key, std::move(gen)});
    sift_up(heap_.size() - 1);
  }

  const Entry& min() const {
    require_nonempty();
    return heap_.front();
  }
  natural min_key() const { return min().key; }

  /// Generator of the minimum entry, for advancing it in place.
  Gen& min_gen() {
    require_nonempty();
    return heap_.front().gen;
  }

  /// Removes the minimum and inserts (key, gen), as one sift-down.
  void delete_min_and_insert(natural key, Gen gen) {
    require_nonempty();
    heap_.front().gen = std::move(gen);
    update_min(key);
  }

  /// Gives the minimum entry a new key and restores heap order.
  void update_min(natural key) {
    require_nonempty();
    if (instrumentation_enabled && inst_)
      inst_->popped(heap_.front().key);
    heap_.front().key = key;
    sift_down(0);
  }

private:
  void require_nonempty() const {
    if (heap_.empty())
      throw std::out_of_range("CompositePQ: empty queue");
  }

  bool less(std::size_t a, std::size_t b) {
    if (instrumentation_enabled && inst_)
      ++inst_->comparisons;
    return heap_[a].key < heap_[b].key;
  }

  void sift_up(std::size_t i) {
    while (i > 0) {
      std::size_t parent = (i - 1) / 2;
      if (!less(i, parent))
        break;
      std::swap(heap_[i], heap_[parent]);
      i = parent;
    }
  }

  void sift_down(std::size_t i) {
    const std::size_t n = heap_.size();
    for (;;) {
      std::size_t l = 2 * i + 1;
      if (l >= n)
        break;
      std::size_t m = l;
      if (l + 1 < n && less(l + 1, l))
        m = l + 1;
      if (!less(m, i))
        break;
      std::swap(heap_[i], heap_[m]);
      i = m;
    }
  }

  std::vector<Entry> heap_;
  Instrument* inst_;
};

namespace detail {

inline void tally(Instrument* inst, natural v) {
  if (instrumentation_enabled && inst)
    inst->composite(v);
}

inline void count_pull(Instrument* inst) {
  if (instrumentation_enabled && inst)
    ++inst->pulls;
}

inline OrderedStream pq_candidates(bool w4) { return w4 ? s4() : from(2); }

inline const std::vector<natural>& pq_prefix(bool w4) {
  static const std::vector<natural> none;
  static const std::vector<natural> small{2, 3, 5, 7};
  return w4 ? small : none;
}

}  // namespace detail

/// Incremental Sieve of Eratosthenes: each prime p contributes the multiples
/// p*m for m >= p (m on the wheel when mounted), keyed from p*p.
class OneillSieve {
public:
  explicit OneillSieve(bool w4 = false, Instrument* inst = nullptr)
      : w4_(w4), inst_(instrumentation_enabled ? inst : nullptr), queue_(inst_),
        cands_(detail::pq_candidates(w4)) {}

  natural next() {
    if (prefix_pos_ < detail::pq_prefix(w4_).size())
      return detail::pq_prefix(w4_)[prefix_pos_++];
    for (;;) {
      natural c = cands_.next();
      detail::count_pull(inst_);
      if (!pending_.empty() && pending_.front() <= c / pending_.front()) {
        natural p = pending_.front();
        pending_.pop_front();
        natural key = checked_mul(p, p);
        detail::tally(inst_, key);
        queue_.insert(key, make_gen(p));
      }
      bool composite = false;
      while (!queue_.empty() && queue_.min_key() <= c) {
        if (queue_.min_key() == c)
          composite = true;
        Gen& g = queue_.min_gen();
        natural key = checked_add(queue_.min_key(), g.step());
        detail::tally(inst_, key);
        queue_.update_min(key);
      }
      if (!composite) {
        pending_.push_back(c);
        return c;
      }
    }
  }

  std::size_t queue_size() const { return queue_.size(); }

private:
  struct Gen {
    natural p;
    const std::vector<natural>* deltas;  // null: consecutive multiples
    std::size_t i;
    natural step() {
      if (!deltas)
        return p;
      natural d = (*deltas)[i];
      if (++i == deltas->size())
        i = 0;
      return checked_mul(p, d);
    }
  };

  Gen make_gen(natural p) const {
    if (!w4_)
      return Gen{p, nullptr, 0};
    const auto& w = w4().deltas;
    // Position of p on the w4 cycle anchored at 11.
    natural target = 11 + (p - 11) % 210;
    natural pos = 11;
    std::size_t i = 0;
    while (pos < target)
      pos += w[i++];
    return Gen{p, &w, i % w.size()};
  }

  bool w4_;
  Instrument* inst_;
  CompositePQ<Gen> queue_;
  OrderedStream cands_;
  std::deque<natural> pending_;
  std::size_t prefix_pos_ = 0;
};

/// Sieve EPQ: the Euler erased set E_k = p_k * S_{k-1}|^k enters the queue
/// when p_k^2 is reached; the survivor frontier S_{k-1}|^k advances then.
class EpqSieve {
public:
  explicit EpqSieve(bool w4 = false, Instrument* inst = nullptr)
      : w4_(w4), inst_(instrumentation_enabled ? inst : nullptr), queue_(inst_),
        cands_(detail::pq_candidates(w4)), frontier_(detail::pq_candidates(w4)) {}

  natural next() {
    if (prefix_pos_ < detail::pq_prefix(w4_).size())
      return detail::pq_prefix(w4_)[prefix_pos_++];
    for (;;) {
      natural c = cands_.next();
      detail::count_pull(inst_);
      natural p = frontier_.peek();
      if (p <= c / p) {
        EulerStep step = euler_step(p, std::move(frontier_), inst_, false);
        frontier_ = std::move(step.survivors);
        natural key = step.erased.next();
        detail::tally(inst_, key);
        queue_.insert(key, std::move(step.erased));
      }
      bool composite = false;
      while (!queue_.empty() && queue_.min_key() <= c) {
        if (queue_.min_key() == c)
          composite = true;
        natural key = queue_.min_gen().next();
        detail::tally(inst_, key);
        queue_.update_min(key);
      }
      if (!composite)
        return c;
    }
  }

  std::size_t queue_size() const { return queue_.size(); }

private:
  bool w4_;
  Instrument* inst_;
  CompositePQ<OrderedStream> queue_;
  OrderedStream cands_;
  OrderedStream frontier_;  // S_{k-1}|^k for the next prime p_k to enter
  std::size_t prefix_pos_ = 0;
};

/// Sieve WPQ: like EPQ, but the queue stores p_k with a cyclic cursor over
/// the wheel w_{k-1} and advances keys by p_k times the next delta.
class WpqSieve {
public:
  explicit WpqSieve(bool w4 = false, Instrument* inst = nullptr)
      : w4_(w4), inst_(instrumentation_enabled ? inst : nullptr), queue_(inst_),
        cands_(detail::pq_candidates(w4)), wheel_(lazy_wheel(w4 ? eulersieve::w4() : wheel0())) {}

  natural next() {
    if (prefix_pos_ < detail::pq_prefix(w4_).size())
      return detail::pq_prefix(w4_)[prefix_pos_++];
    for (;;) {
      natural c = cands_.next();
      detail::count_pull(inst_);
      if (!pending_.empty() && pending_.front() <= c / pending_.front()) {
        natural p = pending_.front();
        pending_.pop_front();
        natural key = checked_mul(p, p);
        detail::tally(inst_, key);
        queue_.insert(key, Gen{p, circ(wheel_)});
        wheel_ = next_wheel1_lazy(wheel_, p);
      }
      bool composite = false;
      while (!queue_.empty() && queue_.min_key() <= c) {
        natural n = queue_.min_key();
        if (n == c)
          composite = true;
        Gen& g = queue_.min_gen();
        natural key = checked_add(n, checked_mul(g.p, g.deltas.next()));
        detail::tally(inst_, key);
        queue_.update_min(key);
      }
      if (!composite) {
        pending_.push_back(c);
        return c;
      }
    }
  }

  std::size_t queue_size() const { return queue_.size(); }

private:
  struct Gen {
    natural p;
    OrderedStream deltas;
  };

  bool w4_;
  Instrument* inst_;
  CompositePQ<Gen> queue_;
  OrderedStream cands_;
  LazyWheel wheel_;  // w_{k-1} for the next prime p_k to enter
  std::deque<natural> pending_;
  std::size_t prefix_pos_ = 0;
};

namespace detail {

template <class Sieve>
class SieveSource final : public Source {
public:
  template <class... Args>
  explicit SieveSource(Args&&... args) : sieve_(std::forward<Args>(args)...) {}
  natural pull() override { return sieve_.next(); }

private:
  Sieve sieve_;
};

}  // namespace detail

inline OrderedStream oneill_sieve(bool w4 = false, Instrument* inst = nullptr) {
  return make_stream<detail::SieveSource<OneillSieve>>(w4, inst);
}

inline OrderedStream epq_sieve(bool w4 = false, Instrument* inst = nullptr) {
  return make_stream<detail::SieveSource<EpqSieve>>(w4, inst);
}

inline OrderedStream wpq_sieve(bool w4 = false, Instrument* inst = nullptr) {
  return make_stream<detail::SieveSource<WpqSieve>>(w4, inst);
}

}  // namespace eulersieve
