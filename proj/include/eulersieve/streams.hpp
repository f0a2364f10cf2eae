#pragma once

// Lazy ordered streams of 64-bit naturals.
//
// An OrderedStream is a single-consumer, pull-based producer. Sharing a
// stream between several consumers (and tying the knot of self-referential
// definitions such as `primes = 2 : ([3..] `minus` composites primes)`) goes
// through a memo buffer: share() for an existing stream, fix_stream() for a
// stream defined in terms of itself.

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "core.hpp"

namespace eulersieve {

class OrderedStream;

class Source {
public:
  virtual ~Source() = default;
  /// Produces the next value, or stream_end once exhausted. Never called
  /// again after returning stream_end.
  virtual natural pull() = 0;

protected:
  /// A source that has become a plain forwarder to another stream sets this;
  /// the owning OrderedStream then takes that stream over and drops the
  /// forwarder, so long chains of built deferred levels cost nothing extra.
  OrderedStream* forward_to_ = nullptr;

  friend class OrderedStream;
};

class OrderedStream {
public:
  /// The empty stream.
  OrderedStream() = default;
  explicit OrderedStream(std::unique_ptr<Source> src) : src_(std::move(src)) {}

  OrderedStream(OrderedStream&&) noexcept = default;
  OrderedStream& operator=(OrderedStream&&) noexcept = default;
  OrderedStream(const OrderedStream&) = delete;
  OrderedStream& operator=(const OrderedStream&) = delete;

  natural peek() {
    if (!cached_) {
      head_ = src_ ? src_->pull() : stream_end;
      cached_ = true;
      if (src_ && src_->forward_to_) [[unlikely]]
        splice();
    }
    return head_;
  }

  natural next() {
    natural v = peek();
    if (v != stream_end)
      cached_ = false;
    return v;
  }

  void skip() { next(); }

  bool done() { return peek() == stream_end; }

private:
  // The forwarded-to stream has just produced head_ through a next() call,
  // so its own cache is empty (or holds stream_end, as does ours).
  [[gnu::noinline]] void splice() {
    std::unique_ptr<Source> inner = std::move(src_->forward_to_->src_);
    src_ = std::move(inner);
  }

  std::unique_ptr<Source> src_;
  natural head_ = 0;
  bool cached_ = false;
};

template <class S, class... Args>
OrderedStream make_stream(Args&&... args) {
  return OrderedStream(std::make_unique<S>(std::forward<Args>(args)...));
}

// ---------------------------------------------------------------------------
// Elementary producers

namespace detail {

class ArithmeticSource final : public Source {
public:
  ArithmeticSource(natural start, natural step) : next_(start), step_(step) {}
  natural pull() override {
    natural v = next_;
    if (overflowed_)
      throw overflow_error("64-bit overflow in arithmetic progression");
    natural n;
    if (__builtin_add_overflow(next_, step_, &n) || n == stream_end)
      overflowed_ = true;
    next_ = n;
    return v;
  }

private:
  natural next_;
  natural step_;
  bool overflowed_ = false;
};

class ValuesSource final : public Source {
public:
  explicit ValuesSource(std::vector<natural> values) : values_(std::move(values)) {}
  natural pull() override { return pos_ < values_.size() ? values_[pos_++] : stream_end; }

private:
  std::vector<natural> values_;
  std::size_t pos_ = 0;
};

class ConsSource final : public Source {
public:
  ConsSource(std::vector<natural> front, OrderedStream rest)
      : front_(std::move(front)), rest_(std::move(rest)) {}
  natural pull() override {
    if (pos_ < front_.size())
      return front_[pos_++];
    return rest_.next();
  }

private:
  std::vector<natural> front_;
  std::size_t pos_ = 0;
  OrderedStream rest_;
};

class DropSource final : public Source {
public:
  DropSource(std::size_t n, OrderedStream xs) : n_(n), xs_(std::move(xs)) {}
  natural pull() override {
    for (; n_ > 0; --n_)
      if (xs_.next() == stream_end)
        return stream_end;
    return xs_.next();
  }

private:
  std::size_t n_;
  OrderedStream xs_;
};

class ScaleSource final : public Source {
public:
  ScaleSource(natural factor, OrderedStream xs) : factor_(factor), xs_(std::move(xs)) {}
  natural pull() override {
    natural v = xs_.next();
    return v == stream_end ? stream_end : checked_mul(v, factor_);
  }

private:
  natural factor_;
  OrderedStream xs_;
};

class TapSource final : public Source {
public:
  TapSource(OrderedStream xs, Instrument* inst) : xs_(std::move(xs)), inst_(inst) {}
  natural pull() override {
    natural v = xs_.next();
    if (v != stream_end)
      inst_->composite(v);
    return v;
  }

private:
  OrderedStream xs_;
  Instrument* inst_;
};

template <class F>
class GenerateSource final : public Source {
public:
  explicit GenerateSource(F f) : f_(std::move(f)) {}
  natural pull() override { return f_(); }

private:
  F f_;
};

template <class F>
class DeferredSource final : public Source {
public:
  explicit DeferredSource(F make) : make_(std::move(make)) {}
  natural pull() override {
    if (make_) {
      OrderedStream built = (*make_)();
      make_.reset();
      stream_ = std::move(built);
      forward_to_ = &stream_;
    }
    return stream_.next();
  }

private:
  std::optional<F> make_;
  OrderedStream stream_;
};

}  // namespace detail

inline OrderedStream empty_stream() { return OrderedStream{}; }

/// n, n+1, n+2, ...
inline OrderedStream from(natural n) { return make_stream<detail::ArithmeticSource>(n, 1); }

/// start, start+step, start+2*step, ...
inline OrderedStream arithmetic(natural start, natural step) {
  return make_stream<detail::ArithmeticSource>(start, step);
}

/// A finite stream over the given values.
inline OrderedStream from_values(std::vector<natural> values) {
  return make_stream<detail::ValuesSource>(std::move(values));
}

inline OrderedStream cons(natural x, OrderedStream rest) {
  return make_stream<detail::ConsSource>(std::vector<natural>{x}, std::move(rest));
}

inline OrderedStream prepend(std::vector<natural> front, OrderedStream rest) {
  return make_stream<detail::ConsSource>(std::move(front), std::move(rest));
}

inline OrderedStream drop(std::size_t n, OrderedStream xs) {
  return make_stream<detail::DropSource>(n, std::move(xs));
}

/// map (factor*) xs, failing on overflow.
inline OrderedStream scale(natural factor, OrderedStream xs) {
  return make_stream<detail::ScaleSource>(factor, std::move(xs));
}

/// Reports every emitted value to inst->composite(). Identity without an
/// instrument.
inline OrderedStream tap(OrderedStream xs, Instrument* inst) {
  if constexpr (!instrumentation_enabled)
    return xs;
  if (!inst)
    return xs;
  return make_stream<detail::TapSource>(std::move(xs), inst);
}

/// A stream whose values come from repeated calls to f().
template <class F>
OrderedStream generate(F f) {
  return make_stream<detail::GenerateSource<F>>(std::move(f));
}

/// Builds the stream on first pull. This is how recursive definitions over
/// unbounded inputs stay lazy: `make` is not invoked until a value is needed.
template <class F>
OrderedStream defer(F make) {
  return make_stream<detail::DeferredSource<F>>(std::move(make));
}

inline std::vector<natural> take(OrderedStream& xs, std::size_t n) {
  std::vector<natural> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    natural v = xs.next();
    if (v == stream_end)
      break;
    out.push_back(v);
  }
  return out;
}

inline std::vector<natural> take(OrderedStream&& xs, std::size_t n) { return take(xs, n); }

/// All leading values <= bound.
inline std::vector<natural> take_upto(OrderedStream& xs, natural bound) {
  std::vector<natural> out;
  while (xs.peek() <= bound && xs.peek() != stream_end)
    out.push_back(xs.next());
  return out;
}

inline std::vector<natural> take_upto(OrderedStream&& xs, natural bound) {
  return take_upto(xs, bound);
}

// ---------------------------------------------------------------------------
// Merge and difference combinators

namespace detail {

template <bool Counted>
inline void count_comparison(Instrument* inst) {
  if constexpr (Counted)
    ++inst->comparisons;
}

template <bool Counted>
inline natural union_step(OrderedStream& xs, OrderedStream& ys, Instrument* inst) {
  natural x = xs.peek();
  natural y = ys.peek();
  count_comparison<Counted>(inst);
  if (x < y) {
    xs.skip();
    return x;
  }
  if (y < x) {
    ys.skip();
    return y;
  }
  xs.skip();
  ys.skip();
  return x;
}

template <bool Counted>
inline natural d_union_step(OrderedStream& xs, OrderedStream& ys, Instrument* inst) {
  natural x = xs.peek();
  natural y = ys.peek();
  count_comparison<Counted>(inst);
  if (x < y) {
    xs.skip();
    return x;
  }
  check_precondition(x != y || x == stream_end, "dUnion: inputs are not disjoint");
  ys.skip();
  return y;
}

template <bool Counted, bool Disjoint>
class UnionSource final : public Source {
public:
  UnionSource(OrderedStream xs, OrderedStream ys, Instrument* inst)
      : xs_(std::move(xs)), ys_(std::move(ys)), inst_(inst) {}
  natural pull() override {
    if constexpr (Disjoint)
      return d_union_step<Counted>(xs_, ys_, inst_);
    else
      return union_step<Counted>(xs_, ys_, inst_);
  }

private:
  OrderedStream xs_, ys_;
  Instrument* inst_;
};

// Emits head(xs) without looking at ys, then hands over to a plain merge.
template <bool Counted, bool Disjoint>
class UnionPSource final : public Source {
public:
  UnionPSource(OrderedStream xs, OrderedStream ys, Instrument* inst)
      : xs_(std::move(xs)), ys_(std::move(ys)), inst_(inst) {}
  natural pull() override {
    natural x = xs_.next();
    merged_ = OrderedStream(
        std::make_unique<UnionSource<Counted, Disjoint>>(std::move(xs_), std::move(ys_), inst_));
    forward_to_ = &merged_;
    return x != stream_end ? x : merged_.next();
  }

private:
  OrderedStream xs_, ys_;
  Instrument* inst_;
  OrderedStream merged_;
};

template <bool Counted>
class MinusSource final : public Source {
public:
  MinusSource(OrderedStream xs, OrderedStream ys, Instrument* inst)
      : xs_(std::move(xs)), ys_(std::move(ys)), inst_(inst) {}
  natural pull() override {
    for (;;) {
      natural x = xs_.peek();
      natural y = ys_.peek();
      count_comparison<Counted>(inst_);
      if (x < y) {
        xs_.skip();
        return x;
      }
      if (x > y) {
        ys_.skip();
        continue;
      }
      if (x == stream_end)
        return stream_end;
      xs_.skip();
      ys_.skip();
    }
  }

private:
  OrderedStream xs_, ys_;
  Instrument* inst_;
};

template <bool Counted>
class SMinusSource final : public Source {
public:
  SMinusSource(OrderedStream xs, OrderedStream ys, Instrument* inst)
      : xs_(std::move(xs)), ys_(std::move(ys)), inst_(inst) {}
  natural pull() override {
    for (;;) {
      natural x = xs_.peek();
      natural y = ys_.peek();
      count_comparison<Counted>(inst_);
      if (x == y) {
        if (x == stream_end)
          return stream_end;
        xs_.skip();
        ys_.skip();
        continue;
      }
      check_precondition(x < y, "sMinus: subtrahend is not a subset");
      xs_.skip();
      return x;
    }
  }

private:
  OrderedStream xs_, ys_;
  Instrument* inst_;
};

template <template <bool> class S>
OrderedStream make_counted(OrderedStream xs, OrderedStream ys, Instrument* inst) {
  if (instrumentation_enabled && inst)
    return make_stream<S<true>>(std::move(xs), std::move(ys), inst);
  return make_stream<S<false>>(std::move(xs), std::move(ys), nullptr);
}

template <bool Counted> using PlainUnion = UnionSource<Counted, false>;
template <bool Counted> using DisjointUnion = UnionSource<Counted, true>;
template <bool Counted> using PlainUnionP = UnionPSource<Counted, false>;
template <bool Counted> using DisjointUnionP = UnionPSource<Counted, true>;

}  // namespace detail

/// Ordered set union; a value present in both inputs is emitted once.
inline OrderedStream union_(OrderedStream xs, OrderedStream ys, Instrument* inst = nullptr) {
  return detail::make_counted<detail::PlainUnion>(std::move(xs), std::move(ys), inst);
}

/// Union of disjoint inputs; never tests for equality.
inline OrderedStream d_union(OrderedStream xs, OrderedStream ys, Instrument* inst = nullptr) {
  return detail::make_counted<detail::DisjointUnion>(std::move(xs), std::move(ys), inst);
}

/// Requires head(xs) < head(ys): emits head(xs) before ys is ever pulled.
inline OrderedStream union_p(OrderedStream xs, OrderedStream ys, Instrument* inst = nullptr) {
  return detail::make_counted<detail::PlainUnionP>(std::move(xs), std::move(ys), inst);
}

inline OrderedStream d_union_p(OrderedStream xs, OrderedStream ys, Instrument* inst = nullptr) {
  return detail::make_counted<detail::DisjointUnionP>(std::move(xs), std::move(ys), inst);
}

/// Ordered set difference xs \ ys.
inline OrderedStream minus(OrderedStream xs, OrderedStream ys, Instrument* inst = nullptr) {
  return detail::make_counted<detail::MinusSource>(std::move(xs), std::move(ys), inst);
}

/// Difference when elements(ys) is a subset of elements(xs).
inline OrderedStream s_minus(OrderedStream xs, OrderedStream ys, Instrument* inst = nullptr) {
  return detail::make_counted<detail::SMinusSource>(std::move(xs), std::move(ys), inst);
}

// ---------------------------------------------------------------------------
// Shared buffers and fixpoints

namespace detail {

inline constexpr std::size_t chunk_capacity = 256;

struct MemoChunk {
  std::array<natural, chunk_capacity> values;
  std::size_t size = 0;
  std::shared_ptr<MemoChunk> next;
  Instrument* inst = nullptr;

  explicit MemoChunk(Instrument* i) : inst(i) {}
  MemoChunk(const MemoChunk&) = delete;
  MemoChunk& operator=(const MemoChunk&) = delete;

  // Unlinks the tail iteratively; a long chain would otherwise be released
  // by recursive destructor calls.
  ~MemoChunk() {
    if (inst)
      inst->shrink_buffer(size);
    std::shared_ptr<MemoChunk> n = std::move(next);
    while (n && n.use_count() == 1) {
      std::shared_ptr<MemoChunk> after = std::move(n->next);
      n.reset();
      n = std::move(after);
    }
  }
};

struct MemoState {
  OrderedStream source;
  std::shared_ptr<MemoChunk> tail;
  std::size_t produced = 0;
  bool producing = false;
  bool finished = false;
  Instrument* inst = nullptr;

  explicit MemoState(Instrument* i) : tail(std::make_shared<MemoChunk>(i)), inst(i) {}

  void produce() {
    if (producing)
      throw non_productive_error();
    producing = true;
    natural v;
    try {
      v = source.next();
    } catch (...) {
      producing = false;
      throw;
    }
    producing = false;
    if (v == stream_end) {
      finished = true;
      return;
    }
    if (tail->size == chunk_capacity) {
      auto c = std::make_shared<MemoChunk>(inst);
      tail->next = c;
      tail = std::move(c);
    }
    tail->values[tail->size++] = v;
    ++produced;
    if (inst)
      inst->grow_buffer();
  }
};

}  // namespace detail

class SharedStream;
SharedStream share(OrderedStream s, Instrument* inst = nullptr);
template <class Producer>
SharedStream fix_shared(Producer&& producer, Instrument* inst = nullptr);

/// A cursor into a shared buffer. Copying a reader forks it: both copies
/// replay the same values from the current position.
class SharedReader {
public:
  natural peek() {
    if (skip_ == 0 && idx_ < chunk_->size) [[likely]]
      return chunk_->values[idx_];
    settle();
    return raw_peek();
  }

  natural next() {
    if (skip_ == 0 && idx_ < chunk_->size) [[likely]]
      return chunk_->values[idx_++];
    return slow_next();
  }

  /// A stream reading from a copy of this cursor.
  OrderedStream stream() const;

private:
  friend class SharedStream;
  friend class FixHandle;

  SharedReader(detail::MemoState* st, std::shared_ptr<detail::MemoState> owner,
               std::shared_ptr<detail::MemoChunk> chunk, std::size_t skip)
      : st_(st), owner_(std::move(owner)), chunk_(std::move(chunk)), skip_(skip) {}

  [[gnu::noinline]] natural slow_next() {
    settle();
    natural v = raw_peek();
    if (v != stream_end)
      ++idx_;
    return v;
  }

  natural raw_peek() {
    for (;;) {
      if (idx_ < chunk_->size)
        return chunk_->values[idx_];
      if (idx_ == detail::chunk_capacity && chunk_->next) {
        chunk_ = chunk_->next;
        idx_ = 0;
        continue;
      }
      if (st_->finished)
        return stream_end;
      st_->produce();
    }
  }

  void settle() {
    while (skip_ > 0) {
      --skip_;
      if (raw_peek() == stream_end) {
        skip_ = 0;
        return;
      }
      ++idx_;
    }
  }

  detail::MemoState* st_;
  std::shared_ptr<detail::MemoState> owner_;  // null for readers inside a fixpoint
  std::shared_ptr<detail::MemoChunk> chunk_;
  std::size_t idx_ = 0;
  std::size_t skip_ = 0;
};

namespace detail {

class ReaderSource final : public Source {
public:
  explicit ReaderSource(SharedReader r) : r_(std::move(r)) {}
  natural pull() override { return r_.next(); }

private:
  SharedReader r_;
};

}  // namespace detail

inline OrderedStream SharedReader::stream() const {
  return make_stream<detail::ReaderSource>(*this);
}

/// Owning handle on a memoized stream. Readers obtained from the handle start
/// at the first element; while the handle lives the whole prefix is kept.
/// Once only readers remain, chunks every reader has passed are released.
class SharedStream {
public:
  SharedReader reader(std::size_t skip = 0) const {
    return SharedReader(st_.get(), st_, origin_, skip);
  }

  /// Elements produced so far.
  std::size_t produced() const { return st_->produced; }

private:
  friend SharedStream share(OrderedStream, Instrument*);
  template <class Producer>
  friend SharedStream fix_shared(Producer&&, Instrument*);

  explicit SharedStream(std::shared_ptr<detail::MemoState> st)
      : st_(std::move(st)), origin_(st_->tail) {}

  std::shared_ptr<detail::MemoState> st_;
  std::shared_ptr<detail::MemoChunk> origin_;
};

/// Replayable, non-owning view of a fixpoint's buffer, handed to the
/// producer. Readers from it must not outlive the fixpoint.
class FixHandle {
public:
  SharedReader reader(std::size_t skip = 0) const {
    return SharedReader(st_, nullptr, origin_, skip);
  }

  /// The suffix starting after the first `n` elements.
  OrderedStream suffix(std::size_t n) const { return reader(n).stream(); }

private:
  template <class Producer>
  friend SharedStream fix_shared(Producer&&, Instrument*);

  FixHandle(detail::MemoState* st, std::shared_ptr<detail::MemoChunk> origin)
      : st_(st), origin_(std::move(origin)) {}

  detail::MemoState* st_;
  std::shared_ptr<detail::MemoChunk> origin_;
};

/// Turns a single-consumer stream into a memoized one with many readers.
inline SharedStream share(OrderedStream s, Instrument* inst) {
  auto st = std::make_shared<detail::MemoState>(inst);
  st->source = std::move(s);
  return SharedStream(std::move(st));
}

/// The stream s = producer(handle on s). Producing element n may read only
/// elements below n; demanding more raises non_productive_error.
template <class Producer>
SharedStream fix_shared(Producer&& producer, Instrument* inst) {
  auto st = std::make_shared<detail::MemoState>(inst);
  SharedStream handle(st);
  st->source = std::forward<Producer>(producer)(FixHandle(st.get(), handle.origin_));
  return handle;
}

enum class Retention {
  keep_all,          // the buffer grows without eviction
  release_consumed,  // chunks are freed once all readers have passed them
};

template <class Producer>
OrderedStream fix_stream(Producer&& producer, Retention retention = Retention::keep_all,
                         Instrument* inst = nullptr) {
  SharedStream handle = fix_shared(std::forward<Producer>(producer), inst);
  if (retention == Retention::keep_all) {
    // The reader's own stream keeps the handle (and with it the origin).
    struct Retaining final : Source {
      SharedStream handle;
      SharedReader r;
      Retaining(SharedStream h) : handle(std::move(h)), r(handle.reader()) {}
      natural pull() override { return r.next(); }
    };
    return make_stream<Retaining>(std::move(handle));
  }
  return handle.reader().stream();
}

// ---------------------------------------------------------------------------
// Wheels as delta streams

namespace detail {

class CircVectorSource final : public Source {
public:
  explicit CircVectorSource(std::shared_ptr<const std::vector<natural>> deltas)
      : deltas_(std::move(deltas)) {}
  natural pull() override {
    natural v = (*deltas_)[pos_];
    if (++pos_ == deltas_->size())
      pos_ = 0;
    return v;
  }

private:
  std::shared_ptr<const std::vector<natural>> deltas_;
  std::size_t pos_ = 0;
};

class CircSharedSource final : public Source {
public:
  explicit CircSharedSource(SharedReader origin) : origin_(origin), cur_(std::move(origin)) {}
  natural pull() override {
    natural v = cur_.next();
    if (v == stream_end) {
      cur_ = origin_;
      v = cur_.next();
      if (v == stream_end)
        throw std::invalid_argument("circ: empty wheel");
    }
    return v;
  }

private:
  SharedReader origin_;
  SharedReader cur_;
};

class SpinSource final : public Source {
public:
  SpinSource(OrderedStream deltas, natural start) : deltas_(std::move(deltas)), cur_(start) {}
  natural pull() override {
    if (!started_) {
      started_ = true;
      return cur_;
    }
    natural d = deltas_.next();
    if (d == stream_end)
      return stream_end;
    cur_ = checked_add(cur_, d);
    return cur_;
  }

private:
  OrderedStream deltas_;
  natural cur_;
  bool started_ = false;
};

}  // namespace detail

/// Endless repetition of a finite delta sequence.
inline OrderedStream circ(std::vector<natural> deltas) {
  if (deltas.empty())
    throw std::invalid_argument("circ: empty wheel");
  return make_stream<detail::CircVectorSource>(
      std::make_shared<const std::vector<natural>>(std::move(deltas)));
}

/// Endless repetition of a memoized (possibly lazily computed) delta sequence.
inline OrderedStream circ(const SharedStream& deltas) {
  return make_stream<detail::CircSharedSource>(deltas.reader());
}

/// start, start+d1, start+d1+d2, ...
inline OrderedStream spin(OrderedStream deltas, natural start) {
  return make_stream<detail::SpinSource>(std::move(deltas), start);
}

// ---------------------------------------------------------------------------
// Right fold over a stream of streams

/// Yields the next inner stream, or nullopt when there are no more.
using StreamGenerator = std::function<std::optional<OrderedStream>()>;

/// foldr unionP [] streams (or dUnionP when `disjoint`). Heads of successive
/// inner streams must increase strictly; inner streams are generated only
/// when the merge needs their heads.
inline OrderedStream fold_union_p(std::shared_ptr<StreamGenerator> streams, bool disjoint,
                                  Instrument* inst = nullptr) {
  return defer([streams, disjoint, inst]() -> OrderedStream {
    std::optional<OrderedStream> head = (*streams)();
    if (!head)
      return OrderedStream{};
    if (inst)
      ++inst->forced_streams;
    OrderedStream rest = fold_union_p(streams, disjoint, inst);
    if (disjoint)
      return d_union_p(std::move(*head), std::move(rest), inst);
    return union_p(std::move(*head), std::move(rest), inst);
  });
}

inline OrderedStream fold_union_p(StreamGenerator streams, bool disjoint,
                                  Instrument* inst = nullptr) {
  return fold_union_p(std::make_shared<StreamGenerator>(std::move(streams)), disjoint, inst);
}

}  // namespace eulersieve
