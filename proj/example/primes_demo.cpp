// A tour of the library: a few sieves, the wheels, Hamming numbers and
// the instrumentation counters.

#include <cstdio>
#include <memory>
#include <vector>

#include <eulersieve/eulersieve.hpp>

using namespace eulersieve;

static void print(const char* label, const std::vector<natural>& xs) {
  std::printf("%-28s", label);
  for (natural x : xs)
    std::printf(" %llu", static_cast<unsigned long long>(x));
  std::printf("\n");
}

int main() {
  print("ES, first 15 primes:", take(es_euler(), 15));
  print("W4, primes <= 60:", take_upto(wheel_euler_w4(), 60));

  OneillSieve pq(true);
  for (int i = 0; i < 999; ++i)
    pq.next();
  std::printf("%-28s %llu (queue holds %zu generators)\n", "O'N4, 1000th prime:",
              static_cast<unsigned long long>(pq.next()), pq.queue_size());

  print("w_3:", wheel_chain(3).deltas);
  print("s_4 prefix:", take(s4(), 12));
  print("5-smooth numbers:", take(hamming_stream(std::vector<natural>{2, 3, 5}), 15));

  auto inst = std::make_shared<Instrument>();
  SieveOptions opts;
  opts.instrument = inst;
  natural p = 0;
  {
    OrderedStream s = make_sieve(*parse_variant("ES"), opts);
    for (int i = 0; i < 10000; ++i)
      p = s.next();
  }
  std::printf("ES up to p_10000 = %llu: %llu composites, %llu comparisons, %llu candidates\n",
              static_cast<unsigned long long>(p),
              static_cast<unsigned long long>(inst->composites),
              static_cast<unsigned long long>(inst->comparisons),
              static_cast<unsigned long long>(inst->pulls));
}
