#pragma once

// Brute-force reference implementations used by the tests. Nothing here is
// shared with the sieves: each function is a direct transcription of the set
// it computes and accepts quadratic-ish cost in exchange for obviousness.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <vector>

#include "core.hpp"

namespace eulersieve::oracle {

/// Upper bound accepted by primes_up_to (bytes of the flag array).
inline constexpr natural default_array_cap = natural{1} << 32;

/// All primes <= n by a boolean-array sieve.
inline std::vector<natural> primes_up_to(natural n, natural cap = default_array_cap) {
  if (n > cap)
    throw cap_exceeded_error("primes_up_to: bound exceeds the configured memory cap");
  std::vector<natural> out;
  if (n < 2)
    return out;
  std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
  for (natural i = 2; i <= n; ++i) {
    if (composite[i])
      continue;
    out.push_back(i);
    for (natural m = i * i; m <= n && i <= n / i; m += i)
      composite[m] = true;
  }
  return out;
}

/// The first `count` primes.
inline std::vector<natural> first_primes(std::size_t count) {
  natural bound = 16;
  for (;;) {
    auto ps = primes_up_to(bound);
    if (ps.size() >= count) {
      ps.resize(count);
      return ps;
    }
    bound *= 2;
  }
}

inline bool is_prime(natural n) {
  if (n < 2)
    return false;
  for (natural d = 2; d <= n / d; ++d)
    if (n % d == 0)
      return false;
  return true;
}

/// Number of primes <= n.
inline std::size_t prime_pi(natural n) { return primes_up_to(n).size(); }

inline natural isqrt(natural n) {
  if (n < 2)
    return n;
  natural r = static_cast<natural>(std::sqrt(static_cast<double>(n)));
  while (r > n / r)
    --r;
  while (r + 1 <= n / (r + 1))
    ++r;
  return r;
}

/// Composites in [2..bound], increasing.
inline std::vector<natural> composites_up_to(natural bound) {
  std::vector<natural> out;
  auto ps = primes_up_to(bound);
  std::size_t j = 0;
  for (natural n = 2; n <= bound; ++n) {
    if (j < ps.size() && ps[j] == n)
      ++j;
    else
      out.push_back(n);
  }
  return out;
}

/// Product of the first k primes. Fits in 64 bits for k <= 15.
inline natural primorial(std::size_t k) {
  if (k > 15)
    throw overflow_error("primorial: exceeds 64 bits");
  natural r = 1;
  for (natural p : first_primes(k))
    r *= p;
  return r;
}

inline natural totient(natural n) {
  natural result = n;
  natural m = n;
  for (natural p = 2; p <= m / p; ++p) {
    if (m % p == 0) {
      while (m % p == 0)
        m /= p;
      result -= result / p;
    }
  }
  if (m > 1)
    result -= result / m;
  return result;
}

// ---------------------------------------------------------------------------
// Erased and surviving sets

struct EulerSets {
  std::size_t k = 0;
  natural bound = 0;
  std::vector<std::vector<natural>> erased;  // erased[i] = E_{i+1}
  std::vector<natural> survivors;            // S_k

  /// E_i are pairwise disjoint and, with S_k, partition [2..bound].
  bool is_partition() const {
    std::vector<int> seen(static_cast<std::size_t>(bound) + 1, 0);
    auto mark = [&](const std::vector<natural>& xs) {
      for (natural x : xs) {
        if (x < 2 || x > bound || seen[x]++)
          return false;
      }
      return true;
    };
    for (const auto& e : erased)
      if (!mark(e))
        return false;
    if (!mark(survivors))
      return false;
    for (natural n = 2; n <= bound; ++n)
      if (seen[n] != 1)
        return false;
    return true;
  }
};

/// E_i = {n >= 2 : no p in P|_{i-1} divides n, p_i divides n, n != p_i},
/// S_k = {n >= 2 : no p in P|_k divides n} together with p_1..p_k.
inline EulerSets euler_sets_brute_force(std::size_t k, natural bound) {
  auto ps = first_primes(k);
  EulerSets out;
  out.k = k;
  out.bound = bound;
  out.erased.resize(k);
  for (natural n = 2; n <= bound; ++n) {
    bool erased = false;
    for (std::size_t i = 0; i < k; ++i) {
      if (n % ps[i] == 0) {
        if (n != ps[i]) {
          out.erased[i].push_back(n);
          erased = true;
        }
        break;
      }
    }
    if (!erased)
      out.survivors.push_back(n);
  }
  return out;
}

/// The same sets by the inductive definition: S_0 = [2..bound],
/// E_{k+1} = p_{k+1} * S_k|^{k+1}, S_{k+1} = S_k \ E_{k+1}, where
/// p_{k+1} is the (k+1)-th element of S_k.
inline EulerSets euler_sets_inductive(std::size_t k, natural bound) {
  EulerSets out;
  out.k = k;
  out.bound = bound;
  std::vector<natural> s;
  for (natural n = 2; n <= bound; ++n)
    s.push_back(n);
  for (std::size_t i = 0; i < k; ++i) {
    if (i >= s.size())
      throw std::invalid_argument("euler_sets_inductive: bound too small for k");
    natural p = s[i];
    std::vector<natural> e;
    for (std::size_t j = i; j < s.size() && s[j] <= bound / p; ++j)
      e.push_back(p * s[j]);
    std::set<natural> drop(e.begin(), e.end());
    std::vector<natural> next;
    for (natural v : s)
      if (!drop.count(v))
        next.push_back(v);
    s = std::move(next);
    out.erased.push_back(std::move(e));
  }
  out.survivors = std::move(s);
  return out;
}

// ---------------------------------------------------------------------------
// Multiplicities

/// Number of times the Bird-style sieve generates composite c:
/// |{p prime : p | c, c/p >= p}|.
inline natural bird_multiplicity(natural c) {
  if (c < 4 || is_prime(c))
    throw std::invalid_argument("bird_multiplicity: argument must be composite");
  natural count = 0;
  for (natural p = 2; p <= c / p; ++p)
    if (c % p == 0 && is_prime(p))
      ++count;
  return count;
}

/// Same count for the wheel-mounted Bird sieve, whose multiples of p are
/// p * {m >= p : gcd(m, 210) = 1}: primes p >= 11 dividing c with c/p >= p
/// and c/p coprime to 210.
inline natural bird_w4_multiplicity(natural c) {
  natural count = 0;
  for (natural p = 11; p <= c / p; ++p) {
    if (c % p != 0 || !is_prime(p))
      continue;
    natural m = c / p;
    if (m % 2 && m % 3 && m % 5 && m % 7)
      ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------
// Smooth numbers

/// {n in [2..bound] : every prime factor of n is in gens}.
inline std::vector<natural> smooth_brute_force(const std::vector<natural>& gens, natural bound) {
  std::vector<natural> out;
  for (natural n = 2; n <= bound; ++n) {
    natural m = n;
    for (natural g : gens)
      while (m % g == 0)
        m /= g;
    if (m == 1)
      out.push_back(n);
  }
  return out;
}

/// The first `count` numbers of the form 2^a 3^b 5^c (1 included), by
/// enumerating exponent triples below a bound and sorting.
inline std::vector<natural> five_smooth(std::size_t count) {
  natural bound = 64;
  for (;;) {
    std::vector<natural> all;
    for (natural a = 1; a <= bound; a *= 2)
      for (natural b = a; b <= bound; b *= 3)
        for (natural c = b; c <= bound; c *= 5)
          all.push_back(c);
    if (all.size() >= count) {
      std::sort(all.begin(), all.end());
      all.resize(count);
      return all;
    }
    bound *= 4;
  }
}

}  // namespace eulersieve::oracle
