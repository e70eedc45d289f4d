#pragma once
// Trial-division oracles for the test suite: classify n by brute-force
// factorization, no sieve involved. Slow on purpose.

#include <cmath>
#include <cstdint>

namespace testol {

struct Factored {
  int distinct = 0;       // omega
  int total = 0;          // big Omega
  bool squarefree = true;
  std::uint64_t prime_base = 0;  // p if n = p^e, else 0
};

inline Factored factor(std::uint64_t n) {
  Factored f;
  std::uint64_t m = n;
  std::uint64_t base = 0;
  bool pure_power = true;
  for (std::uint64_t p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    ++f.distinct;
    if (base == 0) base = p;
    else pure_power = false;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    f.total += e;
    if (e > 1) f.squarefree = false;
  }
  if (m > 1) {
    ++f.distinct;
    ++f.total;
    if (base == 0) base = m;
    else pure_power = false;
  }
  if (pure_power && f.distinct == 1) f.prime_base = base;
  return f;
}

inline double mu(std::uint64_t n) {
  const Factored f = factor(n);
  if (!f.squarefree) return 0.0;
  return f.distinct % 2 ? -1.0 : 1.0;
}

inline double liouville(std::uint64_t n) {
  return factor(n).total % 2 ? -1.0 : 1.0;
}

inline double mangoldt(std::uint64_t n) {
  const Factored f = factor(n);
  return f.prime_base ? std::log(static_cast<double>(f.prime_base)) : 0.0;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

inline double mangoldt_prime(std::uint64_t n) {
  return is_prime(n) ? std::log(static_cast<double>(n)) : 0.0;
}

inline double omega_distinct(std::uint64_t n) {
  return static_cast<double>(factor(n).distinct);
}

inline double squarefree(std::uint64_t n) {
  return factor(n).squarefree ? 1.0 : 0.0;
}

}  // namespace testol
