#pragma once
// Segmented sieve for arithmetic-function tables on [1, limit].
//
// One factorization kernel serves every kind: each segment tracks, per n,
// the unfactored remainder after dividing out all primes <= sqrt(limit),
// the number of prime factors with multiplicity (Omega), the number of
// distinct small primes, and the smallest one. From those:
//   mu(n)      = (-1)^Omega if squarefree else 0
//   lambda(n)  = (-1)^Omega                      (lambda(1) = +1, Omega(1) = 0)
//   Lambda(n)  = log p if n = p^a else 0
//   omega kind = Omega (with multiplicity)
// A remainder > 1 after the small-prime pass is a single prime > sqrt(limit)
// (exponent 1). Tables are 1-indexed: values[i] is the value at offset + i.

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "arf/errors.hpp"

namespace arf {

enum class FunctionKind : std::uint8_t {
  mobius = 0,
  liouville = 1,
  mangoldt = 2,
  omega = 3,
  squarefree = 4,
  unit = 5,
  custom = 6,
};

const char* kind_name(FunctionKind k);
FunctionKind kind_from_name(const std::string& name);  // throws usage_error

// Above this many terms the FFT's integer-snapping guarantee for
// correlation/convolution numerators is no longer claimed (the guard
// residual could pass while the rounding is wrong). Matches the default
// sieve budget, so it is unreachable without raising that budget too.
inline constexpr std::uint64_t kIntegerExactnessLimit = std::uint64_t{1}
                                                        << 27;

// Kinds whose values are integers; correlations and convolutions of such
// tables have integer numerators that double arithmetic can hold exactly.
inline bool integer_valued(FunctionKind k) {
  switch (k) {
    case FunctionKind::mobius:
    case FunctionKind::liouville:
    case FunctionKind::omega:
    case FunctionKind::squarefree:
    case FunctionKind::unit:
      return true;
    default:
      return false;
  }
}

struct FunctionTable {
  FunctionKind kind = FunctionKind::custom;
  std::uint64_t offset = 1;  // index of values[0]; always >= 1
  Eigen::ArrayXd values;

  std::uint64_t length() const {
    return static_cast<std::uint64_t>(values.size());
  }
  std::uint64_t last() const { return offset + length() - 1; }
  bool covers(std::uint64_t lo, std::uint64_t hi) const {
    return length() > 0 && offset <= lo && hi <= last();
  }
  // Throws coverage_error naming the range if [lo, hi] is not covered.
  void require_cover(std::uint64_t lo, std::uint64_t hi,
                     const char* what) const;
  double at(std::uint64_t n) const {  // n is the arithmetic argument
    return values[static_cast<Eigen::Index>(n - offset)];
  }
};

struct SieveOptions {
  std::uint64_t budget = std::uint64_t{1} << 27;   // max table entries
  std::uint64_t segment = std::uint64_t{1} << 22;  // entries per segment
};

// Exact table of `kind` on [1, limit]. Deterministic for any thread count
// and any segment size. Throws resource_error when limit exceeds the
// budget, usage_error for kind == custom.
FunctionTable sieve_table(FunctionKind kind, std::uint64_t limit,
                          const SieveOptions& opts = {});

// Lambda restricted to primes (log p at p, 0 elsewhere, including prime
// powers), as a custom-kind table. Used by the W-trick and prime-average
// comparisons.
FunctionTable mangoldt_prime_table(std::uint64_t limit,
                                   const SieveOptions& opts = {});

}  // namespace arf
