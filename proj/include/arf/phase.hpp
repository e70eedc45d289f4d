#pragma once
// Exact fractional parts of alpha*n^i for double alpha and integer n, plus
// compensated accumulators.
//
// A double alpha is the exact binary rational m * 2^-k (|m| < 2^53). For
// k <= 64 the fractional part of alpha*n^i is (m*n^i mod 2^k) / 2^k, and
// m*n^i mod 2^64 is just wrap-around uint64 multiplication, so the phase is
// computed exactly (one final rounding to double) no matter how large n^i
// gets. Direct evaluation of alpha*n^6 at n ~ 10^6 would need ~120 bits;
// this route needs none of them. Frequencies below 2^-11 in magnitude fall
// back to a long-double fmod (not used by anything precision-critical).

#include <cmath>
#include <complex>
#include <cstdint>

namespace arf {

inline constexpr double two_pi = 6.283185307179586476925286766559;

namespace detail {
struct FracSplit {
  std::uint64_t m = 0;  // mantissa as two's-complement uint64
  int k = 0;            // alpha = m * 2^-k
  bool exact = false;   // k in [1, 64]
  double alpha = 0;
};
inline FracSplit split_frac(double alpha) {
  FracSplit s;
  s.alpha = alpha;
  if (alpha == 0 || !std::isfinite(alpha)) return s;  // frac path returns 0
  int e = 0;
  double mant = std::frexp(alpha, &e);           // alpha = mant * 2^e
  auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));
  int k = 53 - e;
  if (k <= 0) { s.exact = true; s.k = 0; return s; }  // alpha * n is integral
  if (k > 64) return s;
  s.m = static_cast<std::uint64_t>(m);
  s.k = k;
  s.exact = true;
  return s;
}
inline double frac_from_residue(std::uint64_t r, int k) {
  if (k == 0) return 0.0;
  if (k < 64) r &= (std::uint64_t{1} << k) - 1;
  double f = std::ldexp(static_cast<double>(r), -k);
  if (f >= 1.0) f -= 1.0;  // residue can round up to 2^k
  return f;
}
}  // namespace detail

// {alpha * n^power} in [0, 1).
inline double frac_monomial(double alpha, std::uint64_t n, unsigned power) {
  detail::FracSplit s = detail::split_frac(alpha);
  if (s.exact) {
    std::uint64_t np = 1;
    for (unsigned i = 0; i < power; ++i) np *= n;  // mod 2^64 by wrap-around
    return detail::frac_from_residue(s.m * np, s.k);
  }
  long double x = alpha;
  for (unsigned i = 0; i < power; ++i) x *= static_cast<long double>(n);
  long double f = x - std::floor(static_cast<double>(x));
  f -= std::floor(static_cast<long double>(f));
  return static_cast<double>(f);
}

inline double frac_mul(double alpha, std::uint64_t n) {
  return frac_monomial(alpha, n, 1);
}

// {c_0 + c_1 n + ... + c_d n^d} in [0, 1).
inline double frac_poly(const double* coeffs, std::size_t ncoeffs,
                        std::uint64_t n) {
  double f = 0;
  for (std::size_t i = 0; i < ncoeffs; ++i)
    f += frac_monomial(coeffs[i], n, static_cast<unsigned>(i));
  f -= std::floor(f);
  return f;
}

// e(theta) for theta given as a fractional part of a revolution.
inline std::complex<double> e_frac(double frac) {
  return {std::cos(two_pi * frac), std::sin(two_pi * frac)};
}

// Neumaier-compensated accumulator; error stays O(eps) independent of the
// number of terms.
struct CompensatedSum {
  double s = 0, c = 0;
  void add(double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

struct CompensatedComplexSum {
  CompensatedSum re, im;
  void add(std::complex<double> z) {
    re.add(z.real());
    im.add(z.imag());
  }
  std::complex<double> value() const { return {re.value(), im.value()}; }
};

inline std::uint64_t next_pow2(std::uint64_t n) {
  std::uint64_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace arf
