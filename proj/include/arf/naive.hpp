#pragma once
// Reference implementations by direct summation. These are the oracles the
// FFT paths are checked against, both in the built-in sampled self-checks
// and in the test suite. Deliberately simple; no clever evaluation order.

#include <complex>
#include <cstdint>

#include "arf/sieve.hpp"

namespace arf::naive {

// sum_{m=1}^{N} v(m) v(m+lag), the raw correlation numerator.
double autocorr_numerator(const FunctionTable& table, std::uint64_t n_terms,
                          std::uint64_t lag);

// sum_{m=1}^{N} v(m) v(n+m) v(m+p) v(n+m+p).
double order3_inner_numerator(const FunctionTable& table,
                              std::uint64_t n_terms, std::uint64_t n,
                              std::uint64_t p);

// Full O(N^3) order-3 quantity.
double order3(const FunctionTable& table, std::uint64_t n_terms);

// (1/N^k) sum over [1,N]^k of the product over nonzero e of v(n.e);
// include_base switches to the full-cube average with a base point
// (table values truncated to [1,N], zero outside).
double cube_sum(const FunctionTable& table, std::uint64_t n_terms,
                unsigned dimension, bool include_base);

// Box average (1/N^{degree+1}) sum over (n, h) in [1,N]^{degree+1} of the
// product over e in {0,1}^degree of f(n + h.e), f zero outside [1, N].
double box_average(const Eigen::ArrayXd& f, unsigned degree);

// Term-by-term exponential sum in long double (independent of the exact
// phase-splitting machinery).
std::complex<double> exp_sum(const FunctionTable& table, std::uint64_t n_terms,
                             double t);

}  // namespace arf::naive
