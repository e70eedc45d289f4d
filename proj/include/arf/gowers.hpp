#pragma once
// Cube sums over [1,N]^k with the product taken over nonzero corners
// (C* convention: prod over e in {0,1}^k \ {0} of v(n.e)), Gowers box
// averages/norms of finitely supported sequences, and the local-factor
// machinery for the von Mangoldt cube asymptotic: beta_p over (Z/pZ)^d,
// the truncated local product, the W-tricked Mangoldt table, and the
// prime-average gap.
//
// Two cube conventions exist side by side. include_base = false is the
// inner-product form above (no base point, the default); include_base
// = true is the standard full-cube average with a base point n, i.e. the
// box average of the table truncated to [1,N].

#include <complex>
#include <cstdint>
#include <functional>
#include <string>

#include "arf/sieve.hpp"

namespace arf {

struct CubeSpec {
  unsigned dimension = 2;    // k
  bool include_base = false; // false = C* product, true = full cube
};

// (1/N^k) sum_{n in [1,N]^k} prod_{e in C*} v(n.e)   (include_base=false)
// box average of v|[1,N] at degree k                  (include_base=true)
// k <= 3 runs on convolutions; k in {4,5} enumerates and requires N <= 64.
double cube_sum(const FunctionTable& table, std::uint64_t n_terms,
                const CubeSpec& spec);

// Box average (1/N^{degree+1}) sum_{n in [1,N], h in [1,N]^degree}
// prod_{e in {0,1}^degree} f(n + h.e), with f zero outside [1,N].
// Degree 2 uses the correlation identity S_2 = sum_{h>=1}
// (A_f(h)^2 - A_{f^2}(h))/2; degree 3 sums S_2 over the outer shift.
double box_average(const Eigen::ArrayXd& values, unsigned degree);

// |box_average|^(1/2^degree). Degree in {2,3}; degree 3 capped at
// N <= 2^16 (quadratic work).
double gowers_box_norm(const Eigen::ArrayXd& values, unsigned degree);

struct LocalFactor {
  std::uint64_t p = 0;
  unsigned dimension = 0;
  std::uint64_t count = 0;  // admissible points of (Z/pZ)^d
  double value = 0;         // beta_p = count p^(2^d-1) / (p^d (p-1)^(2^d-1))
  std::string exact;        // reduced rational, "num/den" or "num"
};

// beta_p(d) = (1/p^d) sum_{n in (Z/pZ)^d} prod_{e in C*} Lambda_{Z/pZ}(n.e)
// with Lambda_{Z/pZ}(b) = p/(p-1) for b nonzero, 0 at b = 0. Exact
// rational arithmetic (128-bit), then rounded once to double.
// Requires p prime <= 10^3, 1 <= d <= 4, p^d <= 10^7.
LocalFactor local_factor(std::uint64_t p, unsigned dimension);

// prod_{p <= cutoff} beta_p(d), multiplied in increasing-p order.
double local_product(unsigned dimension, std::uint64_t prime_cutoff);

// (1/N^d) sum over [1,N]^d of prod_{e in C*} v(n.e) for the Mangoldt
// table: d = 1 is the Chebyshev mean, d = 2 the k=2 cube sum.
double mangoldt_box_sum(const FunctionTable& table, std::uint64_t n_terms,
                        unsigned dimension);

// Lambda'_{b,W}(n) = (phi(W)/W) Lambda'(Wn + b) on [1, N], W = prod of
// primes <= w, Lambda' = Lambda restricted to primes. Sieves [1, WN+b]
// internally (subject to opts.budget). gcd(b, W) must be 1.
FunctionTable w_trick_table(std::uint64_t n_terms, std::uint64_t w,
                            std::uint64_t b, const SieveOptions& opts = {});

// | (1/pi(N)) sum_{p<=N} a(p)  -  (1/N) sum_{n<=N} Lambda'(n) a(n) |.
double prime_average_gap(
    const std::function<std::complex<double>(std::uint64_t)>& a,
    std::uint64_t n_terms, const SieveOptions& opts = {});

}  // namespace arf
