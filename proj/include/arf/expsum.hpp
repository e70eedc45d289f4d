#pragma once
// Weighted exponential sums S(t) = sum_{n<=N} v(n) e(n t), grid suprema,
// and decay profiles.
//
// Precision: phases n*t mod 1 are exact (see phase.hpp) and terms are
// accumulated with compensated summation, so |error| stays ~N*eps ~ 3e-8
// even at N = 2^27 — well inside the 1e-6 contract. Polynomial phases are
// reduced mod 1 per term the same way.
//
// The grid supremum evaluates S on t_j = j/K, j in [0, K), with one
// length-K FFT of the (conjugated) coefficient sequence. Since S is a
// trigonometric polynomial of degree N, sampling at K >= 8N points bounds
// the true supremum by error_factor = 1/cos(pi N / K) times the grid max.

#include <complex>
#include <cstdint>
#include <vector>

#include "arf/fit.hpp"
#include "arf/sieve.hpp"

namespace arf {

struct GridSupremum {
  std::uint64_t n_terms = 0;
  std::uint64_t grid_size = 0;
  double sup_value = 0;    // max over grid of |S(t_j)| / N
  double argmax_t = 0;     // in [0, 1)
  double error_factor = 1; // true sup <= error_factor * sup_value
};

// Unnormalized S(t) = sum_{n=1}^{N} v(n) e^{2 pi i n t}.
std::complex<double> exp_sum(const FunctionTable& table,
                             std::uint64_t n_terms, double t);

// Grid supremum of an arbitrary complex coefficient sequence g(1..N)
// (g[i] is the coefficient of n = i+1). Shared by sup_exp_sum and the
// twisted dynamical probes, so those agree bit-for-bit.
GridSupremum grid_supremum(const Eigen::VectorXcd& coeffs,
                           std::uint64_t grid_size);

GridSupremum sup_exp_sum(const FunctionTable& table, std::uint64_t n_terms,
                         std::uint64_t grid_size);

// sup_exp_sum at each ladder point (grid = next power of two above
// grid_multiplier * N), fitted to the log-power law. Ladder must be
// strictly increasing with >= 4 entries; grid_multiplier >= 8.
DecayFit dd_profile(const FunctionTable& table,
                    const std::vector<std::uint64_t>& ladder,
                    std::uint64_t grid_multiplier = 8);

// sum_{n<=N} v(n) e^{2 pi i p(n)} with p(n) = coeffs[0] + coeffs[1] n + ...
// Degree (coeffs.size() - 1) at most 6.
std::complex<double> poly_exp_sum(const FunctionTable& table,
                                  std::uint64_t n_terms,
                                  const std::vector<double>& coeffs);

// |(1/N) sum Lambda(n) e(nt)| along the ladder with a power-law fit;
// a one-point ladder yields a "degenerate" flag instead of a fit.
DecayFit mangoldt_exp_sum_profile(const FunctionTable& mangoldt,
                                  const std::vector<std::uint64_t>& ladder,
                                  double t);

}  // namespace arf
