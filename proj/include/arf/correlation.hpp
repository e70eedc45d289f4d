#pragma once
// Self-correlations c_{n,N}(A) = (1/N) sum_{m<=N} A(m) A(m+n) and the
// derived quantities: Cesaro means of |c|, the order-3 double average,
// geometric-sequence summability, and the windowed pair-sum.
//
// All lag sweeps run through one FFT cross-correlation (a and b packed
// into a single complex transform). For {-1,0,1}-valued weights the raw
// numerators are integers; FFT outputs are snapped to those integers and
// the rounding residual must stay < 0.25, otherwise the computation falls
// back to the naive loop. A sampled naive cross-check runs on every call;
// disagreement throws internal_error (the build is broken, not the data).

#include <cstdint>
#include <vector>

#include "arf/sieve.hpp"

namespace arf {

struct CorrelationProfile {
  FunctionKind kind = FunctionKind::custom;
  std::uint64_t n_terms = 0;
  std::uint64_t max_lag = 0;
  Eigen::ArrayXd values;  // values[n] = c_{n,N}, n in [0, max_lag]
  // Diagnostics: did the FFT path run, was output snapped to integer
  // numerators, worst pre-snap residual, N beyond the exactness limit.
  bool fft_used = true;
  bool integer_exact = false;
  double max_residual = 0;
  bool precision_warning = false;
};

CorrelationProfile autocorrelation(const FunctionTable& table,
                                   std::uint64_t n_terms,
                                   std::uint64_t max_lag);

// (1/N) sum_{n=1}^{N} |c_{n,N}|; lag 0 is excluded. Requires
// profile.max_lag >= profile.n_terms.
double cesaro_abs(const CorrelationProfile& profile);

// (1/N^2) sum_{n,p=1}^{N} |(1/N) sum_{m=1}^{N} v(m)v(n+m)v(m+p)v(n+m+p)|,
// one FFT correlation per p. Needs coverage [1, 3N].
double order3_quantity(const FunctionTable& table, std::uint64_t n_terms);

struct GeometricLevel {
  std::uint64_t level = 0;    // m
  std::uint64_t n_terms = 0;  // floor(rho^m)
  double mean_abs = 0;        // (1/N) sum_{n<=N} |c_{n,N}|
  double partial_sum = 0;     // running sum of mean_abs
  std::uint64_t witness_lag = 0;
  double witness_value = 0;   // c at the |c|-minimizing lag
};

struct GeometricSummabilitySeries {
  double rho = 0;
  std::vector<GeometricLevel> levels;
};

// Partial sums of sum_m (1/floor(rho^m)) sum_n |c_{n,floor(rho^m)}| for
// m = 1..levels, with the smallest-|c| witness lag per level. The table
// must cover [1, 2*floor(rho^levels)].
GeometricSummabilitySeries geometric_summability(const FunctionTable& table,
                                                 double rho,
                                                 unsigned levels);

// (1/(H X)) sum_{h=1}^{H} |sum_{n=1}^{X} v(n) v(n+h)|. Equals
// cesaro_abs over the same range when H = X.
double mrt_window_sum(const FunctionTable& table, std::uint64_t x_terms,
                      std::uint64_t window);

// (1/N) sum_{m<=N} v(m)^2 v(m+lag)^2.
double squared_correlation(const FunctionTable& table, std::uint64_t n_terms,
                           std::uint64_t lag);

}  // namespace arf
