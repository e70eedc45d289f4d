#include "arf/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "arf/errors.hpp"
#include "arf/fft.hpp"
#include "arf/naive.hpp"
#include "arf/parallel.hpp"
#include "arf/phase.hpp"

namespace arf {
namespace {

struct LagSums {
  Eigen::ArrayXd values;   // values[l] = sum_{m=1}^{na} a(m) b(m+l)
  double max_residual = 0; // worst |raw - round(raw)| seen while snapping
  bool snapped = false;
};

// Correlation numerators r(l) = sum_{j=0}^{na-1} a[j] b[j+l] for
// l = 0..max_lag via one packed complex transform: with z = a + i b,
// F_a(k) = (Z(k) + conj(Z(M-k)))/2 and F_b(k) = (Z(k) - conj(Z(M-k)))/(2i),
// and r = ifft(conj(F_a) .* F_b). M >= na + max_lag kills circular wrap.
LagSums cross_correlate(const double* a, std::uint64_t na, const double* b,
                        std::uint64_t nb, std::uint64_t max_lag,
                        bool snap_integer) {
  if (nb < na + max_lag)
    throw internal_error("cross_correlate: b too short for requested lags");
  const std::uint64_t need = std::max(nb, na + max_lag);
  const auto M = static_cast<Eigen::Index>(next_pow2(need));
  Eigen::VectorXcd z = Eigen::VectorXcd::Zero(M);
  for (std::uint64_t j = 0; j < na; ++j)
    z[static_cast<Eigen::Index>(j)] = {a[j], b[j]};
  for (std::uint64_t j = na; j < nb; ++j)
    z[static_cast<Eigen::Index>(j)] = {0.0, b[j]};
  Eigen::VectorXcd Z = fft_forward(z);
  Eigen::VectorXcd C(M);
  const std::complex<double> half_i(0.0, -0.5);
  for (Eigen::Index k = 0; k < M; ++k) {
    const std::complex<double> zk = Z[k];
    const std::complex<double> zr = std::conj(Z[k == 0 ? 0 : M - k]);
    const std::complex<double> fa = 0.5 * (zk + zr);
    const std::complex<double> fb = half_i * (zk - zr);
    C[k] = std::conj(fa) * fb;
  }
  Eigen::VectorXcd c = fft_inverse(C);
  LagSums out;
  out.values.resize(static_cast<Eigen::Index>(max_lag + 1));
  for (std::uint64_t l = 0; l <= max_lag; ++l) {
    double v = c[static_cast<Eigen::Index>(l)].real();
    if (snap_integer) {
      const double r = std::nearbyint(v);
      out.max_residual = std::max(out.max_residual, std::abs(v - r));
      v = r;
    }
    out.values[static_cast<Eigen::Index>(l)] = v;
  }
  out.snapped = snap_integer;
  return out;
}

// Numerators by the direct loop, used as fallback when FFT rounding is not
// trustworthy. Exact for integer-valued weights (sums stay below 2^53).
Eigen::ArrayXd naive_lag_sums(const double* a, std::uint64_t na,
                              const double* b, std::uint64_t max_lag) {
  Eigen::ArrayXd values(static_cast<Eigen::Index>(max_lag + 1));
  for (std::uint64_t l = 0; l <= max_lag; ++l) {
    CompensatedSum acc;
    for (std::uint64_t j = 0; j < na; ++j) acc.add(a[j] * b[j + l]);
    values[static_cast<Eigen::Index>(l)] = acc.value();
  }
  return values;
}

}  // namespace

CorrelationProfile autocorrelation(const FunctionTable& table,
                                   std::uint64_t n_terms,
                                   std::uint64_t max_lag) {
  if (n_terms == 0) throw usage_error("autocorrelation: n_terms must be >= 1");
  table.require_cover(1, n_terms + max_lag, "autocorrelation");

  CorrelationProfile out;
  out.kind = table.kind;
  out.n_terms = n_terms;
  out.max_lag = max_lag;

  std::vector<double> seq(n_terms + max_lag);
  for (std::uint64_t m = 1; m <= n_terms + max_lag; ++m)
    seq[m - 1] = table.at(m);

  const bool integer_kind = integer_valued(table.kind);
  const bool snap = integer_kind && n_terms <= kIntegerExactnessLimit;
  out.precision_warning = integer_kind && !snap;

  LagSums sums = cross_correlate(seq.data(), n_terms, seq.data(), seq.size(),
                                 max_lag, snap);
  out.max_residual = sums.max_residual;
  if (snap && sums.max_residual >= 0.25) {
    // FFT rounding is not a safe integer witness here; recompute directly.
    sums.values = naive_lag_sums(seq.data(), n_terms, seq.data(), max_lag);
    out.fft_used = false;
  }
  out.integer_exact = snap;

  // Sampled oracle check: a few lags against the direct loop. Disagreement
  // means the fast path itself is broken.
  {
    std::uint64_t probes[4] = {0, max_lag, (3 * max_lag) / 7,
                               (5 * max_lag) / 9};
    for (std::uint64_t lag : probes) {
      const double fast = sums.values[static_cast<Eigen::Index>(lag)];
      const double slow = naive::autocorr_numerator(table, n_terms, lag);
      const double tol =
          snap ? 0.0 : 1e-9 * (std::abs(slow) + static_cast<double>(n_terms));
      if (std::abs(fast - slow) > tol)
        throw internal_error("autocorrelation: FFT path disagrees with "
                             "direct summation at lag " + std::to_string(lag));
    }
  }

  out.values = sums.values / static_cast<double>(n_terms);
  return out;
}

double cesaro_abs(const CorrelationProfile& profile) {
  const std::uint64_t N = profile.n_terms;
  if (profile.max_lag < N)
    throw usage_error(
        "cesaro_abs: profile needs max_lag >= n_terms (lags 1..N)");
  CompensatedSum acc;
  for (std::uint64_t n = 1; n <= N; ++n)
    acc.add(std::abs(profile.values[static_cast<Eigen::Index>(n)]));
  return acc.value() / static_cast<double>(N);
}

double order3_quantity(const FunctionTable& table, std::uint64_t n_terms) {
  const std::uint64_t N = n_terms;
  if (N == 0) throw usage_error("order3_quantity: n_terms must be >= 1");
  table.require_cover(1, 3 * N, "order3_quantity");

  const bool snap =
      integer_valued(table.kind) && N <= kIntegerExactnessLimit;

  // For fixed p the inner sums over m are the self-correlations of
  // b_p(m) = v(m) v(m+p); one packed FFT per p, lags n = 1..N.
  std::vector<double> per_p(N + 1, 0.0);
  parallel_for(
      1, N + 1,
      [&](std::uint64_t p) {
        std::vector<double> b(2 * N);
        for (std::uint64_t m = 1; m <= 2 * N; ++m)
          b[m - 1] = table.at(m) * table.at(m + p);
        LagSums sums =
            cross_correlate(b.data(), N, b.data(), b.size(), N, snap);
        if (snap && sums.max_residual >= 0.25)
          sums.values = naive_lag_sums(b.data(), N, b.data(), N);
        // Spot-check two inner sums of the first and middle p against the
        // quadruple-product loop.
        if (p == 1 || p == N / 2 + 1) {
          for (std::uint64_t n : {std::uint64_t{1}, N}) {
            const double fast = sums.values[static_cast<Eigen::Index>(n)];
            const double slow =
                naive::order3_inner_numerator(table, N, n, p);
            const double tol =
                snap ? 0.0
                     : 1e-9 * (std::abs(slow) + static_cast<double>(N));
            if (std::abs(fast - slow) > tol)
              throw internal_error(
                  "order3_quantity: FFT inner sum disagrees with direct "
                  "summation at p=" + std::to_string(p));
          }
        }
        CompensatedSum acc;
        for (std::uint64_t n = 1; n <= N; ++n)
          acc.add(std::abs(sums.values[static_cast<Eigen::Index>(n)]));
        per_p[p] = acc.value();
      },
      1);

  CompensatedSum total;  // serial, index order: thread-count independent
  for (std::uint64_t p = 1; p <= N; ++p) total.add(per_p[p]);
  const double Nd = static_cast<double>(N);
  return total.value() / (Nd * Nd * Nd);
}

GeometricSummabilitySeries geometric_summability(const FunctionTable& table,
                                                 double rho,
                                                 unsigned levels) {
  if (!(rho > 1.0))
    throw usage_error("geometric_summability: rho must be > 1");
  if (levels == 0)
    throw usage_error("geometric_summability: levels must be >= 1");

  GeometricSummabilitySeries out;
  out.rho = rho;
  out.levels.reserve(levels);
  CompensatedSum partial;
  for (unsigned m = 1; m <= levels; ++m) {
    const double power = std::pow(rho, static_cast<double>(m));
    const auto N = static_cast<std::uint64_t>(std::floor(power));
    CorrelationProfile prof = autocorrelation(table, N, N);
    GeometricLevel lvl;
    lvl.level = m;
    lvl.n_terms = N;
    lvl.mean_abs = cesaro_abs(prof);
    partial.add(lvl.mean_abs);
    lvl.partial_sum = partial.value();
    lvl.witness_lag = 1;
    lvl.witness_value = prof.values[1];
    for (std::uint64_t n = 2; n <= N; ++n) {
      const double c = prof.values[static_cast<Eigen::Index>(n)];
      if (std::abs(c) < std::abs(lvl.witness_value)) {
        lvl.witness_lag = n;
        lvl.witness_value = c;
      }
    }
    out.levels.push_back(lvl);
  }
  return out;
}

double mrt_window_sum(const FunctionTable& table, std::uint64_t x_terms,
                      std::uint64_t window) {
  const std::uint64_t X = x_terms, H = window;
  if (H == 0) throw usage_error("mrt_window_sum: window must be >= 1");
  if (H > X) throw usage_error("mrt_window_sum: window must satisfy H <= X");
  // Evaluated as (1/H) sum_h |r(h)/X| — the same doubles, in the same
  // order, as cesaro_abs over an autocorrelation profile, so that the
  // H = X cross-check is bit-identical.
  CorrelationProfile prof = autocorrelation(table, X, H);
  CompensatedSum acc;
  for (std::uint64_t h = 1; h <= H; ++h)
    acc.add(std::abs(prof.values[static_cast<Eigen::Index>(h)]));
  return acc.value() / static_cast<double>(H);
}

double squared_correlation(const FunctionTable& table, std::uint64_t n_terms,
                           std::uint64_t lag) {
  const std::uint64_t N = n_terms;
  if (N == 0)
    throw usage_error("squared_correlation: n_terms must be >= 1");
  table.require_cover(1, N + lag, "squared_correlation");
  CompensatedSum acc;
  for (std::uint64_t m = 1; m <= N; ++m) {
    const double u = table.at(m), v = table.at(m + lag);
    acc.add(u * u * v * v);
  }
  return acc.value() / static_cast<double>(N);
}

}  // namespace arf
