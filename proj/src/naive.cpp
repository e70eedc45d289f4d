#include "arf/naive.hpp"

#include <cmath>
#include <vector>

#include "arf/phase.hpp"

namespace arf::naive {

double autocorr_numerator(const FunctionTable& table, std::uint64_t n_terms,
                          std::uint64_t lag) {
  table.require_cover(1, n_terms + lag, "autocorrelation");
  CompensatedSum acc;
  for (std::uint64_t m = 1; m <= n_terms; ++m)
    acc.add(table.at(m) * table.at(m + lag));
  return acc.value();
}

double order3_inner_numerator(const FunctionTable& table,
                              std::uint64_t n_terms, std::uint64_t n,
                              std::uint64_t p) {
  table.require_cover(1, n_terms + n + p, "order-3 inner sum");
  CompensatedSum acc;
  for (std::uint64_t m = 1; m <= n_terms; ++m)
    acc.add(table.at(m) * table.at(n + m) * table.at(m + p) *
            table.at(n + m + p));
  return acc.value();
}

double order3(const FunctionTable& table, std::uint64_t n_terms) {
  const std::uint64_t N = n_terms;
  table.require_cover(1, 3 * N, "order-3 quantity");
  CompensatedSum total;
  for (std::uint64_t p = 1; p <= N; ++p)
    for (std::uint64_t n = 1; n <= N; ++n) {
      double inner = 0;
      for (std::uint64_t m = 1; m <= N; ++m)
        inner += table.at(m) * table.at(n + m) * table.at(m + p) *
                 table.at(n + m + p);
      total.add(std::abs(inner));
    }
  const double Nd = static_cast<double>(N);
  return total.value() / (Nd * Nd * Nd);
}

double cube_sum(const FunctionTable& table, std::uint64_t n_terms,
                unsigned dimension, bool include_base) {
  const std::uint64_t N = n_terms;
  if (include_base) {
    Eigen::ArrayXd f(static_cast<Eigen::Index>(N));
    table.require_cover(1, N, "cube sum");
    for (std::uint64_t n = 1; n <= N; ++n)
      f[static_cast<Eigen::Index>(n - 1)] = table.at(n);
    return box_average(f, dimension);
  }
  table.require_cover(1, dimension * N, "cube sum");
  const unsigned k = dimension;
  std::vector<std::uint64_t> idx(k, 1);
  CompensatedSum acc;
  for (;;) {
    double prod = 1;
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
      std::uint64_t dot = 0;
      for (unsigned i = 0; i < k; ++i)
        if (mask & (1u << i)) dot += idx[i];
      prod *= table.at(dot);
      if (prod == 0) break;
    }
    acc.add(prod);
    unsigned j = 0;
    while (j < k && ++idx[j] > N) idx[j++] = 1;
    if (j == k) break;
  }
  return acc.value() / std::pow(static_cast<double>(N), k);
}

double box_average(const Eigen::ArrayXd& f, unsigned degree) {
  const auto N = static_cast<std::uint64_t>(f.size());
  auto val = [&](std::uint64_t n) -> double {
    return (n >= 1 && n <= N) ? f[static_cast<Eigen::Index>(n - 1)] : 0.0;
  };
  const unsigned k = degree;
  std::vector<std::uint64_t> h(k, 1);
  CompensatedSum acc;
  for (;;) {
    for (std::uint64_t n = 1; n <= N; ++n) {
      double prod = 1;
      for (unsigned mask = 0; mask < (1u << k); ++mask) {
        std::uint64_t arg = n;
        for (unsigned i = 0; i < k; ++i)
          if (mask & (1u << i)) arg += h[i];
        prod *= val(arg);
        if (prod == 0) break;
      }
      acc.add(prod);
    }
    unsigned j = 0;
    while (j < k && ++h[j] > N) h[j++] = 1;
    if (j == k) break;
  }
  return acc.value() / std::pow(static_cast<double>(N), k + 1);
}

std::complex<double> exp_sum(const FunctionTable& table, std::uint64_t n_terms,
                             double t) {
  table.require_cover(1, n_terms, "exponential sum");
  long double re = 0, im = 0;
  for (std::uint64_t m = 1; m <= n_terms; ++m) {
    const long double v = table.at(m);
    if (v == 0) continue;
    const long double phase =
        fmodl(static_cast<long double>(t) * static_cast<long double>(m), 1.0L);
    re += v * cosl(2.0L * 3.14159265358979323846264338327950288L * phase);
    im += v * sinl(2.0L * 3.14159265358979323846264338327950288L * phase);
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

}  // namespace arf::naive
