#include "arf/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "arf/fft.hpp"
#include "arf/parallel.hpp"
#include "arf/phase.hpp"

namespace arf {

std::complex<double> exp_sum(const FunctionTable& table,
                             std::uint64_t n_terms, double t) {
  if (n_terms < 1) throw usage_error("exp_sum needs n_terms >= 1");
  table.require_cover(1, n_terms, "exp_sum");
  const detail::FracSplit s = detail::split_frac(t);
  CompensatedComplexSum acc;
  for (std::uint64_t n = 1; n <= n_terms; ++n) {
    const double v = table.at(n);
    if (v == 0) continue;
    const double f = s.exact ? detail::frac_from_residue(s.m * n, s.k)
                             : frac_mul(t, n);
    acc.add(v * e_frac(f));
  }
  return acc.value();
}

GridSupremum grid_supremum(const Eigen::VectorXcd& coeffs,
                           std::uint64_t grid_size) {
  const auto n_terms = static_cast<std::uint64_t>(coeffs.size());
  if (n_terms < 1) throw usage_error("grid supremum needs n_terms >= 1");
  if (grid_size < 8 * n_terms)
    throw usage_error("grid size " + std::to_string(grid_size) +
                      " violates the K >= 8N rule (need >= " +
                      std::to_string(8 * n_terms) + ")");
  const auto K = static_cast<Eigen::Index>(grid_size);
  Eigen::VectorXcd buf = Eigen::VectorXcd::Zero(K);
  // S(t_j) = conj(FFT(conj(g)))(j); coefficient of n sits at slot n.
  for (std::uint64_t n = 1; n <= n_terms; ++n)
    buf[static_cast<Eigen::Index>(n)] =
        std::conj(coeffs[static_cast<Eigen::Index>(n - 1)]);
  const Eigen::VectorXcd spec = fft_forward(buf);
  Eigen::Index best = 0;
  double best_norm2 = std::norm(spec[0]);
  for (Eigen::Index j = 1; j < K; ++j) {
    const double n2 = std::norm(spec[j]);
    if (n2 > best_norm2) {
      best_norm2 = n2;
      best = j;
    }
  }
  GridSupremum out;
  out.n_terms = n_terms;
  out.grid_size = grid_size;
  out.sup_value = std::sqrt(best_norm2) / static_cast<double>(n_terms);
  out.argmax_t = static_cast<double>(best) / static_cast<double>(grid_size);
  out.error_factor =
      1.0 / std::cos(std::numbers::pi * static_cast<double>(n_terms) /
                     static_cast<double>(grid_size));
  return out;
}

GridSupremum sup_exp_sum(const FunctionTable& table, std::uint64_t n_terms,
                         std::uint64_t grid_size) {
  if (n_terms < 1) throw usage_error("sup_exp_sum needs n_terms >= 1");
  table.require_cover(1, n_terms, "sup_exp_sum");
  Eigen::VectorXcd g(static_cast<Eigen::Index>(n_terms));
  for (std::uint64_t n = 1; n <= n_terms; ++n)
    g[static_cast<Eigen::Index>(n - 1)] = table.at(n);
  return grid_supremum(g, grid_size);
}

DecayFit dd_profile(const FunctionTable& table,
                    const std::vector<std::uint64_t>& ladder,
                    std::uint64_t grid_multiplier) {
  if (ladder.size() < 4)
    throw usage_error("decay profile needs a ladder of >= 4 points");
  for (std::size_t i = 1; i < ladder.size(); ++i)
    if (ladder[i] <= ladder[i - 1])
      throw usage_error("ladder must be strictly increasing");
  if (grid_multiplier < 8)
    throw usage_error("grid multiplier must be >= 8 (the K >= 8N rule)");
  table.require_cover(1, ladder.back(), "dd_profile");
  std::vector<double> sups(ladder.size());
  parallel_for(0, ladder.size(), [&](std::uint64_t i) {
    const std::uint64_t N = ladder[i];
    sups[i] = sup_exp_sum(table, N, next_pow2(grid_multiplier * N)).sup_value;
  }, 1);
  std::vector<std::pair<double, double>> points;
  points.reserve(ladder.size());
  for (std::size_t i = 0; i < ladder.size(); ++i)
    points.emplace_back(static_cast<double>(ladder[i]), sups[i]);
  return fit_log_power(points);
}

std::complex<double> poly_exp_sum(const FunctionTable& table,
                                  std::uint64_t n_terms,
                                  const std::vector<double>& coeffs) {
  if (coeffs.empty()) throw usage_error("polynomial phase needs coefficients");
  if (coeffs.size() > 7)
    throw usage_error("polynomial phase degree is capped at 6");
  if (n_terms < 1) throw usage_error("poly_exp_sum needs n_terms >= 1");
  table.require_cover(1, n_terms, "poly_exp_sum");
  CompensatedComplexSum acc;
  for (std::uint64_t n = 1; n <= n_terms; ++n) {
    const double v = table.at(n);
    if (v == 0) continue;
    acc.add(v * e_frac(frac_poly(coeffs.data(), coeffs.size(), n)));
  }
  return acc.value();
}

DecayFit mangoldt_exp_sum_profile(const FunctionTable& mangoldt,
                                  const std::vector<std::uint64_t>& ladder,
                                  double t) {
  if (ladder.empty()) throw usage_error("profile ladder must not be empty");
  mangoldt.require_cover(1, *std::max_element(ladder.begin(), ladder.end()),
                         "mangoldt_exp_sum_profile");
  std::vector<std::pair<double, double>> points;
  points.reserve(ladder.size());
  for (const std::uint64_t N : ladder)
    points.emplace_back(static_cast<double>(N),
                        std::abs(exp_sum(mangoldt, N, t)) /
                            static_cast<double>(N));
  if (points.size() < 2) {
    DecayFit fit;
    fit.model = DecayFit::Model::power;
    fit.C = points[0].second;
    fit.points = points;
    fit.flag = "degenerate";
    return fit;
  }
  return fit_power(points);
}

}  // namespace arf
