#include "arf/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "arf/errors.hpp"
#include "arf/fft.hpp"
#include "arf/gowers.hpp"
#include "arf/parallel.hpp"
#include "arf/phase.hpp"

namespace arf {
namespace {

bool is_prime_u64(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

// Phase polynomial of the orbit observable: u(t) = e(sum_i c[i] t^i).
std::vector<double> phase_coeffs(const ToySystem& sys) {
  if (const auto* rot = std::get_if<RotationSystem>(&sys.dynamics)) {
    const double k = static_cast<double>(rot->character);
    return {k * sys.x0, k * rot->alpha};
  }
  const auto& poly = std::get<PolyphaseSystem>(sys.dynamics);
  if (poly.coefficients.size() > 7)
    throw usage_error("polyphase system: phase degree is capped at 6");
  std::vector<double> c = poly.coefficients;
  if (c.empty()) c.push_back(0.0);
  c[0] += sys.x0;
  return c;
}

std::complex<double> observe(const std::vector<double>& c, std::uint64_t t) {
  return e_frac(frac_poly(c.data(), c.size(), t));
}

bool all_unit(const Eigen::VectorXcd& u) {
  for (Eigen::Index i = 0; i < u.size(); ++i)
    if (u[i] != std::complex<double>(1.0, 0.0)) return false;
  return true;
}

// Snap a convolution of integer-valued real sequences: real parts to the
// nearest integer, imaginary parts to zero. Returns the worst residual.
double snap_integer_conv(Eigen::VectorXcd& conv) {
  double worst = 0;
  for (Eigen::Index i = 0; i < conv.size(); ++i) {
    const double r = std::nearbyint(conv[i].real());
    worst = std::max(worst, std::abs(conv[i].real() - r));
    worst = std::max(worst, std::abs(conv[i].imag()));
    conv[i] = r;
  }
  return worst;
}

Eigen::VectorXcd convolve_direct(const Eigen::VectorXcd& a,
                                 const Eigen::VectorXcd& b) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(a.size() + b.size() - 1);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

}  // namespace

Eigen::VectorXcd observable_table(const ToySystem& system,
                                  std::uint64_t t_max) {
  const std::vector<double> c = phase_coeffs(system);
  Eigen::VectorXcd u(static_cast<Eigen::Index>(t_max + 1));
  for (std::uint64_t t = 0; t <= t_max; ++t)
    u[static_cast<Eigen::Index>(t)] = observe(c, t);
  return u;
}

CubicAverageResult cubic_weighted_average(
    unsigned order, const FunctionTable& weight,
    const std::vector<ToySystem>& systems, std::uint64_t n_terms) {
  const std::uint64_t N = n_terms;
  if (order != 2 && order != 3)
    throw usage_error("cubic_weighted_average: order must be 2 or 3");
  const unsigned nsys = (1u << order) - 1;
  if (systems.size() != nsys)
    throw usage_error("cubic_weighted_average: order " +
                      std::to_string(order) + " needs exactly " +
                      std::to_string(nsys) + " systems");
  if (N == 0)
    throw usage_error("cubic_weighted_average: n_terms must be >= 1");
  weight.require_cover(1, order * N, "cubic_weighted_average");

  std::vector<Eigen::VectorXcd> u;
  u.reserve(nsys);
  for (const ToySystem& s : systems)
    u.push_back(observable_table(s, order * N));

  bool unit_obs = true;
  for (const auto& tab : u) unit_obs = unit_obs && all_unit(tab);
  const bool snap = unit_obs && integer_valued(weight.kind) &&
                    N <= kIntegerExactnessLimit;

  CubicAverageResult out;
  out.order = order;
  out.n_terms = N;
  out.weight_kind = weight.kind;
  out.integer_exact = snap;

  const double Nd = static_cast<double>(N);
  if (order == 2) {
    Eigen::VectorXcd a(static_cast<Eigen::Index>(N));
    Eigen::VectorXcd b(static_cast<Eigen::Index>(N));
    for (std::uint64_t n = 1; n <= N; ++n) {
      const auto i = static_cast<Eigen::Index>(n - 1);
      const auto t = static_cast<Eigen::Index>(n);
      a[i] = weight.at(n) * u[0][t];
      b[i] = weight.at(n) * u[1][t];
    }
    Eigen::VectorXcd conv = convolve(a, b);  // index t <-> s = t + 2
    if (snap && snap_integer_conv(conv) >= 0.25) conv = convolve_direct(a, b);
    CompensatedComplexSum acc;
    for (std::uint64_t s = 2; s <= 2 * N; ++s)
      acc.add(conv[static_cast<Eigen::Index>(s - 2)] * weight.at(s) *
              u[2][static_cast<Eigen::Index>(s)]);
    out.value = acc.value() / (Nd * Nd);
  } else {
    std::vector<std::complex<double>> per_p(N + 1, {0.0, 0.0});
    parallel_for(
        1, N + 1,
        [&](std::uint64_t p) {
          const std::complex<double> gp =
              weight.at(p) * u[3][static_cast<Eigen::Index>(p)];
          if (gp == std::complex<double>(0.0, 0.0)) return;
          Eigen::VectorXcd a(static_cast<Eigen::Index>(N));
          Eigen::VectorXcd b(static_cast<Eigen::Index>(N));
          for (std::uint64_t m = 1; m <= N; ++m) {
            const auto i = static_cast<Eigen::Index>(m - 1);
            const double ww = weight.at(m) * weight.at(m + p);
            a[i] = ww * u[0][static_cast<Eigen::Index>(m)] *
                   u[4][static_cast<Eigen::Index>(m + p)];
            b[i] = ww * u[1][static_cast<Eigen::Index>(m)] *
                   u[5][static_cast<Eigen::Index>(m + p)];
          }
          Eigen::VectorXcd conv = convolve(a, b);
          if (snap && snap_integer_conv(conv) >= 0.25)
            conv = convolve_direct(a, b);
          CompensatedComplexSum acc;
          for (std::uint64_t s = 2; s <= 2 * N; ++s)
            acc.add(conv[static_cast<Eigen::Index>(s - 2)] * weight.at(s) *
                    weight.at(s + p) * u[2][static_cast<Eigen::Index>(s)] *
                    u[6][static_cast<Eigen::Index>(s + p)]);
          per_p[p] = gp * acc.value();
        },
        1);
    CompensatedComplexSum total;
    for (std::uint64_t p = 1; p <= N; ++p) total.add(per_p[p]);
    out.value = total.value() / (Nd * Nd * Nd);
  }

  // Built-in oracle at small N: the loop must agree to ~1e-9.
  if ((order == 2 && N <= 4096) || (order == 3 && N <= 256)) {
    const std::complex<double> direct =
        direct_cubic_average(order, weight, systems, N);
    if (std::abs(out.value - direct) > 1e-9 * (1.0 + std::abs(direct)))
      throw internal_error(
          "cubic_weighted_average: convolution path disagrees with the "
          "direct loop");
  }
  return out;
}

std::complex<double> direct_cubic_average(
    unsigned order, const FunctionTable& weight,
    const std::vector<ToySystem>& systems, std::uint64_t n_terms) {
  const std::uint64_t N = n_terms;
  if (order != 2 && order != 3)
    throw usage_error("direct_cubic_average: order must be 2 or 3");
  const unsigned nsys = (1u << order) - 1;
  if (systems.size() != nsys)
    throw usage_error("direct_cubic_average: wrong system count");
  weight.require_cover(1, order * N, "direct_cubic_average");
  std::vector<Eigen::VectorXcd> u;
  u.reserve(nsys);
  for (const ToySystem& s : systems)
    u.push_back(observable_table(s, order * N));
  const double Nd = static_cast<double>(N);
  CompensatedComplexSum acc;
  if (order == 2) {
    for (std::uint64_t n = 1; n <= N; ++n)
      for (std::uint64_t m = 1; m <= N; ++m)
        acc.add(weight.at(n) * weight.at(m) * weight.at(n + m) *
                u[0][static_cast<Eigen::Index>(n)] *
                u[1][static_cast<Eigen::Index>(m)] *
                u[2][static_cast<Eigen::Index>(n + m)]);
    return acc.value() / (Nd * Nd);
  }
  for (std::uint64_t n1 = 1; n1 <= N; ++n1)
    for (std::uint64_t n2 = 1; n2 <= N; ++n2)
      for (std::uint64_t n3 = 1; n3 <= N; ++n3)
        acc.add(weight.at(n1) * weight.at(n2) * weight.at(n1 + n2) *
                weight.at(n3) * weight.at(n1 + n3) * weight.at(n2 + n3) *
                weight.at(n1 + n2 + n3) *
                u[0][static_cast<Eigen::Index>(n1)] *
                u[1][static_cast<Eigen::Index>(n2)] *
                u[2][static_cast<Eigen::Index>(n1 + n2)] *
                u[3][static_cast<Eigen::Index>(n3)] *
                u[4][static_cast<Eigen::Index>(n1 + n3)] *
                u[5][static_cast<Eigen::Index>(n2 + n3)] *
                u[6][static_cast<Eigen::Index>(n1 + n2 + n3)]);
  return acc.value() / (Nd * Nd * Nd);
}

SampledCubicAverage sampled_cubic_average(
    unsigned order, const FunctionTable& weight,
    const std::vector<ToySystem>& systems, std::uint64_t n_terms,
    unsigned n_points, std::uint64_t seed) {
  if (n_points == 0)
    throw usage_error("sampled_cubic_average: n_points must be >= 1");
  SampledCubicAverage out;
  out.seed = seed;
  std::mt19937_64 rng(seed);
  bool have = false;
  for (unsigned j = 0; j < n_points; ++j) {
    std::vector<ToySystem> pts = systems;
    for (ToySystem& s : pts)
      s.x0 = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0,1)
    CubicAverageResult r = cubic_weighted_average(order, weight, pts,
                                                  n_terms);
    out.samples.push_back(r.value);
    if (!have || std::abs(r.value) > std::abs(out.max_result.value)) {
      out.max_result = r;
      have = true;
    }
  }
  return out;
}

KbszProbe kbsz_probe(const FunctionTable& weight, const ToySystem& system,
                     std::uint64_t p, std::uint64_t q, std::uint64_t n_terms,
                     double epsilon) {
  const std::uint64_t N = n_terms;
  if (!(epsilon > 0))
    throw usage_error("kbsz_probe: epsilon must be > 0");
  if (p == q || !is_prime_u64(p) || !is_prime_u64(q))
    throw usage_error("kbsz_probe: p and q must be distinct primes");
  const double cap = std::exp(1.0 / epsilon);
  if (static_cast<double>(p) > cap || static_cast<double>(q) > cap)
    throw usage_error(
        "kbsz_probe: primes must satisfy p, q <= exp(1/epsilon)");
  if (N == 0) throw usage_error("kbsz_probe: n_terms must be >= 1");
  weight.require_cover(1, N, "kbsz_probe");

  const std::vector<double> c = phase_coeffs(system);
  CompensatedComplexSum cross, weighted;
  for (std::uint64_t n = 1; n <= N; ++n) {
    cross.add(observe(c, p * n) * std::conj(observe(c, q * n)));
    weighted.add(weight.at(n) * observe(c, n));
  }
  KbszProbe out;
  const double Nd = static_cast<double>(N);
  out.lhs = std::abs(cross.value()) / Nd;
  out.weighted_avg = std::abs(weighted.value()) / Nd;
  out.rhs_bound = 2.0 * std::sqrt(epsilon * std::log(1.0 / epsilon));
  out.hypothesis_met = out.lhs < epsilon;
  out.conclusion_met = out.weighted_avg < out.rhs_bound;
  return out;
}

GridSupremum wiener_wintner_probe(const FunctionTable& weight,
                                  const ToySystem& system,
                                  std::uint64_t n_terms,
                                  std::uint64_t grid_size) {
  if (n_terms == 0)
    throw usage_error("wiener_wintner_probe: n_terms must be >= 1");
  weight.require_cover(1, n_terms, "wiener_wintner_probe");
  const Eigen::VectorXcd u = observable_table(system, n_terms);
  Eigen::VectorXcd g(static_cast<Eigen::Index>(n_terms));
  for (std::uint64_t n = 1; n <= n_terms; ++n)
    g[static_cast<Eigen::Index>(n - 1)] =
        weight.at(n) * u[static_cast<Eigen::Index>(n)];
  return grid_supremum(g, grid_size);
}

MangoldtCubicAverage mangoldt_cubic_average(
    unsigned order, const FunctionTable& mangoldt,
    const std::vector<ToySystem>& systems, std::uint64_t n_terms,
    std::uint64_t prime_cutoff) {
  for (const ToySystem& s : systems)
    if (!std::holds_alternative<PolyphaseSystem>(s.dynamics))
      throw usage_error(
          "mangoldt_cubic_average: all systems must be polyphase");

  MangoldtCubicAverage out;
  out.raw = cubic_weighted_average(order, mangoldt, systems, n_terms);

  FunctionTable ones;
  ones.kind = FunctionKind::unit;
  ones.offset = 1;
  ones.values = Eigen::ArrayXd::Ones(
      static_cast<Eigen::Index>(order * n_terms));
  out.unit_average =
      cubic_weighted_average(order, ones, systems, n_terms).value;

  // prod beta_p(d = order); identically 0 for order >= 2 (beta_2 = 0).
  double prod = 1.0;
  for (std::uint64_t p = 2; p <= prime_cutoff && prod != 0.0; ++p)
    if (is_prime_u64(p)) prod *= local_factor(p, order).value;
  out.local_factor_product = prod;

  out.centered = out.raw;
  out.centered.integer_exact = false;
  out.centered.value = out.raw.value - prod * out.unit_average;
  return out;
}

}  // namespace arf
