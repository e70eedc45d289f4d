#include "arf/gowers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "arf/errors.hpp"
#include "arf/fft.hpp"
#include "arf/naive.hpp"
#include "arf/parallel.hpp"
#include "arf/phase.hpp"

namespace arf {
namespace {

using u128 = unsigned __int128;

std::string u128_str(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<unsigned>(v % 10)));
    v /= 10;
  }
  return s;
}

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool is_prime_u64(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

// A(h) = sum_n f(n) f(n+h) for h = 0..max_lag, f zero-padded.
Eigen::ArrayXd self_correlation(const Eigen::ArrayXd& f,
                                std::uint64_t max_lag) {
  const auto len = static_cast<std::uint64_t>(f.size());
  const auto M = static_cast<Eigen::Index>(next_pow2(len + max_lag));
  Eigen::VectorXcd z = Eigen::VectorXcd::Zero(M);
  for (std::uint64_t j = 0; j < len; ++j)
    z[static_cast<Eigen::Index>(j)] = f[static_cast<Eigen::Index>(j)];
  Eigen::VectorXcd Z = fft_forward(z);
  for (Eigen::Index k = 0; k < M; ++k) Z[k] = std::norm(Z[k]);
  Eigen::VectorXcd c = fft_inverse(Z);
  Eigen::ArrayXd out(static_cast<Eigen::Index>(max_lag + 1));
  for (std::uint64_t h = 0; h <= max_lag; ++h)
    out[static_cast<Eigen::Index>(h)] = c[static_cast<Eigen::Index>(h)].real();
  return out;
}

// S_2 box count of f (h1, h2 >= 1):
//   sum_{h>=1} ( A_f(h)^2 - A_{f^2}(h) ) / 2,
// from A_f(h)^2 = sum over pairs of h-progressions at arbitrary offset,
// whose diagonal (offset 0) is A_{f^2}(h) and whose off-diagonal halves
// are the h2 >= 1 cubes.
double box_count_2(const Eigen::ArrayXd& f) {
  const auto len = static_cast<std::uint64_t>(f.size());
  if (len == 0) return 0;
  const Eigen::ArrayXd a1 = self_correlation(f, len);
  const Eigen::ArrayXd a2 = self_correlation(f.square(), len);
  CompensatedSum acc;
  for (std::uint64_t h = 1; h <= len; ++h) {
    const auto i = static_cast<Eigen::Index>(h);
    acc.add((a1[i] * a1[i] - a2[i]) * 0.5);
  }
  return acc.value();
}

// Convolution of an integer-valued real sequence with itself, values
// snapped to integers; residual >= 0.25 falls back to direct summation.
Eigen::ArrayXd self_convolve(const std::vector<double>& x, bool snap) {
  const std::uint64_t n = x.size();
  Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
  for (std::uint64_t i = 0; i < n; ++i)
    v[static_cast<Eigen::Index>(i)] = x[i];
  Eigen::VectorXcd c = convolve(v, v);
  Eigen::ArrayXd out(c.size());
  double worst = 0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    double val = c[i].real();
    if (snap) {
      const double r = std::nearbyint(val);
      worst = std::max(worst, std::abs(val - r));
      val = r;
    }
    out[i] = val;
  }
  if (snap && worst >= 0.25) {
    out.setZero();
    for (std::uint64_t i = 0; i < n; ++i)
      for (std::uint64_t j = 0; j < n; ++j)
        out[static_cast<Eigen::Index>(i + j)] += x[i] * x[j];
  }
  return out;
}

// C* cube sum, k = 2: sum_{s=2}^{2N} (v*v)(s) v(s), then / N^2.
double cube_sum_2(const FunctionTable& table, std::uint64_t N, bool snap) {
  std::vector<double> x(N);
  for (std::uint64_t m = 1; m <= N; ++m) x[m - 1] = table.at(m);
  const Eigen::ArrayXd conv = self_convolve(x, snap);  // index t <-> s = t+2
  // Spot-check two convolution values against direct summation.
  for (std::uint64_t s : {std::uint64_t{2}, N + 1}) {
    double direct = 0;
    for (std::uint64_t m = s > N ? s - N : 1; m <= std::min(N, s - 1); ++m)
      direct += table.at(m) * table.at(s - m);
    const double fast = conv[static_cast<Eigen::Index>(s - 2)];
    const double tol = snap ? 0.0 : 1e-9 * (std::abs(direct) + 1.0);
    if (std::abs(fast - direct) > tol)
      throw internal_error("cube_sum: convolution disagrees with direct "
                           "summation at s=" + std::to_string(s));
  }
  CompensatedSum acc;
  for (std::uint64_t s = 2; s <= 2 * N; ++s)
    acc.add(conv[static_cast<Eigen::Index>(s - 2)] * table.at(s));
  const double Nd = static_cast<double>(N);
  return acc.value() / (Nd * Nd);
}

// C* cube sum, k = 3. Fix n3 = p; the seven corner factors split into
// v(n1)v(n2)v(n1+n2) (corners with e3 = 0) and
// v(p)v(n1+p)v(n2+p)v(n1+n2+p) (corners with e3 = 1), so the (n1,n2) sum
// is sum_s (b_p * b_p)(s) c_p(s) with b_p(m) = v(m)v(m+p) and
// c_p(s) = v(s)v(s+p).
double cube_sum_3(const FunctionTable& table, std::uint64_t N, bool snap) {
  std::vector<double> per_p(N + 1, 0.0);
  parallel_for(
      1, N + 1,
      [&](std::uint64_t p) {
        const double vp = table.at(p);
        if (vp == 0) return;  // whole p-slice vanishes
        std::vector<double> b(N);
        for (std::uint64_t m = 1; m <= N; ++m)
          b[m - 1] = table.at(m) * table.at(m + p);
        const Eigen::ArrayXd conv = self_convolve(b, snap);
        if (p == 1 || p == N / 2 + 1) {
          const std::uint64_t s = N + 1;  // deepest convolution stack
          double direct = 0;
          for (std::uint64_t m = 1; m <= N && m <= s - 1; ++m)
            if (s - m <= N) direct += b[m - 1] * b[s - m - 1];
          const double fast = conv[static_cast<Eigen::Index>(s - 2)];
          const double tol = snap ? 0.0 : 1e-9 * (std::abs(direct) + 1.0);
          if (std::abs(fast - direct) > tol)
            throw internal_error(
                "cube_sum: k=3 convolution disagrees with direct summation "
                "at p=" + std::to_string(p));
        }
        CompensatedSum acc;
        for (std::uint64_t s = 2; s <= 2 * N; ++s)
          acc.add(conv[static_cast<Eigen::Index>(s - 2)] * table.at(s) *
                  table.at(s + p));
        per_p[p] = vp * acc.value();
      },
      1);
  CompensatedSum total;
  for (std::uint64_t p = 1; p <= N; ++p) total.add(per_p[p]);
  const double Nd = static_cast<double>(N);
  return total.value() / (Nd * Nd * Nd);
}

std::vector<std::uint64_t> primes_not_above(std::uint64_t cutoff) {
  std::vector<std::uint64_t> ps;
  for (std::uint64_t p = 2; p <= cutoff; ++p)
    if (is_prime_u64(p)) ps.push_back(p);
  return ps;
}

}  // namespace

double cube_sum(const FunctionTable& table, std::uint64_t n_terms,
                const CubeSpec& spec) {
  const std::uint64_t N = n_terms;
  const unsigned k = spec.dimension;
  if (N == 0) throw usage_error("cube_sum: n_terms must be >= 1");
  if (k == 0 || k > 5)
    throw usage_error("cube_sum: dimension must be between 1 and 5");
  if (k >= 4 && N > 64)
    throw resource_error(
        "cube_sum: dimensions 4 and 5 run by direct enumeration and are "
        "capped at N = 64");

  if (spec.include_base) {
    table.require_cover(1, N, "cube_sum");
    if (k <= 3) {
      Eigen::ArrayXd f(static_cast<Eigen::Index>(N));
      for (std::uint64_t n = 1; n <= N; ++n)
        f[static_cast<Eigen::Index>(n - 1)] = table.at(n);
      return box_average(f, k);
    }
    return naive::cube_sum(table, N, k, true);
  }

  table.require_cover(1, k * N, "cube_sum");
  const bool snap = integer_valued(table.kind) && N <= kIntegerExactnessLimit;
  switch (k) {
    case 1: {
      CompensatedSum acc;
      for (std::uint64_t n = 1; n <= N; ++n) acc.add(table.at(n));
      return acc.value() / static_cast<double>(N);
    }
    case 2:
      return cube_sum_2(table, N, snap);
    case 3:
      return cube_sum_3(table, N, snap);
    default:
      return naive::cube_sum(table, N, k, false);
  }
}

double box_average(const Eigen::ArrayXd& values, unsigned degree) {
  const auto N = static_cast<std::uint64_t>(values.size());
  if (N == 0) throw usage_error("box_average: empty sequence");
  if (degree == 0 || degree > 3)
    throw usage_error("box_average: degree must be 1, 2 or 3");
  const double Nd = static_cast<double>(N);
  if (degree == 1) {
    const Eigen::ArrayXd a = self_correlation(values, N);
    CompensatedSum acc;
    for (std::uint64_t h = 1; h <= N; ++h)
      acc.add(a[static_cast<Eigen::Index>(h)]);
    return acc.value() / (Nd * Nd);
  }
  if (degree == 2) return box_count_2(values) / (Nd * Nd * Nd);
  // Degree 3 by the inductive shift formula: S_3(f) = sum_{h3 >= 1}
  // S_2(f . f(.+h3)).
  std::vector<double> per_h(N, 0.0);
  parallel_for(
      1, N,
      [&](std::uint64_t h) {
        const auto len = static_cast<Eigen::Index>(N - h);
        Eigen::ArrayXd g = values.head(len) *
                           values.segment(static_cast<Eigen::Index>(h), len);
        per_h[h] = box_count_2(g);
      },
      1);
  CompensatedSum acc;
  for (std::uint64_t h = 1; h < N; ++h) acc.add(per_h[h]);
  return acc.value() / (Nd * Nd * Nd * Nd);
}

double gowers_box_norm(const Eigen::ArrayXd& values, unsigned degree) {
  if (degree != 2 && degree != 3)
    throw usage_error("gowers_box_norm: degree must be 2 or 3");
  if (degree == 3 && values.size() > (1 << 16))
    throw resource_error(
        "gowers_box_norm: degree 3 is quadratic-cost and capped at N = 2^16");
  const double avg = box_average(values, degree);
  return std::pow(std::abs(avg), 1.0 / static_cast<double>(1u << degree));
}

LocalFactor local_factor(std::uint64_t p, unsigned dimension) {
  if (!is_prime_u64(p) || p > 1000)
    throw usage_error("local_factor: p must be a prime <= 1000");
  if (dimension == 0 || dimension > 4)
    throw usage_error("local_factor: dimension must be between 1 and 4");
  double points = std::pow(static_cast<double>(p),
                           static_cast<double>(dimension));
  if (points > 1e7)
    throw resource_error("local_factor: p^d exceeds the enumeration budget "
                         "of 10^7 points");

  const unsigned d = dimension;
  const unsigned masks = (1u << d) - 1;
  std::vector<std::uint64_t> n(d, 0);
  std::uint64_t count = 0;
  for (;;) {
    bool ok = true;
    for (unsigned mask = 1; mask <= masks; ++mask) {
      std::uint64_t dot = 0;
      for (unsigned i = 0; i < d; ++i)
        if (mask & (1u << i)) dot += n[i];
      if (dot % p == 0) {
        ok = false;
        break;
      }
    }
    count += ok;
    unsigned j = 0;
    while (j < d && ++n[j] == p) n[j++] = 0;
    if (j == d) break;
  }

  // beta_p = count p^(2^d - 1) / ( p^d (p-1)^(2^d - 1) ), reduced.
  u128 num = count;
  u128 den = 1;
  for (unsigned i = 0; i < masks; ++i) num *= p;
  for (unsigned i = 0; i < d; ++i) den *= p;
  for (unsigned i = 0; i < masks; ++i) den *= (p - 1);
  if (num != 0) {
    const u128 g = gcd128(num, den);
    num /= g;
    den /= g;
  } else {
    den = 1;
  }

  LocalFactor out;
  out.p = p;
  out.dimension = d;
  out.count = count;
  out.value = static_cast<double>(static_cast<long double>(num) /
                                  static_cast<long double>(den));
  out.exact = den == 1 ? u128_str(num) : u128_str(num) + "/" + u128_str(den);
  return out;
}

double local_product(unsigned dimension, std::uint64_t prime_cutoff) {
  if (prime_cutoff > 1000)
    throw usage_error("local_product: prime cutoff must be <= 1000");
  double prod = 1.0;
  for (std::uint64_t p : primes_not_above(prime_cutoff))
    prod *= local_factor(p, dimension).value;
  return prod;
}

double mangoldt_box_sum(const FunctionTable& table, std::uint64_t n_terms,
                        unsigned dimension) {
  if (dimension != 1 && dimension != 2)
    throw usage_error("mangoldt_box_sum: dimension must be 1 or 2");
  if (dimension == 1) {
    if (n_terms == 0)
      throw usage_error("mangoldt_box_sum: n_terms must be >= 1");
    table.require_cover(1, n_terms, "mangoldt_box_sum");
    CompensatedSum acc;
    for (std::uint64_t n = 1; n <= n_terms; ++n) acc.add(table.at(n));
    return acc.value() / static_cast<double>(n_terms);
  }
  return cube_sum(table, n_terms, CubeSpec{2, false});
}

FunctionTable w_trick_table(std::uint64_t n_terms, std::uint64_t w,
                            std::uint64_t b, const SieveOptions& opts) {
  if (n_terms == 0) throw usage_error("w_trick_table: n_terms must be >= 1");
  if (b == 0) throw usage_error("w_trick_table: residue must be >= 1");
  std::uint64_t W = 1, phi = 1;
  for (std::uint64_t p : primes_not_above(w)) {
    if (W > opts.budget / p)
      throw resource_error("w_trick_table: W exceeds the sieve budget");
    W *= p;
    phi *= p - 1;
  }
  if (std::gcd(b, W) != 1)
    throw usage_error("w_trick_table: residue must be coprime to W");
  std::uint64_t limit = 0;
  if (__builtin_mul_overflow(W, n_terms, &limit) ||
      __builtin_add_overflow(limit, b, &limit))
    throw resource_error("w_trick_table: W*N + b overflows the sieve range");
  const FunctionTable lam = mangoldt_prime_table(limit, opts);
  const double scale = static_cast<double>(phi) / static_cast<double>(W);
  FunctionTable out;
  out.kind = FunctionKind::custom;
  out.offset = 1;
  out.values.resize(static_cast<Eigen::Index>(n_terms));
  for (std::uint64_t n = 1; n <= n_terms; ++n)
    out.values[static_cast<Eigen::Index>(n - 1)] = scale * lam.at(W * n + b);
  return out;
}

double prime_average_gap(
    const std::function<std::complex<double>(std::uint64_t)>& a,
    std::uint64_t n_terms, const SieveOptions& opts) {
  if (n_terms < 2)
    throw usage_error("prime_average_gap: n_terms must be >= 2 (at least "
                      "one prime in range)");
  const FunctionTable lam = mangoldt_prime_table(n_terms, opts);
  CompensatedComplexSum prime_sum, weighted_sum;
  std::uint64_t pi = 0;
  for (std::uint64_t n = 1; n <= n_terms; ++n) {
    const double L = lam.at(n);
    if (L != 0) {
      ++pi;
      prime_sum.add(a(n));
    }
    if (L != 0) weighted_sum.add(L * a(n));
  }
  const std::complex<double> gap =
      prime_sum.value() / static_cast<double>(pi) -
      weighted_sum.value() / static_cast<double>(n_terms);
  return std::abs(gap);
}

}  // namespace arf
