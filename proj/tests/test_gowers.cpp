// Cube sums and box norms against the brute odometer, exact local-factor
// rationals against a direct count over (Z/pZ)^d, the W-tricked Mangoldt
// table, and the prime-average gap.

#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "arf/errors.hpp"
#include "arf/gowers.hpp"
#include "arf/naive.hpp"
#include "arf/sieve.hpp"
#include "oracles.hpp"

using arf::CubeSpec;
using arf::FunctionKind;

namespace {

CubeSpec spec(unsigned k, bool base = false) {
  CubeSpec s;
  s.dimension = k;
  s.include_base = base;
  return s;
}

arf::FunctionTable custom_table(const Eigen::ArrayXd& values) {
  arf::FunctionTable t;
  t.kind = FunctionKind::custom;
  t.offset = 1;
  t.values = values;
  return t;
}

// Direct count of points of (Z/pZ)^d whose nonzero-corner dot products
// all avoid 0 mod p.
std::uint64_t brute_admissible(std::uint64_t p, unsigned d) {
  const std::uint64_t total = [&] {
    std::uint64_t t = 1;
    for (unsigned i = 0; i < d; ++i) t *= p;
    return t;
  }();
  std::uint64_t count = 0;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t digits[4] = {0, 0, 0, 0};
    std::uint64_t c = code;
    for (unsigned i = 0; i < d; ++i) {
      digits[i] = c % p;
      c /= p;
    }
    bool ok = true;
    for (unsigned mask = 1; mask < (1u << d) && ok; ++mask) {
      std::uint64_t dot = 0;
      for (unsigned i = 0; i < d; ++i)
        if (mask & (1u << i)) dot += digits[i];
      if (dot % p == 0) ok = false;
    }
    if (ok) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("cube_sum: unit weight is exactly 1 at every dimension") {
  const auto unit = arf::sieve_table(FunctionKind::unit, 320);
  CHECK(arf::cube_sum(unit, 64, spec(1)) == 1.0);
  CHECK(arf::cube_sum(unit, 64, spec(2)) == 1.0);
  CHECK(arf::cube_sum(unit, 32, spec(3)) == 1.0);
  CHECK(arf::cube_sum(unit, 16, spec(4)) == 1.0);
  CHECK(arf::cube_sum(unit, 8, spec(5)) == 1.0);
}

TEST_CASE("cube_sum: Liouville k = 2 worked values") {
  const auto lam = arf::sieve_table(FunctionKind::liouville, 128);
  CHECK(arf::cube_sum(lam, 2, spec(2)) == 0.5);
  CHECK(arf::cube_sum(lam, 64, spec(2)) == 0.02197265625);
}

TEST_CASE("cube_sum: convolution path equals the brute odometer") {
  for (auto kind : {FunctionKind::mobius, FunctionKind::liouville}) {
    const auto t = arf::sieve_table(kind, 192);
    CHECK(arf::cube_sum(t, 64, spec(2)) ==
          doctest::Approx(arf::naive::cube_sum(t, 64, 2, false))
              .epsilon(1e-12));
    CHECK(arf::cube_sum(t, 16, spec(3)) ==
          doctest::Approx(arf::naive::cube_sum(t, 16, 3, false))
              .epsilon(1e-12));
    CHECK(arf::cube_sum(t, 16, spec(4)) ==
          doctest::Approx(arf::naive::cube_sum(t, 16, 4, false))
              .epsilon(1e-12));
  }
}

TEST_CASE("cube_sum: include_base matches the brute full-cube average") {
  const auto lam = arf::sieve_table(FunctionKind::liouville, 36);
  CHECK(arf::cube_sum(lam, 12, spec(2, true)) ==
        doctest::Approx(arf::naive::cube_sum(lam, 12, 2, true))
            .epsilon(1e-12));
  CHECK(arf::cube_sum(lam, 12, spec(3, true)) ==
        doctest::Approx(arf::naive::cube_sum(lam, 12, 3, true))
            .epsilon(1e-12));
}

TEST_CASE("cube_sum: non-integer custom table still matches the odometer") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::ArrayXd v(64);
  for (int i = 0; i < 64; ++i) v[i] = dist(rng);
  const auto t = custom_table(v);
  CHECK(arf::cube_sum(t, 32, spec(2)) ==
        doctest::Approx(arf::naive::cube_sum(t, 32, 2, false)).epsilon(1e-9));
}

TEST_CASE("cube_sum: centered Mangoldt weight tends to -1, not 0") {
  // With the weight Lambda(n) - 1 at every corner slot and k = 2 the mean
  // converges to -1: every term with at least one "-1" slot contributes a
  // +-1 prime-number-theorem average and the all-Lambda term vanishes with
  // the parity local factor. Pinned so the phenomenon stays on record.
  const auto vm = arf::sieve_table(FunctionKind::mangoldt, 20000);
  const auto centered = custom_table(vm.values - 1.0);
  const double v = arf::cube_sum(centered, 10000, spec(2));
  CHECK(v == doctest::Approx(-0.999346206332835).epsilon(1e-9));
  CHECK(std::fabs(v + 1.0) < 0.05);
}

TEST_CASE("cube_sum: argument and resource contract") {
  const auto unit = arf::sieve_table(FunctionKind::unit, 400);
  CHECK_THROWS_AS(arf::cube_sum(unit, 8, spec(0)), arf::usage_error);
  CHECK_THROWS_AS(arf::cube_sum(unit, 8, spec(6)), arf::usage_error);
  CHECK_THROWS_AS(arf::cube_sum(unit, 65, spec(4)), arf::resource_error);
  CHECK_THROWS_AS(arf::cube_sum(unit, 65, spec(5)), arf::resource_error);
  const auto shortt = arf::sieve_table(FunctionKind::liouville, 100);
  CHECK_THROWS_AS(arf::cube_sum(shortt, 64, spec(2)), arf::coverage_error);
}

TEST_CASE("box_average: unit N = 4 degree 2 gives 1/16") {
  const Eigen::ArrayXd ones = Eigen::ArrayXd::Ones(4);
  CHECK(arf::box_average(ones, 2) == 0.0625);
  CHECK(arf::gowers_box_norm(ones, 2) == 0.5);
}

TEST_CASE("box_average: matches the brute odometer on random tables") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> dist(-1, 1);
  Eigen::ArrayXd v(12);
  for (int i = 0; i < 12; ++i) v[i] = dist(rng);
  for (unsigned deg : {1u, 2u})
    CHECK(arf::box_average(v, deg) ==
          doctest::Approx(arf::naive::box_average(v, deg)).epsilon(1e-12));
  Eigen::ArrayXd w(8);
  for (int i = 0; i < 8; ++i) w[i] = dist(rng);
  CHECK(arf::box_average(w, 3) ==
        doctest::Approx(arf::naive::box_average(w, 3)).epsilon(1e-12));
}

TEST_CASE("box_average: zero table, zero average") {
  const Eigen::ArrayXd z = Eigen::ArrayXd::Zero(16);
  CHECK(arf::box_average(z, 2) == 0.0);
  CHECK(arf::gowers_box_norm(z, 2) == 0.0);
}

TEST_CASE("gowers_box_norm: frozen Moebius U2 value at N = 4096") {
  const auto mu = arf::sieve_table(FunctionKind::mobius, 4096);
  CHECK(arf::box_average(mu.values, 2) ==
        doctest::Approx(4.6760833356529423e-06).epsilon(1e-12));
  CHECK(arf::gowers_box_norm(mu.values, 2) ==
        doctest::Approx(0.046501885299784218).epsilon(1e-12));
}

TEST_CASE("gowers_box_norm: norm shrinks from N = 2^10 to N = 2^13") {
  const auto mu = arf::sieve_table(FunctionKind::mobius, 8192);
  const double small = arf::gowers_box_norm(mu.values.head(1024), 2);
  const double large = arf::gowers_box_norm(mu.values.head(8192), 2);
  CHECK(large < small);
}

TEST_CASE("gowers_box_norm: degree and size contract") {
  const Eigen::ArrayXd ones = Eigen::ArrayXd::Ones(8);
  CHECK_THROWS_AS(arf::gowers_box_norm(ones, 1), arf::usage_error);
  CHECK_THROWS_AS(arf::gowers_box_norm(ones, 4), arf::usage_error);
  CHECK_THROWS_AS(arf::box_average(ones, 0), arf::usage_error);
  CHECK_THROWS_AS(arf::box_average(ones, 4), arf::usage_error);
  const Eigen::ArrayXd big = Eigen::ArrayXd::Ones(65537);
  CHECK_THROWS_AS(arf::gowers_box_norm(big, 3), arf::resource_error);
}

TEST_CASE("local_factor: beta_p(1) = 1 exactly for p <= 50") {
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41,
                          43, 47}) {
    const auto lf = arf::local_factor(p, 1);
    CHECK(lf.value == 1.0);
    CHECK(lf.exact == "1");
  }
}

TEST_CASE("local_factor: worked exact rationals") {
  const auto b22 = arf::local_factor(2, 2);
  CHECK(b22.value == 0.0);
  CHECK(b22.exact == "0");
  CHECK(b22.count == 0);

  const auto b32 = arf::local_factor(3, 2);
  CHECK(b32.value == 0.75);
  CHECK(b32.exact == "3/4");
  CHECK(b32.count == 2);

  const auto b54 = arf::local_factor(5, 4);
  CHECK(b54.exact == "48828125/268435456");
  CHECK(b54.value == 0.18189894035458565);
}

TEST_CASE("local_factor: direct count over (Z/pZ)^d") {
  const std::pair<std::uint64_t, unsigned> cases[] = {
      {2, 1}, {3, 1}, {2, 2}, {3, 2}, {5, 2}, {3, 3}, {5, 3}};
  for (const auto& [p, d] : cases) {
    const auto lf = arf::local_factor(p, d);
    const std::uint64_t count = brute_admissible(p, d);
    CHECK(lf.count == count);
    const unsigned corners = (1u << d) - 1;
    long double v = static_cast<long double>(count);
    for (unsigned i = 0; i < corners; ++i)
      v *= static_cast<long double>(p) / static_cast<long double>(p - 1);
    for (unsigned i = 0; i < d; ++i) v /= static_cast<long double>(p);
    CHECK(lf.value == doctest::Approx(static_cast<double>(v)).epsilon(1e-14));
  }
}

TEST_CASE("local_factor: argument and resource contract") {
  CHECK_THROWS_AS(arf::local_factor(4, 2), arf::usage_error);
  CHECK_THROWS_AS(arf::local_factor(1009, 2), arf::usage_error);
  CHECK_THROWS_AS(arf::local_factor(7, 0), arf::usage_error);
  CHECK_THROWS_AS(arf::local_factor(7, 5), arf::usage_error);
  CHECK_THROWS_AS(arf::local_factor(997, 3), arf::resource_error);
}

TEST_CASE("local_product: dimension 1 is the empty-condition product") {
  CHECK(arf::local_product(1, 1000) == 1.0);
  CHECK(arf::local_product(1, 1) == 1.0);  // no primes <= 1
}

TEST_CASE("local_product: parity kills every dimension >= 2") {
  CHECK(arf::local_product(2, 2) == 0.0);
  CHECK(arf::local_product(2, 997) == 0.0);
  CHECK(arf::local_product(3, 50) == 0.0);
  CHECK_THROWS_AS(arf::local_product(2, 1001), arf::usage_error);
}

TEST_CASE("mangoldt_box_sum: d = 1 is the Chebyshev mean") {
  const auto vm = arf::sieve_table(FunctionKind::mangoldt, 2000);
  CHECK(arf::mangoldt_box_sum(vm, 1000, 1) ==
        doctest::Approx(vm.values.head(1000).sum() / 1000.0).epsilon(1e-12));
}

TEST_CASE("mangoldt_box_sum: d = 2 is the k = 2 cube sum") {
  const auto vm = arf::sieve_table(FunctionKind::mangoldt, 2000);
  CHECK(arf::mangoldt_box_sum(vm, 1000, 2) ==
        arf::cube_sum(vm, 1000, spec(2)));
  CHECK_THROWS_AS(arf::mangoldt_box_sum(vm, 100, 0), arf::usage_error);
  CHECK_THROWS_AS(arf::mangoldt_box_sum(vm, 100, 3), arf::usage_error);
}

TEST_CASE("w_trick_table: w = 2 reads off Lambda'(2n + 1) / 2") {
  const auto t = arf::w_trick_table(20, 2, 1);
  CHECK(t.kind == FunctionKind::custom);
  REQUIRE(t.length() == 20);
  for (std::uint64_t n = 1; n <= 20; ++n)
    CHECK(t.at(n) ==
          doctest::Approx(0.5 * testol::mangoldt_prime(2 * n + 1))
              .epsilon(1e-12));
}

TEST_CASE("w_trick_table: mean is near 1 by Dirichlet, N = 1e5, w = 3") {
  const auto t = arf::w_trick_table(100000, 3, 1);
  const double mean = t.values.sum() / 100000.0;
  CHECK(mean == doctest::Approx(0.99792161649936451).epsilon(1e-12));
  CHECK(std::fabs(mean - 1.0) < 0.05);
}

TEST_CASE("w_trick_table: argument and resource contract") {
  CHECK_THROWS_AS(arf::w_trick_table(0, 2, 1), arf::usage_error);
  CHECK_THROWS_AS(arf::w_trick_table(10, 2, 0), arf::usage_error);
  CHECK_THROWS_AS(arf::w_trick_table(10, 2, 2), arf::usage_error);  // gcd 2
  CHECK_THROWS_AS(arf::w_trick_table(10, 3, 3), arf::usage_error);  // gcd 3
  CHECK_THROWS_AS(arf::w_trick_table(1, 61, 1), arf::resource_error);
}

TEST_CASE("prime_average_gap: N = 2 closed form") {
  auto one = [](std::uint64_t) { return std::complex<double>(1.0, 0.0); };
  CHECK(arf::prime_average_gap(one, 2) ==
        doctest::Approx(1.0 - std::log(2.0) / 2.0).epsilon(1e-12));
  CHECK_THROWS_AS(arf::prime_average_gap(one, 1), arf::usage_error);
}

TEST_CASE("prime_average_gap: frozen constant-sequence ladder decreases") {
  auto one = [](std::uint64_t) { return std::complex<double>(1.0, 0.0); };
  const double g100 = arf::prime_average_gap(one, 100);
  const double g10k = arf::prime_average_gap(one, 10000);
  CHECK(g100 == doctest::Approx(0.16271609600936077).epsilon(1e-12));
  CHECK(g10k == doctest::Approx(0.010400862084301243).epsilon(1e-12));
  CHECK(g10k < g100);
}
