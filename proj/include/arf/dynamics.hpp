#pragma once
// Weighted cubic nonconventional ergodic averages on exactly computable
// toy systems. Two system families:
//   rotation(alpha, k):  T x = x + alpha mod 1, observable f(x) = e(k x)
//                        — discrete spectrum, f(T^t x0) = e(k x0 + k alpha t);
//   polyphase(c_0..c_d): orbit observable u(t) = e(c_0 + x0 + c_1 t + ...)
//                        — polynomial phases standing in for nilsystem
//                        orbits (degree <= 6).
// In both families the observable factors through the orbit time, so the
// order-k average over [1,N]^k reduces to convolutions of weighted phase
// sequences; the direct double/triple loop over the same tables is kept as
// a built-in oracle at small N.
//
// Also here: the KBSZ two-prime orthogonality probe and the
// Wiener-Wintner twisted supremum (which shares expsum's grid kernel).

#include <complex>
#include <cstdint>
#include <variant>
#include <vector>

#include "arf/expsum.hpp"
#include "arf/sieve.hpp"

namespace arf {

struct RotationSystem {
  double alpha = 0;          // rotation number
  long long character = 1;   // observable f(x) = e(character * x)
};

struct PolyphaseSystem {
  std::vector<double> coefficients;  // phase polynomial, constant first
};

struct ToySystem {
  std::variant<RotationSystem, PolyphaseSystem> dynamics =
      RotationSystem{};
  double x0 = 0;  // initial point in [0,1); shifts the constant phase
};

// (sqrt(5)-1)/2, the default worst-case-honest rotation number.
inline constexpr double golden_alpha = 0.61803398874989484820;

// u(t) = observable at orbit time t, for t = 0..t_max inclusive.
// |u| = 1 exactly; phases are reduced mod 1 by exact 64-bit wraparound.
Eigen::VectorXcd observable_table(const ToySystem& system,
                                  std::uint64_t t_max);

struct CubicAverageResult {
  unsigned order = 2;
  std::uint64_t n_terms = 0;
  std::complex<double> value;
  FunctionKind weight_kind = FunctionKind::custom;
  bool integer_exact = false;  // all observables were exactly 1 and the
                               // weight integer-valued: snapped numerators
};

// (1/N^k) sum_{n in [1,N]^k} prod_{e in C*} v(n.e) u_e(n.e), with the
// 2^k - 1 systems listed in mask order (bit i of the index+1 flags the
// i-th cube variable). Weight must cover [1, kN]. k = 2 runs one complex
// convolution; k = 3 one per outer variable. For N <= 4096 (k=2) or
// N <= 256 (k=3) the direct-loop oracle runs alongside and a mismatch
// beyond 1e-9 throws internal_error.
CubicAverageResult cubic_weighted_average(unsigned order,
                                          const FunctionTable& weight,
                                          const std::vector<ToySystem>& systems,
                                          std::uint64_t n_terms);

// The O(N^k) loop over the same observable tables; the oracle.
std::complex<double> direct_cubic_average(unsigned order,
                                          const FunctionTable& weight,
                                          const std::vector<ToySystem>& systems,
                                          std::uint64_t n_terms);

struct SampledCubicAverage {
  CubicAverageResult max_result;  // sample attaining max |value|
  std::vector<std::complex<double>> samples;  // one per initial point
  std::uint64_t seed = 0;
};

// "Almost every x" probe: n_points initial points drawn from mt19937_64
// (each sample redraws every system's x0), reporting max |value|; first
// maximum wins on exact ties. Deterministic given the seed.
SampledCubicAverage sampled_cubic_average(unsigned order,
                                          const FunctionTable& weight,
                                          const std::vector<ToySystem>& systems,
                                          std::uint64_t n_terms,
                                          unsigned n_points,
                                          std::uint64_t seed);

struct KbszProbe {
  double lhs = 0;           // |(1/N) sum f(T^{pn}x) conj(f(T^{qn}x))|
  double rhs_bound = 0;     // 2 sqrt(eps log(1/eps))
  double weighted_avg = 0;  // |(1/N) sum v(n) f(T^n x)|
  bool hypothesis_met = false;   // lhs < eps
  bool conclusion_met = false;   // weighted_avg < rhs_bound
};

// Numeric witness for the two-prime orthogonality criterion: p != q
// prime, p, q <= exp(1/eps). Not a proof; both sides are just reported.
KbszProbe kbsz_probe(const FunctionTable& weight, const ToySystem& system,
                     std::uint64_t p, std::uint64_t q, std::uint64_t n_terms,
                     double epsilon);

// sup over the K-grid of |(1/N) sum_{n<=N} v(n) f(T^n x) e(n t)|.
// With f == 1 this is sup_exp_sum bit for bit (same kernel).
GridSupremum wiener_wintner_probe(const FunctionTable& weight,
                                  const ToySystem& system,
                                  std::uint64_t n_terms,
                                  std::uint64_t grid_size);

struct MangoldtCubicAverage {
  CubicAverageResult raw;       // Lambda-weighted average
  CubicAverageResult centered;  // raw - local main term
  double local_factor_product = 0;     // prod_{p<=cutoff} beta_p(d=order)
  std::complex<double> unit_average;   // same systems, unit weight
};

// Lambda-weighted cubic average over polyphase systems, with the local
// main term subtracted: centered = raw - (prod beta_p) * unit-weight
// average. For order >= 2 the local product vanishes identically
// (beta_2 = 0), so centered equals raw; the fields still report the
// decomposition. mangoldt must be a Lambda table covering [1, order*N].
MangoldtCubicAverage mangoldt_cubic_average(unsigned order,
                                            const FunctionTable& mangoldt,
                                            const std::vector<ToySystem>& systems,
                                            std::uint64_t n_terms,
                                            std::uint64_t prime_cutoff = 1000);

}  // namespace arf
