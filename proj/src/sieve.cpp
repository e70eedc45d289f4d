#include "arf/sieve.hpp"

#include <cmath>
#include <vector>

#include "arf/parallel.hpp"

namespace arf {

const char* kind_name(FunctionKind k) {
  switch (k) {
    case FunctionKind::mobius: return "mobius";
    case FunctionKind::liouville: return "liouville";
    case FunctionKind::mangoldt: return "mangoldt";
    case FunctionKind::omega: return "omega";
    case FunctionKind::squarefree: return "squarefree";
    case FunctionKind::unit: return "unit";
    case FunctionKind::custom: return "custom";
  }
  return "?";
}

FunctionKind kind_from_name(const std::string& name) {
  for (auto k : {FunctionKind::mobius, FunctionKind::liouville,
                 FunctionKind::mangoldt, FunctionKind::omega,
                 FunctionKind::squarefree, FunctionKind::unit,
                 FunctionKind::custom})
    if (name == kind_name(k)) return k;
  throw usage_error("unknown function kind '" + name + "'");
}

void FunctionTable::require_cover(std::uint64_t lo, std::uint64_t hi,
                                  const char* what) const {
  if (!covers(lo, hi))
    throw coverage_error(std::string(what) + " needs table coverage of [" +
                         std::to_string(lo) + ", " + std::to_string(hi) +
                         "], have [" + std::to_string(offset) + ", " +
                         std::to_string(length() ? last() : 0) + "]");
}

namespace {

std::vector<std::uint32_t> primes_upto(std::uint64_t n) {
  std::vector<bool> comp(n + 1, false);
  std::vector<std::uint32_t> out;
  for (std::uint64_t p = 2; p <= n; ++p) {
    if (comp[p]) continue;
    out.push_back(static_cast<std::uint32_t>(p));
    for (std::uint64_t q = p * p; q <= n; q += p) comp[q] = true;
  }
  return out;
}

enum class Derived { kind_based, mangoldt_prime };

FunctionTable sieve_impl(FunctionKind kind, std::uint64_t limit,
                         const SieveOptions& opts, Derived derived) {
  if (limit < 1) throw usage_error("sieve limit must be >= 1");
  if (limit > opts.budget)
    throw resource_error("sieve limit " + std::to_string(limit) +
                         " exceeds the memory budget of " +
                         std::to_string(opts.budget) + " entries");
  FunctionTable t;
  t.kind = derived == Derived::mangoldt_prime ? FunctionKind::custom : kind;
  t.offset = 1;
  t.values.resize(static_cast<Eigen::Index>(limit));
  if (kind == FunctionKind::unit) {
    t.values.setOnes();
    return t;
  }

  const auto root = static_cast<std::uint64_t>(std::sqrt(double(limit)));
  const auto primes = primes_upto(root >= 2 ? root : 1);
  const std::uint64_t seg = std::max<std::uint64_t>(opts.segment, 16);
  const std::uint64_t nseg = (limit + seg - 1) / seg;

  parallel_for(0, nseg, [&](std::uint64_t s) {
    const std::uint64_t lo = 1 + s * seg;
    const std::uint64_t hi = std::min(limit, lo + seg - 1);
    const std::size_t len = static_cast<std::size_t>(hi - lo + 1);
    std::vector<std::uint64_t> rem(len);
    std::vector<std::uint8_t> omg(len, 0), nds(len, 0), nonsf(len, 0);
    std::vector<std::uint32_t> lead(len, 0);
    for (std::size_t i = 0; i < len; ++i) rem[i] = lo + i;
    for (std::uint32_t p : primes) {
      std::uint64_t start = ((lo + p - 1) / p) * p;
      for (std::uint64_t m = start; m <= hi; m += p) {
        std::size_t i = static_cast<std::size_t>(m - lo);
        std::uint8_t e = 0;
        while (rem[i] % p == 0) {
          rem[i] /= p;
          ++e;
        }
        omg[i] += e;
        nds[i] += 1;
        if (e > 1) nonsf[i] = 1;
        if (!lead[i]) lead[i] = p;
      }
    }
    for (std::size_t i = 0; i < len; ++i) {
      const std::uint64_t n = lo + i;
      const bool big = rem[i] > 1;  // one prime factor > sqrt(limit)
      const unsigned Omega = omg[i] + (big ? 1 : 0);
      const unsigned distinct = nds[i] + (big ? 1 : 0);
      double v = 0;
      switch (derived == Derived::mangoldt_prime ? FunctionKind::mangoldt
                                                 : kind) {
        case FunctionKind::mobius:
          v = nonsf[i] ? 0.0 : ((Omega & 1) ? -1.0 : 1.0);
          break;
        case FunctionKind::liouville:
          v = (Omega & 1) ? -1.0 : 1.0;
          break;
        case FunctionKind::mangoldt:
          if (derived == Derived::mangoldt_prime) {
            v = (Omega == 1) ? std::log(static_cast<double>(n)) : 0.0;
          } else if (distinct == 1) {
            const std::uint64_t base = lead[i] ? lead[i] : n;
            v = std::log(static_cast<double>(base));
          }
          break;
        case FunctionKind::omega:
          v = static_cast<double>(Omega);
          break;
        case FunctionKind::squarefree:
          v = nonsf[i] ? 0.0 : 1.0;
          break;
        case FunctionKind::unit:
        case FunctionKind::custom:
          break;  // unreachable
      }
      t.values[static_cast<Eigen::Index>(n - 1)] = v;
    }
  }, 1);
  return t;
}

}  // namespace

FunctionTable sieve_table(FunctionKind kind, std::uint64_t limit,
                          const SieveOptions& opts) {
  if (kind == FunctionKind::custom)
    throw usage_error("cannot sieve the custom kind; load it from a file");
  return sieve_impl(kind, limit, opts, Derived::kind_based);
}

FunctionTable mangoldt_prime_table(std::uint64_t limit,
                                   const SieveOptions& opts) {
  return sieve_impl(FunctionKind::mangoldt, limit, opts,
                    Derived::mangoldt_prime);
}

}  // namespace arf
