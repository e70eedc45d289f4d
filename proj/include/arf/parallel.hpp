#pragma once
// Deterministic parallel-for. Work is split into fixed-size chunks that
// depend only on the problem size; threads pull chunks through an atomic
// cursor and write results into per-index slots. Any reduction over those
// slots happens serially in index order afterwards, so output bits are
// identical for 1 thread and for N threads.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace arf {

// Process-wide worker cap (like Eigen's setNbThreads). 0 = hardware count.
inline std::atomic<unsigned>& max_threads_slot() {
  static std::atomic<unsigned> v{0};
  return v;
}
inline void set_max_threads(unsigned n) { max_threads_slot().store(n); }
inline unsigned effective_threads() {
  unsigned req = max_threads_slot().load();
  if (req == 0) {
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
  }
  return req;
}

// fn(i) is called exactly once for every i in [begin, end), in unspecified
// thread placement but with chunk boundaries independent of thread count.
template <typename Fn>
void parallel_for(std::uint64_t begin, std::uint64_t end, Fn&& fn,
                  std::uint64_t chunk = 0) {
  if (begin >= end) return;
  const std::uint64_t n = end - begin;
  unsigned workers = effective_threads();
  if (chunk == 0) chunk = std::max<std::uint64_t>(1, n / 64);
  const std::uint64_t nchunks = (n + chunk - 1) / chunk;
  if (workers <= 1 || nchunks <= 1) {
    for (std::uint64_t i = begin; i < end; ++i) fn(i);
    return;
  }
  workers = static_cast<unsigned>(
      std::min<std::uint64_t>(workers, nchunks));
  std::atomic<std::uint64_t> cursor{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto body = [&] {
    for (;;) {
      std::uint64_t c = cursor.fetch_add(1);
      if (c >= nchunks) return;
      std::uint64_t lo = begin + c * chunk;
      std::uint64_t hi = std::min(end, lo + chunk);
      try {
        for (std::uint64_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> g(error_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace arf
