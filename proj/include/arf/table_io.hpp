#pragma once
// Binary table cache.
//
// Layout (all integers little-endian):
//   "ARF1"  magic, 4 bytes
//   u16     format version (currently 1)
//   u8      kind tag (FunctionKind value)
//   u64     offset
//   u64     length
//   payload length entries: i8 for {mobius, liouville, squarefree, unit},
//           f64 bit patterns for {mangoldt, custom}, u32 for omega
//   u64     FNV-1a checksum of the payload bytes
//
// load(save(t)) is bit-exact. Bad magic/version/kind -> format_error;
// truncation, size mismatch, or checksum failure -> corruption_error.

#include <filesystem>

#include "arf/sieve.hpp"

namespace arf {

void save_table(const FunctionTable& table, const std::filesystem::path& path);
FunctionTable load_table(const std::filesystem::path& path);

// Fetch a [1, limit] table of `kind`, preferring any cached file in
// `cache_dir` that covers it (truncating longer tables); sieves and saves
// "<kind>-<limit>.arf" on a miss. Creates the directory if needed.
FunctionTable cached_table(FunctionKind kind, std::uint64_t limit,
                           const std::filesystem::path& cache_dir,
                           const SieveOptions& opts = {});

std::uint64_t fnv1a64(const unsigned char* data, std::size_t n);

}  // namespace arf
