#include "arf/table_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <vector>

namespace arf {

namespace {

constexpr char kMagic[4] = {'A', 'R', 'F', '1'};
constexpr std::uint16_t kVersion = 1;

enum class Width { i8, f64, u32 };

Width width_for(FunctionKind k) {
  switch (k) {
    case FunctionKind::mobius:
    case FunctionKind::liouville:
    case FunctionKind::squarefree:
    case FunctionKind::unit:
      return Width::i8;
    case FunctionKind::omega:
      return Width::u32;
    case FunctionKind::mangoldt:
    case FunctionKind::custom:
      return Width::f64;
  }
  return Width::f64;
}

std::size_t entry_bytes(Width w) {
  switch (w) {
    case Width::i8: return 1;
    case Width::u32: return 4;
    case Width::f64: return 8;
  }
  return 8;
}

void put_u16(std::vector<unsigned char>& b, std::uint16_t v) {
  b.push_back(static_cast<unsigned char>(v));
  b.push_back(static_cast<unsigned char>(v >> 8));
}
void put_u32(std::vector<unsigned char>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    b.push_back(static_cast<unsigned char>(v >> (8 * i)));
}
void put_u64(std::vector<unsigned char>& b, std::uint64_t v) {
  for (int i = 0; i < 8; ++i)
    b.push_back(static_cast<unsigned char>(v >> (8 * i)));
}
std::uint16_t get_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}
std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

std::uint64_t fnv1a64(const unsigned char* data, std::size_t n) {
  std::uint64_t h = 14695981039346656037ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= 1099511628211ULL;
  }
  return h;
}

void save_table(const FunctionTable& table, const std::filesystem::path& path) {
  const Width w = width_for(table.kind);
  std::vector<unsigned char> buf;
  buf.reserve(31 + entry_bytes(w) * table.length());
  buf.insert(buf.end(), kMagic, kMagic + 4);
  put_u16(buf, kVersion);
  buf.push_back(static_cast<unsigned char>(table.kind));
  put_u64(buf, table.offset);
  put_u64(buf, table.length());
  const std::size_t payload_start = buf.size();
  for (Eigen::Index i = 0; i < table.values.size(); ++i) {
    const double v = table.values[i];
    switch (w) {
      case Width::i8: {
        const double r = std::nearbyint(v);
        if (r != v || r < -128 || r > 127)
          throw usage_error("value at index " + std::to_string(i) +
                            " does not fit the i8 encoding of kind " +
                            kind_name(table.kind));
        buf.push_back(static_cast<unsigned char>(static_cast<signed char>(r)));
        break;
      }
      case Width::u32: {
        const double r = std::nearbyint(v);
        if (r != v || r < 0 || r > 4294967295.0)
          throw usage_error("value at index " + std::to_string(i) +
                            " does not fit the u32 encoding of kind omega");
        put_u32(buf, static_cast<std::uint32_t>(r));
        break;
      }
      case Width::f64:
        put_u64(buf, std::bit_cast<std::uint64_t>(v));
        break;
    }
  }
  put_u64(buf, fnv1a64(buf.data() + payload_start, buf.size() - payload_start));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw resource_error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
  if (!out) throw resource_error("write failed for " + path.string());
}

FunctionTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw resource_error("cannot open " + path.string());
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  constexpr std::size_t kHeader = 4 + 2 + 1 + 8 + 8;
  if (buf.size() < kHeader + 8)
    throw corruption_error("truncated table file " + path.string());
  if (std::memcmp(buf.data(), kMagic, 4) != 0)
    throw format_error("bad magic in " + path.string());
  if (get_u16(buf.data() + 4) != kVersion)
    throw format_error("unsupported format version in " + path.string());
  const unsigned kind_byte = buf[6];
  if (kind_byte > static_cast<unsigned>(FunctionKind::custom))
    throw format_error("unknown kind tag in " + path.string());
  FunctionTable t;
  t.kind = static_cast<FunctionKind>(kind_byte);
  t.offset = get_u64(buf.data() + 7);
  const std::uint64_t length = get_u64(buf.data() + 15);
  if (t.offset < 1) throw format_error("zero offset in " + path.string());
  const Width w = width_for(t.kind);
  const std::size_t expect = kHeader + entry_bytes(w) * length + 8;
  if (buf.size() != expect)
    throw corruption_error("size mismatch in " + path.string() + ": have " +
                           std::to_string(buf.size()) + " bytes, expected " +
                           std::to_string(expect));
  const unsigned char* payload = buf.data() + kHeader;
  const std::size_t payload_len = entry_bytes(w) * length;
  const std::uint64_t want = get_u64(payload + payload_len);
  const std::uint64_t have = fnv1a64(payload, payload_len);
  if (want != have)
    throw corruption_error("checksum mismatch in " + path.string());
  t.values.resize(static_cast<Eigen::Index>(length));
  for (std::uint64_t i = 0; i < length; ++i) {
    switch (w) {
      case Width::i8:
        t.values[static_cast<Eigen::Index>(i)] =
            static_cast<double>(static_cast<signed char>(payload[i]));
        break;
      case Width::u32:
        t.values[static_cast<Eigen::Index>(i)] =
            static_cast<double>(get_u32(payload + 4 * i));
        break;
      case Width::f64:
        t.values[static_cast<Eigen::Index>(i)] =
            std::bit_cast<double>(get_u64(payload + 8 * i));
        break;
    }
  }
  return t;
}

FunctionTable cached_table(FunctionKind kind, std::uint64_t limit,
                           const std::filesystem::path& cache_dir,
                           const SieveOptions& opts) {
  namespace fs = std::filesystem;
  if (kind == FunctionKind::custom)
    throw usage_error("custom tables are not cacheable by kind");
  std::error_code ec;
  fs::create_directories(cache_dir, ec);
  const std::string prefix = std::string(kind_name(kind)) + "-";
  fs::path best;
  std::uint64_t best_len = 0;
  if (fs::is_directory(cache_dir)) {
    for (const auto& entry : fs::directory_iterator(cache_dir)) {
      if (!entry.is_regular_file()) continue;
      const std::string name = entry.path().filename().string();
      if (name.rfind(prefix, 0) != 0 || entry.path().extension() != ".arf")
        continue;
      std::uint64_t len = 0;
      try {
        len = std::stoull(name.substr(prefix.size()));
      } catch (...) {
        continue;
      }
      if (len >= limit && (best_len == 0 || len < best_len)) {
        best_len = len;
        best = entry.path();
      }
    }
  }
  if (best_len > 0) {
    FunctionTable t = load_table(best);
    if (t.kind == kind && t.offset == 1 && t.length() >= limit) {
      t.values.conservativeResize(static_cast<Eigen::Index>(limit));
      return t;
    }
  }
  FunctionTable t = sieve_table(kind, limit, opts);
  save_table(t, cache_dir / (prefix + std::to_string(limit) + ".arf"));
  return t;
}

}  // namespace arf
