#pragma once
// Error taxonomy. The CLI maps these to exit codes:
//   usage_error (bad arguments, insufficient table coverage)      -> 2
//   resource_error (budget exceeded), format/corruption (cache)   -> 3
//   internal_error (a built-in FFT/naive cross-check failed)      -> 4

#include <stdexcept>
#include <string>

namespace arf {

struct usage_error : std::runtime_error {
  explicit usage_error(const std::string& m) : std::runtime_error(m) {}
};

// Table does not cover the index range an operation needs.
struct coverage_error : usage_error {
  explicit coverage_error(const std::string& m) : usage_error(m) {}
};

struct resource_error : std::runtime_error {
  explicit resource_error(const std::string& m) : std::runtime_error(m) {}
};

// Cache file with bad magic/version/kind byte.
struct format_error : std::runtime_error {
  explicit format_error(const std::string& m) : std::runtime_error(m) {}
};

// Cache file truncated or failing its checksum.
struct corruption_error : std::runtime_error {
  explicit corruption_error(const std::string& m) : std::runtime_error(m) {}
};

// A self-check (FFT path vs naive path) disagreed: the build is wrong,
// not the input.
struct internal_error : std::logic_error {
  explicit internal_error(const std::string& m) : std::logic_error(m) {}
};

}  // namespace arf
