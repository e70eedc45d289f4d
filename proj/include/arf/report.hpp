#pragma once
// Output formatting shared by the CLI: CSV with a version/config preamble,
// JSON documents with the same echo, gnuplot scripts, and the one float
// formatter every number goes through.
//
// Determinism contract: given equal results, emitted bytes are identical
// regardless of thread count — configs echo everything that affects the
// numbers and nothing that does not (thread count is deliberately not
// echoed).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace arf {

// %.17g rendering (17 significant digits, trailing zeros trimmed);
// round-trips every finite double.
std::string fmt_double(double v);

// "# arf <version>" / "# config <compact json>" comment lines, optional
// further "# ..." lines, a header row, then the data rows. Cells are
// pre-rendered strings.
void write_csv(std::ostream& os, const nlohmann::json& config,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows,
               const std::vector<std::string>& extra_comments = {});

// {"version", "config", "results"} document, 2-space indentation.
void write_json_doc(std::ostream& os, const nlohmann::json& config,
                    const nlohmann::json& results);

nlohmann::json fit_to_json(const struct DecayFit& fit);

// Script plotting column 2 of `csv_path` against column 1.
void write_gnuplot(std::ostream& os, const std::string& csv_path,
                   const std::string& title, bool logx, bool logy);

}  // namespace arf
