#include "arf/report.hpp"

#include <charconv>
#include <ostream>

#include "arf/fit.hpp"
#include "arf/version.hpp"

namespace arf {

std::string fmt_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  (void)ec;  // 64 bytes always suffice for general/17
  return std::string(buf, end);
}

void write_csv(std::ostream& os, const nlohmann::json& config,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows,
               const std::vector<std::string>& extra_comments) {
  os << "# arf " << version << "\n";
  os << "# config " << config.dump() << "\n";
  for (const auto& line : extra_comments) os << "# " << line << "\n";
  for (std::size_t i = 0; i < header.size(); ++i)
    os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << row[i];
    os << "\n";
  }
}

void write_json_doc(std::ostream& os, const nlohmann::json& config,
                    const nlohmann::json& results) {
  nlohmann::json doc;
  doc["version"] = version;
  doc["config"] = config;
  doc["results"] = results;
  os << doc.dump(2) << "\n";
}

nlohmann::json fit_to_json(const DecayFit& fit) {
  nlohmann::json j;
  j["model"] = model_name(fit.model);
  j["C"] = fit.C;
  j["exponent"] = fit.exponent;
  j["r_squared"] = fit.r_squared;
  j["flag"] = fit.flag;
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& [n, y] : fit.points) pts.push_back({{"n", n}, {"y", y}});
  j["points"] = pts;
  return j;
}

void write_gnuplot(std::ostream& os, const std::string& csv_path,
                   const std::string& title, bool logx, bool logy) {
  os << "# gnuplot script generated by arf " << version << "\n";
  os << "set datafile commentschars '#'\n";
  os << "set datafile separator ','\n";
  os << "set title '" << title << "'\n";
  if (logx) os << "set logscale x\n";
  if (logy) os << "set logscale y\n";
  os << "set key off\n";
  os << "plot '" << csv_path << "' using 1:2 with linespoints pt 7\n";
  os << "pause -1\n";
}

}  // namespace arf
