#pragma once
// Decay-model fitting. Two candidate laws, both linearized and solved by
// least squares on transformed coordinates:
//   log-power  y = C / log(N)^kappa   in (log log N, log y)
//   power      y = C * N^-theta       in (log N,     log y)
// r_squared is reported against the transformed data. A fitted exponent
// below 0.05 is flagged "no decay"; callers mark one-point ladders
// "degenerate".

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace arf {

struct DecayFit {
  enum class Model { log_power, power };
  Model model = Model::log_power;
  double C = 0;
  double exponent = 0;  // kappa or theta
  double r_squared = 0;
  std::vector<std::pair<double, double>> points;  // (N, y)
  std::string flag;  // "", "no decay", "degenerate"
};

const char* model_name(DecayFit::Model m);

// Both throw usage_error for fewer than 2 points, nonpositive y, or (for
// the log-power model) N <= 1.
DecayFit fit_log_power(const std::vector<std::pair<double, double>>& points);
DecayFit fit_power(const std::vector<std::pair<double, double>>& points);
// Fits both models and returns the one with the higher r_squared.
DecayFit fit_best(const std::vector<std::pair<double, double>>& points);

}  // namespace arf
