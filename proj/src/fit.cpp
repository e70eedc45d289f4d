#include "arf/fit.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "arf/errors.hpp"

namespace arf {

const char* model_name(DecayFit::Model m) {
  return m == DecayFit::Model::log_power ? "log-power" : "power";
}

namespace {

DecayFit fit_transformed(const std::vector<std::pair<double, double>>& points,
                         DecayFit::Model model) {
  if (points.size() < 2)
    throw usage_error("decay fit needs at least 2 points");
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double N = points[static_cast<std::size_t>(i)].first;
    const double y = points[static_cast<std::size_t>(i)].second;
    if (!(y > 0)) throw usage_error("decay fit needs positive values");
    double x;
    if (model == DecayFit::Model::log_power) {
      if (!(N > 1))
        throw usage_error("log-power fit needs N > 1 at every point");
      x = std::log(std::log(N));
    } else {
      if (!(N > 0)) throw usage_error("power fit needs N > 0");
      x = std::log(N);
    }
    A(i, 0) = 1.0;
    A(i, 1) = x;
    b(i) = std::log(y);
  }
  const Eigen::Vector2d sol = A.colPivHouseholderQr().solve(b);
  const Eigen::VectorXd resid = b - A * sol;
  const double ss_res = resid.squaredNorm();
  const double mean = b.mean();
  const double ss_tot = (b.array() - mean).matrix().squaredNorm();
  DecayFit fit;
  fit.model = model;
  fit.C = std::exp(sol(0));
  fit.exponent = -sol(1);
  fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot
                             : (ss_res < 1e-24 ? 1.0 : 0.0);
  fit.points = points;
  if (fit.exponent < 0.05) fit.flag = "no decay";
  return fit;
}

}  // namespace

DecayFit fit_log_power(const std::vector<std::pair<double, double>>& points) {
  return fit_transformed(points, DecayFit::Model::log_power);
}

DecayFit fit_power(const std::vector<std::pair<double, double>>& points) {
  return fit_transformed(points, DecayFit::Model::power);
}

DecayFit fit_best(const std::vector<std::pair<double, double>>& points) {
  DecayFit lp = fit_log_power(points);
  DecayFit pw = fit_power(points);
  return pw.r_squared > lp.r_squared ? pw : lp;
}

}  // namespace arf
