#include "csmd/stats.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "csmd/errors.hpp"

namespace csmd {

RateFit fit_rate(const std::vector<std::pair<double, double>> &points) {
  const int n = static_cast<int>(points.size());
  if (n < 4) throw DomainError("fit_rate needs at least 4 points");
  Eigen::VectorXd lx(n), ly(n);
  for (int i = 0; i < n; ++i) {
    if (!(points[i].second > 0.0)) {
      throw NonPositiveGap("fit_rate needs strictly positive gaps");
    }
    lx[i] = std::log(points[i].first);
    ly[i] = std::log(points[i].second);
  }

  RateFit fit;
  fit.points = n;
  Eigen::MatrixXd X1(n, 2);
  X1.col(0).setOnes();
  X1.col(1) = lx;
  const Eigen::Vector2d b = X1.colPivHouseholderQr().solve(ly);
  fit.intercept = b[0];
  fit.slope = b[1];
  const double ss_res = (ly - X1 * b).squaredNorm();
  const double ss_tot = (ly.array() - ly.mean()).matrix().squaredNorm();
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;

  Eigen::MatrixXd X2(n, 3);
  X2.col(0).setOnes();
  X2.col(1) = lx;
  X2.col(2) = lx.array().square();
  const Eigen::Vector3d b2 = X2.colPivHouseholderQr().solve(ly);
  fit.curvature = b2[2];
  return fit;
}

MeanSE mean_se(const std::vector<double> &xs) {
  MeanSE r;
  const size_t n = xs.size();
  if (n == 0) throw DomainError("mean_se of an empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  r.mean = s / static_cast<double>(n);
  if (n < 2) return r;
  double ss = 0.0;
  for (double x : xs) ss += (x - r.mean) * (x - r.mean);
  r.se = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  return r;
}

double median(const std::vector<double> &xs) {
  if (xs.empty()) throw DomainError("median of an empty sample");
  std::vector<double> s(xs);
  std::sort(s.begin(), s.end());
  const size_t n = s.size();
  return n % 2 == 1 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

double median_of_means(const std::vector<double> &xs, int k) {
  if (k < 1 || xs.size() < static_cast<size_t>(k)) {
    throw DomainError("median_of_means needs at least k samples");
  }
  const size_t n = xs.size();
  std::vector<double> block_means;
  size_t start = 0;
  for (int b = 0; b < k; ++b) {
    const size_t end = n * static_cast<size_t>(b + 1) / static_cast<size_t>(k);
    double s = 0.0;
    for (size_t i = start; i < end; ++i) s += xs[i];
    block_means.push_back(s / static_cast<double>(end - start));
    start = end;
  }
  return median(block_means);
}

double trimmed_mean(const std::vector<double> &xs, double trim_fraction) {
  if (xs.empty()) throw DomainError("trimmed_mean of an empty sample");
  if (!(trim_fraction >= 0.0 && trim_fraction < 0.5)) {
    throw DomainError("trim fraction must be in [0, 0.5)");
  }
  std::vector<double> s(xs);
  std::sort(s.begin(), s.end());
  const size_t n = s.size();
  const size_t cut = static_cast<size_t>(trim_fraction * static_cast<double>(n));
  double sum = 0.0;
  for (size_t i = cut; i < n - cut; ++i) sum += s[i];
  return sum / static_cast<double>(n - 2 * cut);
}

double quantile(const std::vector<double> &xs, double q) {
  if (xs.empty()) throw DomainError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile level outside [0,1]");
  std::vector<double> s(xs);
  std::sort(s.begin(), s.end());
  const double pos = q * static_cast<double>(s.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = static_cast<size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return (1.0 - frac) * s[lo] + frac * s[hi];
}

}  // namespace csmd
