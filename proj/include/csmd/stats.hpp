#ifndef CSMD_STATS_HPP
#define CSMD_STATS_HPP

#include <utility>
#include <vector>

namespace csmd {

struct RateFit {
  double slope = 0.0;      // d log(gap) / d log(T)
  double intercept = 0.0;
  double r_squared = 0.0;
  double curvature = 0.0;  // quadratic coefficient of a 2nd-degree log-log fit
  int points = 0;
};

// Least squares on (log T, log gap). Needs >= 4 points with positive gaps
// (NonPositiveGap otherwise).
RateFit fit_rate(const std::vector<std::pair<double, double>> &points);

struct MeanSE {
  double mean = 0.0;
  double se = 0.0;
};

MeanSE mean_se(const std::vector<double> &xs);

// Median of k block means, blocks taken in the given order.
double median_of_means(const std::vector<double> &xs, int k);

// Symmetric trim of the given fraction from each tail before averaging.
double trimmed_mean(const std::vector<double> &xs, double trim_fraction);

// Empirical quantile with linear interpolation between order statistics.
double quantile(const std::vector<double> &xs, double q);

double median(const std::vector<double> &xs);

}  // namespace csmd

#endif  // CSMD_STATS_HPP
