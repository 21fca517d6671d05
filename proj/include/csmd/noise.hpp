#ifndef CSMD_NOISE_HPP
#define CSMD_NOISE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "csmd/problems.hpp"

namespace csmd {

// Moment/MGF condition a generator certifies:
//   A5A  E||xi||^2 <= sigma^2
//   A5B  E exp(lambda ||xi||^2) <= exp(lambda sigma^2), lambda in [0, sigma^-2]
//   A5C  E||xi||^p <= sigma^p, p in (1,2)
//   A5D  E exp(lambda ||xi||^p) <= exp(lambda sigma^p), lambda in [0, sigma^-p]
enum class NoiseAssumption { A5A, A5B, A5C, A5D };

enum class NoiseGenerator {
  Gaussian,           // 5A, isotropic, total variance 0.95 sigma^2
  SphereBounded,      // 5B, uniform on the radius-sigma sphere (equality case)
  ScaledGaussianMgf,  // 5B, isotropic gaussian, total variance sigma^2/2.5
  SymmetricPareto,    // 5C, Pareto radius, shape (p+2)/2, uniform direction
  SymmetricWeibull,   // 5D, Weibull radius (sigma/1.6^(1/p)) E^(1/p)
};

struct NoiseModel {
  NoiseAssumption assumption = NoiseAssumption::A5A;
  NoiseGenerator generator = NoiseGenerator::Gaussian;
  int dim = 1;
  double sigma = 0.0;
  double p = 2.0;  // tail exponent, 5C/5D only

  static NoiseModel gaussian(int dim, double sigma);
  static NoiseModel sphere_bounded(int dim, double sigma);
  static NoiseModel scaled_gaussian_mgf(int dim, double sigma);
  static NoiseModel symmetric_pareto(int dim, double sigma, double p);
  static NoiseModel symmetric_weibull(int dim, double sigma, double p);
  // generator selected by its snake_case name
  static NoiseModel by_name(const std::string &name, int dim, double sigma,
                            double p);

  std::string name() const;
  std::string assumption_name() const;
};

// One additive noise draw (independent of the query point).
Vector sample_noise(const NoiseModel &n, RngStream &rng);

// true_subgradient(p, x) + noise; exact when sigma = 0.
Vector sample_noisy_gradient(const ProblemInstance &p, const NoiseModel &n,
                             const Vector &x, RngStream &rng);

struct NoiseGridPoint {
  double lambda = 0.0;  // 0 for the plain moment checks (5A/5C)
  double estimate = 0.0;
  double se = 0.0;
  double bound = 0.0;
  bool pass = false;  // estimate - 2 se <= bound
};

struct NoiseValidationReport {
  bool pass = false;
  std::vector<NoiseGridPoint> points;
  long samples = 0;
};

// Empirical check of the certified condition: 5A/5C compare the moment to
// sigma^2 / sigma^p; 5B/5D evaluate the MGF on the grid
// {0.1, 0.25, 0.5, 0.75, 1.0} * sigma^-2 (resp. sigma^-p). PASS iff
// estimate - 2*SE <= bound everywhere. Throws InsufficientSamples when
// samples < 10^4 or any SE exceeds 20% of its bound.
NoiseValidationReport validate_noise(const NoiseModel &n, long samples,
                                     RngStream &rng);

}  // namespace csmd

#endif  // CSMD_NOISE_HPP
