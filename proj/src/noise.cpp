#include "csmd/noise.hpp"

#include <cmath>

#include "csmd/errors.hpp"

namespace csmd {

NoiseModel NoiseModel::gaussian(int dim, double sigma) {
  return {NoiseAssumption::A5A, NoiseGenerator::Gaussian, dim, sigma, 2.0};
}

NoiseModel NoiseModel::sphere_bounded(int dim, double sigma) {
  return {NoiseAssumption::A5B, NoiseGenerator::SphereBounded, dim, sigma, 2.0};
}

NoiseModel NoiseModel::scaled_gaussian_mgf(int dim, double sigma) {
  return {NoiseAssumption::A5B, NoiseGenerator::ScaledGaussianMgf, dim, sigma,
          2.0};
}

NoiseModel NoiseModel::symmetric_pareto(int dim, double sigma, double p) {
  if (!(p > 1.0 && p < 2.0)) {
    throw DomainError("symmetric_pareto requires p in (1,2)");
  }
  return {NoiseAssumption::A5C, NoiseGenerator::SymmetricPareto, dim, sigma, p};
}

NoiseModel NoiseModel::symmetric_weibull(int dim, double sigma, double p) {
  if (!(p > 0.0 && p < 2.0)) {
    throw DomainError("symmetric_weibull requires p in (0,2)");
  }
  return {NoiseAssumption::A5D, NoiseGenerator::SymmetricWeibull, dim, sigma, p};
}

NoiseModel NoiseModel::by_name(const std::string &name, int dim, double sigma,
                               double p) {
  if (name == "gaussian") return gaussian(dim, sigma);
  if (name == "sphere_bounded") return sphere_bounded(dim, sigma);
  if (name == "scaled_gaussian_mgf") return scaled_gaussian_mgf(dim, sigma);
  if (name == "symmetric_pareto") return symmetric_pareto(dim, sigma, p);
  if (name == "symmetric_weibull") return symmetric_weibull(dim, sigma, p);
  throw ConfigError("unknown noise generator: " + name);
}

std::string NoiseModel::name() const {
  switch (generator) {
    case NoiseGenerator::Gaussian:
      return "gaussian";
    case NoiseGenerator::SphereBounded:
      return "sphere_bounded";
    case NoiseGenerator::ScaledGaussianMgf:
      return "scaled_gaussian_mgf";
    case NoiseGenerator::SymmetricPareto:
      return "symmetric_pareto";
    case NoiseGenerator::SymmetricWeibull:
      return "symmetric_weibull";
  }
  return "";
}

std::string NoiseModel::assumption_name() const {
  switch (assumption) {
    case NoiseAssumption::A5A:
      return "5A";
    case NoiseAssumption::A5B:
      return "5B";
    case NoiseAssumption::A5C:
      return "5C";
    case NoiseAssumption::A5D:
      return "5D";
  }
  return "";
}

namespace {

Vector random_direction(int dim, RngStream &rng) {
  Vector u(dim);
  double n = 0.0;
  do {
    for (int i = 0; i < dim; ++i) u[i] = rng.normal();
    n = u.norm();
  } while (n == 0.0);
  return u / n;
}

}  // namespace

Vector sample_noise(const NoiseModel &n, RngStream &rng) {
  const int d = n.dim;
  if (n.sigma == 0.0) return Vector::Zero(d);
  switch (n.generator) {
    case NoiseGenerator::Gaussian: {
      // total variance 0.95 sigma^2, split evenly across coordinates
      const double s = n.sigma * std::sqrt(0.95 / d);
      Vector xi(d);
      for (int i = 0; i < d; ++i) xi[i] = s * rng.normal();
      return xi;
    }
    case NoiseGenerator::SphereBounded:
      return n.sigma * random_direction(d, rng);
    case NoiseGenerator::ScaledGaussianMgf: {
      const double s = n.sigma / std::sqrt(2.5 * d);
      Vector xi(d);
      for (int i = 0; i < d; ++i) xi[i] = s * rng.normal();
      return xi;
    }
    case NoiseGenerator::SymmetricPareto: {
      // radius Pareto(shape a, scale x_m) with a = (p+2)/2 in (p,2):
      // E r^p = a x_m^p/(a-p) = sigma^p, variance infinite
      const double a = (n.p + 2.0) / 2.0;
      const double xm =
          n.sigma * std::pow((a - n.p) / a, 1.0 / n.p);
      const double r = xm * std::pow(rng.uniform_pos(), -1.0 / a);
      return r * random_direction(d, rng);
    }
    case NoiseGenerator::SymmetricWeibull: {
      // ||xi||^p = sigma^p E/1.6 with E ~ Exp(1), so the MGF obeys
      // 1/(1 - u/1.6) <= e^u for u in [0,1]
      const double r =
          n.sigma / std::pow(1.6, 1.0 / n.p) *
          std::pow(rng.exponential(), 1.0 / n.p);
      return r * random_direction(d, rng);
    }
  }
  return Vector::Zero(d);
}

Vector sample_noisy_gradient(const ProblemInstance &p, const NoiseModel &n,
                             const Vector &x, RngStream &rng) {
  Vector g = true_subgradient(p, x);
  if (n.sigma == 0.0) return g;
  return g + sample_noise(n, rng);
}

NoiseValidationReport validate_noise(const NoiseModel &n, long samples,
                                     RngStream &rng) {
  if (samples < 10000) {
    throw InsufficientSamples("validate_noise needs at least 10^4 samples");
  }
  const bool mgf = n.assumption == NoiseAssumption::A5B ||
                   n.assumption == NoiseAssumption::A5D;
  const double moment_p =
      n.assumption == NoiseAssumption::A5A || n.assumption == NoiseAssumption::A5B
          ? 2.0
          : n.p;
  const double sp = std::pow(n.sigma, moment_p);

  std::vector<double> lambdas;
  if (mgf) {
    for (double f : {0.1, 0.25, 0.5, 0.75, 1.0}) lambdas.push_back(f / sp);
  } else {
    lambdas.push_back(0.0);
  }

  const size_t k = lambdas.size();
  std::vector<double> sum(k, 0.0), sumsq(k, 0.0);
  for (long i = 0; i < samples; ++i) {
    const Vector xi = sample_noise(n, rng);
    const double m = std::pow(xi.norm(), moment_p);
    for (size_t j = 0; j < k; ++j) {
      const double v = mgf ? std::exp(lambdas[j] * m) : m;
      sum[j] += v;
      sumsq[j] += v * v;
    }
  }

  NoiseValidationReport rep;
  rep.samples = samples;
  rep.pass = true;
  for (size_t j = 0; j < k; ++j) {
    NoiseGridPoint pt;
    pt.lambda = lambdas[j];
    pt.estimate = sum[j] / samples;
    const double var =
        std::max(0.0, sumsq[j] / samples - pt.estimate * pt.estimate);
    pt.se = std::sqrt(var / samples);
    pt.bound = mgf ? std::exp(lambdas[j] * sp) : sp;
    if (pt.se > 0.2 * pt.bound) {
      throw InsufficientSamples("standard error exceeds 20% of the bound");
    }
    // relative headroom keeps equality-anchored generators from failing on
    // roundoff alone
    pt.pass = pt.estimate - 2.0 * pt.se <= pt.bound * (1.0 + 1e-9);
    rep.pass = rep.pass && pt.pass;
    rep.points.push_back(pt);
  }
  return rep;
}

}  // namespace csmd
