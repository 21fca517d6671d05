#include "csmd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "csmd/errors.hpp"

namespace csmd {

// ---------------------------------------------------------------------------
// Domain

bool Domain::contains(const Vector &x, double tol) const {
  switch (kind) {
    case DomainKind::AllSpace:
      return true;
    case DomainKind::Box:
      return (x.array() >= lo - tol).all() && (x.array() <= hi + tol).all();
    case DomainKind::L2Ball:
      return x.norm() <= radius + tol;
    case DomainKind::Simplex:
      return std::abs(x.sum() - 1.0) <= tol && (x.array() >= -tol).all();
  }
  return false;
}

Vector project_simplex(const Vector &x) {
  const Eigen::Index d = x.size();
  std::vector<double> u(x.data(), x.data() + d);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0;
  double theta = 0.0;
  int rho = 0;
  double run = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    run += u[static_cast<size_t>(i)];
    const double t = (run - 1.0) / static_cast<double>(i + 1);
    if (u[static_cast<size_t>(i)] - t > 0.0) {
      rho = static_cast<int>(i + 1);
      css = run;
    }
  }
  theta = (css - 1.0) / rho;
  return (x.array() - theta).max(0.0);
}

Vector Domain::project(const Vector &x) const {
  switch (kind) {
    case DomainKind::AllSpace:
      return x;
    case DomainKind::Box:
      return x.array().max(lo).min(hi);
    case DomainKind::L2Ball: {
      const double n = x.norm();
      return n <= radius ? x : Vector(x * (radius / n));
    }
    case DomainKind::Simplex:
      return project_simplex(x);
  }
  return x;
}

// ---------------------------------------------------------------------------
// MirrorMap

MirrorMap MirrorMap::p_uniform(int dim, double p) {
  if (!(p > 1.0 && p < 2.0)) {
    throw DomainError("p_uniform requires p in (1,2)");
  }
  return {MirrorKind::PUniform, dim, p};
}

double MirrorMap::norm(const Vector &v) const {
  return kind == MirrorKind::EntropicSimplex ? v.lpNorm<1>() : v.norm();
}

double MirrorMap::dual_norm(const Vector &v) const {
  return kind == MirrorKind::EntropicSimplex ? v.lpNorm<Eigen::Infinity>()
                                             : v.norm();
}

namespace {

double p_uniform_scale(double q) { return std::pow(2.0, q - 2.0); }

void require_positive(const Vector &x) {
  if ((x.array() <= 0.0).any()) {
    throw NonInteriorPoint("entropic mirror needs all coordinates > 0");
  }
}

}  // namespace

double psi_value(const MirrorMap &mirror, const Vector &x) {
  switch (mirror.kind) {
    case MirrorKind::Euclidean:
      return 0.5 * x.squaredNorm();
    case MirrorKind::EntropicSimplex: {
      double s = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x[i] < 0.0) throw NonInteriorPoint("negative simplex coordinate");
        if (x[i] > 0.0) s += x[i] * std::log(x[i]);
      }
      return s;
    }
    case MirrorKind::PUniform: {
      const double q = mirror.degree();
      return p_uniform_scale(q) / q * std::pow(x.norm(), q);
    }
  }
  return 0.0;
}

Vector grad_psi(const MirrorMap &mirror, const Vector &x) {
  switch (mirror.kind) {
    case MirrorKind::Euclidean:
      return x;
    case MirrorKind::EntropicSimplex: {
      require_positive(x);
      return (x.array().log() + 1.0).matrix();
    }
    case MirrorKind::PUniform: {
      const double q = mirror.degree();
      const double n = x.norm();
      if (n == 0.0) return Vector::Zero(x.size());  // minimal-norm subgradient
      return p_uniform_scale(q) * std::pow(n, q - 2.0) * x;
    }
  }
  return x;
}

double bregman(const MirrorMap &mirror, const Vector &x, const Vector &y) {
  if (mirror.kind == MirrorKind::EntropicSimplex) {
    require_positive(y);
    // generalized KL; exact also when x has zero coordinates
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x[i] < 0.0) throw NonInteriorPoint("negative simplex coordinate");
      if (x[i] > 0.0) s += x[i] * std::log(x[i] / y[i]);
      s += y[i] - x[i];
    }
    return s;
  }
  return psi_value(mirror, x) - psi_value(mirror, y) -
         grad_psi(mirror, y).dot(x - y);
}

// ---------------------------------------------------------------------------
// Regularizer

double CompositeRegularizer::value(const Vector &x) const {
  switch (kind) {
    case RegKind::Zero:
      return 0.0;
    case RegKind::L1:
      return lambda * x.lpNorm<1>();
    case RegKind::Quadratic:
      return 0.5 * lambda * x.squaredNorm();
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Prox solver

namespace {

Vector soft_threshold(const Vector &v, double tau) {
  return v.array().sign() * (v.array().abs() - tau).max(0.0);
}

// Mirror step for psi = (2^(q-2)/q)||x||^q: solve grad_psi(z) = u. The norm
// r = ||z|| satisfies 2^(q-2) r^(q-1) = ||u||, a monotone scalar equation;
// bracketed bisection to relative tolerance 1e-12.
Vector p_uniform_mirror_step(const MirrorMap &mirror, const Vector &u) {
  const double q = mirror.degree();
  const double scale = p_uniform_scale(q);
  const double un = u.norm();
  if (un == 0.0) return Vector::Zero(u.size());
  const double target = un / scale;  // r^(q-1) = target
  double lo = 0.0;
  double hi = std::max(1.0, std::pow(target, 1.0 / (q - 1.0)) * 2.0);
  while (std::pow(hi, q - 1.0) < target) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (std::pow(mid, q - 1.0) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-12 * hi) break;
  }
  const double r = 0.5 * (lo + hi);
  return u * (r / un);
}

}  // namespace

Vector solve_prox(const ProxProblem &p) {
  if (p.eta <= 0.0) throw DomainError("prox needs eta > 0");
  const MirrorKind mk = p.mirror.kind;
  const DomainKind dk = p.domain.kind;
  const RegKind hk = p.h.kind;

  if (mk == MirrorKind::Euclidean) {
    if (dk == DomainKind::Simplex) {
      throw UnsupportedCombination("euclidean mirror on simplex");
    }
    const Vector y = p.anchor - p.eta * p.g;
    switch (hk) {
      case RegKind::Zero:
        return p.domain.project(y);
      case RegKind::Quadratic:
        // objective is ((1+lambda*eta)/(2 eta))||x - y/(1+lambda*eta)||^2
        // + const, so shrinkage then projection is exact for any domain
        return p.domain.project(y / (1.0 + p.h.lambda * p.eta));
      case RegKind::L1:
        if (dk == DomainKind::L2Ball) {
          throw UnsupportedCombination("l1 prox on l2 ball");
        }
        // separable: per-coordinate soft-threshold, then interval clamp
        return p.domain.project(soft_threshold(y, p.h.lambda * p.eta));
    }
  }

  if (mk == MirrorKind::EntropicSimplex) {
    if (dk != DomainKind::Simplex || hk != RegKind::Zero) {
      throw UnsupportedCombination("entropic mirror supports simplex, h=0");
    }
    require_positive(p.anchor);
    // multiplicative weights: x_i ∝ anchor_i * exp(-eta g_i)
    Eigen::ArrayXd logw = p.anchor.array().log() - p.eta * p.g.array();
    logw -= logw.maxCoeff();
    Eigen::ArrayXd w = logw.exp().max(1e-300);
    return (w / w.sum()).matrix();
  }

  // PUniform
  if (dk != DomainKind::AllSpace || hk != RegKind::Zero) {
    throw UnsupportedCombination("p_uniform mirror supports all_space, h=0");
  }
  const Vector u = grad_psi(p.mirror, p.anchor) - p.eta * p.g;
  return p_uniform_mirror_step(p.mirror, u);
}

double prox_objective(const ProxProblem &p, const Vector &x) {
  return p.h.value(x) + p.g.dot(x - p.anchor) +
         bregman(p.mirror, x, p.anchor) / p.eta;
}

// ---------------------------------------------------------------------------
// Uniform-convexity check

namespace {

Vector sample_point(const MirrorMap &mirror, RngStream &rng) {
  const int d = mirror.dim;
  Vector x(d);
  switch (mirror.kind) {
    case MirrorKind::Euclidean:
      for (int i = 0; i < d; ++i) x[i] = rng.uniform(-1.0, 1.0);
      return x;
    case MirrorKind::PUniform: {
      for (int i = 0; i < d; ++i) x[i] = rng.normal();
      const double r = std::pow(rng.uniform_pos(), 1.0 / d);
      const double n = x.norm();
      return n == 0.0 ? x : Vector(x * (r / n));
    }
    case MirrorKind::EntropicSimplex: {
      for (int i = 0; i < d; ++i) x[i] = rng.exponential();
      x /= x.sum();
      // stay strictly interior
      return 0.99 * x + Vector::Constant(d, 0.01 / d);
    }
  }
  return x;
}

}  // namespace

ConvexityReport check_uniform_convexity(const MirrorMap &mirror, int trials,
                                        std::uint64_t rng_seed) {
  RngStream rng(rng_seed, 0);
  const double q = mirror.degree();
  const double c = mirror.modulus();
  double min_slack = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const Vector x = sample_point(mirror, rng);
    const Vector y = sample_point(mirror, rng);
    const double slack =
        bregman(mirror, x, y) - c * std::pow(mirror.norm(x - y), q);
    min_slack = std::min(min_slack, slack);
  }
  return {min_slack, trials};
}

}  // namespace csmd
