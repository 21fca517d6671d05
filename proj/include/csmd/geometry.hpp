#ifndef CSMD_GEOMETRY_HPP
#define CSMD_GEOMETRY_HPP

#include <Eigen/Core>
#include <string>

#include "csmd/rng.hpp"

namespace csmd {

using Vector = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Feasible sets

enum class DomainKind { AllSpace, Box, L2Ball, Simplex };

struct Domain {
  DomainKind kind = DomainKind::AllSpace;
  double lo = 0.0;      // box lower bound (same for every coordinate)
  double hi = 0.0;      // box upper bound
  double radius = 0.0;  // l2 ball radius, centered at the origin

  static Domain all_space() { return {DomainKind::AllSpace}; }
  static Domain box(double lo, double hi) {
    return {DomainKind::Box, lo, hi};
  }
  static Domain l2_ball(double radius) {
    return {DomainKind::L2Ball, 0.0, 0.0, radius};
  }
  static Domain simplex() { return {DomainKind::Simplex}; }

  bool contains(const Vector &x, double tol = 1e-12) const;
  // Euclidean projection; defined for all kinds (simplex via sort).
  Vector project(const Vector &x) const;
};

// Euclidean projection onto the probability simplex.
Vector project_simplex(const Vector &x);

// ---------------------------------------------------------------------------
// Mirror maps

enum class MirrorKind { Euclidean, EntropicSimplex, PUniform };

// A geometry: psi, grad psi, the Bregman divergence it induces, and the
// degree/modulus of its uniform convexity. For PUniform (p in (1,2)) the
// map is psi(x) = (2^(q-2)/q) * ||x||_2^q with q = p/(p-1); the 2^(q-2)
// scale is what makes D_psi(x,y) >= (1/q) ||x-y||^q hold (the unscaled
// power of the norm violates it, e.g. d=1, x=1, y=-1/2).
struct MirrorMap {
  MirrorKind kind = MirrorKind::Euclidean;
  int dim = 1;
  double p = 2.0;  // tail exponent, used by PUniform only

  static MirrorMap euclidean(int dim) {
    return {MirrorKind::Euclidean, dim, 2.0};
  }
  static MirrorMap entropic_simplex(int dim) {
    return {MirrorKind::EntropicSimplex, dim, 2.0};
  }
  static MirrorMap p_uniform(int dim, double p);

  // Uniform-convexity degree q: 2 for euclidean/entropic, p/(p-1) otherwise.
  double degree() const {
    return kind == MirrorKind::PUniform ? p / (p - 1.0) : 2.0;
  }
  // Modulus c in D_psi(x,y) >= c * ||x-y||^q: 1/2 for q=2, (p-1)/p for
  // q = p/(p-1). Both equal 1/q.
  double modulus() const { return 1.0 / degree(); }

  // Norm the map is uniformly convex against (l1 for entropic, l2 else).
  double norm(const Vector &v) const;
  // Dual norm (l_inf for entropic, l2 else); used by noise certification.
  double dual_norm(const Vector &v) const;
};

double psi_value(const MirrorMap &mirror, const Vector &x);
Vector grad_psi(const MirrorMap &mirror, const Vector &x);
double bregman(const MirrorMap &mirror, const Vector &x, const Vector &y);

// ---------------------------------------------------------------------------
// Prox subproblem:  argmin_{x in X}  h(x) + <g, x - anchor> + D(x,anchor)/eta

enum class RegKind { Zero, L1, Quadratic };

// h(x) = 0, lambda*||x||_1, or (lambda/2)*||x||_2^2.
struct CompositeRegularizer {
  RegKind kind = RegKind::Zero;
  double lambda = 0.0;

  static CompositeRegularizer zero() { return {RegKind::Zero, 0.0}; }
  static CompositeRegularizer l1(double lambda) {
    return {RegKind::L1, lambda};
  }
  static CompositeRegularizer quadratic(double lambda) {
    return {RegKind::Quadratic, lambda};
  }

  double value(const Vector &x) const;
};

struct ProxProblem {
  Vector g;
  Vector anchor;
  double eta = 1.0;
  CompositeRegularizer h;
  Domain domain;
  MirrorMap mirror;
};

// Exact solve over the whitelisted (mirror, domain, h) triples:
//   euclidean  x {all_space, box, l2_ball} x {zero, quadratic}
//   euclidean  x {all_space, box}          x l1
//   entropic   x simplex                   x zero
//   p_uniform  x all_space                 x zero
// Throws UnsupportedCombination for anything else.
Vector solve_prox(const ProxProblem &p);

// Prox objective value at x (for oracles and optimality checks).
double prox_objective(const ProxProblem &p, const Vector &x);

// ---------------------------------------------------------------------------
// Uniform-convexity property check

struct ConvexityReport {
  double min_slack = 0.0;  // min over pairs of D(x,y) - modulus*||x-y||^q
  int trials = 0;
};

ConvexityReport check_uniform_convexity(const MirrorMap &mirror, int trials,
                                        std::uint64_t rng_seed);

}  // namespace csmd

#endif  // CSMD_GEOMETRY_HPP
