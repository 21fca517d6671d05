#ifndef CSMD_PROBLEMS_HPP
#define CSMD_PROBLEMS_HPP

#include <string>
#include <vector>

#include "csmd/geometry.hpp"

namespace csmd {

// f families:
//   Quadratic     f(x) = 1/2 (x-c)^T diag(a) (x-c)
//   HuberizedAbs  f(x) = sum_i huber_width(x_i - c_i)
//   AbsSum        f(x) = mprime * ||x - c||_1
//   WeightedAbs   f(x) = sum_i a_i |x_i - c_i|
//   LogSumExp     f(x) = sum_i log(exp(x_i-c_i) + exp(c_i-x_i))
//   Linear        f(x) = <c, x>
enum class FKind { Quadratic, HuberizedAbs, AbsSum, WeightedAbs, LogSumExp, Linear };

struct ProblemInstance {
  std::string id;
  FKind f_kind = FKind::Quadratic;
  Vector a;            // quadratic diagonal
  Vector c;            // center, or the linear coefficient
  double mprime = 1.0; // abs_sum scale
  double width = 0.1;  // huber smoothing width; L = 1/width
  CompositeRegularizer h;
  Domain domain;
  MirrorMap mirror;
  double L = 0.0;
  double M = 0.0;
  double mu_f = 0.0;
  double mu_h = 0.0;
  Vector x_star;
  double F_star = 0.0;

  int dim() const { return mirror.dim; }
  double kappa_f() const { return mu_f > 0.0 ? L / mu_f : 0.0; }
  double kappa_h() const { return mu_h > 0.0 ? L / mu_h : 0.0; }

  double f_value(const Vector &x) const;
  double F_value(const Vector &x) const { return f_value(x) + h.value(x); }
};

// Deterministic subgradient selection: 0 where valid at kinks.
Vector true_subgradient(const ProblemInstance &p, const Vector &x);

// F(x) - F_star; nonnegative for feasible x up to roundoff.
double objective_gap(const ProblemInstance &p, const Vector &x);

struct CertifyReport {
  // max over pairs of f(x)-f(y)-<g,x-y> - (L/2)||x-y||^2 - M||x-y||
  double max_lm_violation = 0.0;
  // min over pairs of k(x)-k(y)-<g,x-y> - mu_k D(x,y), k the strongly
  // convex part (f if mu_f > 0, h if mu_h > 0, else f with mu = 0)
  double min_mu_slack = 0.0;
  int trials = 0;
};

CertifyReport certify_constants(const ProblemInstance &p, int trials,
                                std::uint64_t rng_seed);

// Random feasible point (used by certification and tests): uniform on the
// domain for box/ball/simplex, uniform on a radius-3 box around x_star for
// unbounded domains.
Vector sample_feasible(const ProblemInstance &p, RngStream &rng);

const ProblemInstance &problem_by_id(const std::string &id);
std::vector<std::string> problem_ids();

}  // namespace csmd

#endif  // CSMD_PROBLEMS_HPP
