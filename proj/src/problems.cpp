#include "csmd/problems.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "csmd/errors.hpp"

namespace csmd {

namespace {

double huber(double u, double w) {
  const double au = std::abs(u);
  return au <= w ? u * u / (2.0 * w) : au - w / 2.0;
}

double huber_grad(double u, double w) {
  return std::clamp(u / w, -1.0, 1.0);
}

double sign0(double u) { return u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0); }

}  // namespace

double ProblemInstance::f_value(const Vector &x) const {
  switch (f_kind) {
    case FKind::Quadratic: {
      const Vector d = x - c;
      return 0.5 * d.dot(a.cwiseProduct(d));
    }
    case FKind::HuberizedAbs: {
      double s = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) s += huber(x[i] - c[i], width);
      return s;
    }
    case FKind::AbsSum:
      return mprime * (x - c).lpNorm<1>();
    case FKind::WeightedAbs:
      return a.dot((x - c).cwiseAbs());
    case FKind::LogSumExp: {
      // sum_i log(2 cosh(x_i - c_i)), computed overflow-safe
      double s = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double u = std::abs(x[i] - c[i]);
        s += u + std::log1p(std::exp(-2.0 * u));
      }
      return s;
    }
    case FKind::Linear:
      return c.dot(x);
  }
  return 0.0;
}

Vector true_subgradient(const ProblemInstance &p, const Vector &x) {
  switch (p.f_kind) {
    case FKind::Quadratic:
      return p.a.cwiseProduct(x - p.c);
    case FKind::HuberizedAbs: {
      Vector g(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i)
        g[i] = huber_grad(x[i] - p.c[i], p.width);
      return g;
    }
    case FKind::AbsSum: {
      Vector g(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i)
        g[i] = p.mprime * sign0(x[i] - p.c[i]);
      return g;
    }
    case FKind::WeightedAbs: {
      Vector g(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i)
        g[i] = p.a[i] * sign0(x[i] - p.c[i]);
      return g;
    }
    case FKind::LogSumExp: {
      Vector g(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = std::tanh(x[i] - p.c[i]);
      return g;
    }
    case FKind::Linear:
      return p.c;
  }
  return Vector::Zero(x.size());
}

double objective_gap(const ProblemInstance &p, const Vector &x) {
  return p.F_value(x) - p.F_star;
}

Vector sample_feasible(const ProblemInstance &p, RngStream &rng) {
  const int d = p.dim();
  Vector x(d);
  switch (p.domain.kind) {
    case DomainKind::AllSpace:
      for (int i = 0; i < d; ++i) x[i] = p.x_star[i] + rng.uniform(-3.0, 3.0);
      return x;
    case DomainKind::Box:
      for (int i = 0; i < d; ++i) x[i] = rng.uniform(p.domain.lo, p.domain.hi);
      return x;
    case DomainKind::L2Ball: {
      for (int i = 0; i < d; ++i) x[i] = rng.normal();
      const double r = p.domain.radius * std::pow(rng.uniform_pos(), 1.0 / d);
      const double n = x.norm();
      return n == 0.0 ? x : Vector(x * (r / n));
    }
    case DomainKind::Simplex: {
      for (int i = 0; i < d; ++i) x[i] = rng.exponential();
      x /= x.sum();
      return 0.99 * x + Vector::Constant(d, 0.01 / d);
    }
  }
  return x;
}

namespace {

Vector h_subgradient(const CompositeRegularizer &h, const Vector &x) {
  switch (h.kind) {
    case RegKind::Zero:
      return Vector::Zero(x.size());
    case RegKind::L1: {
      Vector g(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = h.lambda * sign0(x[i]);
      return g;
    }
    case RegKind::Quadratic:
      return h.lambda * x;
  }
  return Vector::Zero(x.size());
}

}  // namespace

CertifyReport certify_constants(const ProblemInstance &p, int trials,
                                std::uint64_t rng_seed) {
  RngStream rng(rng_seed, 0);
  CertifyReport rep;
  rep.trials = trials;
  rep.max_lm_violation = -std::numeric_limits<double>::infinity();
  rep.min_mu_slack = std::numeric_limits<double>::infinity();
  const bool sc_on_h = p.mu_h > 0.0;
  const double mu = sc_on_h ? p.mu_h : p.mu_f;
  for (int t = 0; t < trials; ++t) {
    const Vector x = sample_feasible(p, rng);
    const Vector y = sample_feasible(p, rng);
    const Vector gy = true_subgradient(p, y);
    const double dn = p.mirror.norm(x - y);
    const double lin_excess = p.f_value(x) - p.f_value(y) - gy.dot(x - y);
    rep.max_lm_violation = std::max(
        rep.max_lm_violation, lin_excess - 0.5 * p.L * dn * dn - p.M * dn);
    const double kx = sc_on_h ? p.h.value(x) : p.f_value(x);
    const double ky = sc_on_h ? p.h.value(y) : p.f_value(y);
    const Vector ky_grad = sc_on_h ? h_subgradient(p.h, y) : gy;
    const double sc_excess = kx - ky - ky_grad.dot(x - y);
    rep.min_mu_slack =
        std::min(rep.min_mu_slack, sc_excess - mu * bregman(p.mirror, x, y));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Registry

namespace {

std::vector<ProblemInstance> build_registry() {
  std::vector<ProblemInstance> reg;
  const double m_l1_d10 = 2.0 * std::sqrt(10.0);  // 2G for ||.||_1 on R^10

  {
    // smooth convex with geometric eigenvalue ladder: gap decays ~ 1/T
    // under a constant step instead of linearly
    ProblemInstance q;
    q.id = "quad_ladder_d30";
    q.f_kind = FKind::Quadratic;
    q.a = Vector(30);
    for (int i = 0; i < 30; ++i) q.a[i] = std::pow(2.0, -i);
    q.c = Vector::Zero(30);
    q.h = CompositeRegularizer::zero();
    q.domain = Domain::all_space();
    q.mirror = MirrorMap::euclidean(30);
    q.L = 1.0;
    q.x_star = Vector::Zero(30);
    q.F_star = 0.0;
    reg.push_back(q);
  }
  {
    ProblemInstance q;
    q.id = "abs_box_d10";
    q.f_kind = FKind::AbsSum;
    q.c = Vector::Zero(10);
    q.mprime = 1.0;
    q.h = CompositeRegularizer::zero();
    q.domain = Domain::box(-1.0, 1.0);
    q.mirror = MirrorMap::euclidean(10);
    q.M = m_l1_d10;
    q.x_star = Vector::Zero(10);
    reg.push_back(q);
  }
  {
    // same objective, registered with both smoothness constants active
    ProblemInstance q;
    q.id = "abs_box_lm_d10";
    q.f_kind = FKind::AbsSum;
    q.c = Vector::Zero(10);
    q.h = CompositeRegularizer::zero();
    q.domain = Domain::box(-1.0, 1.0);
    q.mirror = MirrorMap::euclidean(10);
    q.L = 1.0;
    q.M = m_l1_d10;
    q.x_star = Vector::Zero(10);
    reg.push_back(q);
  }
  {
    ProblemInstance q;
    q.id = "abs_all_d10";
    q.f_kind = FKind::AbsSum;
    q.c = Vector::Zero(10);
    q.h = CompositeRegularizer::zero();
    q.domain = Domain::all_space();
    q.mirror = MirrorMap::euclidean(10);
    q.M = m_l1_d10;
    q.x_star = Vector::Zero(10);
    reg.push_back(q);
  }
  {
    // strongly convex quadratic on a box: Lipschitz there, so L = 0 and
    // the half-diameter bound certifies M
    ProblemInstance q;
    q.id = "sc_lipschitz_d10";
    q.f_kind = FKind::Quadratic;
    q.a = Vector::Ones(10);
    q.c = Vector::Zero(10);
    q.h = CompositeRegularizer::zero();
    q.domain = Domain::box(-2.0, 2.0);
    q.mirror = MirrorMap::euclidean(10);
    q.M = 2.0 * std::sqrt(10.0);
    q.mu_f = 1.0;
    q.x_star = Vector::Zero(10);
    reg.push_back(q);
  }
  {
    ProblemInstance q;
    q.id = "huber_smooth_d10";
    q.f_kind = FKind::HuberizedAbs;
    q.c = Vector::Zero(10);
    q.width = 0.1;
    q.h = CompositeRegularizer::zero();
    q.domain = Domain::all_space();
    q.mirror = MirrorMap::euclidean(10);
    q.L = 1.0 / q.width;
    q.x_star = Vector::Zero(10);
    reg.push_back(q);
  }
  {
    ProblemInstance q;
    q.id = "huber_muh_d10";
    q.f_kind = FKind::HuberizedAbs;
    q.c = Vector::Zero(10);
    q.width = 0.1;
    q.h = CompositeRegularizer::quadratic(1.0);
    q.domain = Domain::all_space();
    q.mirror = MirrorMap::euclidean(10);
    q.L = 1.0 / q.width;
    q.mu_h = 1.0;
    q.x_star = Vector::Zero(10);
    reg.push_back(q);
  }
  {
    ProblemInstance q;
    q.id = "quad_sc_d10";
    q.f_kind = FKind::Quadratic;
    q.a = Vector::Ones(10);
    q.c = Vector::Zero(10);
    q.h = CompositeRegularizer::zero();
    q.domain = Domain::all_space();
    q.mirror = MirrorMap::euclidean(10);
    q.L = 1.0;
    q.mu_f = 1.0;
    q.x_star = Vector::Zero(10);
    reg.push_back(q);
  }
  {
    // weighted abs with a geometric ladder of slopes: over a horizon grid,
    // the final gap is dominated by the coordinates whose slope is too
    // small to be resolved yet, so the mean gap tracks 1/(sum_t eta_t)
    // rather than the last step size
    ProblemInstance q;
    q.id = "abs_ladder_d25";
    q.f_kind = FKind::WeightedAbs;
    q.a = Vector(25);
    for (int i = 0; i < 25; ++i) q.a[i] = std::pow(2.0, -0.5 * i);
    q.c = Vector::Zero(25);
    q.h = CompositeRegularizer::zero();
    q.domain = Domain::all_space();
    q.mirror = MirrorMap::euclidean(25);
    q.M = q.a.norm();
    q.x_star = Vector::Zero(25);
    reg.push_back(q);
  }
  {
    ProblemInstance q;
    q.id = "abs_heavy_d10";
    q.f_kind = FKind::AbsSum;
    q.c = Vector::Zero(10);
    q.h = CompositeRegularizer::zero();
    q.domain = Domain::all_space();
    q.mirror = MirrorMap::p_uniform(10, 1.5);
    q.M = m_l1_d10;
    q.x_star = Vector::Zero(10);
    reg.push_back(q);
  }
  {
    // min 1/2 (x-2)^2 + |x|: soft-threshold optimum x* = 1, F* = 1.5
    ProblemInstance q;
    q.id = "quad_l1_d1";
    q.f_kind = FKind::Quadratic;
    q.a = Vector::Ones(1);
    q.c = Vector::Constant(1, 2.0);
    q.h = CompositeRegularizer::l1(1.0);
    q.domain = Domain::all_space();
    q.mirror = MirrorMap::euclidean(1);
    q.L = 1.0;
    q.x_star = Vector::Constant(1, 1.0);
    q.F_star = 1.5;
    reg.push_back(q);
  }
  {
    ProblemInstance q;
    q.id = "linear_simplex";
    q.f_kind = FKind::Linear;
    q.c = Vector(2);
    q.c << 1.0, 0.0;
    q.h = CompositeRegularizer::zero();
    q.domain = Domain::simplex();
    q.mirror = MirrorMap::entropic_simplex(2);
    q.M = 2.0;  // ||c||_inf = 1, Lipschitz in l1
    q.x_star = Vector(2);
    q.x_star << 0.0, 1.0;
    q.F_star = 0.0;
    reg.push_back(q);
  }
  {
    ProblemInstance q;
    q.id = "log_sum_exp_d5";
    q.f_kind = FKind::LogSumExp;
    q.c = Vector(5);
    q.c << 0.3, -0.7, 1.1, 0.0, -0.2;
    q.h = CompositeRegularizer::zero();
    q.domain = Domain::all_space();
    q.mirror = MirrorMap::euclidean(5);
    q.L = 1.0;
    q.x_star = q.c;
    q.F_star = 5.0 * std::log(2.0);
    reg.push_back(q);
  }
  return reg;
}

const std::vector<ProblemInstance> &registry() {
  static const std::vector<ProblemInstance> reg = build_registry();
  return reg;
}

}  // namespace

const ProblemInstance &problem_by_id(const std::string &id) {
  for (const auto &p : registry()) {
    if (p.id == id) return p;
  }
  throw ConfigError("unknown problem id: " + id);
}

std::vector<std::string> problem_ids() {
  std::vector<std::string> ids;
  for (const auto &p : registry()) ids.push_back(p.id);
  return ids;
}

}  // namespace csmd
