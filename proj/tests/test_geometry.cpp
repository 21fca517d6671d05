#include <doctest.h>

#include <cmath>

#include "csmd/errors.hpp"
#include "csmd/geometry.hpp"

using namespace csmd;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

// central finite differences of psi
Vector fd_grad(const MirrorMap &m, const Vector &x, double h = 1e-6) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (psi_value(m, xp) - psi_value(m, xm)) / (2.0 * h);
  }
  return g;
}

Vector random_interior(const MirrorMap &m, RngStream &rng) {
  Vector x(m.dim);
  switch (m.kind) {
    case MirrorKind::Euclidean:
      for (int i = 0; i < m.dim; ++i) x[i] = rng.uniform(-2.0, 2.0);
      return x;
    case MirrorKind::PUniform:
      for (int i = 0; i < m.dim; ++i) x[i] = rng.uniform(-2.0, 2.0);
      if (x.norm() < 0.3) x[0] += 1.0;  // keep away from the kink at 0
      return x;
    case MirrorKind::EntropicSimplex:
      for (int i = 0; i < m.dim; ++i) x[i] = rng.exponential();
      x /= x.sum();
      return 0.9 * x + Vector::Constant(m.dim, 0.1 / m.dim);
  }
  return x;
}

}  // namespace

TEST_CASE("domain membership and projection") {
  const Domain box = Domain::box(-1.0, 1.0);
  CHECK(box.contains(vec({0.5, -1.0})));
  CHECK_FALSE(box.contains(vec({1.5, 0.0})));
  CHECK(box.project(vec({2.0, -3.0})).isApprox(vec({1.0, -1.0})));

  const Domain ball = Domain::l2_ball(2.0);
  CHECK(ball.contains(vec({1.0, 1.0})));
  CHECK(ball.project(vec({6.0, 8.0})).isApprox(vec({1.2, 1.6})));

  const Domain sx = Domain::simplex();
  CHECK(sx.contains(vec({0.25, 0.75})));
  CHECK_FALSE(sx.contains(vec({0.5, 0.2})));
  const Vector p = sx.project(vec({0.8, 0.6, -0.4}));
  CHECK(p.sum() == doctest::Approx(1.0));
  CHECK(p.minCoeff() >= 0.0);
  CHECK(p.isApprox(vec({0.6, 0.4, 0.0})));
}

TEST_CASE("grad_psi closed forms and finite differences") {
  CHECK(grad_psi(MirrorMap::euclidean(2), vec({1.0, -2.0}))
            .isApprox(vec({1.0, -2.0})));
  CHECK(grad_psi(MirrorMap::entropic_simplex(2), vec({1.0, 1.0}))
            .isApprox(vec({1.0, 1.0})));
  CHECK_THROWS_AS(grad_psi(MirrorMap::entropic_simplex(2), vec({0.0, 1.0})),
                  NonInteriorPoint);
  CHECK(grad_psi(MirrorMap::p_uniform(2, 1.5), vec({0.0, 0.0})).norm() == 0.0);

  for (const MirrorMap &m :
       {MirrorMap::euclidean(3), MirrorMap::entropic_simplex(3),
        MirrorMap::p_uniform(3, 1.5), MirrorMap::p_uniform(2, 1.2)}) {
    RngStream rng(7, 1);
    for (int i = 0; i < 100; ++i) {
      const Vector x = random_interior(m, rng);
      const Vector g = grad_psi(m, x);
      const Vector fd = fd_grad(m, x);
      CHECK((g - fd).norm() <= 1e-5 * std::max(1.0, g.norm()));
    }
  }
}

TEST_CASE("bregman values") {
  const MirrorMap eu = MirrorMap::euclidean(2);
  CHECK(bregman(eu, vec({1.0, 0.0}), vec({0.0, 0.0})) == doctest::Approx(0.5));
  CHECK(bregman(eu, vec({0.3, -0.4}), vec({0.3, -0.4})) == 0.0);

  const MirrorMap en = MirrorMap::entropic_simplex(2);
  const double kl = bregman(en, vec({0.5, 0.5}), vec({0.25, 0.75}));
  CHECK(kl == doctest::Approx(0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0))
                  .epsilon(1e-9));
  CHECK(std::abs(bregman(en, vec({0.25, 0.75}), vec({0.25, 0.75}))) <= 1e-14);
  // zero coordinates on the first argument are fine
  CHECK(bregman(en, vec({0.0, 1.0}), vec({0.5, 0.5})) ==
        doctest::Approx(std::log(2.0)));

  const MirrorMap pu = MirrorMap::p_uniform(3, 1.5);
  RngStream rng(11, 0);
  for (int i = 0; i < 200; ++i) {
    const Vector x = random_interior(pu, rng);
    const Vector y = random_interior(pu, rng);
    CHECK(bregman(pu, x, y) >= 0.0);
  }
}

TEST_CASE("solve_prox closed-form examples") {
  // plain gradient step
  ProxProblem p;
  p.mirror = MirrorMap::euclidean(2);
  p.domain = Domain::all_space();
  p.h = CompositeRegularizer::zero();
  p.anchor = vec({2.0, 2.0});
  p.g = vec({1.0, 0.0});
  p.eta = 0.5;
  CHECK(solve_prox(p).isApprox(vec({1.5, 2.0})));

  // soft threshold: 2.0 - 0.5*1 = 1.5, threshold at 0.5 -> 1.0
  ProxProblem q;
  q.mirror = MirrorMap::euclidean(1);
  q.domain = Domain::all_space();
  q.h = CompositeRegularizer::l1(1.0);
  q.anchor = vec({2.0});
  q.g = vec({1.0});
  q.eta = 0.5;
  CHECK(solve_prox(q)[0] == doctest::Approx(1.0));

  // multiplicative weights
  ProxProblem r;
  r.mirror = MirrorMap::entropic_simplex(2);
  r.domain = Domain::simplex();
  r.h = CompositeRegularizer::zero();
  r.anchor = vec({0.5, 0.5});
  r.g = vec({std::log(2.0), 0.0});
  r.eta = 1.0;
  CHECK(solve_prox(r).isApprox(vec({1.0 / 3.0, 2.0 / 3.0}), 1e-12));
}

TEST_CASE("solve_prox rejects unsupported triples") {
  ProxProblem p;
  p.mirror = MirrorMap::entropic_simplex(2);
  p.domain = Domain::simplex();
  p.h = CompositeRegularizer::l1(1.0);
  p.anchor = vec({0.5, 0.5});
  p.g = vec({0.0, 0.0});
  p.eta = 1.0;
  CHECK_THROWS_AS(solve_prox(p), UnsupportedCombination);

  p.mirror = MirrorMap::euclidean(2);
  p.domain = Domain::l2_ball(1.0);
  CHECK_THROWS_AS(solve_prox(p), UnsupportedCombination);

  p.mirror = MirrorMap::p_uniform(2, 1.5);
  p.domain = Domain::box(-1.0, 1.0);
  p.h = CompositeRegularizer::zero();
  CHECK_THROWS_AS(solve_prox(p), UnsupportedCombination);
}

TEST_CASE("solve_prox output is feasible and stationary") {
  RngStream rng(3, 9);
  for (int i = 0; i < 200; ++i) {
    const int d = 1 + static_cast<int>(rng.next_u64() % 4);
    ProxProblem p;
    p.mirror = MirrorMap::euclidean(d);
    p.eta = 0.05 + rng.uniform();
    p.g = Vector(d);
    p.anchor = Vector(d);
    for (int j = 0; j < d; ++j) {
      p.g[j] = rng.uniform(-2.0, 2.0);
      p.anchor[j] = rng.uniform(-1.0, 1.0);
    }
    switch (i % 3) {
      case 0:
        p.domain = Domain::all_space();
        break;
      case 1:
        p.domain = Domain::box(-1.0, 1.0);
        break;
      default:
        p.domain = Domain::l2_ball(2.0);
        p.anchor *= 0.5;
        break;
    }
    p.h = (i % 2 == 0) ? CompositeRegularizer::quadratic(0.5)
                       : CompositeRegularizer::zero();
    if (p.domain.kind == DomainKind::L2Ball && i % 2 != 0) continue;
    const Vector x = solve_prox(p);
    CHECK(p.domain.contains(x, 1e-12));
    // interior solutions: gradient of the smooth objective vanishes
    const Vector grad =
        p.g + (p.h.kind == RegKind::Quadratic ? (p.h.lambda * x).eval()
                                              : Vector::Zero(d).eval()) +
        (x - p.anchor) / p.eta;
    const bool interior =
        (p.domain.kind == DomainKind::AllSpace) ||
        (p.domain.kind == DomainKind::Box && x.cwiseAbs().maxCoeff() < 1.0 - 1e-9) ||
        (p.domain.kind == DomainKind::L2Ball && x.norm() < 2.0 - 1e-9);
    if (interior) CHECK(grad.norm() <= 1e-8);
  }
}

TEST_CASE("p_uniform mirror step inverts grad_psi") {
  RngStream rng(5, 2);
  for (int i = 0; i < 100; ++i) {
    const int d = 1 + static_cast<int>(rng.next_u64() % 4);
    ProxProblem p;
    p.mirror = MirrorMap::p_uniform(d, 1.2 + 0.6 * rng.uniform());
    p.domain = Domain::all_space();
    p.h = CompositeRegularizer::zero();
    p.eta = 0.1 + rng.uniform();
    p.g = Vector(d);
    p.anchor = Vector(d);
    for (int j = 0; j < d; ++j) {
      p.g[j] = rng.uniform(-2.0, 2.0);
      p.anchor[j] = rng.uniform(-2.0, 2.0);
    }
    const Vector x = solve_prox(p);
    const Vector target = grad_psi(p.mirror, p.anchor) - p.eta * p.g;
    CHECK((grad_psi(p.mirror, x) - target).norm() <=
          1e-9 * std::max(1.0, target.norm()));
  }
}

TEST_CASE("uniform convexity modulus holds on random pairs") {
  CHECK(check_uniform_convexity(MirrorMap::euclidean(4), 1000, 42).min_slack >=
        -1e-12);
  CHECK(check_uniform_convexity(MirrorMap::p_uniform(3, 1.5), 10000, 42)
            .min_slack >= -1e-12);
  CHECK(check_uniform_convexity(MirrorMap::entropic_simplex(3), 1000, 42)
            .min_slack >= -1e-12);
}
