#include <doctest.h>

#include <cmath>

#include "csmd/engine.hpp"
#include "csmd/errors.hpp"

using namespace csmd;

namespace {

ProblemInstance tiny_quadratic() {
  ProblemInstance p;
  p.id = "tiny_quadratic";
  p.f_kind = FKind::Quadratic;
  p.a = Vector::Ones(2);
  p.c = Vector::Zero(2);
  p.h = CompositeRegularizer::zero();
  p.domain = Domain::all_space();
  p.mirror = MirrorMap::euclidean(2);
  p.L = 1.0;
  p.x_star = Vector::Zero(2);
  p.F_star = 0.0;
  return p;
}

RunConfig noiseless(int d, double eta, int T) {
  RunConfig c;
  c.noise = NoiseModel::gaussian(d, 0.0);
  c.schedule.rule = ScheduleRule::Constant;
  c.schedule.eta_base = eta;
  c.T = T;
  return c;
}

}  // namespace

TEST_CASE("hand-iterated gradient descent") {
  const ProblemInstance p = tiny_quadratic();
  RunConfig c = noiseless(2, 0.5, 2);
  c.x1 = Vector::Zero(2);
  c.x1[0] = 1.0;
  const RunRecord r = run_csmd(p, c);
  CHECK(r.x_final.isApprox((Vector(2) << 0.25, 0.0).finished()));
  CHECK(r.final_gap == doctest::Approx(0.03125));
}

TEST_CASE("starting at the optimum stays there without noise") {
  const ProblemInstance &p = problem_by_id("quad_sc_d10");
  RunConfig c = noiseless(10, 0.25, 8);
  c.x1 = p.x_star;
  c.checkpoints = {1, 4, 8};
  const RunRecord r = run_csmd(p, c);
  CHECK(r.final_gap == 0.0);
  for (const auto &cp : r.checkpoints) CHECK(cp.gap == 0.0);
}

TEST_CASE("entropic step matches the closed form") {
  const ProblemInstance &p = problem_by_id("linear_simplex");
  RunConfig c = noiseless(2, 1.0, 2);
  c.x1 = Vector::Constant(2, 0.5);
  c.record_history = true;
  const RunRecord r = run_csmd(p, c);
  REQUIRE(r.history.size() == 2);
  const double e = std::exp(1.0);
  CHECK(r.history[1][0] == doctest::Approx(1.0 / (1.0 + e)).epsilon(1e-12));
  CHECK(r.history[1][1] == doctest::Approx(e / (1.0 + e)).epsilon(1e-12));
}

TEST_CASE("runs are deterministic per stream") {
  const ProblemInstance &p = problem_by_id("abs_box_d10");
  RunConfig c = noiseless(10, 0.1, 32);
  c.noise = NoiseModel::gaussian(10, 1.0);
  c.x1 = p.domain.project(p.x_star + Vector::Ones(10));
  c.base_seed = 77;
  c.stream_id = 3;
  const RunRecord a = run_csmd(p, c);
  const RunRecord b = run_csmd(p, c);
  CHECK(a.x_final == b.x_final);
  CHECK(a.final_gap == b.final_gap);
  c.stream_id = 4;
  CHECK(run_csmd(p, c).x_final != a.x_final);
}

TEST_CASE("noiseless gaps decrease monotonically") {
  const ProblemInstance &p = problem_by_id("quad_ladder_d30");
  RunConfig c = noiseless(30, 0.5, 64);
  c.x1 = p.x_star + Vector::Ones(30);
  c.checkpoints = {1, 2, 4, 8, 16, 32, 64};
  const RunRecord r = run_csmd(p, c);
  for (size_t i = 1; i < r.checkpoints.size(); ++i) {
    CHECK(r.checkpoints[i].gap <= r.checkpoints[i - 1].gap + 1e-15);
  }
}

TEST_CASE("run guards") {
  const ProblemInstance p = tiny_quadratic();
  RunConfig c = noiseless(2, 0.5, 1);
  c.x1 = Vector::Zero(2);
  CHECK_THROWS_AS(run_csmd(p, c), ConfigError);

  const ProblemInstance &box = problem_by_id("abs_box_d10");
  RunConfig c2 = noiseless(10, 0.1, 4);
  c2.x1 = Vector::Constant(10, 100.0);
  CHECK_THROWS_AS(run_csmd(box, c2), ConfigError);

  const ProblemInstance &sc = problem_by_id("quad_sc_d10");
  RunConfig c3 = noiseless(10, 0.6, 4);  // cap is 1/max(2L, mu_f) = 0.5
  c3.x1 = sc.x_star;
  CHECK_THROWS_AS(run_csmd(sc, c3), StepTooLarge);

  const ProblemInstance &abs = problem_by_id("abs_all_d10");
  RunConfig c4 = noiseless(10, 1e12, 4);
  c4.x1 = abs.x_star + Vector::Ones(10);  // off the kink so the step is huge
  CHECK_THROWS_AS(run_csmd(abs, c4), NumericalDivergence);

  RunConfig c5 = noiseless(2, 0.5, 4);
  c5.x1 = Vector::Zero(2);
  c5.checkpoints = {3, 2};
  CHECK_THROWS_AS(run_csmd(p, c5), ConfigError);
}

TEST_CASE("z diagnostics weights") {
  const ProblemInstance &p = problem_by_id("quad_sc_d10");
  Schedule s;
  s.rule = ScheduleRule::StrcFAnytime1;
  s.mu_f = 1.0;
  const AnalysisSequences seq = analysis_sequences(s, 1.0, 0.0, 3);

  RunConfig c = noiseless(10, 0.25, 3);
  c.x1 = p.x_star + Vector::Constant(10, 0.5);
  c.record_history = true;
  const RunRecord r = run_csmd(p, c);
  const std::vector<ZRecord> z = z_diagnostics(p, r.history, seq, c.x1);
  REQUIRE(z.size() == 4);
  // gamma is constant: v = (1/3, 1/3, 1/2, 1)
  CHECK(z[0].weight_sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(z[0].gap_z == doctest::Approx(objective_gap(p, c.x1)));
  for (const auto &rec : z) {
    CHECK(rec.weight_sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rec.min_weight >= -1e-14);
  }
  // t = 2: x_ref carries v_0/v_2 = 2/3, x^1 zero, x^2 carries 1/3
  const Vector z2 = (2.0 / 3.0) * c.x1 + (1.0 / 3.0) * r.history[1];
  CHECK(z[2].gap_z == doctest::Approx(objective_gap(p, z2)).epsilon(1e-12));

  CHECK_THROWS_AS(z_diagnostics(p, std::vector<Vector>{}, seq, c.x1),
                  HistoryNotRetained);
}

TEST_CASE("theoretical bounds on hand-checked sequences") {
  Schedule cst;
  cst.rule = ScheduleRule::Constant;
  cst.eta_base = 1.0;
  const AnalysisSequences a = analysis_sequences(cst, 0.0, 0.0, 2);
  // gamma = (1,1): D/2 + 2 (M^2+sigma^2) (1/2 + 1)
  CHECK(expected_bound(a, 1.0, 1.0, 0.0, 0.0) == doctest::Approx(3.5));

  Schedule s;
  s.rule = ScheduleRule::StrcFAnytime1;
  s.mu_f = 1.0;
  const AnalysisSequences b = analysis_sequences(s, 1.0, 0.0, 3);
  // eta_1 = 1 kills the distance term; weights 1/3 + 1/4 + 1/3
  CHECK(expected_bound(b, 5.0, 1.0, 0.0, 1.0) ==
        doctest::Approx(2.0 * 11.0 / 12.0));

  const double ln4 = std::log(4.0);
  CHECK(hp_bound(a, 1.0, 1.0, 1.0, 0.0, 0.5) ==
        doctest::Approx(4.0 * (0.5 + (2.0 + 2.0 * ln4) * 1.5)));
  CHECK_THROWS_AS(hp_bound(a, 1.0, 1.0, 1.0, 0.0, 2.0), DomainError);
}
