#include <doctest.h>

#include <cmath>
#include <sstream>

#include "csmd/errors.hpp"
#include "csmd/harness.hpp"

using namespace csmd;

TEST_CASE("rate fits on synthetic decay laws") {
  std::vector<std::pair<double, double>> half, one, extra_log;
  for (int k = 6; k <= 14; ++k) {
    const double T = std::pow(2.0, k);
    half.emplace_back(T, 3.0 / std::sqrt(T));
    one.emplace_back(T, 3.0 / T);
    extra_log.emplace_back(T, 3.0 * std::log(T) / std::sqrt(T));
  }
  RateFit f = fit_rate(half);
  CHECK(f.slope == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(f.curvature) <= 1e-10);

  f = fit_rate(one);
  CHECK(f.slope == doctest::Approx(-1.0).epsilon(1e-10));

  // log(log T) flattens the decay and bends the log-log line downward
  f = fit_rate(extra_log);
  CHECK(f.slope > -0.45);
  CHECK(f.slope < -0.30);
  CHECK(f.curvature < 0.0);

  half[3].second = 0.0;
  CHECK_THROWS_AS(fit_rate(half), NonPositiveGap);
  const std::vector<std::pair<double, double>> short_list{
      {1.0, 1.0}, {2.0, 1.0}, {3.0, 1.0}};
  CHECK_THROWS_AS(fit_rate(short_list), DomainError);
}

TEST_CASE("summary statistics") {
  const std::vector<double> xs{1.0, 2.0, 3.0};
  const MeanSE ms = mean_se(xs);
  CHECK(ms.mean == doctest::Approx(2.0));
  CHECK(ms.se == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(median(xs) == 2.0);
  CHECK(median_of_means({1.0, 2.0, 3.0, 4.0}, 2) == doctest::Approx(2.5));
  CHECK(trimmed_mean({0.0, 1.0, 2.0, 3.0, 100.0}, 0.2) == doctest::Approx(2.0));
  CHECK(quantile({1.0, 2.0, 3.0, 4.0, 5.0}, 0.5) == doctest::Approx(3.0));
  CHECK(quantile({1.0, 2.0, 3.0, 4.0, 5.0}, 0.875) == doctest::Approx(4.5));
  CHECK(quantile({5.0, 1.0}, 1.0) == 5.0);
}

TEST_CASE("config parsing") {
  std::stringstream in(
      "# comment\n"
      "experiment = demo\n"
      "problem = abs_box_d10\n"
      "noise = gaussian  # trailing comment\n"
      "sigma = 1.0\n"
      "schedule = convex_fixed\n"
      "eta = auto\n"
      "T_grid = 16, 32, 64\n"
      "replications = 5\n"
      "delta_grid = 0.1, 0.01\n"
      "estimator = median_of_means\n"
      "base_seed = 99\n"
      "experiment_index = 2\n");
  const ExperimentConfig c = parse_config(in);
  CHECK(c.id == "demo");
  CHECK(c.problem_id == "abs_box_d10");
  CHECK(c.sigma == 1.0);
  CHECK(c.eta == 0.0);
  CHECK(c.T_grid == (std::vector<int>{16, 32, 64}));
  CHECK(c.delta_grid == (std::vector<double>{0.1, 0.01}));
  CHECK(c.base_seed == 99);
  CHECK(c.experiment_index == 2);

  std::stringstream bad1("problem = abs_box_d10\nT_grid = 8, 4\n");
  CHECK_THROWS_AS(parse_config(bad1), ConfigError);
  std::stringstream bad2("problem = abs_box_d10\nT_grid = 4\nwhatever = 1\n");
  CHECK_THROWS_AS(parse_config(bad2), ConfigError);
  std::stringstream bad3("T_grid = 4, 8\n");
  CHECK_THROWS_AS(parse_config(bad3), ConfigError);
  std::stringstream bad4("problem = abs_box_d10\nT_grid = 4\nsigma = abc\n");
  CHECK_THROWS_AS(parse_config(bad4), ConfigError);
}

TEST_CASE("experiment runs are deterministic and stream-indexed") {
  ExperimentConfig c;
  c.id = "det";
  c.problem_id = "quad_sc_d10";
  c.schedule = "constant";
  c.eta = 0.25;
  c.T_grid = {4, 8};
  c.replications = 2;
  c.experiment_index = 2;
  const ExperimentResult a = run_experiment(c);
  REQUIRE(a.runs.size() == 4);
  CHECK(a.runs[0].stream_id == 2000000ULL);
  CHECK(a.runs[3].stream_id == 2000003ULL);
  // noiseless: every replication of a given T is the same number
  CHECK(a.runs[0].gap == a.runs[1].gap);
  CHECK(a.runs[2].gap == a.runs[3].gap);
  CHECK(a.agg[0].se == 0.0);

  const ExperimentResult b = run_experiment(c);
  std::stringstream csv_a, csv_b;
  write_results_csv(csv_a, {a});
  write_results_csv(csv_b, {b});
  CHECK(csv_a.str() == csv_b.str());
  CHECK(csv_a.str().rfind("experiment,T,replication,stream_id,kind,t,gap\n",
                          0) == 0);
}

TEST_CASE("standard errors shrink like one over sqrt replications") {
  ExperimentConfig c;
  c.problem_id = "abs_box_d10";
  c.noise = "gaussian";
  c.sigma = 1.0;
  c.schedule = "convex_fixed";
  c.T_grid = {64};
  c.replications = 100;
  const double se100 = run_experiment(c).agg[0].se;
  c.replications = 400;
  c.experiment_index = 1;
  const double se400 = run_experiment(c).agg[0].se;
  CHECK(se100 / se400 > 1.6);
  CHECK(se100 / se400 < 2.4);
}

TEST_CASE("quantile scaling report") {
  const std::vector<double> deltas{0.1, 0.05, 0.01};
  const std::vector<double> flat(1000, 2.0);
  const QuantileScalingReport r = quantile_scaling(flat, deltas, false);
  CHECK(r.ratio_q001_q01 == doctest::Approx(1.0));
  CHECK(r.fit_slope == doctest::Approx(0.0).epsilon(1e-12));

  std::vector<double> ramp(1000);
  for (int i = 0; i < 1000; ++i) ramp[i] = static_cast<double>(i);
  const QuantileScalingReport r2 = quantile_scaling(ramp, deltas, true);
  CHECK(r2.q[0].second < r2.q[2].second);
  CHECK(r2.ratio_q001_q01 > 1.0);
  CHECK(r2.fit_slope > 0.0);

  const std::vector<double> tiny(50, 1.0);
  CHECK_THROWS_AS(quantile_scaling(tiny, deltas, false),
                  InsufficientReplications);
}

TEST_CASE("dominance checks require the matching moment condition") {
  ExperimentConfig c;
  c.problem_id = "abs_heavy_d10";
  c.noise = "symmetric_pareto";
  c.sigma = 1.0;
  c.noise_p = 1.5;
  c.schedule = "heavy_zamani";
  c.T_grid = {16};
  c.replications = 3;
  const ExperimentResult r = run_experiment(c);
  CHECK_THROWS_AS(expected_dominance_report(r), AssumptionMismatch);
  CHECK_THROWS_AS(hp_dominance_report(r, {0.1}), AssumptionMismatch);

  // gaussian noise also fails the high-probability precondition
  ExperimentConfig g;
  g.problem_id = "abs_box_d10";
  g.noise = "gaussian";
  g.sigma = 1.0;
  g.schedule = "convex_fixed";
  g.T_grid = {16};
  g.replications = 3;
  CHECK_THROWS_AS(hp_dominance_report(run_experiment(g), {0.1}),
                  AssumptionMismatch);
}

TEST_CASE("bounds dominate small pilot experiments") {
  ExperimentConfig c;
  c.id = "pilot";
  c.problem_id = "abs_box_d10";
  c.noise = "sphere_bounded";
  c.sigma = 1.0;
  c.schedule = "convex_fixed";
  c.T_grid = {16, 64};
  c.replications = 200;
  const ExperimentResult r = run_experiment(c);
  for (const auto &line : expected_dominance_report(r)) CHECK(line.pass);
  for (const auto &line : hp_dominance_report(r, {0.1})) CHECK(line.pass);
}

TEST_CASE("default start points") {
  const ProblemInstance &sx = problem_by_id("linear_simplex");
  CHECK(default_start(sx).isApprox(Vector::Constant(2, 0.5)));
  const ProblemInstance &box = problem_by_id("abs_box_d10");
  CHECK(box.domain.contains(default_start(box)));
}
