#include <doctest.h>

#include <cmath>

#include "csmd/errors.hpp"
#include "csmd/schedules.hpp"

using namespace csmd;

TEST_CASE("rule name round trip") {
  for (const auto &name : rule_names()) {
    CHECK(rule_name(rule_by_name(name)) == name);
  }
  CHECK_THROWS_AS(rule_by_name("bogus"), ConfigError);
  CHECK(rule_needs_horizon(ScheduleRule::Zamani));
  CHECK_FALSE(rule_needs_horizon(ScheduleRule::ConvexAnytime));
}

TEST_CASE("step size values") {
  Schedule s;
  s.rule = ScheduleRule::ConvexAnytime;
  s.eta_base = 1.0;
  s.L = 1.0;
  CHECK(s.eta(1) == doctest::Approx(0.5));
  CHECK(s.eta(9) == doctest::Approx(1.0 / 3.0));

  Schedule z;
  z.rule = ScheduleRule::Zamani;
  z.eta_base = 1.0;
  z.T = 4;
  CHECK(z.eta(1) == doctest::Approx(0.5));
  CHECK(z.eta(4) == doctest::Approx(0.125));

  Schedule h;
  h.rule = ScheduleRule::HeavyAnytime;
  h.eta_base = 1.0;
  h.p = 1.5;
  CHECK(h.eta(4) == doctest::Approx(std::pow(4.0, -2.0 / 3.0)));

  Schedule pw;
  pw.rule = ScheduleRule::StrcFKnownPiecewise;
  pw.eta_base = 1.5;
  pw.mu_f = 1.0;
  pw.T = 4;
  CHECK(pw.eta(1) == doctest::Approx(1.0));
  CHECK(pw.eta(2) == doctest::Approx(2.0 / 3.0));
  CHECK(pw.eta(3) == doctest::Approx(2.0 / 3.0));
  CHECK(pw.eta(4) == doctest::Approx(0.5));
}

TEST_CASE("step size guards") {
  Schedule z;
  z.rule = ScheduleRule::Zamani;
  CHECK_THROWS_AS(z.eta(1), HorizonRequired);

  Schedule pw;
  pw.rule = ScheduleRule::StrcFKnownPiecewise;
  pw.eta_base = 0.5;
  pw.kappa_f = 0.3;
  pw.mu_f = 1.0;
  pw.T = 4;
  CHECK_THROWS_AS(pw.eta(2), ConstraintViolated);

  Schedule big;
  big.rule = ScheduleRule::Constant;
  big.eta_base = 1.0;
  big.L = 1.0;  // cap is 0.5
  CHECK_THROWS_AS(analysis_sequences(big, 0.0, 0.0, 4), StepTooLarge);
}

TEST_CASE("analysis sequences on hand-checked cases") {
  // no curvature: gamma coincides with eta
  Schedule c;
  c.rule = ScheduleRule::ConvexAnytime;
  c.eta_base = 0.5;
  const AnalysisSequences a = analysis_sequences(c, 0.0, 0.0, 8);
  for (int t = 1; t <= 8; ++t) {
    CHECK(a.gamma[t] == doctest::Approx(a.eta[t]).epsilon(1e-14));
    CHECK(a.Gamma[t] == doctest::Approx(1.0));
  }

  // eta_t = 1/t with mu_f = 1 gives Gamma_t = t and gamma_t = 1
  Schedule s;
  s.rule = ScheduleRule::StrcFAnytime1;
  s.mu_f = 1.0;
  const AnalysisSequences b = analysis_sequences(s, 1.0, 0.0, 3);
  for (int t = 1; t <= 3; ++t) {
    CHECK(b.Gamma[t] == doctest::Approx(double(t)).epsilon(1e-13));
    CHECK(b.gamma[t] == doctest::Approx(1.0).epsilon(1e-13));
  }
  CHECK(b.v[0] == doctest::Approx(1.0 / 3.0));
  CHECK(b.v[1] == doctest::Approx(1.0 / 3.0));
  CHECK(b.v[2] == doctest::Approx(0.5));
  CHECK(b.v[3] == doctest::Approx(1.0));
  CHECK(std::exp(b.log_sum_gamma) == doctest::Approx(3.0));
}

TEST_CASE("telescoping identity") {
  // gamma_t (1/eta_t - mu_f) = gamma_{t-1} (1/eta_{t-1} + mu_h), checked in
  // log space on schedules with both curvature terms active
  struct Case {
    Schedule s;
    double mu_f, mu_h;
  };
  Schedule s1;
  s1.rule = ScheduleRule::StrcFAnytime2;
  s1.mu_f = 0.5;
  s1.kappa_f = 2.0;
  Schedule s2;
  s2.rule = ScheduleRule::StrcHAnytime;
  s2.mu_h = 2.0;
  s2.kappa_h = 3.0;
  Schedule s3;
  s3.rule = ScheduleRule::StrcFKnownPiecewise;
  s3.eta_base = 1.5;
  s3.mu_f = 1.0;
  s3.kappa_f = 4.0;
  s3.T = 500;
  for (const Case &c : {Case{s1, 0.5, 0.25}, Case{s2, 0.0, 2.0},
                        Case{s3, 1.0, 0.0}}) {
    const int T = 500;
    const AnalysisSequences a = analysis_sequences(c.s, c.mu_f, c.mu_h, T);
    for (int t = 2; t <= T; ++t) {
      const double lhs =
          a.log_gamma[t] + std::log(1.0 / a.eta[t] - c.mu_f);
      const double rhs =
          a.log_gamma[t - 1] + std::log(1.0 / a.eta[t - 1] + c.mu_h);
      CHECK(std::abs(lhs - rhs) <= 1e-10);
    }
    CHECK(a.v[T] == doctest::Approx(1.0));
    for (int t = 1; t <= T; ++t) CHECK(a.v[t] >= a.v[t - 1] - 1e-15);
  }
}

TEST_CASE("tail constant") {
  const double e = std::exp(1.0);
  // p = 1, delta = 0.5
  const double head = std::pow(std::max(2.0 * e, e * std::log(4.0 * e)), 2.0);
  const double l4 = std::log(8.0);
  CHECK(c_delta_p(0.5, 1.0) ==
        doctest::Approx(head + 16.0 * (6.0 * l4 + l4 * l4)).epsilon(1e-12));
  CHECK(c_delta_p(0.5, 1.0) == doctest::Approx(310.9).epsilon(1e-3));

  // monotone as delta shrinks
  CHECK(c_delta_p(0.01, 1.5) > c_delta_p(0.1, 1.5));
  CHECK(c_delta_p(0.01, 0.7) > c_delta_p(0.1, 0.7));

  // p < 1 branch against a direct transcription
  const double p = 0.5, delta = 0.1;
  const double head2 = std::pow(
      std::max(2.0 * e / p, e * std::log(2.0 * e / delta)), 2.0 / p);
  const double inner =
      4.0 * (3.0 + std::pow(3.0 / p, 2.0 / p) * 2.0) / delta;
  const double tail =
      64.0 * std::max(1.0, std::pow(std::log(inner), (p + 2.0) / p)) /
      std::pow(std::log(2.0), 2.0 / p);
  CHECK(c_delta_p(delta, p) == doctest::Approx(head2 + tail).epsilon(1e-12));

  CHECK(std::isinf(c_delta_p(0.5, 2.0)));
  CHECK_THROWS_AS(c_delta_p(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(c_delta_p(0.5, 2.5), DomainError);
}

TEST_CASE("recommended step sizes") {
  EtaRecommendation r = recommended_eta(ScheduleRule::ConvexAnytime, 1.0, 0.0,
                                        1.0, 0.0, 0, 0.0, 2.0);
  CHECK(r.eta == doctest::Approx(1.0));

  r = recommended_eta(ScheduleRule::ConvexAnytime, 1.0, 0.0, 0.0, 1.0, 0,
                      std::exp(-1.0), 2.0);
  CHECK(r.eta == doctest::Approx(1.0));

  r = recommended_eta(ScheduleRule::ConvexFixed, 4.0, 0.0, 1.0, 0.0, 100, 0.0,
                      2.0);
  CHECK(r.eta == doctest::Approx(std::sqrt(4.0 / std::log(100.0))));

  r = recommended_eta(ScheduleRule::HeavyZamani, 1.0, 0.0, 1.0, 1.0, 64, 0.0,
                      1.5);
  CHECK(r.eta == doctest::Approx(std::pow(0.5, 2.0 / 3.0)));
  CHECK(std::isinf(r.eta_star));

  r = recommended_eta(ScheduleRule::HeavyAnytime, 2.0, 4.0, 1.0, 1.0, 0, 0.0,
                      1.5);
  CHECK(r.eta_star == doctest::Approx(std::pow(2.0, 1.0 / 3.0) / 4.0));

  r = recommended_eta(ScheduleRule::SubweibullAnytime, 1.0, 0.0, 0.0, 1.0, 0,
                      0.5, 1.0);
  CHECK(r.eta == doctest::Approx(1.0 / std::sqrt(c_delta_p(0.5, 1.0))));

  CHECK(recommended_eta(ScheduleRule::StrcFKnownPiecewise, 1, 1, 1, 1, 8, 0.0,
                        2.0)
            .eta == doctest::Approx(1.5));

  CHECK_THROWS_AS(recommended_eta(ScheduleRule::StrcFAnytime1, 1, 1, 1, 1, 8,
                                  0.0, 2.0),
                  MissingConstant);
  CHECK_THROWS_AS(recommended_eta(ScheduleRule::SubweibullZamani, 1, 0, 1, 1,
                                  8, 0.0, 1.5),
                  MissingConstant);
  CHECK_THROWS_AS(recommended_eta(ScheduleRule::ConvexFixed, 1, 0, 1, 1, 0,
                                  0.0, 2.0),
                  MissingConstant);
}
