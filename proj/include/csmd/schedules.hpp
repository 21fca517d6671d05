#ifndef CSMD_SCHEDULES_HPP
#define CSMD_SCHEDULES_HPP

#include <limits>
#include <string>
#include <vector>

namespace csmd {

enum class ScheduleRule {
  ConvexAnytime,        // min(1/(2L), eta/sqrt(t))
  ConvexFixed,          // min(1/(2L), eta/sqrt(T))
  Zamani,               // eta (T-t+1)/T^(3/2)
  StrcFAnytime1,        // 1/(mu_f (t + 2 kappa_f))
  StrcFAnytime2,        // 2/(mu_f (t + 1 + 4 kappa_f))
  StrcFKnownPiecewise,  // constant warmup until ceil(T/2), then decaying
  StrcHAnytime,         // 2/(mu_h (t + 4 kappa_h))
  StrcHKnownPiecewise,
  HeavyAnytime,         // min(eta*/t^((2-p)/p), eta/t^(1/p))
  HeavyFixed,
  HeavyZamani,          // eta (T-t+1)^(1/(p-1)) / T^((2p-1)/(p(p-1)))
  SubweibullAnytime,    // same shapes as the convex rules
  SubweibullFixed,
  SubweibullZamani,
  Constant,             // eta
};

ScheduleRule rule_by_name(const std::string &name);
std::string rule_name(ScheduleRule rule);
std::vector<std::string> rule_names();
bool rule_needs_horizon(ScheduleRule rule);

struct Schedule {
  ScheduleRule rule = ScheduleRule::Constant;
  double eta_base = 1.0;  // the free multiplier eta
  double eta_star = std::numeric_limits<double>::infinity();  // heavy rules
  double L = 0.0;
  double mu_f = 0.0;
  double mu_h = 0.0;
  double kappa_f = 0.0;
  double kappa_h = 0.0;
  double p = 1.5;  // tail exponent, heavy rules
  int T = 0;       // horizon; 0 = anytime

  // Step size at iteration t (1-based). Throws HorizonRequired when the
  // rule needs T and none is set, ConstraintViolated when the piecewise
  // parameter constraints fail (eta + kappa_f > 1 resp. eta + kappa_h > 0).
  double eta(int t) const;
};

// gamma_t = eta_t * prod_{s=2}^t (1 + mu_h eta_{s-1})/(1 - mu_f eta_s),
// v_t = gamma_T / sum_{s=max(t,1)}^T gamma_s, Gamma_t the running product.
// Products are accumulated in log space; the log fields stay finite even
// when the plain values overflow.
struct AnalysisSequences {
  std::vector<double> eta;        // index 1..T (index 0 unused)
  std::vector<double> gamma;      // index 1..T
  std::vector<double> log_gamma;  // index 1..T
  std::vector<double> Gamma;      // index 1..T
  std::vector<double> v;          // index 0..T
  std::vector<double> log_tail;   // log sum_{s=t}^T gamma_s, index 1..T
  double log_sum_gamma = 0.0;
  int T = 0;
};

// Evaluates the sequences over t = 1..T, checking eta_t <= 1/max(2L, mu_f)
// throughout (StepTooLarge otherwise).
AnalysisSequences analysis_sequences(const Schedule &s, double mu_f,
                                     double mu_h, int T);

// delta in (0,1), p in (0,2): the tail constant with the two printed
// branches; returns +inf at p = 2 (a different analysis path applies).
double c_delta_p(double delta, double p);

struct EtaRecommendation {
  double eta = 0.0;
  double eta_star = std::numeric_limits<double>::infinity();
};

// Tuning expressions with every hidden constant set to 1. delta = 0 selects
// the in-expectation tuning, delta in (0,1) the high-probability one.
// D is the Bregman distance from the optimum to the start point.
// Throws MissingConstant for rules without a free tuning parameter or when
// a required constant (T, delta) is absent.
EtaRecommendation recommended_eta(ScheduleRule rule, double D, double L,
                                  double M, double sigma, int T, double delta,
                                  double p);

}  // namespace csmd

#endif  // CSMD_SCHEDULES_HPP
