#include "csmd/schedules.hpp"

#include <cmath>
#include <utility>

#include "csmd/errors.hpp"

namespace csmd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::pair<const char *, ScheduleRule> kRuleNames[] = {
    {"convex_anytime", ScheduleRule::ConvexAnytime},
    {"convex_fixed", ScheduleRule::ConvexFixed},
    {"zamani", ScheduleRule::Zamani},
    {"strc_f_anytime_1", ScheduleRule::StrcFAnytime1},
    {"strc_f_anytime_2", ScheduleRule::StrcFAnytime2},
    {"strc_f_known_piecewise", ScheduleRule::StrcFKnownPiecewise},
    {"strc_h_anytime", ScheduleRule::StrcHAnytime},
    {"strc_h_known_piecewise", ScheduleRule::StrcHKnownPiecewise},
    {"heavy_anytime", ScheduleRule::HeavyAnytime},
    {"heavy_fixed", ScheduleRule::HeavyFixed},
    {"heavy_zamani", ScheduleRule::HeavyZamani},
    {"subweibull_anytime", ScheduleRule::SubweibullAnytime},
    {"subweibull_fixed", ScheduleRule::SubweibullFixed},
    {"subweibull_zamani", ScheduleRule::SubweibullZamani},
    {"constant", ScheduleRule::Constant},
};

}  // namespace

ScheduleRule rule_by_name(const std::string &name) {
  for (const auto &[n, r] : kRuleNames) {
    if (name == n) return r;
  }
  throw ConfigError("unknown schedule rule: " + name);
}

std::string rule_name(ScheduleRule rule) {
  for (const auto &[n, r] : kRuleNames) {
    if (rule == r) return n;
  }
  return "";
}

std::vector<std::string> rule_names() {
  std::vector<std::string> out;
  for (const auto &[n, r] : kRuleNames) out.push_back(n);
  return out;
}

bool rule_needs_horizon(ScheduleRule rule) {
  switch (rule) {
    case ScheduleRule::ConvexFixed:
    case ScheduleRule::Zamani:
    case ScheduleRule::StrcFKnownPiecewise:
    case ScheduleRule::StrcHKnownPiecewise:
    case ScheduleRule::HeavyFixed:
    case ScheduleRule::HeavyZamani:
    case ScheduleRule::SubweibullFixed:
    case ScheduleRule::SubweibullZamani:
      return true;
    default:
      return false;
  }
}

double Schedule::eta(int t) const {
  if (t < 1) throw DomainError("eta(t) needs t >= 1");
  if (rule_needs_horizon(rule)) {
    if (T < 2) throw HorizonRequired(rule_name(rule) + " needs a horizon T >= 2");
    if (t > T) throw DomainError("eta(t) needs t <= T");
  }
  const double cap = L > 0.0 ? 1.0 / (2.0 * L) : kInf;
  const double td = static_cast<double>(t);
  const double Td = static_cast<double>(T);
  switch (rule) {
    case ScheduleRule::ConvexAnytime:
    case ScheduleRule::SubweibullAnytime:
      return std::min(cap, eta_base / std::sqrt(td));
    case ScheduleRule::ConvexFixed:
    case ScheduleRule::SubweibullFixed:
      return std::min(cap, eta_base / std::sqrt(Td));
    case ScheduleRule::Zamani:
    case ScheduleRule::SubweibullZamani:
      return eta_base * (Td - td + 1.0) / std::pow(Td, 1.5);
    case ScheduleRule::StrcFAnytime1:
      return 1.0 / (mu_f * (td + 2.0 * kappa_f));
    case ScheduleRule::StrcFAnytime2:
      return 2.0 / (mu_f * (td + 1.0 + 4.0 * kappa_f));
    case ScheduleRule::StrcFKnownPiecewise: {
      if (!(eta_base + kappa_f > 1.0)) {
        throw ConstraintViolated("piecewise rule needs eta + kappa_f > 1");
      }
      const int tau = (T + 1) / 2;  // ceil(T/2)
      if (t == 1) return 1.0 / (mu_f * (1.0 + 2.0 * kappa_f));
      if (t <= tau) return 1.0 / (mu_f * (eta_base + 2.0 * kappa_f));
      return 2.0 / (mu_f * (td - tau + 2.0 + 4.0 * kappa_f));
    }
    case ScheduleRule::StrcHAnytime:
      return 2.0 / (mu_h * (td + 4.0 * kappa_h));
    case ScheduleRule::StrcHKnownPiecewise: {
      if (!(eta_base + kappa_h > 0.0)) {
        throw ConstraintViolated("piecewise rule needs eta + kappa_h > 0");
      }
      const int tau = (T + 1) / 2;
      if (t <= tau) return 1.0 / (mu_h * (eta_base + 2.0 * kappa_h));
      return 2.0 / (mu_h * (td - tau + 4.0 * kappa_h));
    }
    case ScheduleRule::HeavyAnytime:
      return std::min(eta_star / std::pow(td, (2.0 - p) / p),
                      eta_base / std::pow(td, 1.0 / p));
    case ScheduleRule::HeavyFixed:
      return std::min(eta_star / std::pow(Td, (2.0 - p) / p),
                      eta_base / std::pow(Td, 1.0 / p));
    case ScheduleRule::HeavyZamani:
      return eta_base * std::pow(Td - td + 1.0, 1.0 / (p - 1.0)) /
             std::pow(Td, (2.0 * p - 1.0) / (p * (p - 1.0)));
    case ScheduleRule::Constant:
      return eta_base;
  }
  return eta_base;
}

AnalysisSequences analysis_sequences(const Schedule &s, double mu_f,
                                     double mu_h, int T) {
  if (T < 1) throw DomainError("analysis_sequences needs T >= 1");
  AnalysisSequences a;
  a.T = T;
  a.eta.assign(T + 1, 0.0);
  a.gamma.assign(T + 1, 0.0);
  a.log_gamma.assign(T + 1, 0.0);
  a.Gamma.assign(T + 1, 0.0);
  a.log_tail.assign(T + 1, 0.0);
  a.v.assign(T + 1, 0.0);

  const double denom = std::max(2.0 * s.L, mu_f);
  const double cap = denom > 0.0 ? 1.0 / denom : kInf;
  for (int t = 1; t <= T; ++t) {
    a.eta[t] = s.eta(t);
    if (!(a.eta[t] > 0.0)) throw DomainError("nonpositive step size");
    if (a.eta[t] > cap * (1.0 + 1e-12)) {
      throw StepTooLarge("eta_t exceeds 1/max(2L, mu_f) at t=" +
                         std::to_string(t));
    }
  }

  double log_Gamma = 0.0;  // log of the running product, Gamma_1 = 1
  for (int t = 1; t <= T; ++t) {
    if (t >= 2) {
      const double shrink = 1.0 - mu_f * a.eta[t];
      if (!(shrink > 0.0)) {
        throw StepTooLarge("mu_f eta_t >= 1 at t=" + std::to_string(t));
      }
      log_Gamma += std::log1p(mu_h * a.eta[t - 1]) - std::log(shrink);
    }
    a.Gamma[t] = std::exp(log_Gamma);
    a.log_gamma[t] = log_Gamma + std::log(a.eta[t]);
    a.gamma[t] = std::exp(a.log_gamma[t]);
  }

  // backward log-sum-exp for the tail sums
  a.log_tail[T] = a.log_gamma[T];
  for (int t = T - 1; t >= 1; --t) {
    const double hi = std::max(a.log_tail[t + 1], a.log_gamma[t]);
    const double lo = std::min(a.log_tail[t + 1], a.log_gamma[t]);
    a.log_tail[t] = hi + std::log1p(std::exp(lo - hi));
  }
  a.log_sum_gamma = a.log_tail[1];
  for (int t = 0; t <= T; ++t) {
    a.v[t] = std::exp(a.log_gamma[T] - a.log_tail[std::max(t, 1)]);
  }
  return a;
}

double c_delta_p(double delta, double p) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("c_delta_p needs delta in (0,1)");
  }
  if (p == 2.0) return kInf;  // handled by the sub-Gaussian path instead
  if (!(p > 0.0 && p < 2.0)) throw DomainError("c_delta_p needs p in (0,2)");
  const double e = std::exp(1.0);
  const double head =
      std::pow(std::max(2.0 * e / p, e * std::log(2.0 * e / delta)), 2.0 / p);
  if (p >= 1.0) {
    const double l4 = std::log(4.0 / delta);
    return head + 16.0 * (6.0 * l4 + l4 * l4);
  }
  const double inner = 4.0 * (3.0 + std::pow(3.0 / p, 2.0 / p) * 2.0) / delta;
  const double tail =
      64.0 * std::max(1.0, std::pow(std::log(inner), (p + 2.0) / p)) /
      std::pow(std::log(2.0), 2.0 / p);
  return head + tail;
}

EtaRecommendation recommended_eta(ScheduleRule rule, double D, double L,
                                  double M, double sigma, int T, double delta,
                                  double p) {
  const bool hp = delta > 0.0;
  if (hp && !(delta < 1.0)) throw DomainError("delta must be in (0,1)");
  const bool fixed = rule == ScheduleRule::ConvexFixed ||
                     rule == ScheduleRule::HeavyFixed ||
                     rule == ScheduleRule::SubweibullFixed;
  if (fixed && T < 2) throw MissingConstant("fixed-horizon tuning needs T");
  const double logT = fixed ? std::log(static_cast<double>(T)) : 1.0;

  EtaRecommendation r;
  switch (rule) {
    case ScheduleRule::ConvexAnytime:
    case ScheduleRule::ConvexFixed:
    case ScheduleRule::Zamani: {
      const double base =
          M * M + sigma * sigma * (hp ? std::log(1.0 / delta) : 1.0);
      if (!(base > 0.0)) throw MissingConstant("M and sigma both zero");
      r.eta = std::sqrt(D / (base * logT));
      return r;
    }
    case ScheduleRule::HeavyAnytime:
    case ScheduleRule::HeavyFixed:
    case ScheduleRule::HeavyZamani: {
      const double base = std::pow(M, p) + std::pow(sigma, p);
      if (!(base > 0.0)) throw MissingConstant("M and sigma both zero");
      r.eta = std::pow(D / (base * logT), 1.0 / p);
      r.eta_star = L > 0.0 ? std::pow(D / logT, (2.0 - p) / p) / L : kInf;
      return r;
    }
    case ScheduleRule::SubweibullAnytime:
    case ScheduleRule::SubweibullFixed:
    case ScheduleRule::SubweibullZamani: {
      if (!hp) throw MissingConstant("sub-Weibull tuning needs delta");
      const double base = M * M + sigma * sigma * c_delta_p(delta, p);
      if (!(base > 0.0)) throw MissingConstant("M and sigma both zero");
      r.eta = std::sqrt(D / (base * logT));
      return r;
    }
    case ScheduleRule::StrcFKnownPiecewise:
    case ScheduleRule::StrcHKnownPiecewise:
      r.eta = 1.5;  // default warmup length parameter
      return r;
    default:
      throw MissingConstant(rule_name(rule) + " has no free tuning parameter");
  }
}

}  // namespace csmd
