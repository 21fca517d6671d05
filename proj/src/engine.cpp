#include "csmd/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "csmd/errors.hpp"

namespace csmd {

RunRecord run_csmd(const ProblemInstance &p, const RunConfig &c) {
  if (c.T < 2) throw ConfigError("run_csmd needs T >= 2");
  if (!p.domain.contains(c.x1, 1e-9)) {
    throw ConfigError("start point is infeasible");
  }
  for (size_t i = 0; i < c.checkpoints.size(); ++i) {
    if (c.checkpoints[i] < 1 || c.checkpoints[i] > c.T ||
        (i > 0 && c.checkpoints[i] <= c.checkpoints[i - 1])) {
      throw ConfigError("checkpoints must be sorted within [1, T]");
    }
  }
  const double denom = std::max(2.0 * p.L, p.mu_f);
  const double cap =
      denom > 0.0 ? 1.0 / denom : std::numeric_limits<double>::infinity();

  const auto start = std::chrono::steady_clock::now();
  RngStream rng(c.base_seed, c.stream_id);
  RunRecord rec;
  rec.base_seed = c.base_seed;
  rec.stream_id = c.stream_id;

  Vector x = c.x1;
  size_t next_cp = 0;
  for (int t = 1; t <= c.T; ++t) {
    if (c.record_history) rec.history.push_back(x);
    const double eta_t = c.schedule.eta(t);
    if (eta_t > cap * (1.0 + 1e-12)) {
      throw StepTooLarge("eta_t exceeds 1/max(2L, mu_f) at t=" +
                         std::to_string(t));
    }
    const Vector g = sample_noisy_gradient(p, c.noise, x, rng);
    ProxProblem prox{g, x, eta_t, p.h, p.domain, p.mirror};
    x = solve_prox(prox);
    const double gap = objective_gap(p, x);
    if (!(gap < 1e12)) {
      throw NumericalDivergence("gap exceeded 1e12 at t=" + std::to_string(t));
    }
    if (next_cp < c.checkpoints.size() && c.checkpoints[next_cp] == t) {
      Checkpoint cp;
      cp.t = t;
      cp.gap = gap;
      cp.eta_t = eta_t;
      cp.dist = p.mirror.norm(x - p.x_star);
      cp.breg = bregman(p.mirror, p.x_star, x);
      rec.checkpoints.push_back(cp);
      ++next_cp;
    }
  }
  rec.x_final = x;
  rec.final_gap = objective_gap(p, x);
  rec.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return rec;
}

std::vector<ZRecord> z_diagnostics(const ProblemInstance &p,
                                   const std::vector<Vector> &history,
                                   const AnalysisSequences &seq,
                                   const Vector &x_ref) {
  const int T = seq.T;
  if (static_cast<int>(history.size()) < T) {
    throw HistoryNotRetained("z-diagnostics need the full iterate history");
  }
  std::vector<ZRecord> out;
  for (int t = 0; t <= T; ++t) {
    const double vt = seq.v[t];
    Vector z = (seq.v[0] / vt) * x_ref;
    double min_w = seq.v[0] / vt;
    double sum_w = min_w;
    for (int s = 1; s <= t; ++s) {
      const double w = (seq.v[s] - seq.v[s - 1]) / vt;
      z += w * history[static_cast<size_t>(s - 1)];  // history[s-1] = x^s
      min_w = std::min(min_w, w);
      sum_w += w;
    }
    ZRecord r;
    r.t = t;
    r.gap_z = objective_gap(p, z);
    r.min_weight = min_w;
    r.weight_sum = sum_w;
    out.push_back(r);
  }
  return out;
}

namespace {

double noise_weight_sum(const AnalysisSequences &a) {
  double s = 0.0;
  for (int t = 1; t <= a.T; ++t) {
    s += std::exp(a.log_gamma[t] - a.log_tail[t]) * a.eta[t];
  }
  return s;
}

}  // namespace

double expected_bound(const AnalysisSequences &a, double D, double M,
                      double sigma, double mu_f) {
  const double dist_term =
      (1.0 - mu_f * a.eta[1]) * D * std::exp(-a.log_sum_gamma);
  return dist_term + 2.0 * (M * M + sigma * sigma) * noise_weight_sum(a);
}

double hp_bound(const AnalysisSequences &a, double D, double M, double sigma,
                double mu_f, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("hp_bound needs delta in (0,1)");
  }
  double max_term = 1.0;
  for (int t = 2; t <= a.T; ++t) {
    max_term = std::max(max_term, 1.0 / (1.0 - mu_f * a.eta[t]));
  }
  const double noise_coeff =
      M * M + sigma * sigma * (1.0 + 2.0 * std::log(2.0 / delta));
  return 2.0 * (1.0 + max_term) *
         (D * std::exp(-a.log_sum_gamma) + noise_coeff * noise_weight_sum(a));
}

}  // namespace csmd
