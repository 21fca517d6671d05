#ifndef CSMD_ENGINE_HPP
#define CSMD_ENGINE_HPP

#include <cstdint>
#include <vector>

#include "csmd/noise.hpp"
#include "csmd/problems.hpp"
#include "csmd/schedules.hpp"

namespace csmd {

struct RunConfig {
  NoiseModel noise;
  Schedule schedule;
  Vector x1;
  int T = 2;
  std::vector<int> checkpoints;  // sorted subset of [1, T]
  bool record_history = false;   // keep x^1..x^T for z-diagnostics
  std::uint64_t base_seed = 0;
  std::uint64_t stream_id = 0;
};

struct Checkpoint {
  int t = 0;
  double gap = 0.0;  // F(x^{t+1}) - F*
  double eta_t = 0.0;
  double dist = 0.0;     // ||x^{t+1} - x*|| in the mirror norm
  double breg = 0.0;     // D_psi(x*, x^{t+1})
};

struct ZRecord {
  int t = 0;
  double gap_z = 0.0;  // F(z^t) - F*
  double min_weight = 0.0;
  double weight_sum = 0.0;
};

struct RunRecord {
  std::vector<Checkpoint> checkpoints;
  Vector x_final;  // x^{T+1}
  double final_gap = 0.0;
  double wall_time_sec = 0.0;
  std::uint64_t base_seed = 0;
  std::uint64_t stream_id = 0;
  std::vector<Vector> history;  // x^1..x^T when record_history is set
};

// Iterates x^{t+1} = solve_prox(g^t, x^t, eta_t) for t = 1..T with a noisy
// gradient at each step; deterministic given (base_seed, stream_id).
// Enforces T >= 2, feasible x1, eta_t <= 1/max(2L, mu_f), and a divergence
// guard of 1e12 on the gap.
RunRecord run_csmd(const ProblemInstance &p, const RunConfig &c);

// z^t = (v_0/v_t) x_ref + sum_{s<=t} ((v_s - v_{s-1})/v_t) x^s for t = 0..T.
// Needs the retained iterate history (HistoryNotRetained otherwise).
std::vector<ZRecord> z_diagnostics(const ProblemInstance &p,
                                   const std::vector<Vector> &history,
                                   const AnalysisSequences &seq,
                                   const Vector &x_ref);

// (1 - mu_f eta_1) D / sum gamma + 2 (M^2 + sigma^2) sum_t gamma_t eta_t /
// sum_{s=t}^T gamma_s, evaluated through the log-space sequences.
double expected_bound(const AnalysisSequences &a, double D, double M,
                      double sigma, double mu_f);

// 2 (1 + max_{2<=t<=T} 1/(1 - mu_f eta_t)) [ D / sum gamma +
// (M^2 + sigma^2 (1 + 2 log(2/delta))) sum_t gamma_t eta_t / tail_t ].
double hp_bound(const AnalysisSequences &a, double D, double M, double sigma,
                double mu_f, double delta);

}  // namespace csmd

#endif  // CSMD_ENGINE_HPP
