#ifndef CSMD_HARNESS_HPP
#define CSMD_HARNESS_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "csmd/engine.hpp"
#include "csmd/stats.hpp"

namespace csmd {

// Key = value config (one pair per line, '#' comments). Keys:
//   experiment, problem, noise (generator name or "none"), sigma, noise_p,
//   schedule, eta ("auto" or a number), eta_star, tuning_delta,
//   eta_multiplier, T_grid (comma list), replications, delta_grid,
//   estimator (mean | median_of_means | trimmed_mean), mom_blocks, trim,
//   checkpoint_policy (none | log2), base_seed, jobs, experiment_index
struct ExperimentConfig {
  std::string id = "experiment";
  std::string problem_id;
  std::string noise = "none";
  double sigma = 0.0;
  double noise_p = 1.5;
  std::string schedule = "constant";
  double eta = 0.0;       // 0 = auto-tune from the schedule's recommendation
  double eta_star = 0.0;  // 0 = auto
  double tuning_delta = 0.0;
  double eta_multiplier = 1.0;
  std::vector<int> T_grid;
  int replications = 30;
  std::vector<double> delta_grid;
  std::string estimator = "mean";
  int mom_blocks = 10;
  double trim = 0.01;
  std::string checkpoint_policy = "none";
  std::uint64_t base_seed = 20240101;
  int jobs = 1;
  int experiment_index = 0;
};

ExperimentConfig parse_config(std::istream &in);
ExperimentConfig parse_config_file(const std::string &path);

struct RunResult {
  int T = 0;
  int rep = 0;
  std::uint64_t stream_id = 0;
  double gap = 0.0;
  bool ok = false;
  std::string error;
  std::vector<Checkpoint> checkpoints;
};

struct TAggregate {
  int T = 0;
  int ok_count = 0;
  double mean = 0.0;
  double se = 0.0;
  double med = 0.0;
  double mom = 0.0;      // median of means, k = mom_blocks
  double trimmed = 0.0;  // symmetric trim of config.trim
  double estimate = 0.0; // whichever the config's estimator selects
  std::vector<std::pair<double, double>> quantiles;  // (delta, q_{1-delta})
};

struct ExperimentResult {
  ExperimentConfig config;
  const ProblemInstance *problem = nullptr;
  NoiseModel noise;   // meaningful only when config.sigma > 0
  Schedule schedule;  // with the resolved eta
  Vector x1;
  double D = 0.0;  // D_psi(x*, x1)
  std::vector<RunResult> runs;  // sorted by (T, replication)
  std::vector<TAggregate> agg;
};

// Executes replications x T-grid runs on a bounded worker pool
// (config.jobs). Streams are derived as experiment_index * 10^6 + a global
// replication counter, so outputs are independent of scheduling order.
// Per-run engine errors are recorded, not fatal.
ExperimentResult run_experiment(const ExperimentConfig &c);

// Start point used when a config does not pin one: the projection of
// x* + 1 onto the domain, or the uniform vector on the simplex.
Vector default_start(const ProblemInstance &p);

// Columns: experiment,T,replication,stream_id,kind,t,gap with kind "final"
// for the last iterate and "checkpoint" for intermediate rows; doubles are
// printed with %.17g so identical runs give identical bytes.
void write_results_csv(std::ostream &out,
                       const std::vector<ExperimentResult> &results);

// (T, estimate) points with nonpositive estimates dropped when they fall
// below the floor 1e3 * eps * scale.
std::vector<std::pair<double, double>> fit_points(const ExperimentResult &r,
                                                  double floor_scale);

struct QuantileScalingReport {
  std::vector<std::pair<double, double>> q;  // (delta, q_{1-delta})
  double ratio_q001_q01 = 0.0;  // q at delta=0.01 over q at delta=0.1
  double fit_slope = 0.0;       // coefficient against the predicted growth
  double fit_intercept = 0.0;
};

// Fits the empirical (1-delta)-quantiles against sqrt(log(1/delta))
// (strongly_convex = false) or log(1/delta) (true). Needs at least
// 10/min(delta) samples (InsufficientReplications otherwise).
QuantileScalingReport quantile_scaling(const std::vector<double> &gaps,
                                       const std::vector<double> &deltas,
                                       bool strongly_convex);

struct DominanceLine {
  std::string label;
  double stat = 0.0;
  double bound = 0.0;
  bool pass = false;
};

// In-expectation check (mean - 2 SE <= expected_bound per T). The noise
// must certify a bounded second moment (5A or 5B) unless sigma = 0.
std::vector<DominanceLine> expected_dominance_report(const ExperimentResult &r);

// High-probability check (q_{1-delta} <= hp_bound per (T, delta)); needs a
// 5B-certified noise model unless sigma = 0.
std::vector<DominanceLine> hp_dominance_report(const ExperimentResult &r,
                                               const std::vector<double> &deltas);

}  // namespace csmd

#endif  // CSMD_HARNESS_HPP
