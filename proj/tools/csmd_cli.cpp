#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "csmd/acceptance.hpp"
#include "csmd/harness.hpp"

namespace {

int cmd_run(const std::string &config_path, std::uint64_t seed, int jobs,
            const std::string &out_dir, bool seed_set, bool jobs_set) {
  csmd::ExperimentConfig cfg = csmd::parse_config_file(config_path);
  if (seed_set) cfg.base_seed = seed;
  if (jobs_set) cfg.jobs = jobs;
  const csmd::ExperimentResult res = csmd::run_experiment(cfg);

  std::filesystem::create_directories(out_dir);
  {
    std::ofstream f(out_dir + "/results.csv", std::ios::binary);
    csmd::write_results_csv(f, {res});
  }
  std::printf("experiment %s: problem=%s schedule=%s eta=%.6g D=%.6g\n",
              cfg.id.c_str(), cfg.problem_id.c_str(), cfg.schedule.c_str(),
              res.schedule.eta_base, res.D);
  for (const auto &a : res.agg) {
    std::printf("  T=%-7d ok=%-5d mean=%.6g se=%.3g estimate=%.6g\n", a.T,
                a.ok_count, a.mean, a.se, a.estimate);
    for (const auto &[d, q] : a.quantiles) {
      std::printf("    q[1-%g]=%.6g\n", d, q);
    }
  }
  if (res.agg.size() >= 4) {
    try {
      const csmd::RateFit f = csmd::fit_rate(csmd::fit_points(res, 1.0));
      std::printf("  log-log fit: slope=%.4f r2=%.4f curvature=%.4f\n",
                  f.slope, f.r_squared, f.curvature);
    } catch (const std::exception &e) {
      std::printf("  log-log fit unavailable: %s\n", e.what());
    }
  }
  std::printf("wrote %s/results.csv\n", out_dir.c_str());
  return 0;
}

int cmd_validate_noise(const std::string &model, int dim, double sigma,
                       double p, long samples, std::uint64_t seed) {
  const csmd::NoiseModel n = csmd::NoiseModel::by_name(model, dim, sigma, p);
  csmd::RngStream rng(seed, 0);
  const csmd::NoiseValidationReport rep = csmd::validate_noise(n, samples, rng);
  std::printf("%s (assumption %s, sigma=%g, dim=%d, samples=%ld)\n",
              n.name().c_str(), n.assumption_name().c_str(), sigma, dim,
              samples);
  for (const auto &pt : rep.points) {
    std::printf("  lambda=%-12.6g estimate=%-12.6g se=%-10.3g bound=%-12.6g %s\n",
                pt.lambda, pt.estimate, pt.se, pt.bound,
                pt.pass ? "ok" : "VIOLATED");
  }
  std::printf("%s\n", rep.pass ? "PASS" : "FAIL");
  return rep.pass ? 0 : 1;
}

int cmd_dump_schedule(const std::string &rule, int T, double eta,
                      double eta_star, double L, double mu_f, double mu_h,
                      double kappa_f, double kappa_h, double p) {
  csmd::Schedule s;
  s.rule = csmd::rule_by_name(rule);
  s.eta_base = eta;
  if (eta_star > 0) s.eta_star = eta_star;
  s.L = L;
  s.mu_f = mu_f;
  s.mu_h = mu_h;
  s.kappa_f = kappa_f;
  s.kappa_h = kappa_h;
  s.p = p;
  s.T = T;
  std::printf("t,eta\n");
  for (int t = 1; t <= T; ++t) {
    std::printf("%d,%.17g\n", t, s.eta(t));
  }
  return 0;
}

int cmd_accept(std::uint64_t seed, int jobs, const std::string &out_dir) {
  const csmd::AcceptanceOutcome out = csmd::run_acceptance(seed, jobs, out_dir);
  for (const auto &c : out.criteria) {
    std::printf("%s %02d %s -- %s\n", c.pass ? "PASS" : "FAIL", c.index,
                c.name.c_str(), c.detail.c_str());
  }
  std::printf("%s\n", out.all_pass ? "ALL PASS" : "FAILURES PRESENT");
  return out.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"composite stochastic mirror descent laboratory"};
  app.require_subcommand(1);
  app.fallthrough();  // allow --seed/--jobs/--out-dir after the subcommand

  std::uint64_t seed = 20240101;
  int jobs = 1;
  std::string out_dir = "out";
  auto *seed_opt = app.add_option("--seed", seed, "base RNG seed");
  auto *jobs_opt = app.add_option("--jobs", jobs, "worker pool size");
  app.add_option("--out-dir", out_dir, "output directory");

  auto *run = app.add_subcommand("run", "run one experiment config");
  std::string config_path;
  run->add_option("config", config_path, "config file")->required();

  auto *vn = app.add_subcommand("validate-noise", "check a noise generator");
  std::string model;
  int dim = 10;
  double sigma = 1.0, tail_p = 1.5;
  long samples = 1000000;
  vn->add_option("model", model, "generator name")->required();
  vn->add_option("--dim", dim, "dimension");
  vn->add_option("--sigma", sigma, "noise level");
  vn->add_option("--p", tail_p, "tail exponent");
  vn->add_option("--samples", samples, "sample count");

  auto *ds = app.add_subcommand("dump-schedule", "print a step-size sequence");
  std::string rule;
  int T = 0;
  double eta = 1.0, eta_star = 0.0, L = 0.0, mu_f = 0.0, mu_h = 0.0;
  double kappa_f = 0.0, kappa_h = 0.0, sched_p = 1.5;
  ds->add_option("rule", rule, "schedule rule name")->required();
  ds->add_option("--T", T, "horizon")->required();
  ds->add_option("--eta", eta, "eta multiplier");
  ds->add_option("--eta-star", eta_star, "eta* (heavy rules)");
  ds->add_option("--L", L, "smoothness constant");
  ds->add_option("--mu-f", mu_f, "strong convexity of f");
  ds->add_option("--mu-h", mu_h, "strong convexity of h");
  ds->add_option("--kappa-f", kappa_f, "condition number L/mu_f");
  ds->add_option("--kappa-h", kappa_h, "condition number L/mu_h");
  ds->add_option("--p", sched_p, "tail exponent");

  auto *acc = app.add_subcommand("accept", "run the acceptance matrix");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(config_path, seed, jobs, out_dir, seed_opt->count() > 0,
                     jobs_opt->count() > 0);
    }
    if (vn->parsed()) {
      return cmd_validate_noise(model, dim, sigma, tail_p, samples, seed);
    }
    if (ds->parsed()) {
      return cmd_dump_schedule(rule, T, eta, eta_star, L, mu_f, mu_h, kappa_f,
                               kappa_h, sched_p);
    }
    if (acc->parsed()) {
      return cmd_accept(seed, jobs, out_dir);
    }
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
