#include "csmd/acceptance.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "csmd/errors.hpp"
#include "csmd/harness.hpp"

namespace csmd {

namespace {

using json = nlohmann::ordered_json;

std::string fmt(const char *format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------------------
// Brute-force prox minimizers (independent of solve_prox's formulas)

double golden_min(const std::function<double(double)> &f, double lo, double hi,
                  int iters) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// per-coordinate golden section for the separable euclidean cases
Vector brute_separable(const ProxProblem &p) {
  Vector x(p.anchor.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double lo = p.anchor[i] - 10.0, hi = p.anchor[i] + 10.0;
    if (p.domain.kind == DomainKind::Box) {
      lo = p.domain.lo;
      hi = p.domain.hi;
    }
    auto f = [&](double u) {
      double hv = 0.0;
      if (p.h.kind == RegKind::L1) hv = p.h.lambda * std::abs(u);
      if (p.h.kind == RegKind::Quadratic) hv = 0.5 * p.h.lambda * u * u;
      const double du = u - p.anchor[i];
      return hv + p.g[i] * du + du * du / (2.0 * p.eta);
    };
    x[i] = golden_min(f, lo, hi, 120);
  }
  return x;
}

// fixed-step projected gradient on the l2 ball (isotropic smooth objective)
Vector brute_ball(const ProxProblem &p) {
  const double lam = p.h.kind == RegKind::Quadratic ? p.h.lambda : 0.0;
  const double step = 0.5 * p.eta / (1.0 + lam * p.eta);
  Vector x = Vector::Zero(p.anchor.size());
  for (int it = 0; it < 4000; ++it) {
    const Vector grad = p.g + lam * x + (x - p.anchor) / p.eta;
    x = p.domain.project(x - step * grad);
  }
  return x;
}

// damped Newton restricted to the affine hull of the simplex (the optimum
// of the KL prox is always interior)
Vector brute_simplex(const ProxProblem &p) {
  const Eigen::Index d = p.anchor.size();
  Vector x = Vector::Constant(d, 1.0 / static_cast<double>(d));
  for (int it = 0; it < 80; ++it) {
    const Vector grad =
        p.g + ((x.array() / p.anchor.array()).log() / p.eta).matrix();
    const Vector hinv = p.eta * x;  // inverse of the diagonal Hessian
    const double nu = grad.dot(hinv) / hinv.sum();
    Vector dir = -hinv.cwiseProduct(grad - Vector::Constant(d, nu));
    double t = 1.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (dir[i] < 0.0) t = std::min(t, -0.99 * x[i] / dir[i]);
    }
    const double before = prox_objective(p, x);
    Vector cand = x + t * dir;
    while (t > 1e-16 && prox_objective(p, cand) > before) {
      t *= 0.5;
      cand = x + t * dir;
    }
    x = cand;
    if (dir.norm() * t < 1e-15) break;
  }
  return x;
}

// backtracking gradient descent for the p-norm mirror prox (unconstrained)
Vector brute_p_uniform(const ProxProblem &p) {
  Vector x = p.anchor;
  const Vector gpsi_a = grad_psi(p.mirror, p.anchor);
  double obj = prox_objective(p, x);
  for (int it = 0; it < 5000; ++it) {
    const Vector grad = p.g + (grad_psi(p.mirror, x) - gpsi_a) / p.eta;
    if (grad.norm() < 1e-13) break;
    double s = 1.0;
    Vector cand = x - s * grad;
    double cobj = prox_objective(p, cand);
    while (s > 1e-18 && cobj > obj - 1e-4 * s * grad.squaredNorm()) {
      s *= 0.5;
      cand = x - s * grad;
      cobj = prox_objective(p, cand);
    }
    if (cobj >= obj) break;
    x = cand;
    obj = cobj;
  }
  return x;
}

struct ProxCase {
  MirrorKind mirror;
  DomainKind domain;
  RegKind h;
};

const ProxCase kProxCases[] = {
    {MirrorKind::Euclidean, DomainKind::AllSpace, RegKind::Zero},
    {MirrorKind::Euclidean, DomainKind::Box, RegKind::Zero},
    {MirrorKind::Euclidean, DomainKind::L2Ball, RegKind::Zero},
    {MirrorKind::Euclidean, DomainKind::AllSpace, RegKind::Quadratic},
    {MirrorKind::Euclidean, DomainKind::Box, RegKind::Quadratic},
    {MirrorKind::Euclidean, DomainKind::L2Ball, RegKind::Quadratic},
    {MirrorKind::Euclidean, DomainKind::AllSpace, RegKind::L1},
    {MirrorKind::Euclidean, DomainKind::Box, RegKind::L1},
    {MirrorKind::EntropicSimplex, DomainKind::Simplex, RegKind::Zero},
    {MirrorKind::PUniform, DomainKind::AllSpace, RegKind::Zero},
};

CriterionResult criterion_prox_oracle(std::uint64_t base_seed) {
  CriterionResult c{1, "prox_oracle_equivalence", true, ""};
  double worst = 0.0;
  std::uint64_t stream = 8000;
  for (const auto &pc : kProxCases) {
    RngStream rng(base_seed, stream++);
    for (int inst = 0; inst < 100; ++inst) {
      const int d = 1 + static_cast<int>(rng.next_u64() % 4);
      ProxProblem p;
      switch (pc.mirror) {
        case MirrorKind::Euclidean:
          p.mirror = MirrorMap::euclidean(d);
          break;
        case MirrorKind::EntropicSimplex:
          p.mirror = MirrorMap::entropic_simplex(d);
          break;
        case MirrorKind::PUniform:
          p.mirror = MirrorMap::p_uniform(d, 1.2 + 0.6 * rng.uniform());
          break;
      }
      switch (pc.domain) {
        case DomainKind::AllSpace:
          p.domain = Domain::all_space();
          break;
        case DomainKind::Box:
          p.domain = Domain::box(-1.0, 1.0);
          break;
        case DomainKind::L2Ball:
          p.domain = Domain::l2_ball(1.0);
          break;
        case DomainKind::Simplex:
          p.domain = Domain::simplex();
          break;
      }
      switch (pc.h) {
        case RegKind::Zero:
          p.h = CompositeRegularizer::zero();
          break;
        case RegKind::L1:
          p.h = CompositeRegularizer::l1(0.1 + 1.9 * rng.uniform());
          break;
        case RegKind::Quadratic:
          p.h = CompositeRegularizer::quadratic(0.1 + 1.9 * rng.uniform());
          break;
      }
      p.eta = 0.05 + 0.95 * rng.uniform();
      p.g = Vector(d);
      for (int i = 0; i < d; ++i) p.g[i] = rng.uniform(-2.0, 2.0);
      Vector anchor(d);
      if (pc.domain == DomainKind::Simplex) {
        for (int i = 0; i < d; ++i) anchor[i] = rng.exponential();
        anchor /= anchor.sum();
        anchor = 0.95 * anchor + Vector::Constant(d, 0.05 / d);
      } else if (pc.domain == DomainKind::L2Ball) {
        for (int i = 0; i < d; ++i) anchor[i] = rng.normal();
        anchor *= 0.9 * std::pow(rng.uniform_pos(), 1.0 / d) /
                  std::max(anchor.norm(), 1e-12);
      } else if (pc.domain == DomainKind::Box) {
        for (int i = 0; i < d; ++i) anchor[i] = rng.uniform(-1.0, 1.0);
      } else {
        for (int i = 0; i < d; ++i) anchor[i] = rng.uniform(-2.0, 2.0);
      }
      p.anchor = anchor;

      const Vector xs = solve_prox(p);
      Vector xb;
      if (pc.mirror == MirrorKind::EntropicSimplex) {
        xb = brute_simplex(p);
      } else if (pc.mirror == MirrorKind::PUniform) {
        xb = brute_p_uniform(p);
      } else if (pc.domain == DomainKind::L2Ball) {
        xb = brute_ball(p);
      } else {
        xb = brute_separable(p);
      }
      const double err =
          std::abs(prox_objective(p, xs) - prox_objective(p, xb));
      worst = std::max(worst, err);
    }
  }
  c.pass = worst <= 1e-6;
  c.detail = fmt("max_objective_error=%.3g over 1000 instances", worst);
  return c;
}

// ---------------------------------------------------------------------------
// Experiment matrix

std::vector<int> geometric_grid(int lo_pow, int hi_pow) {
  std::vector<int> g;
  for (int k = lo_pow; k <= hi_pow; ++k) g.push_back(1 << k);
  return g;
}

std::vector<ExperimentConfig> build_matrix(std::uint64_t base_seed, int jobs) {
  std::vector<ExperimentConfig> m;
  auto add = [&](ExperimentConfig c) {
    c.base_seed = base_seed;
    c.jobs = jobs;
    c.experiment_index = static_cast<int>(m.size()) + 1;
    m.push_back(std::move(c));
  };

  // expectation-bound dominance cells (criterion 2)
  {
    ExperimentConfig c;
    c.id = "c2_lipschitz";
    c.problem_id = "abs_box_d10";
    c.noise = "gaussian";
    c.sigma = 1.0;
    c.schedule = "convex_fixed";
    c.T_grid = {64, 256};
    c.replications = 500;
    add(c);
  }
  {
    ExperimentConfig c;
    c.id = "c2_smooth";
    c.problem_id = "huber_smooth_d10";
    c.noise = "gaussian";
    c.sigma = 1.0;
    c.schedule = "convex_anytime";
    c.T_grid = {64, 256};
    c.replications = 500;
    add(c);
  }
  {
    ExperimentConfig c;
    c.id = "c2_lm";
    c.problem_id = "abs_box_lm_d10";
    c.noise = "gaussian";
    c.sigma = 1.0;
    c.schedule = "convex_fixed";
    c.T_grid = {64, 256};
    c.replications = 500;
    add(c);
  }
  {
    ExperimentConfig c;
    c.id = "c2_strc_f";
    c.problem_id = "sc_lipschitz_d10";
    c.noise = "gaussian";
    c.sigma = 1.0;
    c.schedule = "strc_f_anytime_1";
    c.T_grid = {64, 256};
    c.replications = 500;
    add(c);
  }
  {
    ExperimentConfig c;
    c.id = "c2_strc_h";
    c.problem_id = "huber_muh_d10";
    c.noise = "gaussian";
    c.sigma = 1.0;
    c.schedule = "strc_h_anytime";
    c.T_grid = {64, 256};
    c.replications = 500;
    add(c);
  }
  {
    ExperimentConfig c;
    c.id = "c2_composite";
    c.problem_id = "quad_l1_d1";
    c.noise = "gaussian";
    c.sigma = 1.0;
    c.schedule = "constant";
    c.eta = 0.25;
    c.T_grid = {64, 256};
    c.replications = 500;
    add(c);
  }
  {
    ExperimentConfig c;
    c.id = "c3_hp";
    c.problem_id = "abs_box_d10";
    c.noise = "sphere_bounded";
    c.sigma = 1.0;
    c.schedule = "convex_fixed";
    c.T_grid = {256};
    c.replications = 5000;
    c.delta_grid = {0.1, 0.01};
    add(c);
  }
  {
    ExperimentConfig c;
    c.id = "c4_convex_anytime";
    c.problem_id = "abs_ladder_d25";
    c.noise = "gaussian";
    c.sigma = 1.0;
    c.schedule = "convex_anytime";
    c.T_grid = geometric_grid(6, 14);
    c.replications = 200;
    c.estimator = "median_of_means";
    add(c);
  }
  {
    ExperimentConfig c;
    c.id = "c5_zamani";
    c.problem_id = "abs_ladder_d25";
    c.noise = "gaussian";
    c.sigma = 1.0;
    c.schedule = "zamani";
    c.T_grid = geometric_grid(6, 14);
    c.replications = 400;
    c.estimator = "median_of_means";
    add(c);
  }
  {
    ExperimentConfig c;
    c.id = "c6_smooth_noiseless";
    c.problem_id = "quad_ladder_d30";
    c.noise = "none";
    c.schedule = "constant";
    c.eta = 0.5;  // 1/(2L)
    c.T_grid = geometric_grid(6, 14);
    c.replications = 1;
    add(c);
  }
  {
    ExperimentConfig c;
    c.id = "c7_strc_anytime";
    c.problem_id = "sc_lipschitz_d10";
    c.noise = "gaussian";
    c.sigma = 1.0;
    c.schedule = "strc_f_anytime_1";
    c.T_grid = geometric_grid(6, 14);
    c.replications = 200;
    c.estimator = "median_of_means";
    add(c);
  }
  {
    ExperimentConfig c;
    c.id = "c8_strc_piecewise";
    c.problem_id = "quad_sc_d10";
    c.noise = "none";
    c.schedule = "strc_f_known_piecewise";
    // geometric decay ~ exp(-T/3) for kappa_f = 1 hits the double floor
    // near T = 90, so the grid stays below that
    c.T_grid = {12, 18, 24, 30, 36, 42, 48};
    c.replications = 1;
    add(c);
  }
  {
    ExperimentConfig c;
    c.id = "c9_heavy_zamani";
    c.problem_id = "abs_ladder_d25";
    c.noise = "symmetric_pareto";
    c.sigma = 1.0;
    c.noise_p = 1.5;
    c.schedule = "heavy_zamani";
    c.T_grid = geometric_grid(6, 12);
    c.replications = 400;
    c.estimator = "median_of_means";
    add(c);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Criterion helpers

using ResultMap = std::map<std::string, const ExperimentResult *>;

CriterionResult dominance_criterion(int index, const std::string &name,
                                    const ResultMap &rm,
                                    const std::vector<std::string> &ids) {
  CriterionResult c{index, name, true, ""};
  int checks = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (const auto &id : ids) {
    for (const auto &l : expected_dominance_report(*rm.at(id))) {
      ++checks;
      worst_margin = std::min(worst_margin, l.bound - l.stat);
      c.pass = c.pass && l.pass;
    }
  }
  c.detail = fmt("%d cells, min(bound - (mean-2se))=%.3g", checks, worst_margin);
  return c;
}

CriterionResult slope_criterion(int index, const std::string &name,
                                const ExperimentResult &r, double lo,
                                double hi) {
  CriterionResult c{index, name, false, ""};
  const auto pts = fit_points(r, std::max(std::abs(r.problem->F_star), 1.0));
  try {
    const RateFit f = fit_rate(pts);
    c.pass = f.slope >= lo && f.slope <= hi;
    c.detail = fmt("slope=%.4f (band [%.2f, %.2f]), r2=%.4f", f.slope, lo, hi,
                   f.r_squared);
  } catch (const std::exception &e) {
    c.detail = std::string("fit failed: ") + e.what();
  }
  return c;
}

CriterionResult criterion_linear_decay(const ExperimentResult &r) {
  CriterionResult c{8, "strc_piecewise_linear_decay", false, ""};
  // linear fit of log gap against T itself (geometric decay)
  std::vector<double> xs, ys;
  const double floor = 1e3 * std::numeric_limits<double>::epsilon() *
                       std::max(std::abs(r.problem->F_star), 1.0);
  for (const auto &a : r.agg) {
    if (a.ok_count > 0 && a.estimate > floor) {
      xs.push_back(static_cast<double>(a.T));
      ys.push_back(std::log(a.estimate));
    }
  }
  if (xs.size() < 4) {
    c.detail = "fewer than 4 points above the numerical floor";
    return c;
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double ymean = sy / n;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double pred = intercept + slope * xs[i];
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - ymean) * (ys[i] - ymean);
  }
  const double r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  c.pass = slope < 0.0 && r2 >= 0.99;
  c.detail = fmt("log-gap slope=%.4f per step, r2=%.5f (need < 0 and >= 0.99)",
                 slope, r2);
  return c;
}

CriterionResult criterion_noise(std::uint64_t base_seed) {
  CriterionResult c{10, "noise_certification", true, ""};
  const long n = 1000000;
  std::vector<NoiseModel> models = {
      NoiseModel::gaussian(10, 1.0),
      NoiseModel::sphere_bounded(10, 1.0),
      NoiseModel::scaled_gaussian_mgf(10, 1.0),
      NoiseModel::symmetric_pareto(10, 1.0, 1.5),
      NoiseModel::symmetric_weibull(10, 1.0, 1.0),
  };
  std::string status;
  std::uint64_t stream = 9000;
  for (const auto &m : models) {
    RngStream rng(base_seed, stream++);
    bool ok = false;
    try {
      ok = validate_noise(m, n, rng).pass;
    } catch (const std::exception &) {
      ok = false;
    }
    c.pass = c.pass && ok;
    status += m.name() + (ok ? ":PASS " : ":FAIL ");
  }
  c.detail = status;
  return c;
}

CriterionResult criterion_sequences() {
  CriterionResult c{11, "sequence_identities", true, ""};
  const int T = 1000;
  struct Case {
    Schedule s;
  };
  std::vector<Schedule> cases;
  auto mk = [&](ScheduleRule rule, double L, double mu_f, double mu_h,
                double kf, double kh, double eta, double eta_star, double p) {
    Schedule s;
    s.rule = rule;
    s.L = L;
    s.mu_f = mu_f;
    s.mu_h = mu_h;
    s.kappa_f = kf;
    s.kappa_h = kh;
    s.eta_base = eta;
    s.eta_star = eta_star;
    s.p = p;
    s.T = T;
    cases.push_back(s);
  };
  const double inf = std::numeric_limits<double>::infinity();
  mk(ScheduleRule::ConvexAnytime, 1, 0, 0, 0, 0, 1, inf, 1.5);
  mk(ScheduleRule::ConvexFixed, 1, 0, 0, 0, 0, 1, inf, 1.5);
  mk(ScheduleRule::Zamani, 0, 0, 0, 0, 0, 1, inf, 1.5);
  mk(ScheduleRule::StrcFAnytime1, 1, 1, 0, 1, 0, 1, inf, 1.5);
  mk(ScheduleRule::StrcFAnytime2, 1, 1, 0, 1, 0, 1, inf, 1.5);
  mk(ScheduleRule::StrcFKnownPiecewise, 1, 1, 0, 1, 0, 1.5, inf, 1.5);
  mk(ScheduleRule::StrcHAnytime, 1, 0, 1, 0, 1, 1, inf, 1.5);
  mk(ScheduleRule::StrcHKnownPiecewise, 1, 0, 1, 0, 1, 1.5, inf, 1.5);
  mk(ScheduleRule::HeavyAnytime, 0, 0, 0, 0, 0, 1, 1, 1.5);
  mk(ScheduleRule::HeavyFixed, 0, 0, 0, 0, 0, 1, 1, 1.5);
  mk(ScheduleRule::HeavyZamani, 0, 0, 0, 0, 0, 1, inf, 1.5);
  mk(ScheduleRule::SubweibullAnytime, 1, 0, 0, 0, 0, 1, inf, 1.0);
  mk(ScheduleRule::SubweibullFixed, 1, 0, 0, 0, 0, 1, inf, 1.0);
  mk(ScheduleRule::SubweibullZamani, 0, 0, 0, 0, 0, 1, inf, 1.0);
  mk(ScheduleRule::Constant, 1, 0, 0, 0, 0, 0.1, inf, 1.5);

  double worst_tel = 0.0, worst_v = 0.0, worst_w = 0.0;
  for (const auto &s : cases) {
    const AnalysisSequences a = analysis_sequences(s, s.mu_f, s.mu_h, T);
    for (int t = 2; t <= T; ++t) {
      const double lhs = a.log_gamma[t] + std::log(1.0 / a.eta[t] - s.mu_f);
      const double rhs =
          a.log_gamma[t - 1] + std::log(1.0 / a.eta[t - 1] + s.mu_h);
      worst_tel = std::max(worst_tel, std::abs(lhs - rhs));
    }
    for (int t = 1; t <= T; ++t) {
      worst_v = std::max(worst_v, a.v[t - 1] - a.v[t]);
    }
    worst_v = std::max(worst_v, std::abs(a.v[T] - 1.0));
    for (int t = 1; t <= T; ++t) {
      double sum = a.v[0] / a.v[t];
      double mn = sum;
      for (int u = 1; u <= t; ++u) {
        const double w = (a.v[u] - a.v[u - 1]) / a.v[t];
        sum += w;
        mn = std::min(mn, w);
      }
      worst_w = std::max(worst_w, std::abs(sum - 1.0));
      worst_w = std::max(worst_w, -mn);
    }
  }
  c.pass = worst_tel <= 1e-10 && worst_v <= 1e-12 && worst_w <= 1e-12;
  c.detail = fmt("telescoping=%.3g, v_defect=%.3g, z_weight_defect=%.3g",
                 worst_tel, worst_v, worst_w);
  return c;
}

std::string render_csv(const std::vector<ExperimentResult> &results) {
  std::ostringstream ss;
  write_results_csv(ss, results);
  return ss.str();
}

}  // namespace

AcceptanceOutcome run_acceptance(std::uint64_t base_seed, int jobs,
                                 const std::string &out_dir) {
  std::filesystem::create_directories(out_dir);

  const auto matrix = build_matrix(base_seed, jobs);
  std::vector<ExperimentResult> results;
  for (const auto &cfg : matrix) results.push_back(run_experiment(cfg));
  ResultMap rm;
  for (const auto &r : results) rm[r.config.id] = &r;

  AcceptanceOutcome out;
  out.criteria.push_back(criterion_prox_oracle(base_seed));
  out.criteria.push_back(dominance_criterion(
      2, "expected_bound_dominance", rm,
      {"c2_lipschitz", "c2_smooth", "c2_lm", "c2_strc_f", "c2_strc_h",
       "c2_composite"}));
  {
    CriterionResult c{3, "hp_bound_quantile_dominance", true, ""};
    double worst = std::numeric_limits<double>::infinity();
    for (const auto &l : hp_dominance_report(*rm.at("c3_hp"), {0.1, 0.01})) {
      c.pass = c.pass && l.pass;
      worst = std::min(worst, l.bound - l.stat);
    }
    c.detail = fmt("min(bound - quantile)=%.3g", worst);
    out.criteria.push_back(c);
  }
  out.criteria.push_back(slope_criterion(4, "convex_anytime_rate",
                                         *rm.at("c4_convex_anytime"), -0.62,
                                         -0.38));
  {
    CriterionResult c =
        slope_criterion(5, "zamani_rate", *rm.at("c5_zamani"), -0.60, -0.40);
    try {
      const RateFit f = fit_rate(fit_points(*rm.at("c5_zamani"), 1.0));
      const bool flat = std::abs(f.curvature) <= 0.02;
      c.pass = c.pass && flat;
      c.detail += fmt(", curvature=%.4f (|.| <= 0.02)", f.curvature);
    } catch (const std::exception &) {
      c.pass = false;
    }
    out.criteria.push_back(c);
  }
  out.criteria.push_back(slope_criterion(6, "smooth_noiseless_rate",
                                         *rm.at("c6_smooth_noiseless"), -1.15,
                                         -0.85));
  out.criteria.push_back(slope_criterion(7, "strc_anytime_rate",
                                         *rm.at("c7_strc_anytime"), -1.15,
                                         -0.75));
  out.criteria.push_back(criterion_linear_decay(*rm.at("c8_strc_piecewise")));
  out.criteria.push_back(slope_criterion(9, "heavy_zamani_rate",
                                         *rm.at("c9_heavy_zamani"), -0.45,
                                         -0.21));
  out.criteria.push_back(criterion_noise(base_seed));
  out.criteria.push_back(criterion_sequences());

  const std::string csv = render_csv(results);
  {
    // full second pass with the same seed: every byte must match
    std::vector<ExperimentResult> rerun;
    for (const auto &cfg : matrix) rerun.push_back(run_experiment(cfg));
    CriterionResult c{12, "deterministic_replay", csv == render_csv(rerun),
                      ""};
    c.detail = c.pass ? "results.csv byte-identical across two passes"
                      : "results.csv differs between passes";
    out.criteria.push_back(c);
  }

  out.all_pass = true;
  for (const auto &c : out.criteria) out.all_pass = out.all_pass && c.pass;

  // ---- outputs
  {
    std::ofstream f(out_dir + "/results.csv", std::ios::binary);
    f << csv;
  }
  {
    std::ofstream f(out_dir + "/acceptance.txt");
    for (const auto &c : out.criteria) {
      f << (c.pass ? "PASS" : "FAIL") << ' ' << fmt("%02d", c.index) << ' '
        << c.name << " -- " << c.detail << '\n';
    }
    f << (out.all_pass ? "ALL PASS" : "FAILURES PRESENT") << '\n';
  }
  {
    json j;
    j["base_seed"] = base_seed;
    j["all_pass"] = out.all_pass;
    json jc = json::array();
    for (const auto &c : out.criteria) {
      jc.push_back({{"index", c.index},
                    {"name", c.name},
                    {"pass", c.pass},
                    {"detail", c.detail}});
    }
    j["criteria"] = jc;
    json je = json::array();
    for (const auto &r : results) {
      json agg = json::array();
      for (const auto &a : r.agg) {
        json q = json::object();
        for (const auto &[d, qv] : a.quantiles) {
          q[fmt("%g", d)] = qv;
        }
        agg.push_back({{"T", a.T},
                       {"ok", a.ok_count},
                       {"mean", a.mean},
                       {"se", a.se},
                       {"median", a.med},
                       {"median_of_means", a.mom},
                       {"trimmed_mean", a.trimmed},
                       {"estimate", a.estimate},
                       {"quantiles", q}});
      }
      je.push_back({{"experiment", r.config.id},
                    {"problem", r.config.problem_id},
                    {"schedule", r.config.schedule},
                    {"noise", r.config.noise},
                    {"sigma", r.config.sigma},
                    {"replications", r.config.replications},
                    {"D", r.D},
                    {"aggregates", agg}});
    }
    j["experiments"] = je;
    std::ofstream f(out_dir + "/summary.json");
    f << j.dump(2) << '\n';
  }
  return out;
}

}  // namespace csmd
