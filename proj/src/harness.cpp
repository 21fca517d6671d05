#include "csmd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "csmd/errors.hpp"

namespace csmd {

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_eta(const std::string &v) {
  return v == "auto" ? 0.0 : std::stod(v);
}

}  // namespace

ExperimentConfig parse_config(std::istream &in) {
  ExperimentConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    try {
      if (key == "experiment") c.id = val;
      else if (key == "problem") c.problem_id = val;
      else if (key == "noise") c.noise = val;
      else if (key == "sigma") c.sigma = std::stod(val);
      else if (key == "noise_p") c.noise_p = std::stod(val);
      else if (key == "schedule") c.schedule = val;
      else if (key == "eta") c.eta = parse_eta(val);
      else if (key == "eta_star") c.eta_star = parse_eta(val);
      else if (key == "tuning_delta") c.tuning_delta = std::stod(val);
      else if (key == "eta_multiplier") c.eta_multiplier = std::stod(val);
      else if (key == "T_grid") {
        c.T_grid.clear();
        for (const auto &t : split_list(val)) c.T_grid.push_back(std::stoi(t));
      } else if (key == "replications") c.replications = std::stoi(val);
      else if (key == "delta_grid") {
        c.delta_grid.clear();
        for (const auto &d : split_list(val)) c.delta_grid.push_back(std::stod(d));
      } else if (key == "estimator") c.estimator = val;
      else if (key == "mom_blocks") c.mom_blocks = std::stoi(val);
      else if (key == "trim") c.trim = std::stod(val);
      else if (key == "checkpoint_policy") c.checkpoint_policy = val;
      else if (key == "base_seed") c.base_seed = std::stoull(val);
      else if (key == "jobs") c.jobs = std::stoi(val);
      else if (key == "experiment_index") c.experiment_index = std::stoi(val);
      else throw ConfigError("unknown key: " + key);
    } catch (const std::invalid_argument &) {
      throw ConfigError("line " + std::to_string(lineno) + ": bad value for " + key);
    }
  }
  if (c.problem_id.empty()) throw ConfigError("missing key: problem");
  if (c.T_grid.empty()) throw ConfigError("missing key: T_grid");
  for (size_t i = 1; i < c.T_grid.size(); ++i) {
    if (c.T_grid[i] <= c.T_grid[i - 1]) {
      throw ConfigError("T_grid must be strictly increasing");
    }
  }
  if (c.replications < 1) throw ConfigError("replications must be >= 1");
  return c;
}

ExperimentConfig parse_config_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  return parse_config(in);
}

Vector default_start(const ProblemInstance &p) {
  if (p.domain.kind == DomainKind::Simplex) {
    return Vector::Constant(p.dim(), 1.0 / p.dim());
  }
  return p.domain.project(p.x_star + Vector::Ones(p.dim()));
}

namespace {

bool rule_has_tuning(ScheduleRule r) {
  switch (r) {
    case ScheduleRule::ConvexAnytime:
    case ScheduleRule::ConvexFixed:
    case ScheduleRule::Zamani:
    case ScheduleRule::HeavyAnytime:
    case ScheduleRule::HeavyFixed:
    case ScheduleRule::HeavyZamani:
    case ScheduleRule::SubweibullAnytime:
    case ScheduleRule::SubweibullFixed:
    case ScheduleRule::SubweibullZamani:
      return true;
    default:
      return false;
  }
}

Schedule resolved_schedule(const ExperimentConfig &c, const ProblemInstance &p,
                           double D, int T) {
  Schedule s;
  s.rule = rule_by_name(c.schedule);
  s.L = p.L;
  s.mu_f = p.mu_f;
  s.mu_h = p.mu_h;
  s.kappa_f = p.kappa_f();
  s.kappa_h = p.kappa_h();
  s.p = c.noise_p;
  s.T = T;
  if (c.eta > 0.0) {
    s.eta_base = c.eta;
  } else if (rule_has_tuning(s.rule)) {
    const auto rec = recommended_eta(s.rule, D, p.L, p.M, c.sigma, T,
                                     c.tuning_delta, c.noise_p);
    s.eta_base = rec.eta * c.eta_multiplier;
    s.eta_star = rec.eta_star == std::numeric_limits<double>::infinity()
                     ? rec.eta_star
                     : rec.eta_star * c.eta_multiplier;
  } else if (s.rule == ScheduleRule::Constant) {
    throw ConfigError("the constant rule needs an explicit eta");
  } else if (s.rule == ScheduleRule::StrcFKnownPiecewise ||
             s.rule == ScheduleRule::StrcHKnownPiecewise) {
    s.eta_base = 1.5;
  }
  if (c.eta_star > 0.0) s.eta_star = c.eta_star;
  return s;
}

std::vector<int> checkpoints_for(const std::string &policy, int T) {
  std::vector<int> cps;
  if (policy == "log2") {
    for (int t = 1; t < T; t *= 2) cps.push_back(t);
  } else if (policy != "none") {
    throw ConfigError("unknown checkpoint_policy: " + policy);
  }
  return cps;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig &c) {
  ExperimentResult res;
  res.config = c;
  res.problem = &problem_by_id(c.problem_id);
  const ProblemInstance &p = *res.problem;
  if (c.sigma > 0.0) {
    res.noise = NoiseModel::by_name(c.noise, p.dim(), c.sigma, c.noise_p);
  } else {
    res.noise = NoiseModel::gaussian(p.dim(), 0.0);
  }
  res.x1 = default_start(p);
  res.D = bregman(p.mirror, p.x_star, res.x1);
  res.schedule = resolved_schedule(c, p, res.D, c.T_grid.back());

  struct Task {
    int T;
    int rep;
    std::uint64_t stream_id;
  };
  std::vector<Task> tasks;
  std::uint64_t global_rep = 0;
  for (int T : c.T_grid) {
    for (int r = 0; r < c.replications; ++r) {
      tasks.push_back({T, r,
                       static_cast<std::uint64_t>(c.experiment_index) * 1000000ULL +
                           global_rep});
      ++global_rep;
    }
  }

  res.runs.resize(tasks.size());
  std::atomic<size_t> next{0};
  auto work = [&]() {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= tasks.size()) break;
      const Task &t = tasks[i];
      RunResult out;
      out.T = t.T;
      out.rep = t.rep;
      out.stream_id = t.stream_id;
      try {
        RunConfig rc;
        rc.noise = res.noise;
        rc.schedule = resolved_schedule(c, p, res.D, t.T);
        rc.x1 = res.x1;
        rc.T = t.T;
        rc.checkpoints = checkpoints_for(c.checkpoint_policy, t.T);
        rc.base_seed = c.base_seed;
        rc.stream_id = t.stream_id;
        const RunRecord rr = run_csmd(p, rc);
        out.gap = rr.final_gap;
        out.checkpoints = rr.checkpoints;
        out.ok = true;
      } catch (const std::exception &e) {
        out.ok = false;
        out.error = e.what();
      }
      res.runs[i] = std::move(out);
    }
  };
  const int jobs = std::max(1, c.jobs);
  if (jobs == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(work);
    for (auto &th : pool) th.join();
  }

  // runs are already in (T, replication) order by construction
  for (int T : c.T_grid) {
    std::vector<double> gaps;
    for (const auto &r : res.runs) {
      if (r.T == T && r.ok) gaps.push_back(r.gap);
    }
    TAggregate a;
    a.T = T;
    a.ok_count = static_cast<int>(gaps.size());
    if (!gaps.empty()) {
      const MeanSE ms = mean_se(gaps);
      a.mean = ms.mean;
      a.se = ms.se;
      a.med = median(gaps);
      a.mom = median_of_means(
          gaps, std::min(c.mom_blocks, static_cast<int>(gaps.size())));
      a.trimmed = trimmed_mean(gaps, c.trim);
      for (double d : c.delta_grid) {
        a.quantiles.emplace_back(d, quantile(gaps, 1.0 - d));
      }
      if (c.estimator == "mean") a.estimate = a.mean;
      else if (c.estimator == "median_of_means") a.estimate = a.mom;
      else if (c.estimator == "trimmed_mean") a.estimate = a.trimmed;
      else throw ConfigError("unknown estimator: " + c.estimator);
    }
    res.agg.push_back(a);
  }
  return res;
}

void write_results_csv(std::ostream &out,
                       const std::vector<ExperimentResult> &results) {
  auto fmt = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  out << "experiment,T,replication,stream_id,kind,t,gap\n";
  for (const auto &res : results) {
    for (const auto &r : res.runs) {
      if (!r.ok) {
        out << res.config.id << ',' << r.T << ',' << r.rep << ','
            << r.stream_id << ",error,0,nan\n";
        continue;
      }
      for (const auto &cp : r.checkpoints) {
        out << res.config.id << ',' << r.T << ',' << r.rep << ','
            << r.stream_id << ",checkpoint," << cp.t << ',' << fmt(cp.gap)
            << '\n';
      }
      out << res.config.id << ',' << r.T << ',' << r.rep << ',' << r.stream_id
          << ",final," << r.T << ',' << fmt(r.gap) << '\n';
    }
  }
}

std::vector<std::pair<double, double>> fit_points(const ExperimentResult &r,
                                                  double floor_scale) {
  const double floor =
      1e3 * std::numeric_limits<double>::epsilon() * std::max(floor_scale, 1.0);
  std::vector<std::pair<double, double>> pts;
  for (const auto &a : r.agg) {
    if (a.ok_count > 0 && a.estimate > floor) {
      pts.emplace_back(static_cast<double>(a.T), a.estimate);
    }
  }
  return pts;
}

QuantileScalingReport quantile_scaling(const std::vector<double> &gaps,
                                       const std::vector<double> &deltas,
                                       bool strongly_convex) {
  if (deltas.empty()) throw DomainError("quantile_scaling needs a delta grid");
  const double dmin = *std::min_element(deltas.begin(), deltas.end());
  if (static_cast<double>(gaps.size()) < 10.0 / dmin) {
    throw InsufficientReplications("need at least 10/min(delta) samples");
  }
  QuantileScalingReport rep;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double d : deltas) {
    const double qv = quantile(gaps, 1.0 - d);
    rep.q.emplace_back(d, qv);
    const double g = strongly_convex ? std::log(1.0 / d)
                                     : std::sqrt(std::log(1.0 / d));
    sx += g;
    sy += qv;
    sxx += g * g;
    sxy += g * qv;
  }
  const double n = static_cast<double>(deltas.size());
  const double denom = n * sxx - sx * sx;
  if (denom > 0.0) {
    rep.fit_slope = (n * sxy - sx * sy) / denom;
    rep.fit_intercept = (sy - rep.fit_slope * sx) / n;
  }
  double q01 = 0.0, q001 = 0.0;
  for (const auto &[d, qv] : rep.q) {
    if (std::abs(d - 0.1) < 1e-12) q01 = qv;
    if (std::abs(d - 0.01) < 1e-12) q001 = qv;
  }
  rep.ratio_q001_q01 = q01 > 0.0 ? q001 / q01 : 1.0;
  return rep;
}

namespace {

void require_second_moment(const ExperimentResult &r) {
  if (r.config.sigma == 0.0) return;
  if (r.noise.assumption != NoiseAssumption::A5A &&
      r.noise.assumption != NoiseAssumption::A5B) {
    throw AssumptionMismatch(
        "in-expectation dominance needs a bounded second moment (5A/5B), got " +
        r.noise.assumption_name());
  }
}

}  // namespace

std::vector<DominanceLine> expected_dominance_report(const ExperimentResult &r) {
  require_second_moment(r);
  const ProblemInstance &p = *r.problem;
  std::vector<DominanceLine> lines;
  for (const auto &a : r.agg) {
    const Schedule s = resolved_schedule(r.config, p, r.D, a.T);
    const AnalysisSequences seq = analysis_sequences(s, p.mu_f, p.mu_h, a.T);
    DominanceLine l;
    l.label = r.config.id + " T=" + std::to_string(a.T);
    l.stat = a.mean - 2.0 * a.se;
    l.bound = expected_bound(seq, r.D, p.M, r.config.sigma, p.mu_f);
    l.pass = a.ok_count > 0 && l.stat <= l.bound;
    lines.push_back(l);
  }
  return lines;
}

std::vector<DominanceLine> hp_dominance_report(
    const ExperimentResult &r, const std::vector<double> &deltas) {
  if (r.config.sigma > 0.0 && r.noise.assumption != NoiseAssumption::A5B) {
    throw AssumptionMismatch(
        "high-probability dominance needs 5B-certified noise, got " +
        r.noise.assumption_name());
  }
  const ProblemInstance &p = *r.problem;
  std::vector<DominanceLine> lines;
  for (const auto &a : r.agg) {
    const Schedule s = resolved_schedule(r.config, p, r.D, a.T);
    const AnalysisSequences seq = analysis_sequences(s, p.mu_f, p.mu_h, a.T);
    std::vector<double> gaps;
    for (const auto &run : r.runs) {
      if (run.T == a.T && run.ok) gaps.push_back(run.gap);
    }
    for (double d : deltas) {
      DominanceLine l;
      l.label = r.config.id + " T=" + std::to_string(a.T) +
                " delta=" + std::to_string(d);
      l.stat = gaps.empty() ? 0.0 : quantile(gaps, 1.0 - d);
      l.bound = hp_bound(seq, r.D, p.M, r.config.sigma, p.mu_f, d);
      l.pass = !gaps.empty() && l.stat <= l.bound;
      lines.push_back(l);
    }
  }
  return lines;
}

}  // namespace csmd
