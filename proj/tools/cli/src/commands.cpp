#include "svmrates_cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>

#include "svmrates/approximation.hpp"
#include "svmrates/complexity.hpp"
#include "svmrates/format.hpp"
#include "svmrates/io.hpp"
#include "svmrates/noise.hpp"
#include "svmrates/rates.hpp"
#include "svmrates/svm.hpp"
#include "svmrates_cli/plot.hpp"
#include "svmrates_cli/suites.hpp"

namespace svmrates::cli {

namespace {

namespace fs = std::filesystem;
using Fields = std::vector<std::pair<std::string, std::string>>;

std::string fmt(double v) { return format_number(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

class Outputs {
 public:
  Outputs(const RunConfig& c, std::ostream& log, RunResult& result)
      : c_(c), log_(log), result_(result), hash_(c.hash()) {
    fs::create_directories(c.out);
  }

  std::string header() const {
    return std::string("svmrates version=") + SVMRATES_VERSION + " command=" + c_.command +
           " config_hash=" + hash_ + " seed=" + std::to_string(c_.seed);
  }
  std::string tag() const {
    return std::string("svmrates_version=") + SVMRATES_VERSION + " config_hash=" + hash_;
  }
  std::string path(const std::string& suffix) const {
    return (fs::path(c_.out) / (c_.command + "_" + hash_ + suffix)).string();
  }

  std::ofstream open(const std::string& suffix) {
    const std::string p = path(suffix);
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write '" + p + "'");
    result_.files.push_back(p);
    log_ << "writing " << p << '\n';
    return out;
  }

  // key=value summary: header, config echo, then the results.
  void summary(const Fields& fields) {
    auto out = open("_summary.txt");
    out << "# " << header() << '\n';
    for (const auto& line : c_.echo()) out << "config." << line << '\n';
    for (const auto& [k, v] : fields) out << k << '=' << v << '\n';
  }

  void plot(const std::string& table_suffix, const PlotSpec& spec,
            const std::string& plot_suffix = ".svg") {
    if (!c_.plot) return;
    const std::string p = path(plot_suffix);
    plot_table(path(table_suffix), p, spec);
    result_.files.push_back(p);
    log_ << "writing " << p << '\n';
  }

 private:
  const RunConfig& c_;
  std::ostream& log_;
  RunResult& result_;
  std::string hash_;
};

IntegrationOptions integration(const RunConfig& c) {
  IntegrationOptions o;
  o.abs_tol = c.abs_tol;
  return o;
}

SolverOptions solver(const RunConfig& c) {
  SolverOptions o;
  o.tol_opt = c.tol_opt;
  return o;
}

std::size_t jobs(const RunConfig& c) { return c.jobs; }

void run_gen(const RunConfig& c, Outputs& o) {
  const auto dist = c.distribution();
  const TrainingSet raw = sample(dist, c.n, c.seed);
  const TrainingSet set(raw.points(), raw.labels(), raw.seed(), o.tag() + " " + raw.provenance());
  auto out = o.open(".txt");
  io::write_training_set(out, set);
  out.close();
  const auto pos = std::count(set.labels().begin(), set.labels().end(), 1);
  o.summary({{"n", fmt(set.size())},
             {"d", fmt(set.dim())},
             {"positives", std::to_string(pos)},
             {"negatives", std::to_string(static_cast<long>(set.size()) - pos)}});
}

void run_train(const RunConfig& c, Outputs& o) {
  const auto dist = c.distribution();
  const TrainingSet set = sample(dist, c.n, c.seed);
  const SvmProblem problem{set, c.lambda, GaussianKernel(c.sigma), c.with_offset};
  const SvmSolution sol = train(problem, solver(c));
  {
    auto out = o.open("_solution.txt");
    io::write_solution(out, sol, o.tag() + " seed=" + std::to_string(c.seed));
  }
  {
    auto out = o.open(".csv");
    std::vector<std::string> cols;
    for (std::size_t k = 0; k < set.dim(); ++k) cols.push_back("x" + std::to_string(k));
    for (const char* name : {"label", "decision", "margin", "alpha"}) cols.push_back(name);
    io::CsvWriter w(out, o.header(), cols);
    for (std::size_t i = 0; i < set.size(); ++i) {
      std::vector<std::string> cells;
      for (double v : set.point(i)) cells.push_back(fmt(v));
      const double fx = sol.expansion(set.point(i));
      cells.push_back(std::to_string(set.label(i)));
      cells.push_back(fmt(fx));
      cells.push_back(fmt(set.label(i) * fx));
      cells.push_back(fmt(sol.alpha(static_cast<Eigen::Index>(i))));
      w.row(cells);
    }
  }
  const auto f = sol.expansion.as_function();
  const auto opts = integration(c);
  Fields fields{{"objective", fmt(sol.objective)},
                {"dual_objective", fmt(sol.dual_objective)},
                {"certificate", fmt(sol.certificate)},
                {"tolerance", fmt(c.tol_opt > 0 ? c.tol_opt : default_tolerance(set.size()))},
                {"iterations", fmt(sol.iterations)},
                {"rkhs_norm", fmt(sol.expansion.rkhs_norm())},
                {"offset", fmt(sol.expansion.offset())},
                {"norm_bound_slack", fmt(norm_bound_check(sol, c.lambda).slack)}};
  if (c.with_offset) fields.emplace_back("offset_bound_slack", fmt(offset_bound_check(sol).slack));
  fields.emplace_back("excess_risk", fmt(excess_risk(dist, f, opts).value));
  fields.emplace_back("excess_hinge_risk", fmt(excess_hinge_risk(dist, f, false, opts).direct.value));
  o.summary(fields);
}

void run_noise(const RunConfig& c, Outputs& o) {
  const auto dist = c.distribution();
  NoiseOptions opts;
  opts.tsybakov_grid = c.tsybakov_grid;
  opts.geometric_grid = c.geometric_grid;
  opts.integration = integration(c);
  const NoiseReport r = analyze_noise(dist, opts);
  {
    auto out = o.open(".csv");
    io::CsvWriter w(out, o.header(), {"functional", "t", "value"});
    for (std::size_t i = 0; i < r.tsybakov.t_grid.size(); ++i) {
      w.row({"margin_mass", fmt(r.tsybakov.t_grid[i]), fmt(r.tsybakov.masses[i])});
    }
    for (std::size_t i = 0; i < r.geometric.t_grid.size(); ++i) {
      w.row({"geometric_integral", fmt(r.geometric.t_grid[i]), fmt(r.geometric.integrals[i])});
    }
  }
  Fields fields = report_fields(r);
  if (const auto& k = dist.known_exponents()) {
    fields.emplace_back("known_q", fmt(k->q));
    fields.emplace_back("known_alpha", fmt(k->alpha));
  }
  {
    auto out = o.open("_summary.csv");
    std::vector<std::string> cols, cells;
    for (const auto& [key, value] : fields) cols.push_back(key), cells.push_back(value);
    io::CsvWriter w(out, o.header(), cols);
    w.row(cells);
  }
  o.summary(fields);
  o.plot(".csv", {"noise functionals, " + dist.description(), "t", "value", "functional"});
}

void run_approx(const RunConfig& c, Outputs& o) {
  const auto dist = c.distribution();
  ApproxOptions opts;
  opts.integration = integration(c);
  opts.solver = solver(c);
  opts.n_dense = c.n_dense;
  opts.seed = c.seed;
  const auto& known = dist.known_exponents();
  const double alpha = known ? known->alpha : kInfinity;
  Fields fields;
  const double fixed = c.fixed_sigma ? *c.fixed_sigma : c.sigma;
  if (c.lambda_grid.size() >= 4) {
    const DecayFit decay = decay_slope(dist, c.lambda_grid, alpha, dist.dim(), fixed, opts);
    fields.emplace_back("decay_slope", fmt(decay.fit.slope));
    fields.emplace_back("decay_r_squared", fmt(decay.fit.r_squared));
    fields.emplace_back("decay_target", fmt(std::isinf(alpha) ? 1.0 : alpha / (alpha + 1.0)));
    if (std::isinf(alpha)) fields.emplace_back("decay_fixed_sigma", fmt(fixed));
  }
  auto out = o.open(".csv");
  io::CsvWriter w(out, o.header(),
                  {"sigma", "lambda", "witness", "empirical", "empirical_error", "rhs", "ratio"});
  if (std::isinf(alpha)) {
    for (double s : c.sigma_grid) {
      for (double l : c.lambda_grid) {
        const auto v = approx_error_witness(dist, s, l, opts);
        std::string emp = "nan", err = "nan";
        if (c.approx_empirical) {
          const auto e = approx_error_empirical(dist, s, l, opts);
          emp = fmt(e.value), err = fmt(e.standard_error);
        }
        w.row({fmt(s), fmt(l), fmt(v.value), emp, err, "nan", "nan"});
      }
    }
  } else {
    const RatioScan scan = approx_ratio_scan(dist, c.sigma_grid, c.lambda_grid, 0.0,
                                             c.approx_empirical, jobs(c), opts);
    for (const auto& r : scan.rows) {
      w.row({fmt(r.sigma), fmt(r.lambda), fmt(r.witness), fmt(r.empirical),
             fmt(r.empirical_error), fmt(r.rhs), fmt(r.ratio)});
    }
    const RatioScan fine = approx_ratio_scan(dist, refine_geometric_grid(c.sigma_grid),
                                             refine_geometric_grid(c.lambda_grid), 0.0, false,
                                             jobs(c), opts);
    fields.emplace_back("max_ratio", fmt(scan.max_ratio));
    fields.emplace_back("argmax_sigma", fmt(scan.argmax_sigma));
    fields.emplace_back("argmax_lambda", fmt(scan.argmax_lambda));
    fields.emplace_back("refined_max_ratio", fmt(fine.max_ratio));
    fields.emplace_back("refined_relative_change",
                        fmt(std::abs(fine.max_ratio - scan.max_ratio) / scan.max_ratio));
  }
  out.close();
  o.summary(fields);
  o.plot(".csv", {"witness value, " + dist.description(), "lambda", "witness", "sigma"});
}

void run_cover(const RunConfig& c, Outputs& o) {
  const auto dist = c.distribution();
  const TrainingSet set = sample(dist, c.cover_n, c.seed);
  const ScalingReport r = cover_scaling_scan(set.points(), c.cover_sigma_grid, c.epsilon_grid,
                                             jobs(c));
  {
    auto out = o.open(".csv");
    io::CsvWriter w(out, o.header(), {"sigma", "epsilon", "inv_epsilon", "n", "log_cover_lower",
                                      "log_cover_upper"});
    for (const auto& row : r.rows) {
      w.row({fmt(row.sigma), fmt(row.epsilon), fmt(1.0 / row.epsilon), fmt(row.n),
             fmt(row.lower), fmt(row.upper)});
    }
  }
  Fields fields;
  double max_e = -HUGE_VAL, max_s = -HUGE_VAL;
  for (std::size_t i = 0; i < r.epsilon_slopes.size(); ++i) {
    fields.emplace_back("epsilon_slope_sigma" + fmt(r.sigma_grid[i]), fmt(r.epsilon_slopes[i]));
    max_e = std::max(max_e, r.epsilon_slopes[i]);
  }
  for (std::size_t j = 0; j < r.sigma_slopes.size(); ++j) {
    fields.emplace_back("sigma_slope_epsilon" + fmt(r.epsilon_grid[j]), fmt(r.sigma_slopes[j]));
    max_s = std::max(max_s, r.sigma_slopes[j]);
  }
  fields.emplace_back("max_epsilon_slope", fmt(max_e));
  fields.emplace_back("max_sigma_slope", fmt(max_s));
  fields.emplace_back("rank_correlation", fmt(r.rank_correlation));
  for (double s : c.cover_sigma_grid) {
    const Estimate rad = rademacher_average(set.points(), s, 20, derive_seed(c.seed, {71}));
    fields.emplace_back("rademacher_sigma" + fmt(s), fmt(rad.value));
  }
  o.summary(fields);
  o.plot(".csv", {"log covering number upper bound, n = " + fmt(c.cover_n), "inv_epsilon",
                  "log_cover_upper", "sigma"});
}

void write_rates(const RunConfig& c, Outputs& o, const ExperimentReport& report,
                 const RateSchedule& schedule, const std::string& infix, Fields& fields) {
  {
    auto out = o.open(infix + ".csv");
    io::CsvWriter w(out, o.header(),
                    {"n", "trial", "seed", "excess_risk", "excess_risk_error", "excess_hinge_risk",
                     "rkhs_norm", "norm_bound", "offset", "lambda", "sigma", "certificate",
                     "tolerance", "iterations", "diagnostic"});
    for (const auto& row : report.rows) {
      if (!row.ok()) {
        w.row({fmt(row.n), fmt(row.trial), std::to_string(row.seed), "nan", "nan", "nan", "nan",
               "nan", "nan", fmt(row.lambda), fmt(row.sigma), "nan", "nan", "0", row.diagnostic});
        continue;
      }
      w.row({fmt(row.n), fmt(row.trial), std::to_string(row.seed), fmt(row.excess_risk.value),
             fmt(row.excess_risk.error), fmt(row.excess_hinge_risk), fmt(row.rkhs_norm),
             fmt(1.0 / std::sqrt(row.lambda)), fmt(row.offset), fmt(row.lambda), fmt(row.sigma),
             fmt(row.certificate), fmt(row.tolerance), fmt(row.iterations), ""});
    }
  }
  {
    auto out = o.open(infix + "_timing.csv");
    io::CsvWriter w(out, o.header(), {"n", "trial", "wall_seconds"});
    for (const auto& row : report.rows) w.row({fmt(row.n), fmt(row.trial), fmt(row.wall_seconds)});
  }
  const RateFit fit = fit_rate(report, 1000, c.seed);
  std::size_t failed = 0, violations = 0;
  for (const auto& row : report.rows) {
    if (!row.ok()) ++failed;
    else if (row.rkhs_norm > 1.0 / std::sqrt(row.lambda) + 1e-6) ++violations;
  }
  bool monotone = true;
  {
    auto out = o.open(infix + "_medians.csv");
    io::CsvWriter w(out, o.header(), {"n", "median_excess_risk", "lambda", "sigma"});
    for (std::size_t i = 0; i < fit.n_values.size(); ++i) {
      w.row({fmt(fit.n_values[i]), fmt(fit.medians[i]), fmt(schedule.lambda_of_n(fit.n_values[i])),
             fmt(schedule.sigma_of_n(fit.n_values[i]))});
      if (i > 0 && fit.medians[i] > fit.medians[i - 1]) monotone = false;
    }
  }
  const std::string p = infix.empty() ? "" : infix.substr(1) + ".";
  fields.emplace_back(p + "beta", fmt(schedule.beta));
  fields.emplace_back(p + "beta_hat", fit.exact_learning ? "inf" : fmt(fit.beta_hat));
  fields.emplace_back(p + "beta_ci_low", fmt(fit.ci_low));
  fields.emplace_back(p + "beta_ci_high", fmt(fit.ci_high));
  fields.emplace_back(p + "r_squared", fmt(fit.r_squared));
  fields.emplace_back(p + "exact_learning", fmt(fit.exact_learning));
  fields.emplace_back(p + "medians_nonincreasing", fmt(monotone));
  fields.emplace_back(p + "norm_bound_violations", fmt(violations));
  fields.emplace_back(p + "failed_rows", fmt(failed));
  for (std::size_t i = 0; i < fit.n_values.size(); ++i) {
    fields.emplace_back(p + "median_n" + fmt(fit.n_values[i]), fmt(fit.medians[i]));
  }
  o.plot(infix + "_medians.csv", {"median excess risk", "n", "median_excess_risk", ""},
         infix + ".svg");
}

void run_rates(const RunConfig& c, Outputs& o) {
  const auto dist = c.distribution();
  const auto& known = dist.known_exponents();
  if (!known && (!c.schedule_q || !c.schedule_alpha)) {
    throw ConfigError("family has no known exponents; set schedule_q and schedule_alpha");
  }
  const double q = c.schedule_q ? *c.schedule_q : known->q;
  const double alpha = c.schedule_alpha ? *c.schedule_alpha : known->alpha;
  const RateSchedule schedule = make_schedule(q, alpha, dist.dim(), c.fixed_sigma);
  ExperimentOptions opts;
  opts.jobs = jobs(c);
  opts.integration = integration(c);
  opts.solver = solver(c);
  Fields fields{{"schedule_q", fmt(q)}, {"schedule_alpha", fmt(alpha)}};
  if (schedule.fixed_sigma) fields.emplace_back("fixed_sigma", fmt(*schedule.fixed_sigma));
  opts.with_offset = c.with_offset;
  const auto report = run_experiment(dist, schedule, c.n_grid, c.trials, c.seed, opts);
  write_rates(c, o, report, schedule, "", fields);
  if (c.offset_pass && !c.with_offset) {
    opts.with_offset = true;
    const auto with = run_experiment(dist, schedule, c.n_grid, c.trials, c.seed, opts);
    write_rates(c, o, with, schedule, "_offset", fields);
  }
  o.summary(fields);
}

int run_check(const RunConfig& c, Outputs& o, std::ostream& log) {
  SuiteOptions opts;
  opts.seed = c.seed;
  opts.jobs = jobs(c);
  opts.integration = integration(c);
  const std::vector<std::pair<std::string, std::function<SuiteResult()>>> suites{
      {"pointwise_variance", [] { return pointwise_variance_suite(); }},
      {"zhang_identity", [&] { return zhang_identity_suite(200, opts); }},
      {"solver", [&] { return solver_suite(50, opts); }},
      {"offset_bound", [&] { return offset_bound_suite(100, opts); }},
      {"variance_bound", [&] { return variance_bound_suite(100, opts); }},
      {"regularized_variance", [&] { return regularized_variance_suite(20, opts); }},
      {"clipping", [&] { return clipping_suite(20, opts); }},
  };
  auto out = o.open(".csv");
  io::CsvWriter w(out, o.header(), {"suite", "case", "value", "relation", "threshold", "pass"});
  Fields fields;
  std::size_t total_failures = 0;
  for (const auto& [name, fn] : suites) {
    log << "suite " << name << " ..." << std::flush;
    const SuiteResult r = fn();
    for (const auto& k : r.cases) {
      w.row({k.suite, k.name, fmt(k.value), k.relation, fmt(k.threshold), fmt(k.pass)});
    }
    out.flush();
    log << (r.pass() ? " ok" : " FAILED") << " (" << r.cases.size() << " cases)\n";
    fields.emplace_back(name + ".cases", fmt(r.cases.size()));
    fields.emplace_back(name + ".failures", fmt(r.failures()));
    fields.emplace_back(name + ".worst_margin", fmt(r.worst()));
    total_failures += r.failures();
  }
  out.close();
  fields.emplace_back("failures", fmt(total_failures));
  o.summary(fields);
  return total_failures == 0 ? 0 : 1;
}

}  // namespace

RunResult run(const RunConfig& config, std::ostream& log) {
  RunResult result;
  for (const auto& line : config.conflicts) log << line << '\n';
  Outputs o(config, log, result);
  const auto& cmd = config.command;
  if (cmd == "gen") run_gen(config, o);
  else if (cmd == "train") run_train(config, o);
  else if (cmd == "noise") run_noise(config, o);
  else if (cmd == "approx") run_approx(config, o);
  else if (cmd == "cover") run_cover(config, o);
  else if (cmd == "rates") run_rates(config, o);
  else if (cmd == "check") result.exit_code = run_check(config, o, log);
  else throw ConfigError("unknown subcommand '" + cmd + "'");
  return result;
}

}  // namespace svmrates::cli
