#include "svmrates_cli/suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "svmrates/approximation.hpp"
#include "svmrates/format.hpp"
#include "svmrates/rates.hpp"
#include "svmrates/svm.hpp"

namespace svmrates::cli {

std::size_t SuiteResult::failures() const {
  return static_cast<std::size_t>(
      std::count_if(cases.begin(), cases.end(), [](const CaseResult& c) { return !c.pass; }));
}

double SuiteResult::worst() const {
  double w = std::numeric_limits<double>::infinity();
  for (const auto& c : cases) {
    const double margin = c.relation == ">=" ? c.value - c.threshold : c.threshold - c.value;
    w = std::min(w, margin);
  }
  return w;
}

namespace {

CaseResult at_least(const std::string& suite, std::string name, double value, double threshold) {
  return {suite, std::move(name), value, ">=", threshold, value >= threshold};
}

CaseResult at_most(const std::string& suite, std::string name, double value, double threshold) {
  return {suite, std::move(name), value, "<=", threshold, value <= threshold};
}

std::string label(const char* prefix, std::size_t i) { return prefix + std::to_string(i); }

struct RandomProblem {
  SvmProblem problem;
  std::string name;
};

RandomProblem random_problem(std::uint64_t seed, bool with_offset) {
  RandomStream rng(seed);
  const std::size_t n = 10 + static_cast<std::size_t>(rng.uniform() * 191.0);
  const double lambda = std::pow(10.0, rng.uniform(-3.0, 0.0));
  const double sigma = std::pow(2.0, rng.uniform(0.0, 4.0));
  const auto dist = SyntheticDistribution::power_margin(1.0);
  TrainingSet set = sample(dist, n, derive_seed(seed, {1}));
  std::string name = "n=" + std::to_string(n) + " lambda=" + format_number(lambda) +
                     " sigma=" + format_number(sigma) + (with_offset ? " offset" : "");
  return {SvmProblem{std::move(set), lambda, GaussianKernel(sigma), with_offset}, name};
}

}  // namespace

FieldFunction random_piecewise_linear(std::uint64_t seed, std::size_t knots, double amplitude) {
  RandomStream rng(seed);
  auto values = std::make_shared<std::vector<double>>(knots);
  for (auto& v : *values) v = rng.uniform(-amplitude, amplitude);
  return [values](std::span<const double> x) {
    const std::size_t m = values->size();
    const double u = std::clamp((x[0] + 1.0) / 2.0, 0.0, 1.0) * static_cast<double>(m - 1);
    const std::size_t i = std::min(static_cast<std::size_t>(u), m - 2);
    const double w = u - static_cast<double>(i);
    return (1.0 - w) * (*values)[i] + w * (*values)[i + 1];
  };
}

KernelExpansion random_expansion(std::uint64_t seed, double sigma, std::size_t centers,
                                 double norm) {
  RandomStream rng(seed);
  PointMatrix c(static_cast<Eigen::Index>(centers), 1);
  Eigen::VectorXd coef(static_cast<Eigen::Index>(centers));
  for (std::size_t i = 0; i < centers; ++i) {
    c(static_cast<Eigen::Index>(i), 0) = rng.uniform(-1.0, 1.0);
    coef(static_cast<Eigen::Index>(i)) = rng.normal();
  }
  KernelExpansion f(GaussianKernel(sigma), c, coef);
  const double current = f.rkhs_norm();
  if (current > 0.0) coef *= norm / current;
  return KernelExpansion(GaussianKernel(sigma), std::move(c), std::move(coef));
}

SuiteResult pointwise_variance_suite() {
  SuiteResult r{"pointwise_variance", {}};
  for (int pi = 101; pi <= 200; ++pi) {
    const double p = pi / 200.0;
    for (double pp : {p, 1.0 - p}) {
      double worst = std::numeric_limits<double>::infinity();
      for (int ti = -30; ti <= 30; ++ti) worst = std::min(worst, pointwise_variance(pp, ti / 10.0).slack);
      r.cases.push_back(at_least(r.name, "p=" + format_number(pp), worst, -1e-12));
    }
  }
  return r;
}

SuiteResult zhang_identity_suite(std::size_t per_family, const SuiteOptions& opts) {
  SuiteResult r{"zhang_identity", {}};
  const double gammas[] = {0.5, 1.0, 2.0};
  r.cases.resize(3 * per_family);
  parallel_for(r.cases.size(), opts.jobs, [&](std::size_t k) {
    const double g = gammas[k / per_family];
    const std::size_t i = k % per_family;
    const auto dist = SyntheticDistribution::power_margin(g);
    const auto f = clip(random_piecewise_linear(derive_seed(opts.seed, {11, k})));
    const auto e = excess_hinge_risk(dist, f, true, opts.integration);
    r.cases[k] = at_most(r.name, "gamma=" + format_number(g) + " f" + std::to_string(i),
                         std::abs(e.direct.value - e.zhang->value), 1e-4);
  });
  return r;
}

SuiteResult solver_suite(std::size_t problems, const SuiteOptions& opts) {
  SuiteResult r{"solver", {}};
  std::vector<std::vector<CaseResult>> per(problems);
  parallel_for(problems, opts.jobs, [&](std::size_t k) {
    const bool offset = k % 2 == 1;
    const auto rp = random_problem(derive_seed(opts.seed, {21, k}), offset);
    const auto sol = train(rp.problem);
    const double n = static_cast<double>(rp.problem.training_set.size());
    auto& out = per[k];
    out.push_back(at_most(r.name, rp.name + " gap", sol.certificate, 1e-8 * n));
    out.push_back(at_least(r.name, rp.name + " norm_bound",
                           norm_bound_check(sol, rp.problem.lambda).slack, -1e-6));
    if (offset) {
      out.push_back(at_least(r.name, rp.name + " offset_bound", offset_bound_check(sol).slack,
                             -1e-6));
    }
  });
  for (auto& v : per) r.cases.insert(r.cases.end(), v.begin(), v.end());
  return r;
}

SuiteResult offset_bound_suite(std::size_t problems, const SuiteOptions& opts) {
  SuiteResult r{"offset_bound", {}};
  r.cases.resize(problems);
  parallel_for(problems, opts.jobs, [&](std::size_t k) {
    const auto rp = random_problem(derive_seed(opts.seed, {31, k}), true);
    const auto sol = train(rp.problem);
    r.cases[k] = at_least(r.name, rp.name, offset_bound_check(sol).slack, -1e-6);
  });
  return r;
}

SuiteResult variance_bound_suite(std::size_t count, const SuiteOptions& opts) {
  SuiteResult r{"variance_bound", {}};
  const auto dist = SyntheticDistribution::power_margin(1.0);
  r.cases.resize(count);
  parallel_for(count, opts.jobs, [&](std::size_t k) {
    const auto f = clip(random_piecewise_linear(derive_seed(opts.seed, {41, k})));
    const auto c = variance_bound_check(dist, f, 1.0, -1.0, opts.integration);
    r.cases[k] = at_least(r.name, label("f", k), c.margin, -1e-6);
  });
  return r;
}

SuiteResult regularized_variance_suite(std::size_t count, const SuiteOptions& opts) {
  SuiteResult r{"regularized_variance", {}};
  constexpr double lambda = 0.01;
  constexpr double sigma = 4.0;
  const auto dist = SyntheticDistribution::power_margin(1.0);
  ApproxOptions ao;
  ao.integration = opts.integration;
  ao.seed = derive_seed(opts.seed, {51});
  const auto dense = sample(dist, ao.n_dense, ao.seed);
  const auto f0 = train(SvmProblem{dense, lambda, GaussianKernel(sigma), false}).expansion;
  const double f0_value =
      lambda * f0.rkhs_norm_squared() +
      excess_hinge_risk(dist, f0.as_function(), false, opts.integration).direct.value;
  const double a =
      std::min(approx_error_witness(dist, sigma, lambda, ao).value, std::max(0.0, f0_value));
  const double gamma_max = 1.0 / std::sqrt(lambda);
  r.cases.resize(count);
  parallel_for(count, opts.jobs, [&](std::size_t k) {
    const std::uint64_t s = derive_seed(opts.seed, {52, k});
    RandomStream rng(s);
    const double gamma = gamma_max * rng.uniform(0.05, 1.0);
    const double norm = gamma * rng.uniform(0.0, 1.0);
    const auto f = random_expansion(derive_seed(s, {1}), sigma, 10, norm);
    const auto c = regularized_variance_check(dist, f, f0, lambda, gamma, 1.0, a,
                                              opts.integration);
    r.cases[k] = at_least(r.name, label("f", k) + " gamma=" + format_number(gamma), c.margin,
                          -1e-6);
  });
  return r;
}

SuiteResult clipping_suite(std::size_t count, const SuiteOptions& opts) {
  SuiteResult r{"clipping", {}};
  const auto dist = SyntheticDistribution::power_margin(1.0);
  r.cases.resize(count);
  parallel_for(count, opts.jobs, [&](std::size_t k) {
    const std::uint64_t s = derive_seed(opts.seed, {61, k});
    const auto f = random_expansion(s, 4.0, 10, 1.0 + 4.0 * RandomStream(s).uniform());
    const double raw = excess_hinge_risk(dist, f.as_function(), false, opts.integration).direct.value;
    const double clipped = excess_hinge_risk(dist, clip(f), false, opts.integration).direct.value;
    r.cases[k] = at_most(r.name, label("f", k), clipped - raw, 1e-8);
  });
  return r;
}

}  // namespace svmrates::cli
