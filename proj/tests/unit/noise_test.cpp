#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "svmrates/noise.hpp"

namespace svmrates {
namespace {

// ∫ |x| exp(-x²/t) dx/2 over [-1, 1].
double geometric_uniform(double t) { return 0.5 * t * (1.0 - std::exp(-1.0 / t)); }

// ∫ |x|·|x| exp(-x²/t) dx over [-1, 1] (density |x|).
double geometric_weighted(double t) {
  return t * (0.5 * std::sqrt(std::numbers::pi * t) * std::erf(1.0 / std::sqrt(t)) - std::exp(-1.0 / t));
}

TEST(MarginMass, ClosedForms) {
  const auto pm1 = SyntheticDistribution::power_margin(1.0);
  EXPECT_NEAR(margin_mass(pm1, 0.3).value, 0.3, 1e-8);
  EXPECT_NEAR(margin_mass(pm1, 1.0).value, 1.0, 1e-8);
  EXPECT_NEAR(margin_mass(pm1, 2.0).value, 1.0, 1e-8);
  const auto pm2 = SyntheticDistribution::power_margin(2.0);
  EXPECT_NEAR(margin_mass(pm2, 0.25).value, 0.5, 1e-8);
  const auto w = SyntheticDistribution::weighted_power_margin(1.0, 2.0);
  EXPECT_NEAR(margin_mass(w, 0.4).value, 0.16, 1e-8);
  EXPECT_EQ(margin_mass(SyntheticDistribution::separated(0.5, 1), 0.5).value, 0.0);
  EXPECT_EQ(margin_mass(SyntheticDistribution::separated(0.5, 2), 0.99).value, 0.0);
}

TEST(GeometricIntegral, ClosedForms) {
  const auto pm1 = SyntheticDistribution::power_margin(1.0);
  const auto w = SyntheticDistribution::weighted_power_margin(1.0, 2.0);
  for (double t : {1e-4, 1e-3, 0.01, 0.1, 1.0}) {
    EXPECT_NEAR(geometric_integral(pm1, t).value, geometric_uniform(t), 1e-9 + 1e-7 * geometric_uniform(t)) << t;
    EXPECT_NEAR(geometric_integral(w, t).value, geometric_weighted(t), 1e-9 + 1e-7 * geometric_weighted(t)) << t;
  }
  EXPECT_LT(geometric_integral(pm1, 0.01).value, geometric_integral(pm1, 0.1).value);
  EXPECT_NEAR(geometric_integral(pm1, 1e6).value, 0.5, 1e-6);
}

TEST(GeometricIntegral, SeparatedIsTiny) {
  const auto s1 = SyntheticDistribution::separated(0.5, 1);
  EXPECT_LE(geometric_integral(s1, 0.01).value, std::exp(-0.0625 / 0.01));
  const auto s2 = SyntheticDistribution::separated(0.5, 2);
  for (double t : {0.01, 0.05}) {
    const auto e = geometric_integral(s2, t);
    EXPECT_LE(e.value, std::exp(-0.0625 / t) + 3.0 * e.error);
  }
}

TEST(FitTsybakov, RecoversExponents) {
  const auto grid = stats::log_space(1e-3, 0.5, 10);
  EXPECT_NEAR(fit_tsybakov(SyntheticDistribution::power_margin(2.0), grid).q_hat, 0.5, 0.05);
  EXPECT_NEAR(fit_tsybakov(SyntheticDistribution::power_margin(0.5), grid).q_hat, 2.0, 0.1);
  EXPECT_NEAR(fit_tsybakov(SyntheticDistribution::weighted_power_margin(1.0, 2.0), grid).q_hat, 2.0, 0.1);
  const auto sep = fit_tsybakov(SyntheticDistribution::separated(0.5, 1), grid);
  EXPECT_TRUE(std::isinf(sep.q_hat));
  EXPECT_THROW(fit_tsybakov(SyntheticDistribution::power_margin(1.0), {0.1, 0.2}), std::invalid_argument);
}

TEST(FitGeometric, RecoversExponents) {
  const auto grid = stats::log_space(1e-4, 1e-2, 9);
  EXPECT_NEAR(fit_geometric(SyntheticDistribution::power_margin(1.0), grid).alpha_hat, 2.0, 0.15);
  EXPECT_NEAR(fit_geometric(SyntheticDistribution::weighted_power_margin(1.0, 2.0), grid).alpha_hat, 3.0, 0.15);
  EXPECT_TRUE(std::isinf(fit_geometric(SyntheticDistribution::separated(0.5, 1), grid).alpha_hat));
}

TEST(Envelope, ConstantAndOrder) {
  for (double g : {0.5, 1.0, 2.0}) {
    const auto d = SyntheticDistribution::power_margin(g);
    EXPECT_NEAR(envelope_constant(d, g).c_gamma_hat, 1.0, 1e-3);
    EXPECT_NEAR(fit_envelope_order(d).slope, g, 1e-6);
  }
  // An order above the true one makes the ratio blow up near the boundary.
  const auto d = SyntheticDistribution::power_margin(1.0);
  EXPECT_GT(envelope_constant(d, 2.0, 20001, 1e-4).c_gamma_hat,
            envelope_constant(d, 2.0, 20001, 1e-2).c_gamma_hat);
}

TEST(PredictedExponent, Formula) {
  EXPECT_DOUBLE_EQ(predicted_geometric_exponent(1, 1, 1).alpha, 2.0);
  EXPECT_DOUBLE_EQ(predicted_geometric_exponent(1, 2, 1).alpha, 4.0);
  EXPECT_DOUBLE_EQ(predicted_geometric_exponent(2, 1, 2).alpha, 1.5);
  EXPECT_TRUE(predicted_geometric_exponent(0.5, 1, 1).open_range);
  EXPECT_FALSE(predicted_geometric_exponent(1, 1, 1).open_range);
}

TEST(InverseMarginNorm, ClosedFormAndGrid) {
  const auto d = SyntheticDistribution::power_margin(1.0);
  EXPECT_DOUBLE_EQ(inverse_margin_norm(d, 1.0), 1.0);
  // mass(t) = t, so sup t^{-1} mass^{1/q} over (0, 1] is 1 at q = 1.
  EXPECT_NEAR(inverse_margin_norm_grid(d, 1.0, stats::log_space(1e-3, 1.0, 12)), 1.0, 1e-6);
  // q = 0.5: t^{-1} t² = t peaks at t = 1.
  EXPECT_NEAR(inverse_margin_norm_grid(d, 0.5, stats::log_space(1e-3, 1.0, 12)), 1.0, 1e-6);
}

TEST(InverseTauNorm, FiniteOnlyForLowPowers) {
  // ∫ τ^{-p}|2η-1| dP_X = ∫_0^1 x^{1-p} dx is finite iff p < 2.
  const auto d = SyntheticDistribution::power_margin(1.0);
  const auto fin = inverse_tau_norm(d, 1.0);
  EXPECT_TRUE(fin.finite);
  EXPECT_NEAR(fin.value, 1.0, 1e-3);
  EXPECT_FALSE(inverse_tau_norm(d, 3.0).finite);
  EXPECT_TRUE(inverse_tau_norm(SyntheticDistribution::separated(0.5, 1), 4.0).finite);
}

TEST(Report, FieldsInFixedOrder) {
  const auto r = analyze_noise(SyntheticDistribution::power_margin(1.0));
  EXPECT_NEAR(r.tsybakov.q_hat, 1.0, 0.05);
  EXPECT_NEAR(r.geometric.alpha_hat, 2.0, 0.15);
  ASSERT_TRUE(r.gamma_hat.has_value());
  EXPECT_NEAR(*r.gamma_hat, 1.0, 1e-6);
  ASSERT_TRUE(r.predicted_alpha.has_value());
  EXPECT_NEAR(r.predicted_alpha->alpha, 2.0, 0.1);
  const auto f = report_fields(r);
  ASSERT_FALSE(f.empty());
  EXPECT_EQ(f.front().first, "distribution");
  const auto sep = report_fields(analyze_noise(SyntheticDistribution::separated(0.5, 1)));
  for (const auto& [k, v] : sep) {
    if (k == "q_hat" || k == "alpha_hat") {
      EXPECT_EQ(v, "inf");
    }
  }
}

}  // namespace
}  // namespace svmrates
