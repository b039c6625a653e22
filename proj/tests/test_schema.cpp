#include <doctest.h>

#include <cmath>

#include "bap/schema.hpp"

using bap::ClassSpec;
using bap::Criticality;
using bap::SchemaReport;

namespace {

const mpq_class kTol(1, 1000);

}  // namespace

TEST_CASE("catalan classifies subcritical with exact scalars") {
  const SchemaReport rep = bap::schema_classify(ClassSpec::builtin("catalan"), 64, kTol);
  CHECK(rep.classification == Criticality::subcritical);
  CHECK(rep.exact);
  CHECK(rep.label() == "subcritical");
  REQUIRE(rep.tau_exact.has_value());
  CHECK(*rep.tau_exact == mpq_class(1, 2));
  REQUIRE(rep.radius_exact.has_value());
  CHECK(*rep.radius_exact == mpq_class(1, 4));
  CHECK_FALSE(rep.rho.has_value());
}

TEST_CASE("layered classifies supercritical with exact scalars") {
  const SchemaReport rep = bap::schema_classify(ClassSpec::builtin("layered"), 64, kTol);
  CHECK(rep.classification == Criticality::supercritical);
  CHECK(rep.exact);
  REQUIRE(rep.rho_exact.has_value());
  CHECK(*rep.rho_exact == mpq_class(1, 2));
  REQUIRE(rep.alpha_exact.has_value());
  CHECK(*rep.alpha_exact == mpq_class(1, 2));
  REQUIRE(rep.beta_exact.has_value());
  CHECK(*rep.beta_exact == mpq_class(1, 4));
  CHECK(std::isinf(rep.tau));
  CHECK(*rep.rho < rep.radius);  // the root sits inside the disk of convergence
}

TEST_CASE("fibonacci2 classifies supercritical with the golden-ratio root") {
  const SchemaReport rep = bap::schema_classify(ClassSpec::builtin("fibonacci2"), 64, kTol);
  CHECK(rep.classification == Criticality::supercritical);
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  REQUIRE(rep.rho.has_value());
  CHECK(std::abs(*rep.rho - golden) < 1e-9);
  REQUIRE(rep.alpha.has_value());
  CHECK(std::abs(*rep.alpha - 2.0 / ((std::sqrt(5.0) - 1.0) * std::sqrt(5.0))) < 1e-6);
  REQUIRE(rep.beta.has_value());
  CHECK(std::abs(*rep.beta - 1.0 / (5.0 * std::sqrt(5.0))) < 1e-6);
}

TEST_CASE("separable classifies subcritical") {
  const SchemaReport rep = bap::schema_classify(ClassSpec::builtin("separable"), 64, kTol);
  CHECK(rep.classification == Criticality::subcritical);
  CHECK(std::abs(rep.tau - (1.0 - 1.0 / std::sqrt(2.0))) < 1e-6);
  CHECK(std::abs(rep.radius - (3.0 - 2.0 * std::sqrt(2.0))) < 1e-12);
}

TEST_CASE("the 3142 class classifies subcritical with exact tau") {
  const SchemaReport rep = bap::schema_classify(ClassSpec::builtin("s3142"), 64, kTol);
  CHECK(rep.classification == Criticality::subcritical);
  REQUIRE(rep.tau_exact.has_value());
  CHECK(*rep.tau_exact == mpq_class(5, 32));
}

TEST_CASE("the calibrated example sits exactly on the critical line") {
  const SchemaReport rep = bap::schema_classify(ClassSpec::builtin("critical-example"), 64, kTol);
  CHECK(rep.classification == Criticality::critical);
  CHECK(rep.exact);
  CHECK(rep.label() == "critical");
  REQUIRE(rep.tau_exact.has_value());
  CHECK(*rep.tau_exact == 1);
}

TEST_CASE("coefficient-only classification estimates") {
  // same class counts as catalan, but with no closed form attached
  std::vector<mpq_class> f;
  const auto cat = ClassSpec::builtin("catalan").class_series(64);
  for (int n = 0; n <= 64; ++n) f.push_back(cat[n]);
  const SchemaReport rep =
      bap::schema_classify(ClassSpec::from_class_counts("cat-data", f), 64, mpq_class(1, 10));
  CHECK(rep.classification == Criticality::subcritical);
  CHECK_FALSE(rep.exact);
  CHECK(rep.label() == "subcritical");
  CHECK(std::abs(rep.radius - 0.25) < 0.04);
  CHECK(rep.tau < 0.6);

  // polynomial data: supercritical with a root close to 1/2
  std::vector<mpq_class> ones(40, mpq_class(1));
  ones[0] = 0;
  const SchemaReport lay = bap::schema_classify(
      ClassSpec::from_indecomposable_counts("layered-data", ones), 39, mpq_class(1, 10));
  CHECK(lay.classification == Criticality::supercritical);
  REQUIRE(lay.rho.has_value());
  CHECK(std::abs(*lay.rho - 0.5) < 1e-6);
}

TEST_CASE("classification rejects degenerate input") {
  std::vector<mpq_class> f(40, mpq_class(0));
  f[0] = 1;
  CHECK_THROWS_AS(bap::schema_classify(ClassSpec::from_class_counts("trivial", f), 32, kTol),
                  std::invalid_argument);
  CHECK_THROWS_AS(bap::schema_classify(ClassSpec::builtin("catalan"), 8, kTol),
                  std::invalid_argument);
}

TEST_CASE("subcritical diagnostics for catalan") {
  const auto rep = bap::subcritical_diagnostics(ClassSpec::builtin("catalan"), 256);
  const auto& gf = rep.find("g_over_f");
  CHECK(gf.target == doctest::Approx(0.25));
  CHECK(gf.final_deviation < 0.02 * 0.25);
  CHECK(gf.deviations_nonincreasing);
  const auto& af = rep.find("affine_over_scaled_nf");
  CHECK(af.target == 1.0);
  CHECK(af.final_deviation < 0.02);
  CHECK(af.deviations_nonincreasing);
  const auto& mean = rep.find("mean_blocks");
  CHECK(mean.target == doctest::Approx(3.0));
  CHECK(std::abs(mean.samples.back().second - 3.0) < 0.15);

  CHECK_THROWS_AS(bap::subcritical_diagnostics(ClassSpec::builtin("layered"), 64),
                  std::invalid_argument);
}

TEST_CASE("supercritical diagnostics for layered and fibonacci2") {
  const auto rep = bap::supercritical_diagnostics(ClassSpec::builtin("layered"), 64);
  const auto& f_scaled = rep.find("f_times_rho_n");
  CHECK(f_scaled.target == doctest::Approx(0.5));
  for (const auto& [n, v] : f_scaled.samples) CHECK(v == doctest::Approx(0.5));  // exactly 1/2
  const auto& af_scaled = rep.find("affine_times_rho_n");
  CHECK(af_scaled.final_deviation < 1e-3);
  CHECK(af_scaled.deviations_nonincreasing);
  const auto& mean = rep.find("mean_blocks_over_n");
  CHECK(std::abs(mean.samples.back().second - 0.5) < 0.02);
  const auto& var = rep.find("var_blocks_over_n");
  CHECK(std::abs(var.samples.back().second - 0.25) < 0.02);

  const auto fib = bap::supercritical_diagnostics(ClassSpec::builtin("fibonacci2"), 64);
  const double alpha = 2.0 / ((std::sqrt(5.0) - 1.0) * std::sqrt(5.0));
  CHECK(std::abs(fib.find("f_times_rho_n").samples.back().second - alpha) < 0.01);
  CHECK(std::abs(fib.find("affine_times_rho_n").samples.back().second - 1.0) < 0.01);

  CHECK_THROWS_AS(bap::supercritical_diagnostics(ClassSpec::builtin("catalan"), 64),
                  std::invalid_argument);
}

TEST_CASE("q statistic") {
  CHECK(bap::q_statistic(1) == 0);
  CHECK(bap::q_statistic(2) == mpq_class(1, 4));
  CHECK(bap::q_statistic(0) == 1);  // empty derangement contributes 1/(2^0 0!)
}

TEST_CASE("total-count diagnostics") {
  const auto rep = bap::bounded_total_diagnostics(64);
  const double pi = 3.14159265358979323846;
  const auto& q = rep.find("sqrt_m_q_m");
  CHECK(q.target == doctest::Approx(std::exp(-1.0) * std::sqrt(3.0 / (2.0 * pi))));
  CHECK(q.final_deviation < 0.05);
  const auto& c = rep.find("count_ratio_sqrt_n");
  CHECK(c.target == doctest::Approx(std::sqrt(3.0 / (2.0 * pi * std::exp(1.0)))));
  CHECK(c.final_deviation < 0.05);
  CHECK_THROWS_AS(bap::bounded_total_diagnostics(2), std::invalid_argument);
}

TEST_CASE("bivariate expansion matches the tables") {
  const auto rep = bap::bivariate_check(8);
  CHECK(rep.passed);
  CHECK(rep.max_n == 8);
  CHECK_THROWS_AS(bap::bivariate_check(13), std::invalid_argument);
}
