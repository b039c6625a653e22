#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bap/classes.hpp"

namespace bap {

enum class Criticality { subcritical, critical, supercritical };
std::string to_string(Criticality c);

/// Classification of a sequence schema. Scalars carry an exact rational
/// alongside the double whenever one is known; `exact` marks reports whose
/// decisive comparison with 1 was made in exact arithmetic.
struct SchemaReport {
  std::string class_name;
  Criticality classification = Criticality::subcritical;
  bool exact = false;
  bool g_nonnegative = true;
  int terms = 0;
  double tolerance = 0;

  double radius = 0;  // radius of convergence of G; estimate unless radius_exact is set
  std::optional<mpq_class> radius_exact;
  double tau = 0;  // limit of G at the radius; +infinity when G blows up
  std::optional<mpq_class> tau_exact;

  // Supercritical only: positive root of G = 1 and the derived constants.
  std::optional<double> rho;
  std::optional<mpq_class> rho_exact;
  std::optional<double> alpha;
  std::optional<mpq_class> alpha_exact;
  std::optional<double> beta;
  std::optional<mpq_class> beta_exact;

  /// "subcritical", "supercritical", "critical" (exact) or
  /// "critical-uncertain" (estimated within tolerance of 1).
  std::string label() const;
};

/// Classifies the schema of a class. Closed-form classes are decided by
/// evaluation and bisection; coefficient-only classes by a radius estimate
/// from trailing coefficient ratios plus truncated evaluation, reporting
/// critical-uncertain when the estimate is within tolerance of 1.
SchemaReport schema_classify(const ClassSpec& cls, int terms, const mpq_class& tolerance);

/// One ratio sequence tracked against its limiting value, sampled at three
/// geometrically spaced checkpoints.
struct DiagnosticSequence {
  std::string name;
  double target = 0;
  std::vector<std::pair<int, double>> samples;  // ascending indices
  double final_deviation = 0;
  bool deviations_nonincreasing = false;
};

struct DiagnosticsReport {
  std::string title;
  std::vector<DiagnosticSequence> sequences;
  const DiagnosticSequence& find(const std::string& name) const;
};

/// Requires the class to classify subcritical. Tracks g_n/f_n, the affine
/// counts against (1-tau) n f_n, and the mean block count.
DiagnosticsReport subcritical_diagnostics(const ClassSpec& cls, int terms);

/// Requires the class to classify supercritical. Tracks f_n rho^n, the affine
/// counts times rho^n, and block-count mean/variance per size.
DiagnosticsReport supercritical_diagnostics(const ClassSpec& cls, int terms);

/// Q_m = sum_k C(m,k) d(m,k) / (2^m m!), exact.
mpq_class q_statistic(int m);

/// Tracks sqrt(m) Q_m and the total bounded-affine count scaled by
/// sqrt(n) / (2^n n!), against their closed-form limits.
DiagnosticsReport bounded_total_diagnostics(int max_index);

/// Expands the bivariate excedance generating function from its closed form
/// and checks its coefficients against the Eulerian and derangement-Eulerian
/// tables through max_n (at most 12).
struct BivariateReport {
  bool passed = false;
  int max_n = 0;
  std::string detail;
};
BivariateReport bivariate_check(int max_n);

}  // namespace bap
