#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bap/series.hpp"

namespace bap {

/// Closed-form knowledge about the indecomposable generating function of a
/// built-in class. Numeric evaluators work in doubles on [0, radius); exact
/// evaluators return a rational whenever the value is expressible as one
/// (e.g. when the radicand is a perfect rational square).
struct ClosedForm {
  std::function<double(double)> g;
  std::function<double(double)> g1;  // first derivative, only needed for supercritical classes
  std::function<double(double)> g2;  // second derivative
  std::function<std::optional<mpq_class>(const mpq_class&)> g_exact;
  std::function<std::optional<mpq_class>(const mpq_class&)> g1_exact;
  std::function<std::optional<mpq_class>(const mpq_class&)> g2_exact;
  double radius = 0;  // may be +infinity
  std::optional<mpq_class> radius_exact;
};

/// A sum closed permutation class, presented either by the counts of its
/// members (f) or by the counts of its indecomposable members (g), with
/// optional closed-form data for classification.
class ClassSpec {
public:
  /// catalan, layered, separable, s3142, fibonacci2, full, critical-example.
  static ClassSpec builtin(const std::string& name);
  static std::vector<std::string> builtin_names();

  static ClassSpec from_class_counts(std::string name, std::vector<mpq_class> f);
  static ClassSpec from_indecomposable_counts(std::string name, std::vector<mpq_class> g);
  /// JSON object with "name" and exactly one of "f" (with f[0] = 1) or "g"
  /// (with g[0] = 0); entries may be integers or decimal strings.
  static ClassSpec from_file(const std::string& path);

  const std::string& name() const { return name_; }
  const std::optional<ClosedForm>& closed_form() const { return closed_; }

  /// F: counts by size, entries 0..order. f_0 = 1.
  Series class_series(int order) const;
  /// G: indecomposable counts, entries 0..order. g_0 = 0.
  Series indecomposable_series(int order) const;
  /// Counts of shifted infinite sums by size; both computation routes are
  /// cross-checked internally.
  Series affine_series(int order) const;

private:
  ClassSpec() = default;

  std::string name_;
  bool generator_is_f_ = true;
  std::function<mpq_class(int)> gen_;
  std::optional<ClosedForm> closed_;
};

/// G = 1 - 1/F. Requires f_0 = 1. Negative coefficients in the result signal
/// that the input is not a valid class; they are reported by callers, not
/// rejected here.
Series indecomposables_from_class(const Series& f);

/// Counts of shifted infinite sums, computed both as x F'/F and as the
/// weighted convolution sum_k k g_k f_{n-k}; throws std::logic_error if the
/// two routes disagree.
Series affine_from_class(const Series& f);

/// P[a size-n member has k blocks], k = 1..n, exact and summing to 1.
std::vector<mpq_class> block_distribution(const Series& f, int n);

/// P[the first block of a size-n member has size j], j = 1..n.
std::vector<mpq_class> first_block_distribution(const Series& f, int n);

}  // namespace bap
