#pragma once

#include <stdexcept>
#include <vector>

#include <gmpxx.h>

namespace bap {

inline mpq_class series_coef_inverse(const mpq_class& a) {
  if (a == 0) throw std::domain_error("division by a zero constant term");
  return 1 / a;
}

/// Dense power series truncated at a fixed order, over an exact coefficient
/// ring. All arithmetic is exact through the truncation order.
template <typename Coef>
class SeriesT {
public:
  explicit SeriesT(int order) : c_(static_cast<size_t>(order) + 1) {
    if (order < 0) throw std::invalid_argument("negative truncation order");
  }

  static SeriesT one(int order) {
    SeriesT s(order);
    s.c_[0] = Coef(1);
    return s;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const Coef& operator[](int n) const { return c_[static_cast<size_t>(n)]; }
  Coef& operator[](int n) { return c_[static_cast<size_t>(n)]; }

  friend SeriesT operator+(const SeriesT& a, const SeriesT& b) {
    SeriesT out(common_order(a, b));
    for (int n = 0; n <= out.order(); ++n) out[n] = a[n] + b[n];
    return out;
  }

  friend SeriesT operator-(const SeriesT& a, const SeriesT& b) {
    SeriesT out(common_order(a, b));
    for (int n = 0; n <= out.order(); ++n) out[n] = a[n] - b[n];
    return out;
  }

  friend SeriesT operator*(const SeriesT& a, const SeriesT& b) {
    SeriesT out(common_order(a, b));
    for (int i = 0; i <= out.order(); ++i) {
      if (a[i] == Coef()) continue;
      for (int j = 0; i + j <= out.order(); ++j) {
        if (b[j] == Coef()) continue;
        out[i + j] += a[i] * b[j];
      }
    }
    return out;
  }

  /// Multiplicative inverse; requires an invertible constant term.
  SeriesT reciprocal() const {
    const Coef inv0 = series_coef_inverse(c_[0]);
    SeriesT out(order());
    out[0] = inv0;
    for (int n = 1; n <= order(); ++n) {
      Coef acc{};
      for (int k = 1; k <= n; ++k) acc += c_[static_cast<size_t>(k)] * out[n - k];
      out[n] = -acc * inv0;
    }
    return out;
  }

  /// Termwise derivative; the top coefficient of the result is unknown and
  /// left at zero, so the result is exact only through order() - 1.
  SeriesT derivative() const {
    SeriesT out(order());
    for (int n = 1; n <= order(); ++n) out[n - 1] = Coef(n) * c_[static_cast<size_t>(n)];
    return out;
  }

  /// Multiplication by x (drops the top coefficient).
  SeriesT shifted_up() const {
    SeriesT out(order());
    for (int n = order(); n >= 1; --n) out[n] = c_[static_cast<size_t>(n) - 1];
    return out;
  }

  bool operator==(const SeriesT&) const = default;

private:
  static int common_order(const SeriesT& a, const SeriesT& b) {
    if (a.order() != b.order()) throw std::invalid_argument("series order mismatch");
    return a.order();
  }

  std::vector<Coef> c_;
};

using Series = SeriesT<mpq_class>;

/// Truncated evaluation: sum of c_n x^n through the truncation order.
inline mpq_class evaluate(const Series& s, const mpq_class& x) {
  mpq_class acc = 0;
  for (int n = s.order(); n >= 0; --n) acc = acc * x + s[n];
  return acc;
}

}  // namespace bap
