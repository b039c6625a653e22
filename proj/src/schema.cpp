#include "bap/schema.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "bap/counting.hpp"

namespace bap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_of(const mpz_class& z) {
  signed long exp = 0;
  const double d = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(d) + static_cast<double>(exp) * std::log(2.0);
}

double log_of(const mpq_class& q) { return log_of(mpz_class(q.get_num())) - log_of(mpz_class(q.get_den())); }

std::vector<int> checkpoints(int terms) {
  std::set<int> pts{std::max(1, terms / 4), std::max(1, terms / 2), terms};
  return {pts.begin(), pts.end()};
}

DiagnosticSequence make_sequence(std::string name, double target,
                                 std::vector<std::pair<int, double>> samples) {
  DiagnosticSequence seq;
  seq.name = std::move(name);
  seq.target = target;
  seq.samples = std::move(samples);
  seq.final_deviation = std::abs(seq.samples.back().second - target);
  seq.deviations_nonincreasing = true;
  for (size_t i = 1; i < seq.samples.size(); ++i) {
    if (std::abs(seq.samples[i].second - target) > std::abs(seq.samples[i - 1].second - target)) {
      seq.deviations_nonincreasing = false;
    }
  }
  return seq;
}

struct UnitRoot {
  double value = 0;
  std::optional<mpq_class> exact;
  bool decided_exactly = false;
};

// Simplest rational in [lo, hi], by the continued-fraction descent.
mpq_class simplest_between(mpq_class lo, mpq_class hi) {
  mpz_class floor_lo, floor_hi;
  mpz_fdiv_q(floor_lo.get_mpz_t(), lo.get_num().get_mpz_t(), lo.get_den().get_mpz_t());
  mpz_fdiv_q(floor_hi.get_mpz_t(), hi.get_num().get_mpz_t(), hi.get_den().get_mpz_t());
  if (floor_lo < floor_hi || lo == floor_lo) {
    // an integer lies in the interval
    return lo == floor_lo ? mpq_class(floor_lo) : mpq_class(floor_lo + 1);
  }
  const mpq_class frac_lo = lo - mpq_class(floor_lo);
  const mpq_class frac_hi = hi - mpq_class(floor_lo);
  return mpq_class(floor_lo) + 1 / simplest_between(1 / frac_hi, 1 / frac_lo);
}

// Root of G(x) = 1 for increasing G with G(lo) < 1 < G(hi). Bisects in exact
// arithmetic while the evaluator cooperates, then asks whether the simplest
// rational inside the final bracket is the root; rational roots of moderate
// height are found exactly this way.
UnitRoot find_unit_root(const std::function<std::optional<mpq_class>(const mpq_class&)>& eval_exact,
                        const std::function<double(double)>& eval_double, mpq_class lo,
                        mpq_class hi) {
  UnitRoot out;
  bool exact_path = static_cast<bool>(eval_exact);
  const mpq_class width_goal(mpz_class(1), mpz_class(1) << 80);
  while (exact_path && hi - lo >= width_goal) {
    mpq_class mid((lo + hi) / 2);
    auto v = eval_exact(mid);
    if (!v) {
      exact_path = false;
      break;
    }
    if (*v == 1) {
      out.value = mid.get_d();
      out.exact = mid;
      out.decided_exactly = true;
      return out;
    }
    (*v < 1 ? lo : hi) = mid;
  }
  if (exact_path) {
    const mpq_class candidate = simplest_between(lo, hi);
    if (auto v = eval_exact(candidate); v && *v == 1) {
      out.value = candidate.get_d();
      out.exact = candidate;
    } else {
      out.value = mpq_class((lo + hi) / 2).get_d();
    }
    out.decided_exactly = true;
    return out;
  }
  double dlo = lo.get_d();
  double dhi = hi.get_d();
  for (int step = 0; step < 200 && dhi - dlo > 1e-15 * dhi; ++step) {
    const double mid = (dlo + dhi) / 2;
    (eval_double(mid) < 1.0 ? dlo : dhi) = mid;
  }
  out.value = (dlo + dhi) / 2;
  return out;
}

mpq_class evaluate_derivative(const Series& s, const mpq_class& x, int order_of_derivative) {
  mpq_class acc = 0;
  for (int n = s.order(); n >= order_of_derivative; --n) {
    mpq_class c = s[n];
    for (int j = 0; j < order_of_derivative; ++j) c *= n - j;
    acc = acc * x + c;
  }
  return acc;
}

// f_n * rho^n as a double, stable for huge f_n.
double scaled_power(const mpq_class& f, double log_rho, int n) {
  if (f == 0) return 0;
  const double s = log_of(f) + static_cast<double>(n) * log_rho;
  return (f < 0 ? -1.0 : 1.0) * std::exp(s);
}

}  // namespace

std::string to_string(Criticality c) {
  switch (c) {
    case Criticality::subcritical:
      return "subcritical";
    case Criticality::critical:
      return "critical";
    case Criticality::supercritical:
      return "supercritical";
  }
  return "unknown";
}

std::string SchemaReport::label() const {
  if (classification == Criticality::critical && !exact) return "critical-uncertain";
  return to_string(classification);
}

SchemaReport schema_classify(const ClassSpec& cls, int terms, const mpq_class& tolerance) {
  if (terms < 16) throw std::invalid_argument("classification needs at least 16 terms");

  SchemaReport rep;
  rep.class_name = cls.name();
  rep.terms = terms;
  rep.tolerance = tolerance.get_d();

  const Series g = cls.indecomposable_series(terms);
  bool degenerate = true;
  for (int n = 1; n <= terms && degenerate; ++n) degenerate = g[n] == 0;
  if (degenerate) throw std::invalid_argument("degenerate class: no indecomposable members");
  for (int n = 0; n <= terms; ++n) {
    if (g[n] < 0) rep.g_nonnegative = false;
  }

  const auto& cf = cls.closed_form();
  if (cf) {
    rep.radius = cf->radius;
    rep.radius_exact = cf->radius_exact;

    // Probe towards the radius for a point with G > 1.
    std::optional<mpq_class> super_hi;
    bool probe_exact = true;
    const bool finite_radius = std::isfinite(cf->radius);
    for (int k = 1; k <= (finite_radius ? 50 : 40) && !super_hi; ++k) {
      mpq_class x;
      if (finite_radius) {
        const mpq_class r = cf->radius_exact ? *cf->radius_exact : mpq_class(cf->radius);
        x = r * (1 - mpq_class(mpz_class(1), mpz_class(1) << k));
      } else {
        x = mpz_class(1) << (k - 1);
      }
      std::optional<mpq_class> v = cf->g_exact ? cf->g_exact(x) : std::nullopt;
      if (v) {
        if (*v > 1) super_hi = x;
      } else {
        probe_exact = false;
        if (cf->g(x.get_d()) > 1.0 + 1e-12) super_hi = x;
      }
    }

    if (super_hi) {
      rep.classification = Criticality::supercritical;
      rep.exact = probe_exact;
      rep.tau = kInf;
      UnitRoot root = find_unit_root(cf->g_exact, cf->g, mpq_class(0), *super_hi);
      rep.rho = root.value;
      rep.rho_exact = root.exact;

      // alpha = 1/(rho G'(rho)); beta = (rho G'' + G' - rho G'^2) / (rho^2 G'^3)
      if (root.exact && cf->g1_exact && cf->g2_exact) {
        auto d1 = cf->g1_exact(*root.exact);
        auto d2 = cf->g2_exact(*root.exact);
        if (d1 && d2) {
          const mpq_class rho = *root.exact;
          rep.alpha_exact = 1 / (rho * *d1);
          rep.beta_exact = (rho * *d2 + *d1 - rho * *d1 * *d1) / (rho * rho * *d1 * *d1 * *d1);
          rep.alpha = rep.alpha_exact->get_d();
          rep.beta = rep.beta_exact->get_d();
        }
      }
      if (!rep.alpha && cf->g1 && cf->g2) {
        const double rho = root.value;
        const double d1 = cf->g1(rho);
        const double d2 = cf->g2(rho);
        rep.alpha = 1.0 / (rho * d1);
        rep.beta = (rho * d2 + d1 - rho * d1 * d1) / (rho * rho * d1 * d1 * d1);
      }
      return rep;
    }

    // No crossing below the radius: tau decides.
    if (cf->radius_exact && cf->g_exact) {
      if (auto tau = cf->g_exact(*cf->radius_exact)) {
        rep.tau_exact = tau;
        rep.tau = tau->get_d();
        rep.exact = true;
        rep.classification = *tau < 1   ? Criticality::subcritical
                             : *tau == 1 ? Criticality::critical
                                         : Criticality::supercritical;
        return rep;
      }
    }
    const double x = cf->radius * (1.0 - std::ldexp(1.0, -50));
    rep.tau = cf->g(x);
    const double tol = rep.tolerance;
    rep.classification = std::abs(rep.tau - 1.0) <= tol ? Criticality::critical
                         : rep.tau < 1.0               ? Criticality::subcritical
                                                        : Criticality::supercritical;
    return rep;
  }

  // Coefficient-only route: radius from trailing coefficient ratios, tau by
  // truncated evaluation. Estimates, never certificates.
  double ratio_sum = 0;
  int ratio_count = 0;
  for (int n = (3 * terms) / 4; n < terms; ++n) {
    if (g[n] != 0 && g[n + 1] != 0) {
      ratio_sum += mpq_class(g[n] / g[n + 1]).get_d();
      ++ratio_count;
    }
  }
  const bool entire = ratio_count == 0;  // polynomial-like tail
  const double radius = entire ? kInf : ratio_sum / ratio_count;
  rep.radius = radius;

  const auto eval_g = [&g](const mpq_class& x) {
    mpq_class acc = 0;
    for (int n = g.order(); n >= 0; --n) acc = acc * x + g[n];
    return acc;
  };

  std::optional<mpq_class> super_hi;
  for (int k = 1; k <= 40 && !super_hi; ++k) {
    mpq_class x = entire ? mpq_class(mpz_class(1) << (k - 1))
                         : mpq_class(radius) * (1 - mpq_class(mpz_class(1), mpz_class(1) << k));
    if (eval_g(x) > 1) super_hi = x;
  }
  if (super_hi) {
    rep.classification = Criticality::supercritical;
    rep.tau = kInf;
    UnitRoot root = find_unit_root(
        [&eval_g](const mpq_class& x) -> std::optional<mpq_class> { return eval_g(x); },
        [&eval_g](double x) { return mpq_class(eval_g(mpq_class(x))).get_d(); }, mpq_class(0),
        *super_hi);
    rep.rho = root.value;  // truncation makes every scalar on this route an estimate
    const mpq_class rho_q = root.exact ? *root.exact : mpq_class(root.value);
    const double d1 = mpq_class(evaluate_derivative(g, rho_q, 1)).get_d();
    const double d2 = mpq_class(evaluate_derivative(g, rho_q, 2)).get_d();
    const double rho = root.value;
    rep.alpha = 1.0 / (rho * d1);
    rep.beta = (rho * d2 + d1 - rho * d1 * d1) / (rho * rho * d1 * d1 * d1);
    return rep;
  }

  rep.tau = mpq_class(eval_g(mpq_class(radius))).get_d();
  const double tol = rep.tolerance;
  rep.classification = std::abs(rep.tau - 1.0) <= tol ? Criticality::critical
                       : rep.tau < 1.0               ? Criticality::subcritical
                                                      : Criticality::supercritical;
  return rep;
}

const DiagnosticSequence& DiagnosticsReport::find(const std::string& name) const {
  for (const auto& s : sequences) {
    if (s.name == name) return s;
  }
  throw std::out_of_range("no diagnostic sequence named '" + name + "'");
}

DiagnosticsReport subcritical_diagnostics(const ClassSpec& cls, int terms) {
  const SchemaReport rep = schema_classify(cls, terms, mpq_class(1, 100));
  if (rep.classification != Criticality::subcritical) {
    throw std::invalid_argument("class '" + cls.name() + "' is not subcritical");
  }
  const double tau = rep.tau_exact ? rep.tau_exact->get_d() : rep.tau;

  const Series f = cls.class_series(terms);
  const Series g = cls.indecomposable_series(terms);
  const Series af = affine_from_class(f);
  const Series f_squared = f * f;

  std::vector<std::pair<int, double>> ratio_gf, ratio_affine, mean_blocks;
  for (int n : checkpoints(terms)) {
    ratio_gf.emplace_back(n, mpq_class(g[n] / f[n]).get_d());
    ratio_affine.emplace_back(n, mpq_class(af[n] / (n * f[n])).get_d() / (1.0 - tau));
    mpq_class m = 0;  // [x^n] G F^2
    for (int i = 1; i <= n; ++i) m += g[i] * f_squared[n - i];
    mean_blocks.emplace_back(n, mpq_class(m / f[n]).get_d());
  }

  DiagnosticsReport out;
  out.title = "subcritical limits for " + cls.name();
  out.sequences.push_back(make_sequence("g_over_f", (1.0 - tau) * (1.0 - tau), std::move(ratio_gf)));
  out.sequences.push_back(make_sequence("affine_over_scaled_nf", 1.0, std::move(ratio_affine)));
  out.sequences.push_back(make_sequence("mean_blocks", (1.0 + tau) / (1.0 - tau), std::move(mean_blocks)));
  return out;
}

DiagnosticsReport supercritical_diagnostics(const ClassSpec& cls, int terms) {
  const SchemaReport rep = schema_classify(cls, terms, mpq_class(1, 100));
  if (rep.classification != Criticality::supercritical) {
    throw std::invalid_argument("class '" + cls.name() + "' is not supercritical");
  }
  const double alpha = rep.alpha_exact ? rep.alpha_exact->get_d() : rep.alpha.value_or(0);
  const double beta = rep.beta_exact ? rep.beta_exact->get_d() : rep.beta.value_or(0);
  const double log_rho = rep.rho_exact ? log_of(*rep.rho_exact) : std::log(*rep.rho);

  const Series f = cls.class_series(terms);
  const Series g = cls.indecomposable_series(terms);
  const Series af = affine_from_class(f);
  const Series f2 = f * f;
  const Series f3 = f2 * f;
  const Series gg = g * g;

  std::vector<std::pair<int, double>> f_scaled, af_scaled, mean_over_n, var_over_n;
  for (int n : checkpoints(terms)) {
    if (rep.rho_exact) {
      mpq_class power = 1;
      for (int i = 0; i < n; ++i) power *= *rep.rho_exact;
      f_scaled.emplace_back(n, mpq_class(f[n] * power).get_d());
      af_scaled.emplace_back(n, mpq_class(af[n] * power).get_d());
    } else {
      f_scaled.emplace_back(n, scaled_power(f[n], log_rho, n));
      af_scaled.emplace_back(n, scaled_power(af[n], log_rho, n));
    }
    mpq_class m = 0, m2 = 0;  // [x^n] of G F^2 and of G (1+G) F^3
    for (int i = 1; i <= n; ++i) {
      m += g[i] * f2[n - i];
      m2 += (g[i] + gg[i]) * f3[n - i];
    }
    const mpq_class mean = m / f[n];
    const mpq_class variance = m2 / f[n] - mean * mean;
    mean_over_n.emplace_back(n, mpq_class(mean / n).get_d());
    var_over_n.emplace_back(n, mpq_class(variance / n).get_d());
  }

  DiagnosticsReport out;
  out.title = "supercritical limits for " + cls.name();
  out.sequences.push_back(make_sequence("f_times_rho_n", alpha, std::move(f_scaled)));
  out.sequences.push_back(make_sequence("affine_times_rho_n", 1.0, std::move(af_scaled)));
  out.sequences.push_back(make_sequence("mean_blocks_over_n", alpha, std::move(mean_over_n)));
  out.sequences.push_back(make_sequence("var_blocks_over_n", beta, std::move(var_over_n)));
  return out;
}

namespace {

mpq_class q_statistic_from_table(const CountTable& d, int m) {
  mpz_class num = 0;
  for (int k = 0; k <= m; ++k) {
    num += binomial(static_cast<unsigned long>(m), static_cast<unsigned long>(k)) * d.at(m, k);
  }
  mpz_class denom = factorial(static_cast<unsigned long>(m));
  denom <<= m;
  mpq_class q(num, denom);
  q.canonicalize();
  return q;
}

}  // namespace

mpq_class q_statistic(int m) {
  if (m < 0) throw std::invalid_argument("negative index");
  return q_statistic_from_table(derangement_eulerian_table(m), m);
}

DiagnosticsReport bounded_total_diagnostics(int max_index) {
  if (max_index < 4) throw std::invalid_argument("need at least four terms");
  const auto points = checkpoints(max_index);
  const CountTable a = eulerian_table(max_index);

  // d rows only at the checkpoints, straight from the alternating sum.
  std::vector<std::pair<int, double>> q_seq, count_seq;
  for (int m : points) {
    CountTable d(m);
    for (int k = 0; k <= m; ++k) {
      mpz_class sum = 0;
      for (int j = 0; j <= m - k; ++j) {
        mpz_class term = binomial(static_cast<unsigned long>(m), static_cast<unsigned long>(j)) *
                         a.at(m - j, k);
        if (j % 2 == 0) {
          sum += term;
        } else {
          sum -= term;
        }
      }
      d.entry(m, k) = sum;
    }
    q_seq.emplace_back(m, std::sqrt(static_cast<double>(m)) * q_statistic_from_table(d, m).get_d());

    mpz_class count = 0;  // total bounded-affine count via the Eulerian-table formula
    for (int p = 0; p <= m; ++p) {
      mpz_class inner = 0;
      for (int k = 0; k <= p; ++k) {
        if (m - k < 0 || m - k > p) continue;
        inner += binomial(static_cast<unsigned long>(p), static_cast<unsigned long>(m - k)) * a.at(p, k);
      }
      if ((m - p) % 2 != 0) inner = -inner;
      count += binomial(static_cast<unsigned long>(m), static_cast<unsigned long>(p)) * inner;
    }
    mpz_class denom = factorial(static_cast<unsigned long>(m));
    denom <<= m;
    mpq_class ratio(count, denom);
    ratio.canonicalize();
    count_seq.emplace_back(m, std::sqrt(static_cast<double>(m)) * ratio.get_d());
  }

  const double pi = 3.14159265358979323846;
  DiagnosticsReport out;
  out.title = "total bounded-affine asymptotics";
  out.sequences.push_back(
      make_sequence("sqrt_m_q_m", std::exp(-1.0) * std::sqrt(3.0 / (2.0 * pi)), std::move(q_seq)));
  out.sequences.push_back(
      make_sequence("count_ratio_sqrt_n", std::sqrt(3.0 / (2.0 * pi * std::exp(1.0))), std::move(count_seq)));
  return out;
}

namespace {

// Polynomials in one variable over the rationals, for the bivariate check.
struct Poly {
  std::vector<mpq_class> c;

  Poly() = default;
  explicit Poly(int v) {
    if (v != 0) c.assign(1, mpq_class(v));
  }
  explicit Poly(mpq_class v) {
    if (v != 0) c.assign(1, std::move(v));
  }

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  mpq_class coeff(int k) const {
    return k >= 0 && k < static_cast<int>(c.size()) ? c[static_cast<size_t>(k)] : mpq_class(0);
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly out;
    out.c.resize(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < out.c.size(); ++i) {
      if (i < a.c.size()) out.c[i] += a.c[i];
      if (i < b.c.size()) out.c[i] += b.c[i];
    }
    out.trim();
    return out;
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  Poly operator-() const {
    Poly out = *this;
    for (auto& x : out.c) x = -x;
    return out;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.c.empty() || b.c.empty()) return Poly();
    Poly out;
    out.c.resize(a.c.size() + b.c.size() - 1);
    for (size_t i = 0; i < a.c.size(); ++i) {
      for (size_t j = 0; j < b.c.size(); ++j) out.c[i + j] += a.c[i] * b.c[j];
    }
    out.trim();
    return out;
  }
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  bool operator==(const Poly&) const = default;
};

Poly series_coef_inverse(const Poly& p) {
  if (p.degree() != 0) throw std::domain_error("constant term is not an invertible polynomial");
  return Poly(1 / p.c[0]);
}

}  // namespace

BivariateReport bivariate_check(int max_n) {
  if (max_n < 0 || max_n > 12) throw std::invalid_argument("bivariate check supports 0 <= n <= 12");
  BivariateReport rep;
  rep.max_n = max_n;

  // A = 1 / (1 - sum_{j>=1} (u-1)^{j-1} z^j / j!), the closed form with the
  // (u-1) factor cancelled so the constant term is 1.
  SeriesT<Poly> tail(max_n);
  Poly u_minus_1;
  u_minus_1.c = {mpq_class(-1), mpq_class(1)};
  Poly power(1);
  mpq_class inv_factorial = 1;
  for (int j = 1; j <= max_n; ++j) {
    inv_factorial /= j;
    Poly term = power;
    for (auto& x : term.c) x *= inv_factorial;
    tail[j] = term;
    power = power * u_minus_1;
  }
  const SeriesT<Poly> a_series = (SeriesT<Poly>::one(max_n) - tail).reciprocal();

  SeriesT<Poly> exp_minus_z(max_n);
  mpq_class coef = 1;
  for (int j = 0; j <= max_n; ++j) {
    exp_minus_z[j] = Poly(coef);
    coef /= -(j + 1);
  }
  const SeriesT<Poly> d_series = exp_minus_z * a_series;

  const CountTable a_table = eulerian_table(max_n);
  const CountTable d_table = derangement_eulerian_table(max_n);

  mpq_class factorial_n = 1;
  for (int n = 0; n <= max_n; ++n) {
    if (n > 0) factorial_n *= n;
    for (int k = 0; k <= std::max(n, a_series[n].degree()); ++k) {
      const mpq_class from_a = a_series[n].coeff(k) * factorial_n;
      const mpq_class from_d = d_series[n].coeff(k) * factorial_n;
      if (from_a != mpq_class(a_table.at(n, k)) || from_d != mpq_class(d_table.at(n, k))) {
        rep.detail = "mismatch at n=" + std::to_string(n) + " k=" + std::to_string(k);
        return rep;
      }
    }
  }
  rep.passed = true;
  rep.detail = "coefficients match through n=" + std::to_string(max_n);
  return rep;
}

}  // namespace bap
