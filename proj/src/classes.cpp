#include "bap/classes.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <stdexcept>

#include <json.hpp>

namespace bap {

namespace {

// Exact square root of a non-negative rational, when it is rational.
std::optional<mpq_class> rational_sqrt(const mpq_class& x) {
  if (x < 0) return std::nullopt;
  const mpz_class num = x.get_num();
  const mpz_class den = x.get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) == 0) return std::nullopt;
  if (mpz_perfect_square_p(den.get_mpz_t()) == 0) return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  return mpq_class(rn) / mpq_class(rd);
}

// Lazily extended integer sequence; extension is guarded so that the
// generators stay pure under concurrent use.
struct SequenceCache {
  std::mutex mutex;
  std::vector<mpz_class> values;
  explicit SequenceCache(std::vector<mpz_class> seed) : values(std::move(seed)) {}

  mpz_class get(int n, const std::function<mpz_class(const std::vector<mpz_class>&)>& extend) {
    std::lock_guard<std::mutex> lock(mutex);
    while (static_cast<int>(values.size()) <= n) values.push_back(extend(values));
    return values[static_cast<size_t>(n)];
  }
};

std::function<mpq_class(int)> catalan_generator() {
  auto cache = std::make_shared<SequenceCache>(std::vector<mpz_class>{1});
  return [cache](int n) {
    return mpq_class(cache->get(n, [](const std::vector<mpz_class>& c) {
      const long m = static_cast<long>(c.size());  // C(m) = C(m-1) * 2(2m-1)/(m+1)
      mpz_class next = c.back() * 2 * (2 * m - 1);
      mpz_divexact_ui(next.get_mpz_t(), next.get_mpz_t(), static_cast<unsigned long>(m + 1));
      return next;
    }));
  };
}

std::function<mpq_class(int)> schroeder_generator() {
  // sizes counted by the large Schroeder numbers, offset by one
  auto cache = std::make_shared<SequenceCache>(std::vector<mpz_class>{1, 2});
  return [cache](int n) -> mpq_class {
    if (n == 0) return 1;
    return mpq_class(cache->get(n - 1, [](const std::vector<mpz_class>& r) {
      const long m = static_cast<long>(r.size());  // (m+1) r_m = 3(2m-1) r_{m-1} - (m-2) r_{m-2}
      mpz_class next = 3 * (2 * m - 1) * r[static_cast<size_t>(m) - 1] - (m - 2) * r[static_cast<size_t>(m) - 2];
      mpz_divexact_ui(next.get_mpz_t(), next.get_mpz_t(), static_cast<unsigned long>(m + 1));
      return next;
    }));
  };
}

std::function<mpq_class(int)> factorial_generator() {
  auto cache = std::make_shared<SequenceCache>(std::vector<mpz_class>{1});
  return [cache](int n) {
    return mpq_class(cache->get(n, [](const std::vector<mpz_class>& c) {
      return mpz_class(c.back() * static_cast<long>(c.size()));
    }));
  };
}

// (1 + c x)^(3/2) as an exact series, via the generalized binomial expansion.
Series binomial_three_halves(const mpq_class& c, int order) {
  Series out(order);
  mpq_class coef = 1;
  mpq_class exponent(3, 2);
  for (int k = 0; k <= order; ++k) {
    out[k] = coef;
    coef *= (exponent - k) * c;
    coef /= k + 1;
  }
  return out;
}

// Counts of the members of the class avoiding 3142, from the closed form of
// its generating function: 32x / (1 + 20x - 8x^2 - (1-8x)^(3/2)).
std::function<mpq_class(int)> s3142_generator() {
  struct Cache {
    std::mutex mutex;
    int order = -1;
    Series f{0};
  };
  auto cache = std::make_shared<Cache>();
  return [cache](int n) {
    std::lock_guard<std::mutex> lock(cache->mutex);
    if (cache->order < n) {
      const int order = std::max({2 * n, 64, cache->order * 2});
      Series denom(order + 1);
      denom[0] = 1;
      denom[1] = 20;
      denom[2] = -8;
      denom = denom - binomial_three_halves(-8, order + 1);
      Series shifted(order);  // denom / x, exact because denom has no constant term
      for (int i = 0; i <= order; ++i) shifted[i] = denom[i + 1] / 32;
      cache->f = shifted.reciprocal();
      cache->order = order;
    }
    return cache->f[n];
  };
}

ClosedForm catalan_closed_form() {
  ClosedForm cf;
  cf.g = [](double x) { return (1.0 - std::sqrt(1.0 - 4.0 * x)) / 2.0; };
  cf.g_exact = [](const mpq_class& x) -> std::optional<mpq_class> {
    auto root = rational_sqrt(1 - 4 * x);
    if (!root) return std::nullopt;
    return (1 - *root) / 2;
  };
  cf.radius = 0.25;
  cf.radius_exact = mpq_class(1, 4);
  return cf;
}

ClosedForm layered_closed_form() {
  ClosedForm cf;
  cf.g = [](double x) { return x / (1.0 - x); };
  cf.g1 = [](double x) { return 1.0 / ((1.0 - x) * (1.0 - x)); };
  cf.g2 = [](double x) { return 2.0 / std::pow(1.0 - x, 3.0); };
  cf.g_exact = [](const mpq_class& x) -> std::optional<mpq_class> {
    if (x == 1) return std::nullopt;
    return x / (1 - x);
  };
  cf.g1_exact = [](const mpq_class& x) -> std::optional<mpq_class> {
    if (x == 1) return std::nullopt;
    mpq_class d = 1 - x;
    return 1 / (d * d);
  };
  cf.g2_exact = [](const mpq_class& x) -> std::optional<mpq_class> {
    if (x == 1) return std::nullopt;
    mpq_class d = 1 - x;
    return 2 / (d * d * d);
  };
  cf.radius = 1.0;
  cf.radius_exact = mpq_class(1);
  return cf;
}

ClosedForm separable_closed_form() {
  // F = (3 - x - sqrt(1 - 6x + x^2)) / 2, G = 1 - 1/F
  ClosedForm cf;
  cf.g = [](double x) {
    const double f = (3.0 - x - std::sqrt(1.0 - 6.0 * x + x * x)) / 2.0;
    return 1.0 - 1.0 / f;
  };
  cf.g_exact = [](const mpq_class& x) -> std::optional<mpq_class> {
    auto root = rational_sqrt(1 - 6 * x + x * x);
    if (!root) return std::nullopt;
    mpq_class f = (3 - x - *root) / 2;
    if (f == 0) return std::nullopt;
    return 1 - 1 / f;
  };
  cf.radius = 3.0 - 2.0 * std::sqrt(2.0);
  return cf;
}

ClosedForm s3142_closed_form() {
  // F = 32x / (1 + 20x - 8x^2 - (1-8x)^(3/2)), G = 1 - 1/F
  ClosedForm cf;
  cf.g = [](double x) {
    if (x == 0.0) return 0.0;
    const double f = 32.0 * x / (1.0 + 20.0 * x - 8.0 * x * x - std::pow(1.0 - 8.0 * x, 1.5));
    return 1.0 - 1.0 / f;
  };
  cf.g_exact = [](const mpq_class& x) -> std::optional<mpq_class> {
    if (x == 0) return mpq_class(0);
    auto root = rational_sqrt(1 - 8 * x);
    if (!root) return std::nullopt;
    mpq_class denom = 1 + 20 * x - 8 * x * x - (*root) * (*root) * (*root);
    if (denom == 0) return std::nullopt;
    mpq_class f = 32 * x / denom;
    if (f == 0) return std::nullopt;
    return 1 - 1 / f;
  };
  cf.radius = 0.125;
  cf.radius_exact = mpq_class(1, 8);
  return cf;
}

ClosedForm fibonacci2_closed_form() {
  ClosedForm cf;
  cf.g = [](double x) { return x + x * x; };
  cf.g1 = [](double x) { return 1.0 + 2.0 * x; };
  cf.g2 = [](double) { return 2.0; };
  cf.g_exact = [](const mpq_class& x) -> std::optional<mpq_class> { return x + x * x; };
  cf.g1_exact = [](const mpq_class& x) -> std::optional<mpq_class> { return 1 + 2 * x; };
  cf.g2_exact = [](const mpq_class&) -> std::optional<mpq_class> { return mpq_class(2); };
  cf.radius = std::numeric_limits<double>::infinity();
  return cf;
}

// Indecomposable counts matching the catalan class below size 3, all
// indecomposables through size 7, and a calibrated count at size 8; the
// resulting schema sits exactly on the critical line.
const long kCriticalDelta[] = {0, 0, 0, 1, 8, 57, 419, 3315, 6084};

ClosedForm critical_example_closed_form() {
  ClosedForm cf;
  cf.g = [](double x) {
    double acc = (1.0 - std::sqrt(1.0 - 4.0 * x)) / 2.0;
    double p = 1.0;
    for (int i = 1; i <= 8; ++i) {
      p *= x;
      acc += static_cast<double>(kCriticalDelta[i]) * p;
    }
    return acc;
  };
  cf.g_exact = [](const mpq_class& x) -> std::optional<mpq_class> {
    auto root = rational_sqrt(1 - 4 * x);
    if (!root) return std::nullopt;
    mpq_class acc = (1 - *root) / 2;
    mpq_class p = 1;
    for (int i = 1; i <= 8; ++i) {
      p *= x;
      acc += kCriticalDelta[i] * p;
    }
    return acc;
  };
  cf.radius = 0.25;
  cf.radius_exact = mpq_class(1, 4);
  return cf;
}

mpq_class json_coefficient(const nlohmann::json& v) {
  if (v.is_number_unsigned()) return mpq_class(static_cast<unsigned long>(v.get<unsigned long long>()));
  if (v.is_number_integer()) return mpq_class(static_cast<long>(v.get<long long>()));
  if (v.is_string()) return mpq_class(v.get<std::string>());
  throw std::invalid_argument("coefficients must be integers or strings");
}

}  // namespace

ClassSpec ClassSpec::builtin(const std::string& name) {
  ClassSpec spec;
  spec.name_ = name;
  if (name == "catalan") {
    spec.generator_is_f_ = true;
    spec.gen_ = catalan_generator();
    spec.closed_ = catalan_closed_form();
  } else if (name == "layered") {
    spec.generator_is_f_ = false;
    spec.gen_ = [](int n) { return mpq_class(n >= 1 ? 1 : 0); };
    spec.closed_ = layered_closed_form();
  } else if (name == "separable") {
    spec.generator_is_f_ = true;
    spec.gen_ = schroeder_generator();
    spec.closed_ = separable_closed_form();
  } else if (name == "s3142") {
    spec.generator_is_f_ = true;
    spec.gen_ = s3142_generator();
    spec.closed_ = s3142_closed_form();
  } else if (name == "fibonacci2") {
    spec.generator_is_f_ = false;
    spec.gen_ = [](int n) { return mpq_class(n == 1 || n == 2 ? 1 : 0); };
    spec.closed_ = fibonacci2_closed_form();
  } else if (name == "full") {
    spec.generator_is_f_ = true;
    spec.gen_ = factorial_generator();
  } else if (name == "critical-example") {
    spec.generator_is_f_ = false;
    auto catalan = catalan_generator();
    spec.gen_ = [catalan](int n) -> mpq_class {
      if (n < 1) return 0;
      mpq_class g = catalan(n - 1);
      if (n <= 8) g += kCriticalDelta[n];
      return g;
    };
    spec.closed_ = critical_example_closed_form();
  } else {
    throw std::invalid_argument("unknown class '" + name + "'");
  }
  return spec;
}

std::vector<std::string> ClassSpec::builtin_names() {
  return {"catalan", "layered", "separable", "s3142", "fibonacci2", "full", "critical-example"};
}

ClassSpec ClassSpec::from_class_counts(std::string name, std::vector<mpq_class> f) {
  if (f.empty() || f[0] != 1) throw std::invalid_argument("class counts must start with f_0 = 1");
  ClassSpec spec;
  spec.name_ = std::move(name);
  spec.generator_is_f_ = true;
  spec.gen_ = [f = std::move(f)](int n) {
    if (n < 0 || n >= static_cast<int>(f.size())) {
      throw std::invalid_argument("class provides only " + std::to_string(f.size()) +
                                  " coefficients");
    }
    return f[static_cast<size_t>(n)];
  };
  return spec;
}

ClassSpec ClassSpec::from_indecomposable_counts(std::string name, std::vector<mpq_class> g) {
  if (g.empty() || g[0] != 0) {
    throw std::invalid_argument("indecomposable counts must start with g_0 = 0");
  }
  ClassSpec spec;
  spec.name_ = std::move(name);
  spec.generator_is_f_ = false;
  spec.gen_ = [g = std::move(g)](int n) {
    if (n < 0) throw std::invalid_argument("negative index");
    if (n >= static_cast<int>(g.size())) return mpq_class(0);  // finitely many indecomposables
    return g[static_cast<size_t>(n)];
  };
  return spec;
}

ClassSpec ClassSpec::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open class file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed class file: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw std::invalid_argument("class file must hold a JSON object");
  const bool has_f = doc.contains("f");
  const bool has_g = doc.contains("g");
  if (has_f == has_g) throw std::invalid_argument("class file must define exactly one of f or g");

  std::string name = doc.value("name", std::string("file"));
  const auto& arr = has_f ? doc.at("f") : doc.at("g");
  if (!arr.is_array() || arr.empty()) throw std::invalid_argument("coefficients must be a nonempty array");
  std::vector<mpq_class> coeffs;
  coeffs.reserve(arr.size());
  for (const auto& v : arr) coeffs.push_back(json_coefficient(v));
  return has_f ? from_class_counts(std::move(name), std::move(coeffs))
               : from_indecomposable_counts(std::move(name), std::move(coeffs));
}

Series ClassSpec::class_series(int order) const {
  Series s(order);
  if (generator_is_f_) {
    for (int n = 0; n <= order; ++n) s[n] = gen_(n);
    if (s[0] != 1) throw std::invalid_argument("class counts must have f_0 = 1");
    return s;
  }
  for (int n = 0; n <= order; ++n) s[n] = gen_(n);  // s = G
  return (Series::one(order) - s).reciprocal();
}

Series ClassSpec::indecomposable_series(int order) const {
  if (!generator_is_f_) {
    Series s(order);
    for (int n = 0; n <= order; ++n) s[n] = gen_(n);
    if (s[0] != 0) throw std::invalid_argument("indecomposable counts must have g_0 = 0");
    return s;
  }
  return indecomposables_from_class(class_series(order));
}

Series ClassSpec::affine_series(int order) const { return affine_from_class(class_series(order)); }

Series indecomposables_from_class(const Series& f) {
  if (f[0] != 1) throw std::invalid_argument("class series must have constant term 1");
  return Series::one(f.order()) - f.reciprocal();
}

Series affine_from_class(const Series& f) {
  if (f[0] != 1) throw std::invalid_argument("class series must have constant term 1");
  const Series by_log_derivative = f.derivative().shifted_up() * f.reciprocal();

  const Series g = indecomposables_from_class(f);
  Series by_convolution(f.order());
  for (int n = 1; n <= f.order(); ++n) {
    mpq_class acc = 0;
    for (int k = 1; k <= n; ++k) acc += k * g[k] * f[n - k];
    by_convolution[n] = acc;
  }

  if (by_log_derivative != by_convolution) {
    throw std::logic_error("affine count routes disagree");
  }
  return by_convolution;
}

std::vector<mpq_class> block_distribution(const Series& f, int n) {
  if (n < 1 || n > f.order()) throw std::invalid_argument("index outside the series order");
  if (f[n] == 0) throw std::invalid_argument("no members of this size");
  const Series g = indecomposables_from_class(f);
  std::vector<mpq_class> dist(static_cast<size_t>(n));
  Series power = g;
  for (int k = 1; k <= n; ++k) {
    dist[static_cast<size_t>(k) - 1] = power[n] / f[n];
    if (k < n) power = power * g;
  }
  return dist;
}

std::vector<mpq_class> first_block_distribution(const Series& f, int n) {
  if (n < 1 || n > f.order()) throw std::invalid_argument("index outside the series order");
  if (f[n] == 0) throw std::invalid_argument("no members of this size");
  const Series g = indecomposables_from_class(f);
  std::vector<mpq_class> dist(static_cast<size_t>(n));
  for (int j = 1; j <= n; ++j) dist[static_cast<size_t>(j) - 1] = g[j] * f[n - j] / f[n];
  return dist;
}

}  // namespace bap
