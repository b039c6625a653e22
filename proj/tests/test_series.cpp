#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <thread>

#include "bap/classes.hpp"
#include "bap/counting.hpp"
#include "bap/series.hpp"
#include "oracles.hpp"

using bap::ClassSpec;
using bap::Perm;
using bap::Series;

namespace {

Perm P(const char* s) { return Perm::parse(s); }

Series from_ints(std::vector<long> v) {
  Series s(static_cast<int>(v.size()) - 1);
  for (size_t i = 0; i < v.size(); ++i) s[static_cast<int>(i)] = mpq_class(v[i]);
  return s;
}

const std::vector<Perm>& patterns_for(const std::string& name) {
  static const std::map<std::string, std::vector<Perm>> table{
      {"catalan", {P("231")}},
      {"layered", {P("312"), P("231")}},
      {"separable", {P("3142"), P("2413")}},
      {"s3142", {P("3142")}},
      {"fibonacci2", {P("321"), P("312"), P("231")}},
      {"full", {}},
  };
  return table.at(name);
}

}  // namespace

TEST_CASE("series arithmetic basics") {
  const Series f = from_ints({1, 1, 2, 5, 14, 42});
  CHECK(f * f.reciprocal() == Series::one(5));
  const Series d = f.derivative();
  CHECK(d[0] == 1);
  CHECK(d[1] == 4);
  CHECK(d[2] == 15);
  CHECK(d.shifted_up()[3] == 15);
  CHECK(evaluate(from_ints({1, 2, 1}), mpq_class(1, 2)) == mpq_class(9, 4));
  CHECK_THROWS_AS(from_ints({0, 1}).reciprocal(), std::domain_error);
}

TEST_CASE("indecomposables from the class counts") {
  CHECK(bap::indecomposables_from_class(from_ints({1, 1, 2, 5, 14})) ==
        from_ints({0, 1, 1, 2, 5}));
  CHECK(bap::indecomposables_from_class(from_ints({1, 1, 2, 4, 8})) == from_ints({0, 1, 1, 1, 1}));
  CHECK(bap::indecomposables_from_class(from_ints({1, 1, 1, 1, 1})) == from_ints({0, 1, 0, 0, 0}));
  CHECK_THROWS_AS(bap::indecomposables_from_class(from_ints({2, 1})), std::invalid_argument);
}

TEST_CASE("affine counts by both routes") {
  const Series cat = bap::affine_from_class(ClassSpec::builtin("catalan").class_series(5));
  CHECK(cat == from_ints({0, 1, 3, 10, 35, 126}));

  const Series lay = ClassSpec::builtin("layered").affine_series(4);
  CHECK(lay == from_ints({0, 1, 3, 7, 15}));

  const Series sep = ClassSpec::builtin("separable").affine_series(5);
  CHECK(sep == from_ints({0, 1, 3, 13, 63, 321}));
}

TEST_CASE("affine count bounds and route agreement for every builtin") {
  const int order = 200;
  for (const std::string& name : ClassSpec::builtin_names()) {
    const ClassSpec cls = ClassSpec::builtin(name);
    const Series f = cls.class_series(order);
    const Series g = cls.indecomposable_series(order);
    const Series af = cls.affine_series(order);  // cross-checks the two routes internally
    for (int n = 1; n <= order; ++n) {
      CHECK(af[n] >= n * g[n]);
      CHECK(af[n] >= f[n]);
      CHECK(af[n] <= n * f[n]);
    }
  }
}

TEST_CASE("catalan affine counts in closed form") {
  const Series af = ClassSpec::builtin("catalan").affine_series(200);
  for (int n = 1; n <= 200; ++n) {
    const mpq_class expected(bap::binomial(2 * static_cast<unsigned long>(n),
                                           static_cast<unsigned long>(n)) /
                             2);
    CHECK(af[n] == expected);
  }
}

TEST_CASE("class counts match brute-force avoider enumeration") {
  for (const char* name : {"catalan", "layered", "separable", "s3142", "fibonacci2", "full"}) {
    const Series f = ClassSpec::builtin(name).class_series(6);
    for (int n = 0; n <= 6; ++n) {
      CHECK(f[n] == mpq_class(static_cast<long>(
                        bap::enumerate_avoiders(n, patterns_for(name)).size())));
    }
  }
}

TEST_CASE("s3142 class counts") {
  const Series f = ClassSpec::builtin("s3142").class_series(8);
  CHECK(f == from_ints({1, 1, 2, 6, 23, 103, 512, 2740, 15485}));
}

namespace {

// (1 + c x)^e expanded by the generalized binomial theorem; independent of
// the library's series machinery except for the container.
Series power_series(const mpq_class& exponent, const mpq_class& c, int order) {
  Series out(order);
  mpq_class coef = 1;
  for (int k = 0; k <= order; ++k) {
    out[k] = coef;
    coef *= (exponent - k) * c;
    coef /= k + 1;
  }
  return out;
}

}  // namespace

TEST_CASE("affine series agree with their closed forms") {
  const int order = 80;

  // catalan: 2 F~ + 1 = (1 - 4x)^(-1/2)
  const Series cat = ClassSpec::builtin("catalan").affine_series(order);
  Series lhs = cat + cat + Series::one(order);
  CHECK(lhs == power_series(mpq_class(-1, 2), -4, order));

  // s3142: 2 (1 + x) F~ = 1 - 2x - (1 - 8x)^(1/2)
  const Series af = ClassSpec::builtin("s3142").affine_series(order);
  Series one_plus_x(order);
  one_plus_x[0] = 1;
  one_plus_x[1] = 1;
  Series rhs = Series(order) - power_series(mpq_class(1, 2), -8, order);
  rhs[0] += 1;
  rhs[1] -= 2;
  CHECK((one_plus_x * af) + (one_plus_x * af) == rhs);
}

TEST_CASE("s3142 affine counts match the binomial sum") {
  // affine count = sum_{k=0}^{n-1} ((n-k)/n) C(n-1+k, k) 2^k
  const Series af = ClassSpec::builtin("s3142").affine_series(30);
  for (int n = 1; n <= 30; ++n) {
    mpq_class expected = 0;
    mpz_class power = 1;
    for (int k = 0; k < n; ++k) {
      mpq_class ratio(n - k, n);
      ratio.canonicalize();
      expected += ratio * mpq_class(bap::binomial(static_cast<unsigned long>(n - 1 + k),
                                                  static_cast<unsigned long>(k)) *
                                    power);
      power *= 2;
    }
    CHECK(af[n] == expected);
  }
}

TEST_CASE("separable indecomposables are exactly half the class counts") {
  const ClassSpec cls = ClassSpec::builtin("separable");
  const Series f = cls.class_series(60);
  const Series g = cls.indecomposable_series(60);
  for (int n = 2; n <= 60; ++n) CHECK(2 * g[n] == f[n]);
}

TEST_CASE("class specs can be shared between threads") {
  const ClassSpec cls = ClassSpec::builtin("catalan");
  Series a(64), b(64);
  std::thread t1([&] { a = cls.class_series(64); });
  std::thread t2([&] { b = cls.class_series(64); });
  t1.join();
  t2.join();
  CHECK(a == b);
  CHECK(a[10] == mpq_class(16796));
}

TEST_CASE("affine count of the full class counts the next indecomposables") {
  const Series af = ClassSpec::builtin("full").affine_series(7);
  const auto g = bap::indecomposable_counts(8);
  for (int n = 1; n <= 7; ++n) CHECK(af[n] == mpq_class(g[static_cast<size_t>(n) + 1]));
}

TEST_CASE("block count distribution") {
  const Series layered = ClassSpec::builtin("layered").class_series(8);
  const auto dist = bap::block_distribution(layered, 3);
  REQUIRE(dist.size() == 3);
  CHECK(dist[0] == mpq_class(1, 4));
  CHECK(dist[1] == mpq_class(1, 2));
  CHECK(dist[2] == mpq_class(1, 4));

  // block-scan oracle over the four layered permutations of size 3
  std::map<int, int> by_blocks;
  for (const Perm& p : bap::enumerate_avoiders(3, patterns_for("layered"))) {
    ++by_blocks[bap::sum_blocks(p).block_count];
  }
  CHECK(by_blocks[1] == 1);
  CHECK(by_blocks[2] == 2);
  CHECK(by_blocks[3] == 1);

  const Series identity_only = bap::ClassSpec::from_indecomposable_counts(
                                   "identity-only", {mpq_class(0), mpq_class(1)})
                                   .class_series(8);
  const auto only = bap::block_distribution(identity_only, 5);
  for (int k = 1; k <= 5; ++k) CHECK(only[static_cast<size_t>(k) - 1] == mpq_class(k == 5 ? 1 : 0));

  for (const std::string& name : ClassSpec::builtin_names()) {
    const Series f = ClassSpec::builtin(name).class_series(16);
    for (int n : {1, 4, 16}) {
      const auto d = bap::block_distribution(f, n);
      mpq_class total = 0;
      for (const auto& q : d) {
        total += q;
        CHECK(q >= 0);
      }
      CHECK(total == 1);
    }
  }

  // subcritical limit: P[k blocks] approaches (1-tau)^2 k tau^(k-1)
  const Series cat = ClassSpec::builtin("catalan").class_series(80);
  const auto catd = bap::block_distribution(cat, 80);
  for (int k = 1; k <= 3; ++k) {
    const double target = 0.25 * k * std::pow(0.5, k - 1);
    CHECK(std::abs(mpq_class(catd[static_cast<size_t>(k) - 1]).get_d() - target) < 0.03 * target);
  }
}

TEST_CASE("first block distribution") {
  const Series cat = ClassSpec::builtin("catalan").class_series(8);
  const auto dist = bap::first_block_distribution(cat, 4);
  REQUIRE(dist.size() == 4);
  CHECK(dist[0] == mpq_class(5, 14));
  CHECK(dist[1] == mpq_class(1, 7));
  CHECK(dist[2] == mpq_class(1, 7));
  CHECK(dist[3] == mpq_class(5, 14));

  const Series identity_only = bap::ClassSpec::from_indecomposable_counts(
                                   "identity-only", {mpq_class(0), mpq_class(1)})
                                   .class_series(8);
  const auto only = bap::first_block_distribution(identity_only, 6);
  CHECK(only[0] == 1);

  // P[first block has size 1] approaches g_1 * r = 1/4
  const Series big = ClassSpec::builtin("catalan").class_series(200);
  const auto bigd = bap::first_block_distribution(big, 200);
  CHECK(std::abs(mpq_class(bigd[0]).get_d() - 0.25) < 0.005);
  mpq_class total = 0;
  for (const auto& q : bigd) total += q;
  CHECK(total == 1);

  // bimodality: mass sits below b_n and above n - b_n
  const Series huge = ClassSpec::builtin("catalan").class_series(400);
  const auto huged = bap::first_block_distribution(huge, 400);
  double low = 0, mid = 0, high = 0;
  for (int j = 1; j <= 400; ++j) {
    const double v = mpq_class(huged[static_cast<size_t>(j) - 1]).get_d();
    (j <= 40 ? low : j > 360 ? high : mid) += v;
  }
  CHECK(std::abs(low - 0.5) < 0.1);
  CHECK(std::abs(high - 0.5) < 0.1);
  CHECK(mid < 0.1);
}

TEST_CASE("identities for the affine counts over brute-forced classes") {
  // sum of first-block sizes, and n times the sum of reciprocal block counts,
  // both equal the affine count
  for (const char* name : {"catalan", "layered"}) {
    const Series af = ClassSpec::builtin(name).affine_series(7);
    for (int n = 1; n <= 7; ++n) {
      mpz_class first_blocks = 0;
      mpq_class reciprocal_blocks = 0;
      for (const Perm& p : bap::enumerate_avoiders(n, patterns_for(name))) {
        const auto profile = bap::sum_blocks(p);
        first_blocks += profile.first_block_size;
        reciprocal_blocks += mpq_class(1, profile.block_count);
      }
      CHECK(af[n] == mpq_class(first_blocks));
      CHECK(af[n] == n * reciprocal_blocks);
    }
  }
}

TEST_CASE("class specs from files") {
  const std::string path = "test_class_spec.json";
  {
    std::ofstream out(path);
    out << R"({"name": "cat5", "f": [1, 1, 2, 5, 14, 42]})";
  }
  const ClassSpec cls = ClassSpec::from_file(path);
  CHECK(cls.name() == "cat5");
  CHECK(cls.class_series(5) == from_ints({1, 1, 2, 5, 14, 42}));
  CHECK_THROWS_AS(cls.class_series(6), std::invalid_argument);  // beyond the provided data

  {
    std::ofstream out(path);
    out << R"({"name": "fib", "g": [0, 1, 1]})";
  }
  const ClassSpec fib = ClassSpec::from_file(path);
  CHECK(fib.class_series(6) == from_ints({1, 1, 2, 3, 5, 8, 13}));

  {
    std::ofstream out(path);
    out << R"({"name": "big", "f": [1, "1", "1000000000000000000000000"]})";
  }
  CHECK(ClassSpec::from_file(path).class_series(2)[2] ==
        mpq_class("1000000000000000000000000"));

  {
    std::ofstream out(path);
    out << R"({"name": "bad", "f": [1], "g": [0]})";
  }
  CHECK_THROWS_AS(ClassSpec::from_file(path), std::invalid_argument);
  {
    std::ofstream out(path);
    out << R"(not json)";
  }
  CHECK_THROWS_AS(ClassSpec::from_file(path), std::invalid_argument);
  CHECK_THROWS_AS(ClassSpec::from_file("does_not_exist.json"), std::invalid_argument);
  std::remove(path.c_str());

  CHECK_THROWS_AS(ClassSpec::builtin("nope"), std::invalid_argument);
}
