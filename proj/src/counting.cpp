#include "bap/counting.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace bap {

mpz_class binomial(unsigned long n, unsigned long k) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

mpz_class factorial(unsigned long n) {
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

CountTable::CountTable(int max_n) {
  if (max_n < 0) throw std::invalid_argument("table size must be non-negative");
  rows_.resize(static_cast<size_t>(max_n) + 1);
  for (int n = 0; n <= max_n; ++n) rows_[static_cast<size_t>(n)].resize(static_cast<size_t>(n) + 1);
}

const mpz_class& CountTable::at(int n, int k) const {
  static const mpz_class zero = 0;
  if (n < 0 || n > max_n() || k < 0 || k > n) return zero;
  return rows_[static_cast<size_t>(n)][static_cast<size_t>(k)];
}

mpz_class CountTable::row_sum(int n) const {
  mpz_class sum = 0;
  for (int k = 0; k <= n; ++k) sum += at(n, k);
  return sum;
}

CountTable eulerian_table(int max_n) {
  CountTable t(max_n);
  t.entry(0, 0) = 1;
  for (int n = 1; n <= max_n; ++n) {
    for (int k = 0; k <= n; ++k) {
      t.entry(n, k) = (k + 1) * t.at(n - 1, k) + (n - k) * t.at(n - 1, k - 1);
    }
  }
  return t;
}

CountTable derangement_eulerian_table(int max_n) {
  const CountTable a = eulerian_table(max_n);
  CountTable d(max_n);
  for (int n = 0; n <= max_n; ++n) {
    for (int k = 0; k <= n; ++k) {
      mpz_class sum = 0;
      for (int m = 0; m <= n - k; ++m) {
        mpz_class term = binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(m)) *
                         a.at(n - m, k);
        if (m % 2 == 0) {
          sum += term;
        } else {
          sum -= term;
        }
      }
      d.entry(n, k) = sum;
    }
  }
  return d;
}

std::vector<mpz_class> derangement_counts(int max_n) {
  std::vector<mpz_class> d(static_cast<size_t>(max_n) + 1);
  for (int n = 0; n <= max_n; ++n) {
    mpz_class term = factorial(static_cast<unsigned long>(n));  // n!/m!, descending
    mpz_class sum = term;
    for (int m = 1; m <= n; ++m) {
      mpz_divexact_ui(term.get_mpz_t(), term.get_mpz_t(), static_cast<unsigned long>(m));
      if (m % 2 == 0) {
        sum += term;
      } else {
        sum -= term;
      }
    }
    d[static_cast<size_t>(n)] = sum;
  }
  return d;
}

namespace {

mpz_class count_formula_a(int n) {
  const CountTable d = derangement_eulerian_table(n);
  mpz_class total = 0;
  for (int m = 0; m <= n; ++m) {
    mpz_class inner = 0;
    for (int k = 0; k <= m; ++k) {
      inner += binomial(static_cast<unsigned long>(m), static_cast<unsigned long>(k)) * d.at(m, k);
    }
    total += binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(m)) * inner;
  }
  return total;
}

mpz_class count_formula_b(int n) {
  const CountTable a = eulerian_table(n);
  mpz_class total = 0;
  for (int m = 0; m <= n; ++m) {
    mpz_class inner = 0;
    for (int k = 0; k <= m; ++k) {
      if (n - k < 0 || n - k > m) continue;
      inner += binomial(static_cast<unsigned long>(m), static_cast<unsigned long>(n - k)) * a.at(m, k);
    }
    if ((n - m) % 2 != 0) inner = -inner;
    total += binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(m)) * inner;
  }
  return total;
}

// Iterates the r-subsets of `items` in lexicographic order.
bool next_combination(std::vector<int>& idx, int size) {
  const int r = static_cast<int>(idx.size());
  for (int i = r - 1; i >= 0; --i) {
    if (idx[static_cast<size_t>(i)] < size - (r - i)) {
      ++idx[static_cast<size_t>(i)];
      for (int j = i + 1; j < r; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j) - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

void for_each_bounded_affine(int n, const std::function<bool(const AffinePerm&)>& visit, int cap) {
  if (n < 1) throw std::invalid_argument("size must be at least 1");
  if (n > cap) {
    throw std::invalid_argument("size " + std::to_string(n) + " exceeds the enumeration cap " +
                                std::to_string(cap));
  }
  std::vector<int> values(static_cast<size_t>(n));
  std::iota(values.begin(), values.end(), 1);
  do {
    const Perm flat{std::vector<int>(values)};
    std::vector<int> exceed, deceed;
    for (int i = 1; i <= n; ++i) {
      if (flat(i) > i) exceed.push_back(i);
      if (flat(i) < i) deceed.push_back(i);
    }
    const int rmax = static_cast<int>(std::min(exceed.size(), deceed.size()));
    for (int r = 0; r <= rmax; ++r) {
      std::vector<int> down(static_cast<size_t>(r)), up(static_cast<size_t>(r));
      std::iota(down.begin(), down.end(), 0);
      do {
        std::iota(up.begin(), up.end(), 0);
        do {
          std::vector<long long> word(static_cast<size_t>(n), 0);
          for (int i : down) word[static_cast<size_t>(exceed[static_cast<size_t>(i)]) - 1] = -1;
          for (int i : up) word[static_cast<size_t>(deceed[static_cast<size_t>(i)]) - 1] = 1;
          if (!visit(from_standard(flat, word))) return;
        } while (next_combination(up, static_cast<int>(deceed.size())));
      } while (next_combination(down, static_cast<int>(exceed.size())));
    }
  } while (std::next_permutation(values.begin(), values.end()));
}

mpz_class count_bounded_affine(int n, CountMethod method, int brute_cap) {
  if (n < 1) throw std::invalid_argument("size must be at least 1");
  switch (method) {
    case CountMethod::formula_a:
      return count_formula_a(n);
    case CountMethod::formula_b:
      return count_formula_b(n);
    case CountMethod::brute: {
      mpz_class total = 0;
      for_each_bounded_affine(
          n,
          [&](const AffinePerm&) {
            ++total;
            return true;
          },
          brute_cap);
      return total;
    }
  }
  throw std::logic_error("unknown counting method");
}

mpz_class count_bounded_avoiders(int n, std::span<const Perm> patterns, int cap) {
  for (const Perm& p : patterns) {
    if (p.empty()) return 0;  // the empty pattern is contained in everything
  }
  mpz_class total = 0;
  for_each_bounded_affine(
      n,
      [&](const AffinePerm& w) {
        for (const Perm& p : patterns) {
          if (contains_finite_pattern(w, p)) return true;
        }
        ++total;
        return true;
      },
      cap);
  return total;
}

std::vector<mpz_class> indecomposable_counts(int max_n, int cap) {
  if (max_n > cap) {
    throw std::invalid_argument("size " + std::to_string(max_n) + " exceeds the enumeration cap " +
                                std::to_string(cap));
  }
  std::vector<mpz_class> g(static_cast<size_t>(std::max(max_n, 0)) + 1);
  for (int n = 1; n <= max_n; ++n) {
    std::vector<int> values(static_cast<size_t>(n));
    std::iota(values.begin(), values.end(), 1);
    mpz_class count = 0;
    do {
      if (sum_blocks(Perm{std::vector<int>(values)}).block_count == 1) ++count;
    } while (std::next_permutation(values.begin(), values.end()));
    g[static_cast<size_t>(n)] = count;
  }
  return g;
}

}  // namespace bap
