#pragma once

#include <functional>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "bap/affine.hpp"
#include "bap/perm.hpp"

namespace bap {

mpz_class binomial(unsigned long n, unsigned long k);
mpz_class factorial(unsigned long n);

/// Triangular table of arbitrary-precision counts: rows n = 0..max_n,
/// entries k = 0..n. Reads outside the triangle yield zero.
class CountTable {
public:
  explicit CountTable(int max_n);
  int max_n() const { return static_cast<int>(rows_.size()) - 1; }
  const mpz_class& at(int n, int k) const;
  mpz_class& entry(int n, int k) { return rows_[static_cast<size_t>(n)][static_cast<size_t>(k)]; }
  mpz_class row_sum(int n) const;

private:
  std::vector<std::vector<mpz_class>> rows_;
};

/// Eulerian numbers a(n,k): permutations of size n with k excedances,
/// a(0,0) = 1. Built by the two-term recurrence.
CountTable eulerian_table(int max_n);

/// Derangement Eulerian numbers d(n,k): derangements with k excedances,
/// d(0,0) = 1. Built from the Eulerian table by the alternating binomial sum.
CountTable derangement_eulerian_table(int max_n);

/// d(n) = n! * sum (-1)^m / m!, as exact integers.
std::vector<mpz_class> derangement_counts(int max_n);

inline constexpr int kDefaultBruteCap = 8;

enum class CountMethod { formula_a, formula_b, brute };

/// Number of bounded affine permutations of size n >= 1. The two closed
/// formulas agree for all n; brute enumeration is capped.
mpz_class count_bounded_affine(int n, CountMethod method, int brute_cap = kDefaultBruteCap);

/// Streams every bounded affine permutation of size n exactly once:
/// flattened permutations in lexicographic order, then all sign words
/// admissible for each. Return false from the callback to stop.
void for_each_bounded_affine(int n, const std::function<bool(const AffinePerm&)>& visit,
                             int cap = kDefaultBruteCap);

/// Number of bounded affine permutations of size n avoiding every pattern.
mpz_class count_bounded_avoiders(int n, std::span<const Perm> patterns,
                                 int cap = kDefaultBruteCap);

/// Counts of sum-indecomposable permutations by size, entries 0..max_n
/// (entry 0 is zero). Brute force, capped.
std::vector<mpz_class> indecomposable_counts(int max_n, int cap = kDefaultBruteCap);

}  // namespace bap
