#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bap/perm.hpp"

namespace bap {

/// Window entries collide modulo the size.
struct DistinctnessError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
/// Window sum differs from n(n+1)/2.
struct CenteringError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Affine permutation of declared size n, stored as its window
/// (w(1),...,w(n)) and extended to all of Z by w(i+n) = w(i) + n.
/// The declared size is part of the identity: the same function tagged with
/// size n and with size 2n are distinct values here.
class AffinePerm {
public:
  /// Validates distinctness mod n and the centering condition
  /// sum w(i) = n(n+1)/2. Throws DistinctnessError / CenteringError.
  explicit AffinePerm(std::vector<long long> window);

  /// Text form: comma-separated signed integers, e.g. "2,7,-2,-1,9,6".
  static AffinePerm parse(std::string_view text);

  int size() const { return static_cast<int>(window_.size()); }
  const std::vector<long long>& window() const { return window_; }
  /// Evaluation at any integer via the periodic extension.
  long long operator()(long long i) const;

  std::string str() const;

  auto operator<=>(const AffinePerm&) const = default;

private:
  std::vector<long long> window_;
};

/// |w(i) - i| < n for all i (one period suffices).
bool is_bounded(const AffinePerm& w);

/// max |w(i) - i| over one period (hence over all of Z).
long long max_displacement(const AffinePerm& w);

/// The shift by r: i -> w(i - r) + r. Shifting by the size is the identity.
AffinePerm shift(const AffinePerm& w, long long r);

/// Periodic extension of an ordinary permutation; always bounded.
AffinePerm infinite_sum(const Perm& p);

/// The ordinary permutation order-isomorphic to the window.
Perm window_flatten(const AffinePerm& w);

/// Unique pair (flat, word) with w(i) = flat(i) + n * word[i] and
/// sum(word) = 0.
struct StdDecomposition {
  Perm flat;
  std::vector<long long> word;
};
StdDecomposition standard_decomposition(const AffinePerm& w);
AffinePerm from_standard(const Perm& flat, std::span<const long long> word);

/// Sign test on the word: word[i] in {-1,0} where flat(i) > i, zero where
/// flat(i) = i, in {0,1} where flat(i) < i. Holds iff the source is bounded.
bool bounded_word_signs(const StdDecomposition& d);

/// True iff the affine permutation contains the (nonempty) ordinary pattern.
/// The search is exact with the default horizon of n + 2*max_displacement per
/// index gap; an explicit horizon below the default is rejected, a larger one
/// must not change the answer.
bool contains_finite_pattern(const AffinePerm& w, const Perm& pattern,
                             std::optional<long long> horizon = std::nullopt);

/// Result of recognizing w as a shifted infinite sum.
struct Decomposition {
  long long shift_amount = 0;  // smallest non-negative cut
  Perm block_pattern;
};
/// Returns the (shift, pattern) pair when w is a shift of an infinite sum,
/// otherwise nullopt. c in [0, n) is a cut iff w(i) <= c for all
/// i in (c - displacement, c].
std::optional<Decomposition> is_decomposable(const AffinePerm& w);

/// The infinite increasing oscillation: size 2, window (3, 0). Not bounded.
AffinePerm infinite_oscillation();

/// The sum-indecomposable size-k patterns of the infinite oscillation:
/// {1}, {21}, then two per size: {312, 231}, {3142, 2413}, {31524, 24153}, ...
std::vector<Perm> finite_oscillations(int k);

}  // namespace bap
