#pragma once

#include <compare>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bap {

/// Permutation of {1,...,n} in one-line notation. Size 0 is the unique empty
/// permutation. Immutable after construction.
class Perm {
public:
  Perm() = default;
  /// Validates that `values` is a bijection on {1,...,n}.
  explicit Perm(std::vector<int> values);

  static Perm identity(int n);
  /// Text form: digit string for n <= 9 ("4312576"), comma-separated otherwise.
  static Perm parse(std::string_view text);

  int size() const { return static_cast<int>(values_.size()); }
  bool empty() const { return values_.empty(); }
  /// 1-based evaluation.
  int operator()(int i) const { return values_[static_cast<size_t>(i) - 1]; }
  const std::vector<int>& values() const { return values_; }

  std::string str() const;

  auto operator<=>(const Perm&) const = default;

private:
  std::vector<int> values_;
};

/// Diagonal juxtaposition: left on {1..a}, right offset by a.
Perm direct_sum(const Perm& left, const Perm& right);

/// Decomposition into maximal sum-indecomposable blocks.
struct BlockProfile {
  std::vector<Perm> blocks;  // in order; concatenating as a direct sum gives back the source
  int first_block_size = 0;
  int block_count = 0;
  int period = 0;  // smallest j dividing n such that the source is an (n/j)-fold sum of its prefix
};
BlockProfile sum_blocks(const Perm& p);

/// All pairs (i, j) with i < j and p(i) > p(j), 1-based, lexicographic.
std::vector<std::pair<int, int>> inversions(const Perm& p);

struct ExcStats {
  int excedances = 0;    // positions with p(i) > i
  int fixed_points = 0;  // positions with p(i) = i
};
ExcStats exc_stats(const Perm& p);

/// True iff host has a subsequence order-isomorphic to pattern. The empty
/// pattern is contained in everything.
bool contains(const Perm& pattern, const Perm& host);

/// Lexicographically least increasing index sequence (1-based) realizing the
/// pattern in the host, or nullopt.
std::optional<std::vector<int>> find_occurrence(const Perm& pattern, const Perm& host);

/// Visits every permutation of size n avoiding all patterns, in lexicographic
/// order of the value sequence. Backtracking prunes any prefix that already
/// contains a pattern. Return false from the callback to stop.
void for_each_avoider(int n, std::span<const Perm> patterns,
                      const std::function<bool(const Perm&)>& visit);

std::vector<Perm> enumerate_avoiders(int n, std::span<const Perm> patterns);

}  // namespace bap
