#include "bap/perm.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace bap {

namespace {

std::string_view trimmed(std::string_view token) {
  while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
  while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
  return token;
}

int parse_int(std::string_view token) {
  token = trimmed(token);
  int value = 0;
  auto* first = token.data();
  auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw std::invalid_argument("invalid integer token '" + std::string(token) + "'");
  }
  return value;
}

// Backtracking occurrence search over a sequence of distinct integers.
// Slots are matched to strictly increasing host positions; a candidate value
// must fall strictly between the values already matched to the pattern
// entries bracketing this slot's pattern value.
struct OccurrenceSearch {
  std::span<const int> pattern;
  std::span<const int> host;
  int limit = 0;  // positions [0, limit) are searchable by free slots
  std::vector<int> match;

  bool admissible(int slot, long long candidate) const {
    for (size_t j = 0; j < pattern.size(); ++j) {
      if (match[j] < 0) continue;
      const long long v = host[static_cast<size_t>(match[j])];
      if (pattern[j] < pattern[slot] && v >= candidate) return false;
      if (pattern[j] > pattern[slot] && v <= candidate) return false;
    }
    return true;
  }

  bool search(int slot, int from) {
    if (slot == static_cast<int>(pattern.size())) return true;
    if (match[slot] >= 0) return search(slot + 1, from);  // pre-assigned (must be the last slot)
    int free_after = 0;
    for (size_t j = slot + 1; j < pattern.size(); ++j) {
      if (match[j] < 0) ++free_after;
    }
    for (int pos = from; pos + free_after < limit; ++pos) {
      if (!admissible(slot, host[static_cast<size_t>(pos)])) continue;
      match[slot] = pos;
      if (search(slot + 1, pos + 1)) return true;
      match[slot] = -1;
    }
    return false;
  }
};

// Searches for an occurrence; when require_last is set, the occurrence must
// use the final host position (necessarily as the final pattern slot).
std::optional<std::vector<int>> match_sequence(std::span<const int> pattern,
                                               std::span<const int> host, bool require_last) {
  const int k = static_cast<int>(pattern.size());
  const int h = static_cast<int>(host.size());
  if (k == 0) return std::vector<int>{};
  if (k > h) return std::nullopt;

  OccurrenceSearch s{pattern, host, h, std::vector<int>(static_cast<size_t>(k), -1)};
  if (require_last) {
    s.match[static_cast<size_t>(k) - 1] = h - 1;
    s.limit = h - 1;
  }
  if (!s.search(0, 0)) return std::nullopt;
  std::vector<int> witness(s.match.begin(), s.match.end());
  for (int& p : witness) ++p;  // 1-based
  return witness;
}

}  // namespace

Perm::Perm(std::vector<int> values) : values_(std::move(values)) {
  const int n = size();
  std::vector<bool> seen(static_cast<size_t>(n) + 1, false);
  for (int v : values_) {
    if (v < 1 || v > n || seen[static_cast<size_t>(v)]) {
      throw std::invalid_argument("not a permutation of {1,...," + std::to_string(n) + "}");
    }
    seen[static_cast<size_t>(v)] = true;
  }
}

Perm Perm::identity(int n) {
  if (n < 0) throw std::invalid_argument("negative permutation size");
  std::vector<int> v(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = i + 1;
  return Perm(std::move(v));
}

Perm Perm::parse(std::string_view text) {
  std::vector<int> v;
  if (text.empty()) return Perm();
  if (text.find(',') != std::string_view::npos) {
    size_t start = 0;
    while (start <= text.size()) {
      size_t end = text.find(',', start);
      if (end == std::string_view::npos) end = text.size();
      v.push_back(parse_int(text.substr(start, end - start)));
      start = end + 1;
      if (end == text.size()) break;
    }
  } else {
    for (char c : text) {
      if (c < '1' || c > '9') {
        throw std::invalid_argument("digit-string permutation may only contain 1-9");
      }
      v.push_back(c - '0');
    }
  }
  return Perm(std::move(v));
}

std::string Perm::str() const {
  std::string out;
  if (size() <= 9) {
    for (int v : values_) out += static_cast<char>('0' + v);
  } else {
    for (size_t i = 0; i < values_.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(values_[i]);
    }
  }
  return out;
}

Perm direct_sum(const Perm& left, const Perm& right) {
  std::vector<int> v;
  v.reserve(static_cast<size_t>(left.size() + right.size()));
  v.insert(v.end(), left.values().begin(), left.values().end());
  for (int x : right.values()) v.push_back(x + left.size());
  return Perm(std::move(v));
}

BlockProfile sum_blocks(const Perm& p) {
  const int n = p.size();
  if (n == 0) throw std::invalid_argument("empty permutation has no block decomposition");

  BlockProfile out;
  int running_max = 0;
  int block_start = 1;
  for (int i = 1; i <= n; ++i) {
    running_max = std::max(running_max, p(i));
    if (running_max == i) {  // p maps [1..i] onto [1..i]: block boundary
      std::vector<int> block;
      block.reserve(static_cast<size_t>(i - block_start + 1));
      for (int j = block_start; j <= i; ++j) block.push_back(p(j) - (block_start - 1));
      out.blocks.emplace_back(std::move(block));
      block_start = i + 1;
    }
  }
  out.first_block_size = out.blocks.front().size();
  out.block_count = static_cast<int>(out.blocks.size());

  for (int j = 1; j <= n; ++j) {
    if (n % j != 0) continue;
    bool periodic = true;
    for (int i = 1; i + j <= n && periodic; ++i) periodic = p(i + j) == p(i) + j;
    if (periodic) {
      out.period = j;
      break;
    }
  }
  return out;
}

std::vector<std::pair<int, int>> inversions(const Perm& p) {
  std::vector<std::pair<int, int>> out;
  for (int i = 1; i <= p.size(); ++i) {
    for (int j = i + 1; j <= p.size(); ++j) {
      if (p(i) > p(j)) out.emplace_back(i, j);
    }
  }
  return out;
}

ExcStats exc_stats(const Perm& p) {
  ExcStats s;
  for (int i = 1; i <= p.size(); ++i) {
    if (p(i) > i) ++s.excedances;
    if (p(i) == i) ++s.fixed_points;
  }
  return s;
}

bool contains(const Perm& pattern, const Perm& host) {
  return match_sequence(pattern.values(), host.values(), false).has_value();
}

std::optional<std::vector<int>> find_occurrence(const Perm& pattern, const Perm& host) {
  return match_sequence(pattern.values(), host.values(), false);
}

namespace {

bool prefix_gains_pattern(std::span<const Perm> patterns, std::span<const int> prefix) {
  for (const Perm& pat : patterns) {
    if (match_sequence(pat.values(), prefix, true).has_value()) return true;
  }
  return false;
}

// Returns false once the visitor has asked to stop.
bool extend_avoider(int n, std::span<const Perm> patterns, std::vector<int>& prefix,
                    std::vector<bool>& used, const std::function<bool(const Perm&)>& visit) {
  if (static_cast<int>(prefix.size()) == n) return visit(Perm(prefix));
  for (int v = 1; v <= n; ++v) {
    if (used[static_cast<size_t>(v)]) continue;
    prefix.push_back(v);
    used[static_cast<size_t>(v)] = true;
    bool keep_going = true;
    if (!prefix_gains_pattern(patterns, prefix)) {
      keep_going = extend_avoider(n, patterns, prefix, used, visit);
    }
    used[static_cast<size_t>(v)] = false;
    prefix.pop_back();
    if (!keep_going) return false;
  }
  return true;
}

}  // namespace

void for_each_avoider(int n, std::span<const Perm> patterns,
                      const std::function<bool(const Perm&)>& visit) {
  if (n < 0) throw std::invalid_argument("negative size");
  for (const Perm& pat : patterns) {
    if (pat.empty()) return;  // the empty pattern is contained in everything
  }
  if (n == 0) {
    visit(Perm());
    return;
  }
  std::vector<int> prefix;
  std::vector<bool> used(static_cast<size_t>(n) + 1, false);
  extend_avoider(n, patterns, prefix, used, visit);
}

std::vector<Perm> enumerate_avoiders(int n, std::span<const Perm> patterns) {
  std::vector<Perm> out;
  for_each_avoider(n, patterns, [&](const Perm& p) {
    out.push_back(p);
    return true;
  });
  return out;
}

}  // namespace bap
