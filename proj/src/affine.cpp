#include "bap/affine.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>

namespace bap {

namespace {

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long long parse_ll(std::string_view token) {
  while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
  while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
  long long value = 0;
  auto* first = token.data();
  auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw std::invalid_argument("invalid integer token '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

AffinePerm::AffinePerm(std::vector<long long> window) : window_(std::move(window)) {
  const long long n = size();
  if (n == 0) throw std::invalid_argument("affine permutation window must be nonempty");

  std::set<long long> residues;
  for (long long v : window_) {
    long long r = v % n;
    if (r < 0) r += n;
    if (!residues.insert(r).second) {
      throw DistinctnessError("window entries are not distinct modulo " + std::to_string(n));
    }
  }
  long long sum = std::accumulate(window_.begin(), window_.end(), 0LL);
  if (sum != n * (n + 1) / 2) {
    throw CenteringError("window sum " + std::to_string(sum) + " differs from " +
                         std::to_string(n * (n + 1) / 2));
  }
}

AffinePerm AffinePerm::parse(std::string_view text) {
  std::vector<long long> window;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    window.push_back(parse_ll(text.substr(start, end - start)));
    start = end + 1;
    if (end == text.size()) break;
  }
  return AffinePerm(std::move(window));
}

long long AffinePerm::operator()(long long i) const {
  const long long n = size();
  const long long q = floor_div(i - 1, n);
  const long long r = (i - 1) - q * n;  // in [0, n)
  return window_[static_cast<size_t>(r)] + q * n;
}

std::string AffinePerm::str() const {
  std::string out;
  for (size_t i = 0; i < window_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(window_[i]);
  }
  return out;
}

bool is_bounded(const AffinePerm& w) { return max_displacement(w) < w.size(); }

long long max_displacement(const AffinePerm& w) {
  long long d = 0;
  for (int i = 1; i <= w.size(); ++i) d = std::max(d, std::llabs(w(i) - i));
  return d;
}

AffinePerm shift(const AffinePerm& w, long long r) {
  std::vector<long long> window(static_cast<size_t>(w.size()));
  for (int i = 1; i <= w.size(); ++i) window[static_cast<size_t>(i) - 1] = w(i - r) + r;
  return AffinePerm(std::move(window));
}

AffinePerm infinite_sum(const Perm& p) {
  if (p.empty()) throw std::invalid_argument("cannot extend the empty permutation");
  return AffinePerm(std::vector<long long>(p.values().begin(), p.values().end()));
}

Perm window_flatten(const AffinePerm& w) {
  std::vector<long long> sorted = w.window();
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> ranks;
  ranks.reserve(sorted.size());
  for (long long v : w.window()) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
    ranks.push_back(static_cast<int>(it - sorted.begin()) + 1);
  }
  return Perm(std::move(ranks));
}

StdDecomposition standard_decomposition(const AffinePerm& w) {
  const long long n = w.size();
  std::vector<int> flat(static_cast<size_t>(n));
  std::vector<long long> word(static_cast<size_t>(n));
  for (long long i = 1; i <= n; ++i) {
    const long long v = w(i);
    const long long q = floor_div(v - 1, n);
    flat[static_cast<size_t>(i) - 1] = static_cast<int>(v - q * n);
    word[static_cast<size_t>(i) - 1] = q;
  }
  return StdDecomposition{Perm(std::move(flat)), std::move(word)};
}

AffinePerm from_standard(const Perm& flat, std::span<const long long> word) {
  const long long n = flat.size();
  if (static_cast<long long>(word.size()) != n) {
    throw std::invalid_argument("word length differs from permutation size");
  }
  if (std::accumulate(word.begin(), word.end(), 0LL) != 0) {
    throw std::invalid_argument("word does not sum to zero");
  }
  std::vector<long long> window(static_cast<size_t>(n));
  for (long long i = 1; i <= n; ++i) {
    window[static_cast<size_t>(i) - 1] = flat(static_cast<int>(i)) + n * word[static_cast<size_t>(i) - 1];
  }
  return AffinePerm(std::move(window));
}

bool bounded_word_signs(const StdDecomposition& d) {
  for (int i = 1; i <= d.flat.size(); ++i) {
    const long long a = d.word[static_cast<size_t>(i) - 1];
    if (d.flat(i) > i && a != 0 && a != -1) return false;
    if (d.flat(i) == i && a != 0) return false;
    if (d.flat(i) < i && a != 0 && a != 1) return false;
  }
  return true;
}

namespace {

// Occurrence search in the periodic extension. The first index ranges over
// one period; each later index follows its predecessor by at most `gap`.
struct AffineSearch {
  const AffinePerm& w;
  std::span<const int> pattern;
  long long gap;
  std::vector<long long> pos;
  std::vector<long long> val;

  bool admissible(int slot, long long candidate) const {
    for (int j = 0; j < slot; ++j) {
      if (pattern[static_cast<size_t>(j)] < pattern[static_cast<size_t>(slot)] && val[static_cast<size_t>(j)] >= candidate) return false;
      if (pattern[static_cast<size_t>(j)] > pattern[static_cast<size_t>(slot)] && val[static_cast<size_t>(j)] <= candidate) return false;
    }
    return true;
  }

  bool search(int slot) {
    if (slot == static_cast<int>(pattern.size())) return true;
    const long long lo = slot == 0 ? 1 : pos[static_cast<size_t>(slot) - 1] + 1;
    const long long hi = slot == 0 ? w.size() : pos[static_cast<size_t>(slot) - 1] + gap;
    for (long long p = lo; p <= hi; ++p) {
      const long long v = w(p);
      if (!admissible(slot, v)) continue;
      pos[static_cast<size_t>(slot)] = p;
      val[static_cast<size_t>(slot)] = v;
      if (search(slot + 1)) return true;
    }
    return false;
  }
};

}  // namespace

bool contains_finite_pattern(const AffinePerm& w, const Perm& pattern,
                             std::optional<long long> horizon) {
  if (pattern.empty()) throw std::invalid_argument("pattern must be nonempty");
  const long long default_gap = w.size() + 2 * max_displacement(w);
  long long gap = default_gap;
  if (horizon) {
    if (*horizon < default_gap) {
      throw std::invalid_argument("horizon " + std::to_string(*horizon) +
                                  " below the sound minimum " + std::to_string(default_gap));
    }
    gap = *horizon;
  }
  AffineSearch s{w, pattern.values(), gap,
                 std::vector<long long>(pattern.values().size()),
                 std::vector<long long>(pattern.values().size())};
  return s.search(0);
}

std::optional<Decomposition> is_decomposable(const AffinePerm& w) {
  const long long n = w.size();
  const long long d = max_displacement(w);
  for (long long c = 0; c < n; ++c) {
    bool cut = true;
    for (long long i = c - d + 1; i <= c && cut; ++i) cut = w(i) <= c;
    if (!cut) continue;
    std::vector<int> block(static_cast<size_t>(n));
    for (long long j = 1; j <= n; ++j) block[static_cast<size_t>(j) - 1] = static_cast<int>(w(c + j) - c);
    return Decomposition{c, Perm(std::move(block))};
  }
  return std::nullopt;
}

AffinePerm infinite_oscillation() { return AffinePerm({3, 0}); }

std::vector<Perm> finite_oscillations(int k) {
  if (k < 1) throw std::invalid_argument("oscillation size must be positive");
  const AffinePerm osc = infinite_oscillation();
  // Vertices of the inversion graph of the oscillation, in path order:
  // ... -> 0 -> -1 -> 2 -> 1 -> 4 -> 3 -> ...
  const auto path_vertex = [](int t) { return t % 2 == 0 ? t + 2 : t; };

  std::vector<Perm> out;
  for (int start : {0, 1}) {
    std::vector<std::pair<long long, long long>> points;  // (position, value)
    for (int t = start; t < start + k; ++t) {
      const long long p = path_vertex(t);
      points.emplace_back(p, osc(p));
    }
    std::sort(points.begin(), points.end());
    std::vector<long long> values;
    for (auto& [p, v] : points) values.push_back(v);
    std::vector<long long> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> flat;
    for (long long v : values) {
      auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
      flat.push_back(static_cast<int>(it - sorted.begin()) + 1);
    }
    Perm candidate(std::move(flat));
    if (out.empty() || out.front() != candidate) out.push_back(std::move(candidate));
  }
  return out;
}

}  // namespace bap
