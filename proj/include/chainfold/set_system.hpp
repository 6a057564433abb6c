#ifndef CHAINFOLD_SET_SYSTEM_HPP
#define CHAINFOLD_SET_SYSTEM_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "chainfold/bigint.hpp"
#include "chainfold/error.hpp"
#include "chainfold/permutation.hpp"

namespace chainfold {

/*
 * A collection of subsets of [n], bucketed by cardinality.  Level k holds the
 * k-element members in ascending order, so membership is a binary search
 * within one level and the chain DP is a single upward sweep.
 */
class SetSystem {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  SetSystem() : SetSystem(0) {}

  /// Empty system over [n].
  explicit SetSystem(int n) : n_(n) {
    detail::require(n >= 0, "negative ground-set size");
    detail::require_cap(n <= kMaxSparseGround, "ground set larger than 63 elements");
    levels_.resize(static_cast<std::size_t>(n) + 1);
    offsets_.assign(static_cast<std::size_t>(n) + 2, 0);
  }

  /// Sorts and deduplicates; every set must lie within [n].
  SetSystem(int n, std::vector<Mask> sets) : SetSystem(n) {
    const Mask outside = ~full_mask(n);
    for (Mask s : sets) {
      detail::require(!(s & outside), "set has elements outside the ground set");
      levels_[static_cast<std::size_t>(std::popcount(s))].push_back(s);
    }
    for (auto& level : levels_) {
      std::sort(level.begin(), level.end());
      level.erase(std::unique(level.begin(), level.end()), level.end());
    }
    reindex();
  }

  /// All masks of [n] accepted by pred, enumerated densely (n <= 28).
  template <class Pred>
  static SetSystem from_predicate(int n, Pred&& pred) {
    detail::require_cap(n <= kMaxDenseGround, "dense enumeration needs n <= 28");
    SetSystem f(n);
    const Mask end = Mask{1} << n;
    for (Mask s = 0; s < end; ++s) {
      if (pred(s)) f.levels_[static_cast<std::size_t>(std::popcount(s))].push_back(s);
    }
    f.reindex();
    return f;
  }

  int ground_size() const { return n_; }
  std::size_t size() const { return offsets_.back(); }
  bool empty() const { return size() == 0; }

  std::span<const Mask> level(int k) const { return levels_[static_cast<std::size_t>(k)]; }

  /// Global position of s in (popcount, value) order, or npos.
  std::size_t index_of(Mask s) const {
    if (s & ~full_mask(n_)) return npos;
    const auto k = static_cast<std::size_t>(std::popcount(s));
    const auto& level = levels_[k];
    auto it = std::lower_bound(level.begin(), level.end(), s);
    if (it == level.end() || *it != s) return npos;
    return offsets_[k] + static_cast<std::size_t>(it - level.begin());
  }

  bool contains(Mask s) const { return index_of(s) != npos; }

  std::size_t level_offset(int k) const { return offsets_[static_cast<std::size_t>(k)]; }

  /// Members in (popcount, value) order.
  std::vector<Mask> sets() const {
    std::vector<Mask> out;
    out.reserve(size());
    for (const auto& level : levels_) out.insert(out.end(), level.begin(), level.end());
    return out;
  }

  SetSystem without(std::span<const Mask> removed) const {
    std::vector<Mask> keep;
    keep.reserve(size());
    std::vector<Mask> sorted(removed.begin(), removed.end());
    std::sort(sorted.begin(), sorted.end());
    for (const auto& level : levels_) {
      for (Mask s : level) {
        if (!std::binary_search(sorted.begin(), sorted.end(), s)) keep.push_back(s);
      }
    }
    return SetSystem(n_, std::move(keep));
  }

  friend bool operator==(const SetSystem& a, const SetSystem& b) {
    return a.n_ == b.n_ && a.levels_ == b.levels_;
  }

 private:
  void reindex() {
    offsets_[0] = 0;
    for (std::size_t k = 0; k < levels_.size(); ++k) offsets_[k + 1] = offsets_[k] + levels_[k].size();
  }

  int n_ = 0;
  std::vector<std::vector<Mask>> levels_;
  std::vector<std::size_t> offsets_;
};

inline bool supports(const SetSystem& f, const Permutation& p) {
  detail::require(f.ground_size() == p.size(), "supports: ground-set mismatch");
  for (Mask s : prefix_chain(p)) {
    if (!f.contains(s)) return false;
  }
  return true;
}

namespace detail {

template <class Count>
Count count_chains_as(const SetSystem& f) {
  const int n = f.ground_size();
  if (!f.contains(0)) return Count(0);
  std::vector<Count> prev(1, Count(1));
  std::vector<Count> cur;
  for (int k = 1; k <= n; ++k) {
    const auto below = f.level(k - 1);
    const auto here = f.level(k);
    cur.assign(here.size(), Count(0));
    for (std::size_t i = 0; i < here.size(); ++i) {
      for (Mask rest = here[i]; rest; rest &= rest - 1) {
        const Mask pred = here[i] & ~(rest & (~rest + 1));
        auto it = std::lower_bound(below.begin(), below.end(), pred);
        if (it != below.end() && *it == pred) cur[i] += prev[static_cast<std::size_t>(it - below.begin())];
      }
    }
    prev.swap(cur);
    if (prev.empty()) return Count(0);
  }
  return prev.empty() ? Count(0) : prev.front();
}

inline BigInt to_bigint(unsigned __int128 v) {
  BigInt out = static_cast<std::uint64_t>(v >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(v);
  return out;
}

}  // namespace detail

/// Number of maximal chains ∅ = S_0 ⊊ ... ⊊ S_n = [n] inside f.
inline ChainCount count_chains(const SetSystem& f) {
  // 33! < 2^127, so narrower ground sets never overflow a 128-bit accumulator.
  if (f.ground_size() <= 33) return detail::to_bigint(detail::count_chains_as<unsigned __int128>(f));
  return detail::count_chains_as<BigInt>(f);
}

/// Calls fn(std::span<const int>) for each supported permutation, in
/// lexicographic order, by walking the maximal chains of f.
template <class Fn>
void for_each_supported(const SetSystem& f, Fn&& fn) {
  const int n = f.ground_size();
  if (!f.contains(0)) return;
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  auto walk = [&](auto&& self, Mask s) -> void {
    if (static_cast<int>(order.size()) == n) {
      fn(std::span<const int>(order));
      return;
    }
    for (int e = 1; e <= n; ++e) {
      const Mask next = s | element_bit(e);
      if (next == s || !f.contains(next)) continue;
      order.push_back(e);
      self(self, next);
      order.pop_back();
    }
  };
  walk(walk, 0);
}

inline std::vector<Permutation> supported_permutations(const SetSystem& f) {
  std::vector<Permutation> out;
  for_each_supported(f, [&](std::span<const int> p) { out.emplace_back(std::vector<int>(p.begin(), p.end())); });
  return out;
}

inline constexpr int kMaxEnumerationGround = 10;

/// Brute-force oracle for count_chains: checks all n! permutations.
inline ChainCount supported_permutation_count(const SetSystem& f) {
  const int n = f.ground_size();
  detail::require_cap(n <= kMaxEnumerationGround, "permutation enumeration needs n <= 10");
  std::uint64_t count = 0;
  for_each_permutation(n, [&](std::span<const int> p) {
    Mask s = 0;
    if (!f.contains(s)) return;
    for (int e : p) {
      s |= element_bit(e);
      if (!f.contains(s)) return;
    }
    ++count;
  });
  return ChainCount(count);
}

struct Metrics {
  int n = 0;
  std::size_t size = 0;
  ChainCount chains;
  double normalized_size = 0;  ///< S(F) = |F|^{1/n}
  double inverse_density = 0;  ///< P(F) = (n!/C(F))^{1/n}; +inf when C(F) = 0
  double st_product = 0;       ///< S(F)^2 · P(F)
};

inline Metrics metrics(const SetSystem& f) {
  const int n = f.ground_size();
  if (n == 0) throw EmptyGroundSet();
  Metrics m;
  m.n = n;
  m.size = f.size();
  m.chains = count_chains(f);
  m.normalized_size = std::pow(static_cast<double>(m.size), 1.0 / n);
  if (m.chains == 0) {
    m.inverse_density = std::numeric_limits<double>::infinity();
  } else {
    const BigRational ratio(factorial(n), m.chains);
    m.inverse_density = std::pow(ratio.convert_to<double>(), 1.0 / n);
  }
  m.st_product = m.normalized_size * m.normalized_size * m.inverse_density;
  return m;
}

/// {s1 ∪ (s2 + n1)} over [n1 + n2].
inline SetSystem union_product(const SetSystem& f1, const SetSystem& f2) {
  const int n1 = f1.ground_size();
  const int n = n1 + f2.ground_size();
  detail::require_cap(n <= kMaxSparseGround, "union product exceeds 63 elements");
  std::vector<Mask> out;
  out.reserve(f1.size() * f2.size());
  const auto a = f1.sets();
  const auto b = f2.sets();
  for (Mask s2 : b) {
    for (Mask s1 : a) out.push_back(s1 | (s2 << n1));
  }
  return SetSystem(n, std::move(out));
}

inline SetSystem relabel(const SetSystem& f, const Permutation& sigma) {
  detail::require(f.ground_size() == sigma.size(), "relabel: size mismatch");
  std::vector<Mask> out;
  out.reserve(f.size());
  for (Mask s : f.sets()) out.push_back(sigma.map_set(s));
  return SetSystem(f.ground_size(), std::move(out));
}

/// Union of all prefix-sets: the smallest system supporting every given permutation.
inline SetSystem closure_from_permutations(int n, std::span<const Permutation> perms) {
  std::vector<Mask> out{0};
  for (const auto& p : perms) {
    detail::require(p.size() == n, "closure_from_permutations: permutation over the wrong ground set");
    Mask s = 0;
    for (int e : p) {
      s |= element_bit(e);
      out.push_back(s);
    }
  }
  if (perms.empty()) out.clear();
  return SetSystem(n, std::move(out));
}

// Text format: "n <n>", "count <|F|>", then one lowercase hex mask per line
// in ascending (popcount, value) order.

inline void write_set_system(std::ostream& os, const SetSystem& f) {
  os << "n " << f.ground_size() << '\n' << "count " << f.size() << '\n';
  const auto flags = os.flags();
  os << std::hex << std::nouppercase;
  for (Mask s : f.sets()) os << s << '\n';
  os.flags(flags);
}

namespace detail {

inline bool next_content_line(std::istream& is, std::string& line, int& lineno) {
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto at = line.find_first_not_of(" \t");
    if (at != std::string::npos && line[at] != '#') return true;
  }
  return false;
}

inline long long parse_keyed(const std::string& line, const std::string& key, int lineno) {
  std::istringstream in(line);
  std::string word;
  long long value = 0;
  std::string extra;
  if (!(in >> word) || word != key || !(in >> value) || (in >> extra)) {
    throw ParseError("line " + std::to_string(lineno) + ": expected '" + key + " <integer>'");
  }
  return value;
}

}  // namespace detail

inline SetSystem read_set_system(std::istream& is) {
  std::string line;
  int lineno = 0;
  if (!detail::next_content_line(is, line, lineno)) throw ParseError("empty set-system file");
  const long long n = detail::parse_keyed(line, "n", lineno);
  if (n < 0 || n > kMaxSparseGround) throw ParseError("ground-set size out of range: " + std::to_string(n));
  if (!detail::next_content_line(is, line, lineno)) throw ParseError("missing count line");
  const long long count = detail::parse_keyed(line, "count", lineno);
  if (count < 0) throw ParseError("negative set count");

  std::vector<Mask> sets;
  sets.reserve(static_cast<std::size_t>(count));
  const Mask outside = ~full_mask(static_cast<int>(n));
  while (detail::next_content_line(is, line, lineno)) {
    const auto first = line.find_first_not_of(" \t");
    const auto last = line.find_last_not_of(" \t");
    const std::string token = line.substr(first, last - first + 1);
    if (token.size() > 16 || token.find_first_not_of("0123456789abcdef") != std::string::npos) {
      throw ParseError("line " + std::to_string(lineno) + ": expected a lowercase hex mask");
    }
    const Mask s = std::stoull(token, nullptr, 16);
    if (s & outside) throw ParseError("line " + std::to_string(lineno) + ": set outside the ground set");
    sets.push_back(s);
  }
  if (static_cast<long long>(sets.size()) != count) {
    throw ParseError("count mismatch: header says " + std::to_string(count) + ", found " +
                     std::to_string(sets.size()));
  }
  SetSystem f(static_cast<int>(n), sets);
  if (f.size() != sets.size()) throw ParseError("duplicate sets in set-system file");
  return f;
}

}  // namespace chainfold

#endif  // CHAINFOLD_SET_SYSTEM_HPP
