#ifndef CHAINFOLD_POSET_HPP
#define CHAINFOLD_POSET_HPP

#include <bit>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "chainfold/bigint.hpp"
#include "chainfold/error.hpp"
#include "chainfold/permutation.hpp"
#include "chainfold/random.hpp"
#include "chainfold/semiring.hpp"

namespace chainfold {

/// Strict partial order on [n], stored as the predecessor mask of each element.
class Poset {
 public:
  explicit Poset(int n = 0) : n_(n), below_(static_cast<std::size_t>(n) + 1, 0) {
    detail::require(n >= 0, "negative poset size");
    detail::require_cap(n <= kMaxSparseGround, "poset larger than 63 elements");
  }

  /// Transitive closure of the given a < b pairs; rejects cycles.
  static Poset from_relations(int n, const std::vector<std::pair<int, int>>& less) {
    Poset p(n);
    for (auto [a, b] : less) {
      detail::require(a >= 1 && a <= n && b >= 1 && b <= n, "poset relation outside [n]");
      detail::require(a != b, "poset relation is not irreflexive");
      p.below_[static_cast<std::size_t>(b)] |= element_bit(a);
    }
    for (int k = 1; k <= n; ++k) {
      for (int b = 1; b <= n; ++b) {
        if (p.below_[static_cast<std::size_t>(b)] & element_bit(k)) {
          p.below_[static_cast<std::size_t>(b)] |= p.below_[static_cast<std::size_t>(k)];
        }
      }
    }
    for (int e = 1; e <= n; ++e) {
      detail::require(!(p.below_[static_cast<std::size_t>(e)] & element_bit(e)), "poset relations contain a cycle");
    }
    return p;
  }

  int size() const { return n_; }
  bool less(int a, int b) const { return below_[static_cast<std::size_t>(b)] & element_bit(a); }
  Mask predecessors(int e) const { return below_[static_cast<std::size_t>(e)]; }

  /// Pairs a < b with nothing strictly between them.
  std::vector<std::pair<int, int>> covers() const {
    std::vector<std::pair<int, int>> out;
    for (int b = 1; b <= n_; ++b) {
      for (int a = 1; a <= n_; ++a) {
        if (!less(a, b)) continue;
        bool direct = true;
        for (int c = 1; c <= n_ && direct; ++c) direct = !(less(a, c) && less(c, b));
        if (direct) out.emplace_back(a, b);
      }
    }
    return out;
  }

 private:
  int n_;
  std::vector<Mask> below_;
};

inline Poset antichain_poset(int n) { return Poset(n); }

inline Poset chain_poset(int n) {
  std::vector<std::pair<int, int>> rel;
  for (int e = 1; e < n; ++e) rel.emplace_back(e, e + 1);
  return Poset::from_relations(n, rel);
}

/// Each pair i < j of a random labeling is related with probability `density`.
inline Poset random_poset(int n, double density, SplitMix64& rng) {
  std::vector<int> label(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) label[static_cast<std::size_t>(i)] = i + 1;
  rng.shuffle(label);
  std::vector<std::pair<int, int>> rel;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform01() < density) rel.emplace_back(label[static_cast<std::size_t>(i)], label[static_cast<std::size_t>(j)]);
    }
  }
  return Poset::from_relations(n, rel);
}

/// Degree-1 problem over (+, ·): placing y costs 1 iff all of its predecessors are already placed.
inline PermutationProblem<SumProduct> linear_extension_problem(const Poset& poset) {
  return {poset.size(), 1, [poset](Mask prefix, std::span<const int> last) -> BigInt {
            const int y = last[0];
            return (poset.predecessors(y) & ~prefix) == 0 ? 1 : 0;
          }};
}

inline BigInt count_linear_extensions(const Poset& poset) {
  detail::require(poset.size() >= 1, "count_linear_extensions: empty poset");
  return evaluate_dp(linear_extension_problem(poset));
}

// File format: "n <n>" then one "a < b" line per relation.

inline void write_poset(std::ostream& os, const Poset& poset) {
  os << "n " << poset.size() << '\n';
  for (auto [a, b] : poset.covers()) os << a << " < " << b << '\n';
}

inline Poset read_poset(std::istream& is) {
  std::string line;
  int lineno = 0;
  if (!detail::next_content_line(is, line, lineno)) throw ParseError("empty poset file");
  const long long n = detail::parse_keyed(line, "n", lineno);
  if (n < 1 || n > kMaxSparseGround) throw ParseError("poset size out of range: " + std::to_string(n));
  std::vector<std::pair<int, int>> rel;
  while (detail::next_content_line(is, line, lineno)) {
    std::istringstream in(line);
    long long a = 0, b = 0;
    std::string op, extra;
    if (!(in >> a >> op >> b) || op != "<" || (in >> extra)) {
      throw ParseError("line " + std::to_string(lineno) + ": expected 'a < b'");
    }
    if (a < 1 || a > n || b < 1 || b > n) throw ParseError("line " + std::to_string(lineno) + ": element outside [n]");
    rel.emplace_back(static_cast<int>(a), static_cast<int>(b));
  }
  try {
    return Poset::from_relations(static_cast<int>(n), rel);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

}  // namespace chainfold

#endif  // CHAINFOLD_POSET_HPP
