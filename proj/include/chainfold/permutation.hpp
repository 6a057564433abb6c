#ifndef CHAINFOLD_PERMUTATION_HPP
#define CHAINFOLD_PERMUTATION_HPP

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "chainfold/error.hpp"
#include "chainfold/random.hpp"

namespace chainfold {

/// A subset of the ground set [n]; element e occupies bit e-1.
using Mask = std::uint64_t;

inline constexpr int kMaxSparseGround = 63;
inline constexpr int kMaxDenseGround = 28;

constexpr Mask element_bit(int e) { return Mask{1} << (e - 1); }

constexpr Mask full_mask(int n) { return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1; }

/// An ordering of [n] with 1-based entries.
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<int> order) : order_(std::move(order)) {
    const int n = size();
    detail::require(n <= kMaxSparseGround, "permutation longer than 63 entries");
    Mask seen = 0;
    for (int e : order_) {
      detail::require(e >= 1 && e <= n, "permutation entry out of range: " + std::to_string(e));
      detail::require(!(seen & element_bit(e)), "permutation repeats entry " + std::to_string(e));
      seen |= element_bit(e);
    }
  }

  static Permutation identity(int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 1);
    return Permutation(std::move(v));
  }

  static Permutation random(int n, SplitMix64& rng) {
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 1);
    rng.shuffle(v);
    return Permutation(std::move(v));
  }

  int size() const { return static_cast<int>(order_.size()); }

  /// Entry at 0-based position i.
  int operator[](int i) const { return order_[static_cast<std::size_t>(i)]; }

  /// Value of the permutation as a map on [n]: e -> order[e-1].
  int apply(int e) const { return order_[static_cast<std::size_t>(e - 1)]; }

  std::span<const int> entries() const { return order_; }
  auto begin() const { return order_.begin(); }
  auto end() const { return order_.end(); }

  Permutation inverse() const {
    std::vector<int> inv(order_.size());
    for (int i = 0; i < size(); ++i) inv[static_cast<std::size_t>(order_[i] - 1)] = i + 1;
    return Permutation(std::move(inv));
  }

  /// (this ∘ other)(e) = this(other(e)).
  Permutation compose(const Permutation& other) const {
    detail::require(other.size() == size(), "compose: size mismatch");
    std::vector<int> out(order_.size());
    for (int i = 0; i < size(); ++i) out[static_cast<std::size_t>(i)] = apply(other[i]);
    return Permutation(std::move(out));
  }

  /// Maps a set elementwise through this permutation.
  Mask map_set(Mask s) const {
    Mask out = 0;
    while (s) {
      const int e = std::countr_zero(s) + 1;
      out |= element_bit(apply(e));
      s &= s - 1;
    }
    return out;
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < order_.size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(order_[i]);
    }
    return out;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> order_;
};

/// Prefix-sets π^(0) = ∅, π^(1), ..., π^(n) = [n].
inline std::vector<Mask> prefix_chain(const Permutation& p) {
  std::vector<Mask> chain;
  chain.reserve(static_cast<std::size_t>(p.size()) + 1);
  Mask s = 0;
  chain.push_back(s);
  for (int e : p) {
    s |= element_bit(e);
    chain.push_back(s);
  }
  return chain;
}

/// Induced split over consecutive blocks of the ground set; block i holds
/// the elements (offset_i, offset_i + sizes[i]] and is renumbered from 1.
inline std::vector<Permutation> induced_split(const Permutation& p, std::span<const int> sizes) {
  int total = 0;
  for (int s : sizes) {
    detail::require(s > 0, "induced_split: block sizes must be positive");
    total += s;
  }
  detail::require(total == p.size(), "induced_split: block sizes must sum to n");

  std::vector<int> block_of(static_cast<std::size_t>(p.size()) + 1);
  std::vector<int> offset(sizes.size());
  int acc = 0;
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    offset[b] = acc;
    for (int e = acc + 1; e <= acc + sizes[b]; ++e) block_of[static_cast<std::size_t>(e)] = static_cast<int>(b);
    acc += sizes[b];
  }
  std::vector<std::vector<int>> parts(sizes.size());
  for (int e : p) {
    const auto b = static_cast<std::size_t>(block_of[static_cast<std::size_t>(e)]);
    parts[b].push_back(e - offset[b]);
  }
  std::vector<Permutation> out;
  out.reserve(parts.size());
  for (auto& part : parts) out.emplace_back(std::move(part));
  return out;
}

/// Position of p among all permutations of [n] in lexicographic order.
inline std::uint64_t permutation_rank(std::span<const int> p) {
  const int n = static_cast<int>(p.size());
  std::uint64_t rank = 0;
  Mask used = 0;
  for (int i = 0; i < n; ++i) {
    const int e = p[static_cast<std::size_t>(i)];
    const auto smaller_unused = static_cast<std::uint64_t>(std::popcount(~used & (element_bit(e) - 1)));
    rank = rank * static_cast<std::uint64_t>(n - i) + smaller_unused;
    used |= element_bit(e);
  }
  return rank;
}

inline std::uint64_t factorial_u64(int n) {
  detail::require_cap(n <= 20, "factorial exceeds 64 bits");
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

/// Calls fn(std::span<const int>) for every permutation of [n] in lexicographic order.
template <class Fn>
void for_each_permutation(int n, Fn&& fn) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 1);
  do {
    fn(std::span<const int>(v));
  } while (std::next_permutation(v.begin(), v.end()));
}

}  // namespace chainfold

#endif  // CHAINFOLD_PERMUTATION_HPP
