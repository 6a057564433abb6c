#ifndef CHAINFOLD_SEMIRING_HPP
#define CHAINFOLD_SEMIRING_HPP

#include <algorithm>
#include <bit>
#include <concepts>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "chainfold/bigint.hpp"
#include "chainfold/cover.hpp"
#include "chainfold/error.hpp"
#include "chainfold/permutation.hpp"
#include "chainfold/set_system.hpp"
#include "chainfold/solver.hpp"

namespace chainfold {

template <class S>
concept Semiring = requires(const typename S::value_type& a, const typename S::value_type& b) {
  { S::zero() } -> std::convertible_to<typename S::value_type>;
  { S::one() } -> std::convertible_to<typename S::value_type>;
  { S::add(a, b) } -> std::convertible_to<typename S::value_type>;
  { S::mul(a, b) } -> std::convertible_to<typename S::value_type>;
  { S::idempotent } -> std::convertible_to<bool>;
};

/// (min, +) over 64-bit integers with +∞ absorbing.
struct MinPlus {
  using value_type = Cost;
  static constexpr bool idempotent = true;
  static constexpr value_type infinity = kInfCost;
  static value_type zero() { return infinity; }
  static value_type one() { return 0; }
  static value_type add(value_type a, value_type b) { return std::min(a, b); }
  static value_type mul(value_type a, value_type b) { return (a >= infinity || b >= infinity) ? infinity : a + b; }
};

/// (+, ·) over arbitrary-precision integers.
struct SumProduct {
  using value_type = BigInt;
  static constexpr bool idempotent = false;
  static value_type zero() { return 0; }
  static value_type one() { return 1; }
  static value_type add(const value_type& a, const value_type& b) { return a + b; }
  static value_type mul(const value_type& a, const value_type& b) { return a * b; }
};

/// (max, ·) over nonnegative rationals.
struct MaxTimes {
  using value_type = BigRational;
  static constexpr bool idempotent = true;
  static value_type zero() { return 0; }
  static value_type one() { return 1; }
  static value_type add(const value_type& a, const value_type& b) { return std::max(a, b); }
  static value_type mul(const value_type& a, const value_type& b) { return a * b; }
};

inline constexpr int kMaxDegree = 3;
inline constexpr int kMaxBruteProblem = 8;
inline constexpr int kMaxDpProblem = 20;

/*
 * f(π) = ⊗_j f_j(π^(j), π_{j−d+1}, …, π_j).  local_cost receives the prefix
 * set (which includes π_j, so j = |prefix|) and the last min(d, j) entries in
 * order, π_j last.
 */
template <Semiring S>
struct PermutationProblem {
  using value_type = typename S::value_type;
  int n = 0;
  int degree = 0;
  std::function<value_type(Mask prefix, std::span<const int> last)> local_cost;
};

namespace detail {

template <Semiring S>
void validate(const PermutationProblem<S>& p) {
  detail::require(p.n >= 1, "permutation problem needs n >= 1");
  detail::require(p.degree >= 0 && p.degree <= kMaxDegree, "degree must lie in [0, 3]");
  detail::require(static_cast<bool>(p.local_cost), "permutation problem has no local cost");
}

}  // namespace detail

/// ⊕ of f(π) over all n! permutations, folded in lexicographic order.
template <Semiring S>
typename S::value_type evaluate_brute(const PermutationProblem<S>& p) {
  detail::validate(p);
  detail::require_cap(p.n <= kMaxBruteProblem, "brute-force evaluation needs n <= 8");
  auto acc = S::zero();
  for_each_permutation(p.n, [&](std::span<const int> perm) {
    auto prod = S::one();
    Mask prefix = 0;
    for (int j = 1; j <= p.n; ++j) {
      prefix |= element_bit(perm[static_cast<std::size_t>(j - 1)]);
      const int w = std::min(p.degree, j);
      prod = S::mul(prod, p.local_cost(prefix, perm.subspan(static_cast<std::size_t>(j - w), static_cast<std::size_t>(w))));
    }
    acc = S::add(acc, prod);
  });
  return acc;
}

/*
 * Forward DP over (prefix set, last d−1 entries).  With `allowed`, only
 * prefix sets in that system are visited, i.e. the sum runs over the
 * permutations it supports.  Keys pack the mask above 5-bit entry codes.
 */
template <Semiring S>
typename S::value_type evaluate_dp(const PermutationProblem<S>& p, const SetSystem* allowed = nullptr) {
  detail::validate(p);
  detail::require_cap(p.n <= kMaxDpProblem, "DP evaluation needs n <= 20");
  if (allowed) {
    detail::require(allowed->ground_size() == p.n, "evaluate_dp: system over the wrong ground set");
    if (!allowed->contains(0)) return S::zero();
  }
  const int keep = std::max(0, p.degree - 1);
  using Key = std::uint64_t;
  constexpr int kCodeBits = 10;
  auto pack = [](Mask mask, std::span<const int> tail) {
    Key code = 0;
    for (int e : tail) code = (code << 5) | static_cast<Key>(e);
    return (mask << kCodeBits) | code;
  };
  std::unordered_map<Key, typename S::value_type> cur, next;
  cur.emplace(pack(0, {}), S::one());
  std::vector<int> tail, window;
  for (int j = 1; j <= p.n; ++j) {
    next.clear();
    const int have = std::min(keep, j - 1);
    for (const auto& [key, value] : cur) {
      const Mask mask = key >> kCodeBits;
      Key code = key & ((Key{1} << kCodeBits) - 1);
      tail.assign(static_cast<std::size_t>(have), 0);
      for (int i = have - 1; i >= 0; --i) {
        tail[static_cast<std::size_t>(i)] = static_cast<int>(code & 31);
        code >>= 5;
      }
      for (int y = 1; y <= p.n; ++y) {
        const Mask grown = mask | element_bit(y);
        if (grown == mask || (allowed && !allowed->contains(grown))) continue;
        window = tail;
        window.push_back(y);
        const int w = std::min(p.degree, j);
        const std::span<const int> last(window.data() + window.size() - static_cast<std::size_t>(w), static_cast<std::size_t>(w));
        auto cost = p.local_cost(grown, last);
        if (cost == S::zero()) continue;
        auto term = S::mul(value, cost);
        const std::size_t drop = window.size() > static_cast<std::size_t>(keep) ? window.size() - static_cast<std::size_t>(keep) : 0;
        const Key k = pack(grown, std::span<const int>(window).subspan(drop));
        auto [it, fresh] = next.try_emplace(k, term);
        if (!fresh) it->second = S::add(it->second, term);
      }
    }
    cur.swap(next);
  }
  auto acc = S::zero();
  for (const auto& [key, value] : cur) acc = S::add(acc, value);
  return acc;
}

/// ⊕ over members of the DP restricted to each member; no coverage or overlap checks.
template <Semiring S>
typename S::value_type evaluate_members(const PermutationProblem<S>& p, const CoverFamily& family) {
  auto acc = S::zero();
  for (std::size_t j = 0; j < family.size(); ++j) {
    const SetSystem member = family.member(j);
    acc = S::add(acc, evaluate_dp(p, &member));
  }
  return acc;
}

/// Overlapping members are harmless only when x ⊕ x = x.
template <Semiring S>
typename S::value_type evaluate_restricted(const PermutationProblem<S>& p, const CoverFamily& family) {
  if (!S::idempotent) throw std::invalid_argument("evaluate_restricted: semiring is not additively idempotent");
  detail::require(family.ground_size() == p.n, "evaluate_restricted: family over the wrong ground set");
  if (!is_covering(family)) throw CoverageError("evaluate_restricted: family does not cover all permutations");
  return evaluate_members(p, family);
}

/// Any semiring, provided every permutation is supported by exactly one member.
template <Semiring S>
typename S::value_type evaluate_unique(const PermutationProblem<S>& p, const CoverFamily& family) {
  if (!family.unique_mode) throw std::invalid_argument("evaluate_unique: family is not in unique mode");
  detail::require(family.ground_size() == p.n, "evaluate_unique: family over the wrong ground set");
  if (family.ground_size() <= kMaxCoverGround && !is_unique_cover(family)) {
    throw CoverageError("evaluate_unique: some permutation is not supported by exactly one member");
  }
  return evaluate_members(p, family);
}

/// Minimum tour value: f_1 pins the tour to start at city 1, f_n adds the closing edge.
inline PermutationProblem<MinPlus> tsp_problem(const TspInstance& inst) {
  const int n = inst.size();
  return {n, 2, [inst, n](Mask prefix, std::span<const int> last) -> Cost {
            if (last.size() == 1) return last[0] == 1 ? 0 : MinPlus::infinity;
            Cost c = inst.d(last[0], last[1]);
            if (std::popcount(prefix) == n) c += inst.d(last[1], 1);
            return c;
          }};
}

/// Minimum Hamiltonian path value over all start and end cities.
inline PermutationProblem<MinPlus> hamiltonian_path_problem(const TspInstance& inst) {
  return {inst.size(), 2, [inst](Mask, std::span<const int> last) -> Cost {
            return last.size() == 1 ? 0 : inst.d(last[0], last[1]);
          }};
}

}  // namespace chainfold

#endif  // CHAINFOLD_SEMIRING_HPP
