#ifndef CHAINFOLD_CONSTRUCTIONS_HPP
#define CHAINFOLD_CONSTRUCTIONS_HPP

#include <bit>
#include <cmath>
#include <string>
#include <vector>

#include "chainfold/error.hpp"
#include "chainfold/random.hpp"
#include "chainfold/set_system.hpp"

namespace chainfold {

namespace detail {

/// floor(fraction · n), tolerant of representation error such as 6 · (2/3).
inline int floor_count(double fraction, int n) {
  return static_cast<int>(std::floor(fraction * n + 1e-9));
}

inline int ceil_count(double fraction, int n) {
  return static_cast<int>(std::ceil(fraction * n - 1e-9));
}

/// Low `count` bits starting at bit `from`.
constexpr Mask bit_range(int from, int count) { return full_mask(count) << from; }

}  // namespace detail

inline SetSystem powerset(int n) {
  detail::require(n >= 0, "powerset: negative n");
  return SetSystem::from_predicate(n, [](Mask) { return true; });
}

/// Prefix-sets of the identity permutation.
inline SetSystem single_chain(int n) {
  detail::require(n >= 1, "single_chain: n must be positive");
  return closure_from_permutations(n, std::vector<Permutation>{Permutation::identity(n)});
}

/// Order ideals of k stacked antichains of size t (antichain i holds
/// elements i·t+1 .. (i+1)·t).  |F| = k·2^t − k + 1 and C(F) = (t!)^k.
inline SetSystem tower_of_cubes(int t, int k) {
  detail::require(t >= 1 && k >= 1, "tower_of_cubes: t and k must be positive");
  detail::require_cap(t * k <= kMaxSparseGround, "tower_of_cubes: t·k exceeds 63");
  detail::require_cap(t <= kMaxDenseGround, "tower_of_cubes: t exceeds 28");
  std::vector<Mask> sets;
  sets.reserve(static_cast<std::size_t>(k) * (std::size_t{1} << t));
  const Mask cube = Mask{1} << t;
  for (int i = 0; i < k; ++i) {
    const Mask below = full_mask(i * t);
    // The full cube of antichain i is the empty face of antichain i+1.
    const Mask last = (i == k - 1) ? cube : cube - 1;
    for (Mask sub = 0; sub < last; ++sub) sets.push_back(below | (sub << (i * t)));
  }
  return SetSystem(t * k, std::move(sets));
}

/// 2^[13] ∪ {[13] ∪ (s + 13)} over [26]; the same system as tower_of_cubes(13, 2).
inline SetSystem koivisto_parviainen() { return tower_of_cubes(13, 2); }

/// F' ∪ F'' ∪ F''' over [2k] with threshold m = ⌈βk⌉:
///   F'   = 2^[k]
///   F''  = {[k] ∪ (s + k)}
///   F''' = {s1 ∪ (s2 + k) : |s1| ≥ m, |s2| ≤ k − m}
inline SetSystem warmup_system(int k, double beta) {
  detail::require(k >= 1, "warmup_system: k must be positive");
  detail::require(beta >= 0.5 - 1e-12 && beta <= 1.0 + 1e-12, "warmup_system: beta must lie in [1/2, 1]");
  detail::require_cap(k <= kMaxDenseGround, "warmup_system: k exceeds 28");
  detail::require_cap(2 * k <= kMaxSparseGround, "warmup_system: 2k exceeds 63");
  const int m = detail::ceil_count(beta, k);
  const Mask low = full_mask(k);
  const Mask cube = Mask{1} << k;
  std::vector<Mask> sets;
  for (Mask s = 0; s < cube; ++s) {
    sets.push_back(s);
    sets.push_back(low | (s << k));
  }
  for (Mask s1 = 0; s1 < cube; ++s1) {
    if (std::popcount(s1) < m) continue;
    for (Mask s2 = 0; s2 < cube; ++s2) {
      if (std::popcount(s2) <= k - m) sets.push_back(s1 | (s2 << k));
    }
  }
  return SetSystem(2 * k, std::move(sets));
}

/// Prefix collection of the randomized warm-up solver for a guessed first
/// half `first` of [n] and m = ⌊αn⌋: subsets of `first`; `first` plus any
/// subset of the rest; and prefixes holding ≥ m elements of `first` and at
/// most |rest| − m of the rest.
inline SetSystem warmup_prefix_system(int n, Mask first, double alpha) {
  detail::require(alpha >= -1e-12 && alpha <= 0.5 + 1e-12, "warmup_prefix_system: alpha must lie in [0, 1/2]");
  detail::require_cap(n <= kMaxDenseGround, "warmup_prefix_system: n exceeds 28");
  detail::require(!(first & ~full_mask(n)), "warmup_prefix_system: split outside the ground set");
  const Mask rest = full_mask(n) & ~first;
  const int m = detail::floor_count(alpha, n);
  const int rest_budget = std::popcount(rest) - m;
  std::vector<Mask> sets;
  // Submask enumeration: sub runs over all subsets of `of`, ending at 0.
  auto each_subset = [](Mask of, auto&& fn) {
    Mask sub = of;
    while (true) {
      fn(sub);
      if (sub == 0) break;
      sub = (sub - 1) & of;
    }
  };
  each_subset(first, [&](Mask s) { sets.push_back(s); });
  each_subset(rest, [&](Mask t) { sets.push_back(first | t); });
  if (rest_budget >= 0) {
    each_subset(first, [&](Mask s1) {
      if (std::popcount(s1) < m) return;
      each_subset(rest, [&](Mask t) {
        if (std::popcount(t) <= rest_budget) sets.push_back(s1 | t);
      });
    });
  }
  return SetSystem(n, std::move(sets));
}

/// Each subset of [n] kept independently with probability `density`; with
/// `with_ends`, ∅ and [n] are always kept.
inline SetSystem random_system(int n, double density, SplitMix64& rng, bool with_ends = true) {
  detail::require_cap(n <= kMaxDenseGround, "random_system: n exceeds 28");
  return SetSystem::from_predicate(n, [&](Mask s) {
    if (with_ends && (s == 0 || s == full_mask(n))) return true;
    return rng.uniform01() < density;
  });
}

struct Thm41Params {
  int n = 0;
  double alpha = 0;
  double beta = 0;
  double gamma = 0;
};

/// Integer block sizes after flooring: |L1| = |R1| = half, |L2| = |R2| = outer,
/// prefix = βn, band = γn.
struct Thm41Counts {
  int n = 0;
  int half = 0;
  int outer = 0;
  int prefix = 0;
  int band = 0;
};

inline Thm41Counts thm41_counts(const Thm41Params& p) {
  constexpr double tol = 1e-12;
  detail::require(p.n >= 2 && p.n % 2 == 0, "thm41: n must be even and at least 2");
  detail::require(p.beta >= 0.25 - tol && p.beta <= p.gamma + tol && p.gamma <= 0.5 + tol,
                  "thm41: need 1/4 <= beta <= gamma <= 1/2");
  detail::require(p.beta <= p.alpha + tol && p.alpha <= 0.5 + tol, "thm41: need beta <= alpha <= 1/2");
  detail::require_cap(p.n <= kMaxDenseGround, "thm41: n exceeds 28");
  Thm41Counts c;
  c.n = p.n;
  c.half = p.n / 2;
  c.outer = detail::floor_count(p.alpha, p.n);
  c.prefix = detail::floor_count(p.beta, p.n);
  c.band = detail::floor_count(p.gamma, p.n);
  detail::require(c.prefix <= c.outer && c.outer <= c.half && c.prefix <= c.band && c.band <= c.half,
                  "thm41: floored counts violate the parameter ordering");
  return c;
}

/*
 * Canonical blocks: L1 = [1..n/2], R1 = the rest, L2 = [1..αn] ⊆ L1 and
 * R2 = [n−αn+1..n] ⊆ R1.  The system is the closure of all permutations whose
 * first βn entries lie in L2, whose last βn entries lie in R2, and whose first
 * half holds at least γn elements of L1.  A set s with |s| = k is such a
 * prefix-set exactly when
 *   - k ≤ βn ? s ⊆ L2 : |s ∩ L2| ≥ βn,
 *   - n−k ≤ βn ? s ⊇ complement of R2 : |R2 \ s| ≥ βn,
 *   - k ≤ n/2 ⇒ |s ∩ R1| ≤ n/2 − γn, and k ≥ n/2 ⇒ |s ∩ L1| ≥ γn.
 */
inline bool thm41_member(const Thm41Counts& c, Mask s) {
  const Mask l1 = detail::bit_range(0, c.half);
  const Mask r1 = detail::bit_range(c.half, c.n - c.half);
  const Mask l2 = detail::bit_range(0, c.outer);
  const Mask r2 = detail::bit_range(c.n - c.outer, c.outer);
  const int k = std::popcount(s);
  if (k <= c.prefix) {
    if (s & ~l2) return false;
  } else if (std::popcount(s & l2) < c.prefix) {
    return false;
  }
  const Mask comp = full_mask(c.n) & ~s;
  if (c.n - k <= c.prefix) {
    if (comp & ~r2) return false;
  } else if (std::popcount(comp & r2) < c.prefix) {
    return false;
  }
  if (k <= c.half && std::popcount(s & r1) > c.half - c.band) return false;
  if (k >= c.half && std::popcount(s & l1) < c.band) return false;
  return true;
}

inline SetSystem theorem41_system(const Thm41Params& p) {
  const Thm41Counts c = thm41_counts(p);
  return SetSystem::from_predicate(c.n, [&](Mask s) { return thm41_member(c, s); });
}

struct Thm45Params {
  int n = 0;
  double alpha = 0;
  double beta = 0;
};

/// Subsets of L = [1..l_size] with at most `prefix` elements, plus every set
/// holding at least `prefix` elements of L.
inline SetSystem theorem45_system(int n, int l_size, int prefix) {
  detail::require(n >= 1, "thm45: n must be positive");
  detail::require(0 <= prefix && prefix <= l_size && l_size <= n, "thm45: need 0 <= prefix <= |L| <= n");
  const Mask l = full_mask(l_size);
  return SetSystem::from_predicate(n, [&](Mask s) {
    const int k = std::popcount(s);
    if (k <= prefix) return (s & ~l) == 0;
    return std::popcount(s & l) >= prefix;
  });
}

inline SetSystem theorem45_system(const Thm45Params& p) {
  constexpr double tol = 1e-12;
  detail::require(p.alpha > 0 && p.alpha <= 1 + tol, "thm45: need 0 < alpha <= 1");
  detail::require(p.beta >= p.alpha / 2 - tol && p.beta <= p.alpha + tol, "thm45: need alpha/2 <= beta <= alpha");
  detail::require_cap(p.n <= kMaxDenseGround, "thm45: n exceeds 28");
  return theorem45_system(p.n, detail::floor_count(p.alpha, p.n), detail::floor_count(p.beta, p.n));
}

}  // namespace chainfold

#endif  // CHAINFOLD_CONSTRUCTIONS_HPP
