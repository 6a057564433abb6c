#ifndef CHAINFOLD_SOLVER_HPP
#define CHAINFOLD_SOLVER_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "chainfold/bigint.hpp"
#include "chainfold/constructions.hpp"
#include "chainfold/cover.hpp"
#include "chainfold/error.hpp"
#include "chainfold/permutation.hpp"
#include "chainfold/random.hpp"
#include "chainfold/set_system.hpp"

namespace chainfold {

using Cost = std::int64_t;

/// Larger than any tour cost the instance validator admits.
inline constexpr Cost kInfCost = std::numeric_limits<Cost>::max() / 4;

/// Worst-case tour magnitude must stay below 2^60.
inline constexpr Cost kMaxTourMagnitude = Cost{1} << 60;

/// n cities, full row-major distance matrix; d(i, j) is the cost of going from i to j.
class TspInstance {
 public:
  TspInstance(int n, std::vector<Cost> dist) : n_(n), dist_(std::move(dist)) {
    detail::require(n >= 2, "TSP instance needs at least 2 cities");
    detail::require_cap(n <= kMaxSparseGround, "TSP instance larger than 63 cities");
    detail::require(dist_.size() == static_cast<std::size_t>(n) * static_cast<std::size_t>(n),
                    "distance matrix has the wrong number of entries");
    __int128 worst = 0;
    for (int i = 1; i <= n; ++i) {
      __int128 row = 0;
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        const __int128 w = d(i, j);
        row = std::max(row, w < 0 ? -w : w);
      }
      worst += row;
    }
    detail::require(worst < kMaxTourMagnitude, "edge weights too large: a tour sum could overflow");
  }

  int size() const { return n_; }

  Cost d(int i, int j) const {
    return dist_[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j - 1)];
  }

 private:
  int n_;
  std::vector<Cost> dist_;
};

struct Solution {
  Cost value = 0;
  Permutation tour;
  std::size_t table_entries = 0;  ///< DP table entries allocated (0 for enumeration)
};

inline Cost cyclic_cost(const TspInstance& inst, std::span<const int> tour) {
  Cost total = 0;
  for (std::size_t i = 0; i < tour.size(); ++i) total += inst.d(tour[i], tour[(i + 1) % tour.size()]);
  return total;
}

inline Cost cyclic_cost(const TspInstance& inst, const Permutation& tour) { return cyclic_cost(inst, tour.entries()); }

namespace detail {

inline bool better(Cost value, std::span<const int> tour, Cost best_value, std::span<const int> best_tour) {
  if (value != best_value) return value < best_value;
  return std::lexicographical_compare(tour.begin(), tour.end(), best_tour.begin(), best_tour.end());
}

struct PathResult {
  Cost value = kInfCost;
  std::vector<int> order;  ///< starts with the start city
  std::size_t entries = 0;
};

/*
 * Cheapest walk that starts at `start`, visits every city of `others`
 * exactly once and then pays exit(last).  Backward table: G(S, i) is the
 * cheapest completion from others[i] after visiting S.  Reconstruction takes
 * the smallest next city among the optimal ones, so with `others` ascending
 * the returned order is lexicographically smallest.
 */
template <class Exit>
PathResult subset_path_dp(const TspInstance& inst, std::span<const int> others, int start, Exit&& exit) {
  const int m = static_cast<int>(others.size());
  PathResult out;
  if (m == 0) {
    out.value = exit(start);
    out.order = {start};
    return out;
  }
  const std::size_t states = std::size_t{1} << m;
  std::vector<Cost> g(states * static_cast<std::size_t>(m), kInfCost);
  out.entries = g.size();
  auto at = [&](std::size_t s, int i) -> Cost& { return g[s * static_cast<std::size_t>(m) + static_cast<std::size_t>(i)]; };
  const std::size_t full = states - 1;
  for (int i = 0; i < m; ++i) at(full, i) = exit(others[static_cast<std::size_t>(i)]);
  for (std::size_t s = full; s-- > 1;) {
    for (int i = 0; i < m; ++i) {
      if (!((s >> i) & 1)) continue;
      const int c = others[static_cast<std::size_t>(i)];
      Cost best = kInfCost;
      for (int y = 0; y < m; ++y) {
        if ((s >> y) & 1) continue;
        const Cost rest = at(s | (std::size_t{1} << y), y);
        if (rest >= kInfCost) continue;
        best = std::min(best, inst.d(c, others[static_cast<std::size_t>(y)]) + rest);
      }
      at(s, i) = best;
    }
  }
  int first = -1;
  for (int i = 0; i < m; ++i) {
    const Cost rest = at(std::size_t{1} << i, i);
    if (rest >= kInfCost) continue;
    const Cost v = inst.d(start, others[static_cast<std::size_t>(i)]) + rest;
    if (v < out.value) {
      out.value = v;
      first = i;
    }
  }
  if (first < 0) return out;
  out.order.reserve(static_cast<std::size_t>(m) + 1);
  out.order.push_back(start);
  std::size_t s = std::size_t{1} << first;
  int i = first;
  out.order.push_back(others[static_cast<std::size_t>(i)]);
  while (s != full) {
    const Cost want = at(s, i);
    const int c = others[static_cast<std::size_t>(i)];
    for (int y = 0; y < m; ++y) {
      if ((s >> y) & 1) continue;
      const Cost rest = at(s | (std::size_t{1} << y), y);
      if (rest < kInfCost && inst.d(c, others[static_cast<std::size_t>(y)]) + rest == want) {
        s |= std::size_t{1} << y;
        i = y;
        break;
      }
    }
    out.order.push_back(others[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace detail

inline constexpr int kMaxBruteForceCities = 11;
inline constexpr int kMaxHeldKarpCities = 24;

/// All (n-1)! tours with city 1 first, in lexicographic order.
inline Solution brute_force(const TspInstance& inst) {
  const int n = inst.size();
  detail::require_cap(n <= kMaxBruteForceCities, "brute force needs n <= 11");
  std::vector<int> tour(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) tour[static_cast<std::size_t>(i)] = i + 1;
  std::vector<int> best = tour;
  Cost best_value = kInfCost;
  do {
    const Cost v = cyclic_cost(inst, tour);
    if (v < best_value) {
      best_value = v;
      best = tour;
    }
  } while (std::next_permutation(tour.begin() + 1, tour.end()));
  return Solution{best_value, Permutation(std::move(best)), 0};
}

/// Bellman–Held–Karp anchored at city 1.
inline Solution held_karp(const TspInstance& inst) {
  const int n = inst.size();
  detail::require_cap(n <= kMaxHeldKarpCities, "Held-Karp needs n <= 24");
  std::vector<int> others;
  for (int c = 2; c <= n; ++c) others.push_back(c);
  auto r = detail::subset_path_dp(inst, others, 1, [&](int c) { return inst.d(c, 1); });
  return Solution{r.value, Permutation(std::move(r.order)), r.entries};
}

/*
 * Cheapest cyclic tour among the permutations supported by f, or nullopt if
 * f supports none.  One backward sweep per first city c0 over states
 * (set of f containing c0, last city); the table holds |f|·n entries and is
 * reused across first cities.
 */
inline std::optional<Solution> restricted_dp(const TspInstance& inst, const SetSystem& f) {
  const int n = inst.size();
  detail::require(f.ground_size() == n, "restricted_dp: set system and instance differ in ground-set size");
  if (!f.contains(0) || !f.contains(full_mask(n))) return std::nullopt;

  const std::vector<Mask> sets = f.sets();
  const std::size_t count = sets.size();
  // Successors in CSR form: for set i, pairs (city, index of set ∪ {city}), city ascending.
  std::vector<std::size_t> first(count + 1, 0);
  std::vector<std::pair<int, std::size_t>> succ;
  for (std::size_t i = 0; i < count; ++i) {
    first[i] = succ.size();
    for (int y = 1; y <= n; ++y) {
      if (sets[i] & element_bit(y)) continue;
      const std::size_t j = f.index_of(sets[i] | element_bit(y));
      if (j != SetSystem::npos) succ.emplace_back(y, j);
    }
  }
  first[count] = succ.size();

  const auto un = static_cast<std::size_t>(n);
  std::vector<Cost> g(count * un, kInfCost);
  auto at = [&](std::size_t i, int c) -> Cost& { return g[i * un + static_cast<std::size_t>(c - 1)]; };
  const std::size_t top = count - 1;  // [n] is the unique set of the last level

  std::optional<Solution> best;
  std::vector<int> tour;
  for (int c0 = 1; c0 <= n; ++c0) {
    const std::size_t start = f.index_of(element_bit(c0));
    if (start == SetSystem::npos) continue;
    std::fill(g.begin(), g.end(), kInfCost);
    for (int c = 1; c <= n; ++c) {
      if (c != c0) at(top, c) = inst.d(c, c0);
    }
    for (std::size_t i = top; i-- > start;) {
      const Mask s = sets[i];
      if (!(s & element_bit(c0))) continue;
      for (Mask rest = s & ~element_bit(c0); rest; rest &= rest - 1) {
        const int c = std::countr_zero(rest) + 1;
        Cost v = kInfCost;
        for (std::size_t k = first[i]; k < first[i + 1]; ++k) {
          const auto [y, j] = succ[k];
          const Cost r = at(j, y);
          if (r < kInfCost) v = std::min(v, inst.d(c, y) + r);
        }
        at(i, c) = v;
      }
    }
    // The start state ({c0}, c0).
    Cost v0 = kInfCost;
    if (n == 1) v0 = 0;
    for (std::size_t k = first[start]; k < first[start + 1]; ++k) {
      const auto [y, j] = succ[k];
      const Cost r = at(j, y);
      if (r < kInfCost) v0 = std::min(v0, inst.d(c0, y) + r);
    }
    if (v0 >= kInfCost) continue;
    if (best && v0 > best->value) continue;

    tour.assign(1, c0);
    std::size_t i = start;
    int c = c0;
    Cost want = v0;
    while (i != top) {
      for (std::size_t k = first[i]; k < first[i + 1]; ++k) {
        const auto [y, j] = succ[k];
        const Cost r = at(j, y);
        if (r < kInfCost && inst.d(c, y) + r == want) {
          want = r;
          i = j;
          c = y;
          break;
        }
      }
      tour.push_back(c);
    }
    if (!best || detail::better(v0, tour, best->value, best->tour.entries())) {
      best = Solution{v0, Permutation(tour), g.size()};
    }
  }
  if (best) best->table_entries = g.size();
  return best;
}

namespace detail {

/*
 * Divide and conquer on Hamiltonian paths: guess the first ⌊m/2⌋ cities of
 * the path (a set containing its start but not its end) and the two cities
 * where the halves meet.  Results are memoized per (cities, start, end, depth).
 */
class GurevichShelah {
 public:
  explicit GurevichShelah(const TspInstance& inst) : inst_(inst) {}

  const PathResult& path(Mask cities, int u, int v, int depth) {
    const auto key = std::make_tuple(cities, u, v, depth);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    PathResult r = depth == 0 || std::popcount(cities) <= 2 ? base(cities, u, v) : split(cities, u, v, depth);
    peak_ = std::max(peak_, r.entries);
    return memo_.emplace(key, std::move(r)).first->second;
  }

  /// Tour anchored at city 1: path over the first half to x, then y..z over the rest, then back.
  Solution tour(int depth) {
    const int n = inst_.size();
    const int h = n / 2;
    PathResult best;
    const Mask rest_all = full_mask(n) & ~element_bit(1);
    for_each_subset_of_size(rest_all, h - 1, [&](Mask extra) {
      const Mask a = extra | element_bit(1);
      const Mask b = full_mask(n) & ~a;
      for (int x = 1; x <= n; ++x) {
        if (!(a & element_bit(x)) || (x == 1 && h > 1)) continue;
        const PathResult& left = path(a, 1, x, depth - 1);
        if (left.value >= kInfCost) continue;
        for (int y = 1; y <= n; ++y) {
          if (!(b & element_bit(y))) continue;
          for (int z = 1; z <= n; ++z) {
            if (!(b & element_bit(z)) || ((y == z) != (std::popcount(b) == 1))) continue;
            const PathResult& right = path(b, y, z, depth - 1);
            if (right.value >= kInfCost) continue;
            consider(best, left, right, inst_.d(x, y) + inst_.d(z, 1));
          }
        }
      }
    });
    return Solution{best.value, Permutation(std::move(best.order)), peak_};
  }

 private:
  template <class Fn>
  static void for_each_subset_of_size(Mask of, int k, Fn&& fn) {
    std::vector<int> elems;
    for (Mask r = of; r; r &= r - 1) elems.push_back(std::countr_zero(r));
    const int m = static_cast<int>(elems.size());
    if (k < 0 || k > m) return;
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
      Mask s = 0;
      for (int i : idx) s |= Mask{1} << elems[static_cast<std::size_t>(i)];
      fn(s);
      int i = k - 1;
      while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i) --i;
      if (i < 0) return;
      ++idx[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }

  void consider(PathResult& best, const PathResult& left, const PathResult& right, Cost link) {
    const Cost v = left.value + right.value + link;
    if (v > best.value) return;
    std::vector<int> order = left.order;
    order.insert(order.end(), right.order.begin(), right.order.end());
    if (v < best.value || order < best.order) {
      best.value = v;
      best.order = std::move(order);
    }
  }

  PathResult base(Mask cities, int u, int v) {
    std::vector<int> others;
    for (Mask r = cities & ~element_bit(u); r; r &= r - 1) others.push_back(std::countr_zero(r) + 1);
    return subset_path_dp(inst_, others, u, [v](int c) { return c == v ? Cost{0} : kInfCost; });
  }

  PathResult split(Mask cities, int u, int v, int depth) {
    const int m = std::popcount(cities);
    const int h = m / 2;
    PathResult best;
    const Mask pool = cities & ~element_bit(u) & ~element_bit(v);
    for_each_subset_of_size(pool, h - 1, [&](Mask extra) {
      const Mask a = extra | element_bit(u);
      const Mask b = cities & ~a;
      const bool single_a = h == 1;
      const bool single_b = std::popcount(b) == 1;
      for (Mask ra = a; ra; ra &= ra - 1) {
        const int x = std::countr_zero(ra) + 1;
        if ((x == u) != single_a) continue;
        const PathResult& left = path(a, u, x, depth - 1);
        if (left.value >= kInfCost) continue;
        for (Mask rb = b; rb; rb &= rb - 1) {
          const int y = std::countr_zero(rb) + 1;
          if ((y == v) != single_b) continue;
          const PathResult& right = path(b, y, v, depth - 1);
          if (right.value >= kInfCost) continue;
          consider(best, left, right, inst_.d(x, y));
        }
      }
    });
    return best;
  }

  const TspInstance& inst_;
  std::map<std::tuple<Mask, int, int, int>, PathResult> memo_;
  std::size_t peak_ = 0;
};

}  // namespace detail

/// Divide and conquer for `depth` levels, then Held–Karp on the subpaths.
inline Solution gurevich_shelah(const TspInstance& inst, int depth) {
  detail::require(depth >= 0, "gurevich_shelah: negative depth");
  if (depth == 0) return held_karp(inst);
  detail::require_cap(inst.size() <= kMaxHeldKarpCities, "gurevich_shelah needs n <= 24");
  detail::GurevichShelah gs(inst);
  return gs.tour(depth);
}

/// ⌈n/p⌉ with p = C(n − 2m, h − m)/C(n, h), h = ⌊n/2⌋, m = ⌊αn⌋.
inline BigInt warmup_trial_count(int n, double alpha) {
  const int h = n / 2;
  const int m = detail::floor_count(alpha, n);
  const BigInt good = binomial(n - 2 * m, h - m);
  detail::require(good > 0, "warm-up: no split satisfies the guarantee");
  const BigInt num = binomial(n, h) * n;
  return (num + good - 1) / good;
}

struct WarmupStats {
  std::size_t trials = 0;
  std::size_t distinct_splits = 0;
};

/// Best restricted tour over `trials` seeded uniform choices of the ⌊n/2⌋-set S′.
inline Solution warmup_solver(const TspInstance& inst, double alpha, std::size_t trials, std::uint64_t seed,
                              WarmupStats* stats = nullptr) {
  const int n = inst.size();
  detail::require(trials >= 1, "warm-up: need at least one trial");
  detail::require(alpha >= 0 && alpha <= 0.5 + 1e-12, "warm-up: alpha must lie in [0, 1/2]");
  SplitMix64 rng(seed);
  std::map<Mask, bool> seen;
  std::optional<Solution> best;
  std::vector<int> cities(static_cast<std::size_t>(n));
  for (std::size_t t = 0; t < trials; ++t) {
    for (int i = 0; i < n; ++i) cities[static_cast<std::size_t>(i)] = i + 1;
    rng.shuffle(cities);
    Mask a = 0;
    for (int i = 0; i < n / 2; ++i) a |= element_bit(cities[static_cast<std::size_t>(i)]);
    if (!seen.emplace(a, true).second) continue;
    auto r = restricted_dp(inst, warmup_prefix_system(n, a, alpha));
    if (!r) continue;
    if (!best || detail::better(r->value, r->tour.entries(), best->value, best->tour.entries())) {
      best = std::move(r);
    }
  }
  if (stats) *stats = WarmupStats{trials, seen.size()};
  detail::require(best.has_value(), "warm-up: no trial produced a tour");
  return *best;
}

/// Oracle mode: every ⌊n/2⌋-subset as S′.
inline Solution warmup_solver_exhaustive(const TspInstance& inst, double alpha) {
  const int n = inst.size();
  detail::require_cap(n <= 20, "exhaustive warm-up needs n <= 20");
  std::optional<Solution> best;
  for (Mask a = 0; a < (Mask{1} << n); ++a) {
    if (std::popcount(a) != n / 2) continue;
    auto r = restricted_dp(inst, warmup_prefix_system(n, a, alpha));
    if (!r) continue;
    if (!best || detail::better(r->value, r->tour.entries(), best->value, best->tour.entries())) {
      best = std::move(r);
    }
  }
  return *best;
}

/// Consecutive blocks: k = ⌊n/m⌋ blocks, the remainder spread over the last ones.
inline std::vector<int> block_sizes(int n, int block_size) {
  detail::require(block_size >= 1 && block_size <= n, "block size must lie in [1, n]");
  const int k = n / block_size;
  const int r = n % block_size;
  std::vector<int> sizes(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) sizes[static_cast<std::size_t>(i)] = block_size + r / k + (i >= k - r % k ? 1 : 0);
  return sizes;
}

/// Exact minimum cover of the two-level bucket order for blocks up to 5,
/// pruned random cover above that.
inline CoverFamily default_block_family(int size, std::uint64_t seed = 0) {
  const SetSystem base = theorem45_system(size, size / 2, size / 2);
  if (size <= kMaxExactCoverGround) return exact_min_cover(base);
  return greedy_prune(random_cover(base, seed));
}

/*
 * For every tuple j of members, one per block, runs restricted_dp on the
 * union product of the chosen members and keeps the best tour.  Tuples may
 * be split across threads; the (value, tour) minimum does not depend on the
 * order in which they finish.
 */
inline Solution framework_solver(const TspInstance& inst, int block_size, const std::vector<CoverFamily>& families,
                                 unsigned threads = 1) {
  const int n = inst.size();
  const auto sizes = block_sizes(n, block_size);
  detail::require(families.size() == sizes.size(),
                  "framework_solver: need one family per block (" + std::to_string(sizes.size()) + ")");
  std::vector<std::vector<SetSystem>> members(sizes.size());
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    detail::require(families[b].ground_size() == sizes[b],
                    "framework_solver: family " + std::to_string(b + 1) + " has the wrong ground-set size");
    if (!is_covering(families[b])) {
      throw CoverageError("framework_solver: family " + std::to_string(b + 1) + " does not cover its block");
    }
    for (std::size_t j = 0; j < families[b].size(); ++j) members[b].push_back(families[b].member(j));
  }
  std::uint64_t tuples = 1;
  for (const auto& m : members) tuples *= m.size();

  auto run_range = [&](unsigned worker, unsigned workers) {
    std::optional<Solution> best;
    std::size_t peak = 0;
    for (std::uint64_t t = worker; t < tuples; t += workers) {
      std::uint64_t rest = t;
      // Mixed radix, block 1 most significant.
      std::vector<std::size_t> pick(members.size());
      for (std::size_t b = members.size(); b-- > 0;) {
        pick[b] = static_cast<std::size_t>(rest % members[b].size());
        rest /= members[b].size();
      }
      SetSystem f = members[0][pick[0]];
      for (std::size_t b = 1; b < members.size(); ++b) f = union_product(f, members[b][pick[b]]);
      auto r = restricted_dp(inst, f);
      if (!r) continue;
      peak = std::max(peak, r->table_entries);
      if (!best || detail::better(r->value, r->tour.entries(), best->value, best->tour.entries())) {
        best = std::move(r);
      }
    }
    if (best) best->table_entries = peak;
    return best;
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(tuples, 1024))));
  std::vector<std::optional<Solution>> partial(workers);
  if (workers == 1) {
    partial[0] = run_range(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back([&, w] { partial[w] = run_range(w, workers); });
  }
  std::optional<Solution> best;
  std::size_t peak = 0;
  for (auto& p : partial) {
    if (!p) continue;
    peak = std::max(peak, p->table_entries);
    if (!best || detail::better(p->value, p->tour.entries(), best->value, best->tour.entries())) best = std::move(p);
  }
  if (!best) throw CoverageError("framework_solver: no tuple supports any tour");
  best->table_entries = peak;
  return *best;
}

inline Solution framework_solver(const TspInstance& inst, int block_size, unsigned threads = 1) {
  std::vector<CoverFamily> families;
  std::map<int, CoverFamily> cache;
  for (int s : block_sizes(inst.size(), block_size)) {
    auto it = cache.find(s);
    if (it == cache.end()) it = cache.emplace(s, default_block_family(s)).first;
    families.push_back(it->second);
  }
  return framework_solver(inst, block_size, families, threads);
}

/// Asymmetric weights uniform in [1, 100], zero diagonal.
inline TspInstance random_instance(int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Cost> dist(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) dist[static_cast<std::size_t>(i * n + j)] = rng.between(1, 100);
    }
  }
  return TspInstance(n, std::move(dist));
}

// Instance format: "n <n>" then n rows of n integers.

inline void write_tsp_instance(std::ostream& os, const TspInstance& inst) {
  const int n = inst.size();
  os << "n " << n << '\n';
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) os << (j > 1 ? " " : "") << inst.d(i, j);
    os << '\n';
  }
}

inline TspInstance read_tsp_instance(std::istream& is) {
  std::string line;
  int lineno = 0;
  if (!detail::next_content_line(is, line, lineno)) throw ParseError("empty instance file");
  const long long n = detail::parse_keyed(line, "n", lineno);
  if (n < 2 || n > kMaxSparseGround) throw ParseError("city count out of range: " + std::to_string(n));
  std::vector<Cost> dist;
  dist.reserve(static_cast<std::size_t>(n * n));
  for (long long i = 0; i < n; ++i) {
    if (!detail::next_content_line(is, line, lineno)) throw ParseError("missing row " + std::to_string(i + 1));
    std::istringstream row(line);
    std::string token;
    long long count = 0;
    while (row >> token) {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size()) throw ParseError("line " + std::to_string(lineno) + ": bad integer '" + token + "'");
      dist.push_back(v);
      ++count;
    }
    if (count != n) {
      throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(n) + " entries");
    }
  }
  if (detail::next_content_line(is, line, lineno)) throw ParseError("line " + std::to_string(lineno) + ": trailing data");
  try {
    return TspInstance(static_cast<int>(n), std::move(dist));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

}  // namespace chainfold

#endif  // CHAINFOLD_SOLVER_HPP
