#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "chainfold/analysis.hpp"
#include "chainfold/constructions.hpp"

using namespace chainfold;

namespace {

// The four ordering constraints on a permutation, checked entry by entry.
bool thm41_admissible(std::span<const int> p, const Thm41Counts& c) {
  const int n = c.n;
  auto in_l1 = [&](int e) { return e <= c.half; };
  auto in_l2 = [&](int e) { return e <= c.outer; };
  auto in_r2 = [&](int e) { return e > n - c.outer; };
  for (int i = 0; i < c.prefix; ++i) {
    if (!in_l2(p[static_cast<std::size_t>(i)]) || !in_r2(p[static_cast<std::size_t>(n - 1 - i)])) return false;
  }
  int first_l1 = 0, last_r1 = 0;
  for (int i = 0; i < c.half; ++i) {
    first_l1 += in_l1(p[static_cast<std::size_t>(i)]);
    last_r1 += !in_l1(p[static_cast<std::size_t>(n - 1 - i)]);
  }
  return first_l1 >= c.band && last_r1 >= c.band;
}

SetSystem thm41_closure_oracle(const Thm41Params& params) {
  const Thm41Counts c = thm41_counts(params);
  std::vector<Permutation> admissible;
  for_each_permutation(c.n, [&](std::span<const int> p) {
    if (thm41_admissible(p, c)) admissible.emplace_back(std::vector<int>(p.begin(), p.end()));
  });
  return closure_from_permutations(c.n, admissible);
}

/*
 * Counts the thm41 system by block type.  Admissibility only sees which
 * of the four blocks (L2, L1\L2, R1\R2, R2) each entry comes from, so walk
 * every block word, record the reachable prefix types, and weight each type
 * by its number of concrete sets.
 */
BigInt thm41_type_count(const Thm41Counts& c) {
  const std::array<int, 4> block{c.outer, c.half - c.outer, c.half - c.outer, c.outer};
  std::vector<int> word;
  for (int b = 0; b < 4; ++b) word.insert(word.end(), static_cast<std::size_t>(block[static_cast<std::size_t>(b)]), b);
  std::map<std::array<int, 4>, bool> reachable;
  do {
    bool ok = true;
    for (int i = 0; i < c.prefix && ok; ++i) {
      ok = word[static_cast<std::size_t>(i)] == 0 && word[static_cast<std::size_t>(c.n - 1 - i)] == 3;
    }
    int first_l1 = 0;
    for (int i = 0; i < c.half; ++i) first_l1 += word[static_cast<std::size_t>(i)] <= 1;
    // Last half holds the rest of R1, so both band constraints coincide.
    ok = ok && first_l1 >= c.band;
    if (!ok) continue;
    std::array<int, 4> type{};
    reachable[type] = true;
    for (int b : word) {
      ++type[static_cast<std::size_t>(b)];
      reachable[type] = true;
    }
  } while (std::next_permutation(word.begin(), word.end()));
  BigInt total = 0;
  for (const auto& [type, hit] : reachable) {
    BigInt ways = 1;
    for (int b = 0; b < 4; ++b) ways *= binomial(block[static_cast<std::size_t>(b)], type[static_cast<std::size_t>(b)]);
    total += ways;
  }
  return total;
}

}  // namespace

TEST(Powerset, Basics) {
  EXPECT_EQ(powerset(2).size(), 4u);
  EXPECT_EQ(count_chains(powerset(3)), 6);
  const auto m = metrics(powerset(5));
  EXPECT_DOUBLE_EQ(m.normalized_size, 2.0);
  EXPECT_DOUBLE_EQ(m.inverse_density, 1.0);
  EXPECT_THROW(powerset(29), CapExceeded);
}

TEST(SingleChain, Basics) {
  EXPECT_EQ(single_chain(1), SetSystem(1, {0, 1}));
  for (int n = 1; n <= 12; ++n) {
    EXPECT_EQ(single_chain(n).size(), static_cast<std::size_t>(n + 1));
    EXPECT_EQ(count_chains(single_chain(n)), 1);
  }
  const auto m = metrics(single_chain(8));
  EXPECT_NEAR(m.normalized_size, 1.3161, 1e-4);
  EXPECT_LE(m.normalized_size, 1.3161);
}

TEST(TowerOfCubes, FormulasExhaustively) {
  for (int t = 1; t <= 16; ++t) {
    for (int k = 1; t * k <= 16; ++k) {
      const auto f = tower_of_cubes(t, k);
      EXPECT_EQ(f.size(), static_cast<std::size_t>(k) * (std::size_t{1} << t) - static_cast<std::size_t>(k) + 1);
      BigInt expected = 1;
      for (int i = 0; i < k; ++i) expected *= factorial(t);
      EXPECT_EQ(count_chains(f), expected) << "t=" << t << " k=" << k;
    }
  }
}

TEST(TowerOfCubes, SmallCasesByEnumeration) {
  EXPECT_EQ(tower_of_cubes(2, 2).size(), 7u);
  EXPECT_EQ(supported_permutation_count(tower_of_cubes(2, 2)), 4);
  EXPECT_EQ(supported_permutation_count(tower_of_cubes(3, 3)), 216);
  for (int t = 1; t <= 6; ++t) EXPECT_EQ(tower_of_cubes(t, 1), powerset(t));
}

TEST(TowerOfCubes, Caps) {
  EXPECT_THROW(tower_of_cubes(8, 8), CapExceeded);
  EXPECT_THROW(tower_of_cubes(29, 1), CapExceeded);
  EXPECT_THROW(tower_of_cubes(0, 3), std::invalid_argument);
  EXPECT_EQ(tower_of_cubes(1, 63).size(), 64u);
}

TEST(KoivistoParviainen, SizeAndProduct) {
  const auto f = koivisto_parviainen();
  EXPECT_EQ(f.size(), (std::size_t{1} << 13) + (std::size_t{1} << 13) - 1);
  EXPECT_EQ(f, tower_of_cubes(13, 2));
  const auto m = metrics(f);
  const double st = m.normalized_size * m.normalized_size * m.inverse_density;
  EXPECT_GE(st, 3.925);
  EXPECT_LE(st, 3.931);
}

TEST(WarmupSystem, FullThresholdIsTower) {
  EXPECT_EQ(warmup_system(3, 1.0), tower_of_cubes(3, 2));
  EXPECT_EQ(warmup_system(6, 1.0), tower_of_cubes(6, 2));
}

TEST(WarmupSystem, SizeNearSquareRootOfTwo) {
  const auto m = metrics(warmup_system(10, 0.889972));
  EXPECT_NEAR(m.normalized_size, std::sqrt(2.0), 0.05 * std::sqrt(2.0));
}

TEST(WarmupSystem, SupportedFractionMatchesSplitProbability) {
  for (int k = 1; k <= 8; ++k) {
    for (double beta : {0.5, 0.625, 0.75, 0.889972, 1.0}) {
      const auto f = warmup_system(k, beta);
      const int m = static_cast<int>(std::ceil(beta * k - 1e-9));
      // Probability that a uniform k-subset of [2k] contains m fixed and avoids m other fixed elements.
      const BigRational p(binomial(2 * k - 2 * m, k - m), binomial(2 * k, k));
      EXPECT_EQ(BigRational(count_chains(f), factorial(2 * k)), p) << "k=" << k << " beta=" << beta;
    }
  }
}

TEST(WarmupSystem, FractionViaIsomorphismClass) {
  // Supported fraction M/N over the distinct relabelings of the system.
  for (int k = 1; k <= 3; ++k) {
    const auto f = warmup_system(k, 0.5);
    const int n = 2 * k;
    std::set<std::vector<Mask>> seen;
    std::uint64_t supporting = 0;
    for_each_permutation(n, [&](std::span<const int> s) {
      const auto g = relabel(f, Permutation(std::vector<int>(s.begin(), s.end())));
      if (seen.insert(g.sets()).second) supporting += supports(g, Permutation::identity(n));
    });
    EXPECT_EQ(BigRational(count_chains(f), factorial(n)), BigRational(supporting, seen.size())) << "k=" << k;
  }
}

TEST(WarmupSystem, Validation) {
  EXPECT_THROW(warmup_system(4, 0.4), std::invalid_argument);
  EXPECT_THROW(warmup_system(4, 1.1), std::invalid_argument);
  EXPECT_THROW(warmup_system(29, 0.9), CapExceeded);
}

TEST(WarmupPrefixSystem, ZeroAlphaIsPowerset) {
  EXPECT_EQ(warmup_prefix_system(6, 0b000111, 0.0), powerset(6));
  EXPECT_EQ(warmup_prefix_system(7, 0b1010101, 0.0), powerset(7));
}

TEST(WarmupPrefixSystem, SupportsExactlyTheGuessedTours) {
  const int n = 7;
  const Mask first = 0b0101101;
  const auto f = warmup_prefix_system(n, first, 3.0 / 7);
  const int m = 3;
  for_each_permutation(n, [&](std::span<const int> p) {
    bool expected = true;
    for (int i = 0; i < m; ++i) {
      expected = expected && (first & element_bit(p[static_cast<std::size_t>(i)]));
      expected = expected && !(first & element_bit(p[static_cast<std::size_t>(n - 1 - i)]));
    }
    EXPECT_EQ(supports(f, Permutation(std::vector<int>(p.begin(), p.end()))), expected);
  });
}

TEST(Thm41System, MatchesClosureOracle) {
  const std::vector<Thm41Params> cases{
      {4, 0.25, 0.25, 0.25}, {4, 0.5, 0.25, 0.25}, {4, 0.5, 0.25, 0.5},   {4, 0.25, 0.25, 0.5},
      {6, 1.0 / 3, 1.0 / 3, 1.0 / 3}, {6, 0.5, 1.0 / 3, 0.5},           {6, 0.5, 1.0 / 3, 1.0 / 3},
      {8, 0.5, 0.25, 0.25}, {8, 0.5, 0.25, 0.375},  {8, 0.5, 0.25, 0.5},   {8, 0.5, 0.375, 0.375},
      {8, 0.5, 0.375, 0.5}, {8, 0.5, 0.5, 0.5},     {8, 0.25, 0.25, 0.25}, {8, 0.25, 0.25, 0.375},
      {8, 0.25, 0.25, 0.5}, {8, 0.375, 0.25, 0.375}, {8, 0.375, 0.375, 0.5}};
  for (const auto& p : cases) {
    const auto f = theorem41_system(p);
    const auto oracle = thm41_closure_oracle(p);
    EXPECT_EQ(f, oracle) << "n=" << p.n << " a=" << p.alpha << " b=" << p.beta << " g=" << p.gamma;
  }
}

TEST(Thm41System, SupportsExactlyAdmissiblePermutations) {
  const Thm41Params p{8, 0.375, 0.25, 0.375};
  const auto c = thm41_counts(p);
  const auto f = theorem41_system(p);
  std::uint64_t admissible = 0;
  for_each_permutation(8, [&](std::span<const int> s) {
    const bool a = thm41_admissible(s, c);
    admissible += a;
    if (a) {
      EXPECT_TRUE(supports(f, Permutation(std::vector<int>(s.begin(), s.end()))));
    }
  });
  EXPECT_GE(count_chains(f), admissible);
}

TEST(Thm41System, HalfBandGivesTower) {
  EXPECT_EQ(theorem41_system({8, 0.5, 0.25, 0.5}), tower_of_cubes(4, 2));
}

TEST(Thm41System, TypeClassCountAtTwelve) {
  for (const auto& p : {Thm41Params{12, 0.5, 5.0 / 12, 5.0 / 12}, Thm41Params{12, 1.0 / 3, 1.0 / 3, 5.0 / 12},
                        Thm41Params{12, 0.5, 0.25, 1.0 / 3}}) {
    const auto f = theorem41_system(p);
    EXPECT_EQ(BigInt(f.size()), thm41_type_count(thm41_counts(p)));
  }
}

TEST(Thm41System, SupportedFractionLowerBound) {
  for (const auto& p : {Thm41Params{8, 0.5, 0.25, 0.375}, Thm41Params{12, 0.5, 5.0 / 12, 5.0 / 12},
                        Thm41Params{12, 1.0 / 3, 0.25, 1.0 / 3}, Thm41Params{16, 0.375, 0.25, 0.375},
                        Thm41Params{20, 0.45, 0.3, 0.4}}) {
    const auto c = thm41_counts(p);
    const int h = c.half, b = c.prefix, g = c.band, a = c.outer;
    const BigInt num = binomial(h - b, g - b) * binomial(h - b, h - g) * binomial(h - b, a - b) * binomial(h - b, a - b);
    const BigInt den = binomial(c.n, h) * binomial(h, a) * binomial(h, a);
    const BigRational fraction(num, den);
    const auto chains = count_chains(theorem41_system(p));
    EXPECT_GE(BigRational(chains, factorial(c.n)), fraction) << "n=" << p.n;
  }
}

TEST(Thm41System, Validation) {
  EXPECT_THROW(theorem41_system({7, 0.5, 0.25, 0.5}), std::invalid_argument);
  EXPECT_THROW(theorem41_system({8, 0.5, 0.2, 0.5}), std::invalid_argument);
  EXPECT_THROW(theorem41_system({8, 0.3, 0.4, 0.5}), std::invalid_argument);
  EXPECT_THROW(theorem41_system({8, 0.5, 0.25, 0.6}), std::invalid_argument);
  EXPECT_THROW(theorem41_system({30, 0.5, 0.25, 0.5}), CapExceeded);
}

TEST(Thm45System, FullAlphaIsPowerset) {
  EXPECT_EQ(theorem45_system(Thm45Params{6, 1.0, 0.5}), powerset(6));
  EXPECT_EQ(theorem45_system(Thm45Params{5, 1.0, 0.6}), powerset(5));
}

TEST(Thm45System, SizeAtSix) {
  const auto f = theorem45_system(Thm45Params{6, 2.0 / 3, 1.0 / 3});
  // 11 small subsets of L, 44 sets with two or more L elements, 6 counted twice.
  EXPECT_EQ(f.size(), 49u);
  const Mask l = full_mask(4);
  std::size_t direct = 0;
  for (Mask s = 0; s < 64; ++s) {
    const bool small = std::popcount(s) <= 2 && !(s & ~l);
    direct += small || std::popcount(s & l) >= 2;
  }
  EXPECT_EQ(f.size(), direct);
}

TEST(Thm45System, SupportsExactlyPrefixInL) {
  for (int n = 2; n <= 8; ++n) {
    for (int l = 1; l <= n; ++l) {
      for (int b = (l + 1) / 2; b <= l; ++b) {
        const auto f = theorem45_system(n, l, b);
        std::uint64_t expected = 0;
        for_each_permutation(n, [&](std::span<const int> p) {
          const bool ok = std::all_of(p.begin(), p.begin() + b, [&](int e) { return e <= l; });
          expected += ok;
          if (n <= 6) {
            EXPECT_EQ(supports(f, Permutation(std::vector<int>(p.begin(), p.end()))), ok);
          }
        });
        EXPECT_EQ(count_chains(f), expected) << "n=" << n << " l=" << l << " b=" << b;
      }
    }
  }
}

TEST(Thm45System, Validation) {
  EXPECT_THROW(theorem45_system(Thm45Params{6, 0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(theorem45_system(Thm45Params{6, 0.5, 0.1}), std::invalid_argument);
  EXPECT_THROW(theorem45_system(Thm45Params{6, 0.5, 0.6}), std::invalid_argument);
}

TEST(FiniteTrend, SizesClimbTowardAsymptoticBounds) {
  const BoundParams ray41{0.5, 0.25, 0.375};
  const BoundParams ray45{0.5, 0.375, 0};
  const double bound41 = thm41_bounds(ray41).lg_s;
  const double bound45 = thm45_bounds(ray45).lg_s;
  double prev41 = 0, prev45 = 0;
  for (int n : {8, 16, 24}) {
    const double lg41 = std::log2(metrics(theorem41_system({n, ray41.alpha, ray41.beta, ray41.gamma})).normalized_size);
    const double lg45 = std::log2(metrics(theorem45_system(Thm45Params{n, ray45.alpha, ray45.beta})).normalized_size);
    EXPECT_GT(lg41, prev41);
    EXPECT_GT(lg45, prev45);
    EXPECT_LE(lg41, bound41);
    EXPECT_LE(lg45, bound45);
    prev41 = lg41;
    prev45 = lg45;
  }
}
