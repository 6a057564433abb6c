#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "chainfold/constructions.hpp"
#include "chainfold/set_system.hpp"

using namespace chainfold;

namespace {

Mask set_of(std::initializer_list<int> elems) {
  Mask s = 0;
  for (int e : elems) s |= element_bit(e);
  return s;
}

// Counts supported permutations against a std::set copy of the system,
// sharing nothing with the library's chain walk.
std::uint64_t naive_supported(const SetSystem& f) {
  const auto all = f.sets();
  const std::set<Mask> members(all.begin(), all.end());
  const int n = f.ground_size();
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i + 1;
  std::uint64_t count = 0;
  do {
    Mask s = 0;
    bool ok = members.count(0) > 0;
    for (int i = 0; i < n && ok; ++i) {
      s |= element_bit(p[static_cast<std::size_t>(i)]);
      ok = members.count(s) > 0;
    }
    count += ok;
  } while (std::next_permutation(p.begin(), p.end()));
  return count;
}

}  // namespace

TEST(PrefixChain, UnrollsDefinition) {
  EXPECT_EQ(prefix_chain(Permutation({1, 2})), (std::vector<Mask>{0, set_of({1}), set_of({1, 2})}));
  EXPECT_EQ(prefix_chain(Permutation({2, 1})), (std::vector<Mask>{0, set_of({2}), set_of({1, 2})}));
  const auto chain = prefix_chain(Permutation({1, 4, 3, 6, 2, 5, 7}));
  ASSERT_EQ(chain.size(), 8u);
  EXPECT_EQ(chain[2], set_of({1, 4}));
  EXPECT_EQ(chain[3], set_of({1, 3, 4}));
  EXPECT_EQ(chain[7], full_mask(7));
}

TEST(PermutationType, RejectsNonBijections) {
  EXPECT_THROW(Permutation({1, 1}), std::invalid_argument);
  EXPECT_THROW(Permutation({0, 1}), std::invalid_argument);
  EXPECT_THROW(Permutation({1, 3}), std::invalid_argument);
}

TEST(PermutationType, InverseAndCompose) {
  const Permutation p({3, 1, 4, 2});
  EXPECT_EQ(p.compose(p.inverse()), Permutation::identity(4));
  EXPECT_EQ(p.inverse().compose(p), Permutation::identity(4));
  EXPECT_EQ(p.map_set(set_of({1, 2})), set_of({3, 1}));
}

TEST(PermutationType, RankMatchesLexicographicOrder) {
  std::uint64_t expected = 0;
  for_each_permutation(5, [&](std::span<const int> p) { EXPECT_EQ(permutation_rank(p), expected++); });
  EXPECT_EQ(expected, 120u);
}

TEST(Supports, PowersetSupportsEverything) {
  const auto f = powerset(3);
  for_each_permutation(3, [&](std::span<const int> p) {
    EXPECT_TRUE(supports(f, Permutation(std::vector<int>(p.begin(), p.end()))));
  });
}

TEST(Supports, SingleChainSupportsOnlyIdentity) {
  const auto f = single_chain(3);
  EXPECT_TRUE(supports(f, Permutation({1, 2, 3})));
  EXPECT_FALSE(supports(f, Permutation({2, 1, 3})));
}

TEST(Supports, SmallTower) {
  const auto f = tower_of_cubes(2, 2);
  ASSERT_EQ(f.size(), 7u);
  EXPECT_TRUE(supports(f, Permutation({1, 2, 3, 4})));
  EXPECT_FALSE(supports(f, Permutation({3, 1, 2, 4})));
}

TEST(Supports, GroundSetMismatchThrows) {
  EXPECT_THROW(supports(powerset(3), Permutation::identity(4)), std::invalid_argument);
}

TEST(CountChains, SmallCases) {
  EXPECT_EQ(count_chains(powerset(3)), 6);
  EXPECT_EQ(count_chains(single_chain(4)), 1);
  EXPECT_EQ(count_chains(tower_of_cubes(2, 2)), 4);
  EXPECT_EQ(count_chains(SetSystem(3)), 0);
}

TEST(CountChains, WideGroundSetUsesBigIntegers) {
  // 34 elements is past the 128-bit fast path.
  const auto f = tower_of_cubes(17, 2);
  EXPECT_EQ(count_chains(f), factorial(17) * factorial(17));
  EXPECT_EQ(count_chains(single_chain(40)), 1);
}

TEST(CountChains, MatchesNaiveEnumeration) {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 7;
    const auto f = random_system(n, 0.55 + 0.05 * (trial % 5), rng, trial % 3 != 0);
    const ChainCount c = count_chains(f);
    EXPECT_EQ(c, naive_supported(f)) << "trial " << trial;
    EXPECT_EQ(supported_permutation_count(f), c);
    EXPECT_LE(c, factorial(n));
  }
}

TEST(CountChains, OracleAgreesExhaustivelyAtEight) {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = random_system(8, 0.8, rng);
    EXPECT_EQ(supported_permutation_count(f), count_chains(f));
  }
}

TEST(SupportedCount, WarmupSystemMatchesChainCount) {
  const auto f = warmup_system(3, 2.0 / 3);
  EXPECT_EQ(supported_permutation_count(f), count_chains(f));
}

TEST(SupportedCount, NoEmptySetMeansZero) {
  const auto f = powerset(3).without(std::vector<Mask>{0});
  EXPECT_EQ(supported_permutation_count(f), 0);
  EXPECT_EQ(count_chains(f), 0);
}

TEST(SupportedCount, RefusesLargeGroundSets) {
  EXPECT_THROW(supported_permutation_count(single_chain(11)), CapExceeded);
}

TEST(Metrics, Powerset) {
  const auto m = metrics(powerset(3));
  EXPECT_DOUBLE_EQ(m.normalized_size, 2.0);
  EXPECT_DOUBLE_EQ(m.inverse_density, 1.0);
  EXPECT_EQ(m.chains, 6);
}

TEST(Metrics, KoivistoParviainen) {
  const auto m = metrics(koivisto_parviainen());
  EXPECT_EQ(m.size, 16383u);
  EXPECT_NEAR(m.normalized_size, std::pow(16383.0, 1.0 / 26), 1e-12);
  EXPECT_NEAR(m.normalized_size, 1.4524, 1e-4);
  EXPECT_NEAR(m.inverse_density, 1.8616, 1e-4);
  EXPECT_EQ(m.chains, factorial(13) * factorial(13));
}

TEST(Metrics, SingleChainOfEight) {
  const auto m = metrics(single_chain(8));
  EXPECT_NEAR(m.normalized_size, 1.3161, 1e-4);
  EXPECT_NEAR(m.inverse_density, std::pow(40320.0, 1.0 / 8), 1e-12);
  EXPECT_LE(m.normalized_size * m.inverse_density, 4.9552);
  EXPECT_NEAR(m.normalized_size * m.inverse_density, 4.955, 2e-3);
}

TEST(Metrics, DegenerateInputs) {
  EXPECT_THROW(metrics(SetSystem(0, {0})), EmptyGroundSet);
  const auto m = metrics(SetSystem(3));
  EXPECT_TRUE(std::isinf(m.inverse_density));
  EXPECT_EQ(m.chains, 0);
}

TEST(Metrics, GeneralBounds) {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = metrics(random_system(1 + trial % 8, 0.6, rng));
    EXPECT_LE(m.normalized_size, 2.0 + 1e-12);
    EXPECT_GE(m.inverse_density, 1.0 - 1e-12);
  }
}

TEST(UnionProduct, DefinitionUnrolled) {
  const SetSystem a(1, {0, 1});
  const auto u = union_product(a, a);
  EXPECT_EQ(u, powerset(2));
}

TEST(UnionProduct, EmptyGroundSetIsIdentity) {
  const auto f = tower_of_cubes(2, 2);
  EXPECT_EQ(union_product(f, SetSystem(0, {0})), f);
}

TEST(UnionProduct, SizeAndChainIdentities) {
  SplitMix64 rng(14);
  for (int trial = 0; trial < 40; ++trial) {
    const int n1 = 1 + static_cast<int>(rng.below(6));
    const int n2 = 1 + static_cast<int>(rng.below(6));
    const auto f1 = random_system(n1, 0.6, rng);
    const auto f2 = random_system(n2, 0.6, rng);
    const auto u = union_product(f1, f2);
    EXPECT_EQ(u.ground_size(), n1 + n2);
    EXPECT_EQ(u.size(), f1.size() * f2.size());
    EXPECT_EQ(count_chains(u), binomial(n1 + n2, n1) * count_chains(f1) * count_chains(f2));
  }
}

TEST(UnionProduct, CapExceeded) {
  EXPECT_THROW(union_product(single_chain(40), single_chain(30)), CapExceeded);
}

TEST(InducedSplit, WorkedExample) {
  const std::vector<int> sizes{2, 2, 3};
  const auto parts = induced_split(Permutation({1, 4, 3, 6, 2, 5, 7}), sizes);
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_EQ(parts[0], Permutation({1, 2}));
  EXPECT_EQ(parts[1], Permutation({2, 1}));
  EXPECT_EQ(parts[2], Permutation({2, 1, 3}));
}

TEST(InducedSplit, TrivialSplits) {
  const std::vector<int> halves{3, 3};
  const auto parts = induced_split(Permutation::identity(6), halves);
  EXPECT_EQ(parts[0], Permutation::identity(3));
  EXPECT_EQ(parts[1], Permutation::identity(3));
  const Permutation p({3, 1, 2});
  const std::vector<int> whole{3};
  EXPECT_EQ(induced_split(p, whole).front(), p);
  const std::vector<int> bad{2, 2};
  EXPECT_THROW(induced_split(p, bad), std::invalid_argument);
}

TEST(InducedSplit, SupportFactorsThroughUnionProduct) {
  SplitMix64 rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const int n1 = 1 + static_cast<int>(rng.below(4));
    const int n2 = 1 + static_cast<int>(rng.below(7 - n1 - 1 + 1));
    const auto f1 = random_system(n1, 0.6, rng);
    const auto f2 = random_system(n2, 0.6, rng);
    const auto u = union_product(f1, f2);
    const std::vector<int> sizes{n1, n2};
    for_each_permutation(n1 + n2, [&](std::span<const int> p) {
      const Permutation pi(std::vector<int>(p.begin(), p.end()));
      const auto parts = induced_split(pi, sizes);
      EXPECT_EQ(supports(u, pi), supports(f1, parts[0]) && supports(f2, parts[1]));
    });
  }
}

TEST(Relabel, IdentityAndInverse) {
  SplitMix64 rng(16);
  const auto f = random_system(6, 0.5, rng);
  EXPECT_EQ(relabel(f, Permutation::identity(6)), f);
  const auto sigma = Permutation::random(6, rng);
  EXPECT_EQ(relabel(relabel(f, sigma), sigma.inverse()), f);
  EXPECT_THROW(relabel(f, Permutation::identity(5)), std::invalid_argument);
}

TEST(Relabel, PreservesMetrics) {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_system(7, 0.6, rng);
    const auto g = relabel(f, Permutation::random(7, rng));
    const auto mf = metrics(f), mg = metrics(g);
    EXPECT_EQ(mf.size, mg.size);
    EXPECT_EQ(mf.chains, mg.chains);
    EXPECT_DOUBLE_EQ(mf.normalized_size, mg.normalized_size);
    EXPECT_DOUBLE_EQ(mf.inverse_density, mg.inverse_density);
  }
}

TEST(Closure, SmallCases) {
  EXPECT_EQ(closure_from_permutations(3, std::vector<Permutation>{Permutation::identity(3)}), single_chain(3));
  std::vector<Permutation> all;
  for_each_permutation(3, [&](std::span<const int> p) { all.emplace_back(std::vector<int>(p.begin(), p.end())); });
  EXPECT_EQ(closure_from_permutations(3, all), powerset(3));
  const std::vector<Permutation> two{Permutation({1, 2, 3}), Permutation({2, 1, 3}), Permutation({2, 1, 3})};
  EXPECT_EQ(closure_from_permutations(3, two),
            SetSystem(3, {0, set_of({1}), set_of({2}), set_of({1, 2}), set_of({1, 2, 3})}));
}

TEST(Closure, IsMinimal) {
  SplitMix64 rng(18);
  std::vector<Permutation> perms;
  for (int i = 0; i < 5; ++i) perms.push_back(Permutation::random(6, rng));
  const auto f = closure_from_permutations(6, perms);
  for (const auto& p : perms) EXPECT_TRUE(supports(f, p));
  for (Mask s : f.sets()) {
    const std::vector<Mask> drop{s};
    const auto g = f.without(drop);
    EXPECT_TRUE(std::any_of(perms.begin(), perms.end(), [&](const Permutation& p) { return !supports(g, p); }));
  }
}

TEST(SetSystemType, CapsAndValidation) {
  EXPECT_THROW(SetSystem(64), CapExceeded);
  EXPECT_THROW(powerset(29), CapExceeded);
  EXPECT_THROW(SetSystem(2, {set_of({3})}), std::invalid_argument);
  const SetSystem f(3, {set_of({1, 2}), 0, set_of({1, 2}), set_of({3})});
  EXPECT_EQ(f.size(), 3u);
  EXPECT_EQ(f.level(2).size(), 1u);
}

TEST(SetSystemIo, RoundTrip) {
  const auto f = tower_of_cubes(3, 2);
  std::stringstream buf;
  write_set_system(buf, f);
  EXPECT_EQ(read_set_system(buf), f);
}

TEST(SetSystemIo, WritesSortedLowercaseHex) {
  std::stringstream buf;
  write_set_system(buf, SetSystem(4, {0xf, 0, 0xa, 0x1}));
  EXPECT_EQ(buf.str(), "n 4\ncount 4\n0\n1\na\nf\n");
}

TEST(SetSystemIo, RejectsMalformedInput) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_set_system(in);
  };
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("m 3\ncount 0\n"), ParseError);
  EXPECT_THROW(parse("n 3\ncount 1\nzz\n"), ParseError);
  EXPECT_THROW(parse("n 3\ncount 1\nA\n"), ParseError);
  EXPECT_THROW(parse("n 2\ncount 1\n4\n"), ParseError);
  EXPECT_THROW(parse("n 3\ncount 2\n1\n"), ParseError);
  EXPECT_THROW(parse("n 3\ncount 2\n1\n1\n"), ParseError);
  EXPECT_EQ(parse("n 3\ncount 2\n\n0\n7\n").size(), 2u);
}
