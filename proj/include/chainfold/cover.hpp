#ifndef CHAINFOLD_COVER_HPP
#define CHAINFOLD_COVER_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "chainfold/bigint.hpp"
#include "chainfold/error.hpp"
#include "chainfold/permutation.hpp"
#include "chainfold/random.hpp"
#include "chainfold/set_system.hpp"

namespace chainfold {

/// Members F_j = relabel(base, σ_j), minus removed[j] in unique mode.
struct CoverFamily {
  SetSystem base;
  std::vector<Permutation> relabelings;
  bool unique_mode = false;
  std::vector<std::vector<Mask>> removed;  // parallel to relabelings

  int ground_size() const { return base.ground_size(); }
  std::size_t size() const { return relabelings.size(); }

  SetSystem member(std::size_t j) const {
    SetSystem f = relabel(base, relabelings[j]);
    if (j < removed.size() && !removed[j].empty()) return f.without(removed[j]);
    return f;
  }

  void push(Permutation sigma) {
    relabelings.push_back(std::move(sigma));
    removed.emplace_back();
  }
};

inline constexpr int kMaxCoverGround = 10;
inline constexpr int kMaxExactCoverGround = 5;
inline constexpr int kMaxIntersectGround = 8;
inline constexpr int kMaxSelfIntersectGround = 6;

using PermutationBits = boost::dynamic_bitset<std::uint64_t>;

namespace detail {

/// Ranks of the permutations supported by member j.
inline std::vector<std::uint64_t> member_support(const CoverFamily& family, std::size_t j,
                                                 const std::vector<std::vector<int>>& base_support) {
  std::vector<std::uint64_t> ranks;
  if (j < family.removed.size() && !family.removed[j].empty()) {
    for_each_supported(family.member(j), [&](std::span<const int> p) { ranks.push_back(permutation_rank(p)); });
    return ranks;
  }
  const Permutation& sigma = family.relabelings[j];
  std::vector<int> mapped(static_cast<std::size_t>(family.ground_size()));
  ranks.reserve(base_support.size());
  for (const auto& p : base_support) {
    for (std::size_t i = 0; i < p.size(); ++i) mapped[i] = sigma.apply(p[i]);
    ranks.push_back(permutation_rank(mapped));
  }
  return ranks;
}

inline std::vector<std::vector<int>> base_support(const SetSystem& base) {
  std::vector<std::vector<int>> out;
  for_each_supported(base, [&](std::span<const int> p) { out.emplace_back(p.begin(), p.end()); });
  return out;
}

inline std::vector<std::vector<std::uint64_t>> all_member_supports(const CoverFamily& family) {
  detail::require_cap(family.ground_size() <= kMaxCoverGround, "coverage check needs n <= 10");
  const auto base = base_support(family.base);
  std::vector<std::vector<std::uint64_t>> out;
  out.reserve(family.size());
  for (std::size_t j = 0; j < family.size(); ++j) out.push_back(member_support(family, j, base));
  return out;
}

}  // namespace detail

/// Number of members supporting each permutation, indexed by lexicographic rank.
inline std::vector<std::uint32_t> coverage_counts(const CoverFamily& family) {
  std::vector<std::uint32_t> counts(factorial_u64(family.ground_size()), 0);
  for (const auto& ranks : detail::all_member_supports(family)) {
    for (auto r : ranks) ++counts[r];
  }
  return counts;
}

inline bool is_covering(const CoverFamily& family) {
  const auto counts = coverage_counts(family);
  return std::all_of(counts.begin(), counts.end(), [](std::uint32_t c) { return c >= 1; });
}

inline bool is_unique_cover(const CoverFamily& family) {
  const auto counts = coverage_counts(family);
  return std::all_of(counts.begin(), counts.end(), [](std::uint32_t c) { return c == 1; });
}

/// ⌈n!·n²/C(base)⌉, the family size used by the random-relabeling argument.
inline BigInt prescribed_family_size(const SetSystem& base) {
  const int n = base.ground_size();
  const ChainCount c = count_chains(base);
  detail::require(c > 0, "base supports no permutation");
  const BigInt num = factorial(n) * n * n;
  return (num + c - 1) / c;
}

/// Identity first, then seeded uniform relabelings until every permutation
/// of [n] is supported by some member.
inline CoverFamily random_cover(const SetSystem& base, std::uint64_t seed, std::size_t max_tries = 100000) {
  const int n = base.ground_size();
  detail::require(n >= 1, "random_cover: empty ground set");
  detail::require_cap(n <= kMaxCoverGround, "random_cover needs n <= 10");
  const auto support = detail::base_support(base);
  detail::require(!support.empty(), "random_cover: base supports no permutation");

  CoverFamily family{base, {}, false, {}};
  PermutationBits covered(factorial_u64(n));
  auto absorb = [&](Permutation sigma) {
    family.push(std::move(sigma));
    for (auto r : detail::member_support(family, family.size() - 1, support)) covered.set(r);
  };
  absorb(Permutation::identity(n));
  SplitMix64 rng(seed);
  std::size_t tries = 0;
  while (!covered.all()) {
    if (tries == max_tries) {
      throw CoverageError("random_cover: " + std::to_string(covered.size() - covered.count()) +
                          " permutations uncovered after " + std::to_string(max_tries) + " relabelings");
    }
    ++tries;
    absorb(Permutation::random(n, rng));
  }
  return family;
}

/// Greedy set cover: repeatedly take the member with the most uncovered
/// permutations (lowest index on ties); survivors keep their original order.
inline CoverFamily greedy_prune(const CoverFamily& family) {
  const auto supports = detail::all_member_supports(family);
  const std::uint64_t total = factorial_u64(family.ground_size());
  PermutationBits covered(total);
  std::vector<bool> chosen(family.size(), false);
  std::uint64_t remaining = total;
  while (remaining > 0) {
    std::size_t best = family.size();
    std::uint64_t best_gain = 0;
    for (std::size_t j = 0; j < family.size(); ++j) {
      if (chosen[j]) continue;
      std::uint64_t gain = 0;
      for (auto r : supports[j]) gain += !covered.test(r);
      if (gain > best_gain) {
        best_gain = gain;
        best = j;
      }
    }
    if (best == family.size()) throw CoverageError("greedy_prune: family does not cover all permutations");
    chosen[best] = true;
    for (auto r : supports[best]) {
      if (!covered.test(r)) {
        covered.set(r);
        --remaining;
      }
    }
  }
  CoverFamily out{family.base, {}, family.unique_mode, {}};
  for (std::size_t j = 0; j < family.size(); ++j) {
    if (!chosen[j]) continue;
    out.relabelings.push_back(family.relabelings[j]);
    out.removed.push_back(j < family.removed.size() ? family.removed[j] : std::vector<Mask>{});
  }
  return out;
}

namespace detail {

// n <= 5 gives at most 120 permutations: two words per support set.
using SmallBits = std::array<std::uint64_t, 2>;

inline int popcount(const SmallBits& b) { return std::popcount(b[0]) + std::popcount(b[1]); }
inline bool test(const SmallBits& b, std::uint64_t r) { return (b[r >> 6] >> (r & 63)) & 1; }
inline SmallBits minus(const SmallBits& a, const SmallBits& b) { return {a[0] & ~b[0], a[1] & ~b[1]}; }
inline SmallBits unite(const SmallBits& a, const SmallBits& b) { return {a[0] | b[0], a[1] | b[1]}; }
inline bool subset_of(const SmallBits& a, const SmallBits& b) { return !(a[0] & ~b[0]) && !(a[1] & ~b[1]); }

struct ExactCoverSearch {
  std::vector<SmallBits> cand;
  SmallBits all{};
  int total = 0;
  std::vector<std::size_t> current;
  std::vector<std::size_t> best;

  void run(SmallBits covered) {
    const SmallBits open = minus(all, covered);
    const int uncovered = popcount(open);
    if (uncovered == 0) {
      if (current.size() < best.size()) best = current;
      return;
    }
    int widest = 0;
    for (const auto& c : cand) widest = std::max(widest, popcount(minus(c, covered)));
    if (widest == 0) return;
    const std::size_t bound = current.size() + static_cast<std::size_t>((uncovered + widest - 1) / widest);
    if (bound >= best.size()) return;

    // Branch on the uncovered permutation with the fewest candidates.
    std::uint64_t pick = 0;
    std::size_t fewest = cand.size() + 1;
    for (std::uint64_t r = 0; r < static_cast<std::uint64_t>(total); ++r) {
      if (!test(open, r)) continue;
      std::size_t k = 0;
      for (const auto& c : cand) k += test(c, r);
      if (k < fewest) {
        fewest = k;
        pick = r;
      }
    }
    std::vector<std::size_t> options;
    for (std::size_t i = 0; i < cand.size(); ++i) {
      if (test(cand[i], pick)) options.push_back(i);
    }
    std::stable_sort(options.begin(), options.end(), [&](std::size_t a, std::size_t b) {
      return popcount(minus(cand[a], covered)) > popcount(minus(cand[b], covered));
    });
    for (std::size_t i : options) {
      current.push_back(i);
      run(unite(covered, cand[i]));
      current.pop_back();
    }
  }
};

}  // namespace detail

/// Minimum-cardinality covering family among all n! relabelings of base (n <= 5).
inline CoverFamily exact_min_cover(const SetSystem& base) {
  const int n = base.ground_size();
  detail::require(n >= 1, "exact_min_cover: empty ground set");
  detail::require_cap(n <= kMaxExactCoverGround, "exact_min_cover needs n <= 5");
  const auto support = detail::base_support(base);
  detail::require(!support.empty(), "exact_min_cover: base supports no permutation");
  const int total = static_cast<int>(factorial_u64(n));

  // Candidate relabelings in lexicographic order; identical supports and
  // supports contained in another candidate's are dropped.
  std::vector<Permutation> sigmas;
  std::vector<detail::SmallBits> bits;
  {
    CoverFamily probe{base, {}, false, {}};
    std::set<detail::SmallBits> seen;
    for_each_permutation(n, [&](std::span<const int> s) {
      probe.relabelings.assign(1, Permutation(std::vector<int>(s.begin(), s.end())));
      probe.removed.assign(1, {});
      detail::SmallBits b{};
      for (auto r : detail::member_support(probe, 0, support)) b[r >> 6] |= std::uint64_t{1} << (r & 63);
      if (!seen.insert(b).second) return;
      sigmas.push_back(probe.relabelings[0]);
      bits.push_back(b);
    });
  }
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < bits.size() && !dominated; ++j) {
      dominated = j != i && detail::subset_of(bits[i], bits[j]) && bits[i] != bits[j];
    }
    if (!dominated) keep.push_back(i);
  }

  detail::ExactCoverSearch search;
  for (std::size_t i : keep) search.cand.push_back(bits[i]);
  search.total = total;
  for (int r = 0; r < total; ++r) search.all[static_cast<std::size_t>(r) >> 6] |= std::uint64_t{1} << (r & 63);

  // Greedy solution as the initial incumbent.
  {
    detail::SmallBits covered{};
    while (covered != search.all) {
      std::size_t pick = 0;
      int gain = -1;
      for (std::size_t i = 0; i < search.cand.size(); ++i) {
        const int g = detail::popcount(detail::minus(search.cand[i], covered));
        if (g > gain) {
          gain = g;
          pick = i;
        }
      }
      search.best.push_back(pick);
      covered = detail::unite(covered, search.cand[pick]);
    }
  }
  search.run({});

  std::sort(search.best.begin(), search.best.end());
  CoverFamily out{base, {}, false, {}};
  for (std::size_t i : search.best) out.push(sigmas[keep[i]]);
  return out;
}

/*
 * Decides whether f1 and f2 are regularly intersecting.  The candidate
 * G* = (f1 ∩ f2) minus every prefix of a permutation supported by f1 but not
 * f2 contains every valid witness, so a witness exists iff G* is one.
 */
inline std::optional<SetSystem> regularly_intersecting(const SetSystem& f1, const SetSystem& f2) {
  const int n = f1.ground_size();
  detail::require(f2.ground_size() == n, "regularly_intersecting: ground-set mismatch");
  detail::require_cap(n <= kMaxIntersectGround, "regularly_intersecting needs n <= 8");

  std::vector<Mask> forbidden;
  std::vector<std::vector<Mask>> joint;
  for_each_supported(f1, [&](std::span<const int> p) {
    std::vector<Mask> chain;
    chain.reserve(p.size() + 1);
    Mask s = 0;
    chain.push_back(s);
    bool in_f2 = f2.contains(s);
    for (int e : p) {
      s |= element_bit(e);
      chain.push_back(s);
      in_f2 = in_f2 && f2.contains(s);
    }
    if (in_f2) {
      joint.push_back(std::move(chain));
    } else {
      forbidden.insert(forbidden.end(), chain.begin(), chain.end());
    }
  });
  std::sort(forbidden.begin(), forbidden.end());
  forbidden.erase(std::unique(forbidden.begin(), forbidden.end()), forbidden.end());

  std::vector<Mask> witness;
  for (Mask s : f1.sets()) {
    if (f2.contains(s) && !std::binary_search(forbidden.begin(), forbidden.end(), s)) witness.push_back(s);
  }
  SetSystem g(n, std::move(witness));
  for (const auto& chain : joint) {
    if (std::none_of(chain.begin(), chain.end(), [&](Mask s) { return g.contains(s); })) return std::nullopt;
  }
  return g;
}

/// True iff f is regularly intersecting with each of its n! relabelings (n <= 6).
inline bool regularly_self_intersecting(const SetSystem& f) {
  const int n = f.ground_size();
  detail::require_cap(n <= kMaxSelfIntersectGround, "regularly_self_intersecting needs n <= 6");
  std::set<std::vector<Mask>> checked;
  bool ok = true;
  for_each_permutation(n, [&](std::span<const int> s) {
    if (!ok) return;
    SetSystem other = relabel(f, Permutation(std::vector<int>(s.begin(), s.end())));
    if (!checked.insert(other.sets()).second) return;
    ok = regularly_intersecting(f, other).has_value();
  });
  return ok;
}

/// Removes from each member i the witnesses G_i^k against every earlier
/// member k, so each permutation stays supported by exactly one member.
inline CoverFamily make_unique(const CoverFamily& family) {
  detail::require(!family.unique_mode, "make_unique: family is already in unique mode");
  detail::require_cap(family.ground_size() <= kMaxSelfIntersectGround, "make_unique needs n <= 6");
  std::vector<SetSystem> members;
  members.reserve(family.size());
  for (std::size_t j = 0; j < family.size(); ++j) members.push_back(family.member(j));

  CoverFamily out{family.base, family.relabelings, true, std::vector<std::vector<Mask>>(family.size())};
  for (std::size_t i = 1; i < members.size(); ++i) {
    std::vector<Mask> g;
    for (std::size_t k = 0; k < i; ++k) {
      auto w = regularly_intersecting(members[i], members[k]);
      if (!w) {
        throw std::invalid_argument("make_unique: members " + std::to_string(k + 1) + " and " +
                                    std::to_string(i + 1) + " are not regularly intersecting");
      }
      for (Mask s : w->sets()) g.push_back(s);
    }
    std::sort(g.begin(), g.end(), [](Mask a, Mask b) {
      const int pa = std::popcount(a), pb = std::popcount(b);
      return pa != pb ? pa < pb : a < b;
    });
    g.erase(std::unique(g.begin(), g.end()), g.end());
    out.removed[i] = std::move(g);
  }
  return out;
}

// File format:
//   base <set-system file, relative to this file>
//   mode plain|unique
//   one relabeling per line, space separated
//   removed <j>: <hex> <hex> ...     (1-based member index)

inline void write_cover_family(std::ostream& os, const CoverFamily& family, const std::string& base_path) {
  os << "base " << base_path << '\n' << "mode " << (family.unique_mode ? "unique" : "plain") << '\n';
  for (const auto& sigma : family.relabelings) os << sigma.to_string() << '\n';
  const auto flags = os.flags();
  for (std::size_t j = 0; j < family.removed.size(); ++j) {
    if (family.removed[j].empty()) continue;
    os << "removed " << std::dec << (j + 1) << ':';
    os << std::hex;
    for (Mask s : family.removed[j]) os << ' ' << s;
    os << std::dec << '\n';
  }
  os.flags(flags);
}

inline SetSystem load_set_system(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open set-system file: " + path.string());
  return read_set_system(in);
}

inline CoverFamily read_cover_family(std::istream& is, const std::filesystem::path& dir) {
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) { throw ParseError("line " + std::to_string(lineno) + ": " + what); };

  if (!detail::next_content_line(is, line, lineno)) throw ParseError("empty cover-family file");
  std::istringstream head(line);
  std::string word, base_file;
  if (!(head >> word >> base_file) || word != "base") fail("expected 'base <file>'");
  std::filesystem::path base_path(base_file);
  if (base_path.is_relative()) base_path = dir / base_path;

  CoverFamily family{load_set_system(base_path), {}, false, {}};
  const int n = family.ground_size();

  if (!detail::next_content_line(is, line, lineno)) fail("missing mode line");
  std::istringstream mode_line(line);
  std::string mode;
  if (!(mode_line >> word >> mode) || word != "mode" || (mode != "plain" && mode != "unique")) {
    fail("expected 'mode plain|unique'");
  }
  family.unique_mode = mode == "unique";

  while (detail::next_content_line(is, line, lineno)) {
    std::istringstream in(line);
    if (line.find("removed") != std::string::npos) {
      std::string index;
      if (!(in >> word >> index) || word != "removed" || index.empty() || index.back() != ':') {
        fail("expected 'removed <j>: <hex>...'");
      }
      std::size_t j = 0;
      try {
        j = std::stoul(index.substr(0, index.size() - 1));
      } catch (const std::exception&) {
        fail("bad member index");
      }
      if (j < 1 || j > family.size()) fail("member index out of range");
      std::string token;
      while (in >> token) {
        if (token.size() > 16 || token.find_first_not_of("0123456789abcdef") != std::string::npos) {
          fail("expected a lowercase hex mask");
        }
        const Mask s = std::stoull(token, nullptr, 16);
        if (s & ~full_mask(n)) fail("set outside the ground set");
        family.removed[j - 1].push_back(s);
      }
      continue;
    }
    std::vector<int> order;
    long long e = 0;
    while (in >> e) order.push_back(static_cast<int>(e));
    if (!in.eof()) fail("expected a permutation");
    if (static_cast<int>(order.size()) != n) fail("relabeling has the wrong length");
    try {
      family.push(Permutation(std::move(order)));
    } catch (const std::invalid_argument& err) {
      fail(err.what());
    }
  }
  return family;
}

}  // namespace chainfold

#endif  // CHAINFOLD_COVER_HPP
