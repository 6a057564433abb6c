#ifndef CHAINFOLD_VERIFY_HPP
#define CHAINFOLD_VERIFY_HPP

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chainfold/analysis.hpp"
#include "chainfold/constructions.hpp"
#include "chainfold/cover.hpp"
#include "chainfold/poset.hpp"
#include "chainfold/semiring.hpp"
#include "chainfold/set_system.hpp"
#include "chainfold/solver.hpp"

namespace chainfold {

struct SuiteResult {
  std::string id;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

namespace detail {

inline std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

inline Permutation perm_from(std::span<const int> s) { return Permutation(std::vector<int>(s.begin(), s.end())); }

inline SuiteResult suite_kp() {
  const auto m = metrics(koivisto_parviainen());
  const double s = m.normalized_size, p = m.inverse_density, st = m.st_product;
  const bool ok = s >= 1.4523 && s <= 1.4525 && p >= 1.8615 && p <= 1.8618 && st >= 3.925 && st <= 3.931;
  return {"", "", ok, "|F|=" + std::to_string(m.size) + " S=" + fmt("%.6f", s) + " P=" + fmt("%.6f", p) + " S^2P=" + fmt("%.5f", st)};
}

inline SuiteResult suite_cor42() {
  const double g = solve_gamma(0.5, 0.4112);
  const auto b = thm41_bounds({0.5, 0.4112, g});
  const bool ok = b.p() <= 1.785975 + 1e-4 && 2 * b.p() < 3.5720;
  return {"", "", ok, "gamma=" + fmt("%.6f", g) + " P=" + fmt("%.6f", b.p()) + " ST=" + fmt("%.6f", 2 * b.p())};
}

inline SuiteResult suite_cor43() {
  const double g = solve_gamma(0.46, 0.406);
  const auto b = thm41_bounds({0.46, 0.406, g});
  const auto hi = thm41_bounds({0.5, 0.4112, solve_gamma(0.5, 0.4112)});
  const bool ok = b.p() <= 2.121604 + 1e-4;
  return {"", "", ok,
          "gamma=" + fmt("%.6f", g) + " P=" + fmt("%.6f", b.p()) + " base(rounded)=" +
              fmt("%.4f", interpolation_base(0.46, 2.121604, 0.5, 1.785975)) +
              " base(recomputed)=" + fmt("%.4f", interpolation_base(0.46, b.p(), 0.5, hi.p()))};
}

inline SuiteResult suite_cor47() {
  const auto b = thm45_bounds({0.8412, 0.75 * 0.8412, 0});
  const double st = b.s() * b.s() * b.p();
  const bool ok = std::abs(b.s() - 1.7916) <= 5e-4 && b.p() <= 1.20375 + 1e-4 && st < 3.864;
  const auto at13 = optimize_params(std::log2(1.7913), Theorem::thm45);
  const auto at16 = optimize_params(std::log2(1.7916), Theorem::thm45);
  return {"", "", ok,
          "S=" + fmt("%.6f", b.s()) + " P=" + fmt("%.6f", b.p()) + " S^2P=" + fmt("%.5f", st) +
              " optP(S=1.7913)=" + fmt("%.6f", at13.bounds.p()) + " optP(S=1.7916)=" + fmt("%.6f", at16.bounds.p())};
}

inline SuiteResult suite_warmup() {
  const double base = std::exp2(0.889972);
  const double st = std::sqrt(2.0) * base * std::sqrt(2.0);
  const bool ok = base >= 1.8531 && base <= 1.8533 && st < 3.7066;
  return {"", "", ok, "2^0.889972=" + fmt("%.6f", base) + " ST=" + fmt("%.6f", st)};
}

inline SuiteResult suite_solvers(std::uint64_t seed) {
  int checked = 0, mismatches = 0;
  std::string first;
  for (int n = 4; n <= 10; ++n) {
    const int block = n / 2;
    std::vector<CoverFamily> families;
    for (int s : block_sizes(n, block)) families.push_back(default_block_family(s, seed));
    const auto full = powerset(n);
    for (int i = 0; i < 50; ++i) {
      const auto inst = random_instance(n, seed + static_cast<std::uint64_t>(1000 * n + i));
      const Cost ref = brute_force(inst).value;
      const auto r = restricted_dp(inst, full);
      const std::vector<Cost> values{held_karp(inst).value,
                                     r ? r->value : kInfCost,
                                     gurevich_shelah(inst, 0).value,
                                     gurevich_shelah(inst, 1).value,
                                     gurevich_shelah(inst, 2).value,
                                     framework_solver(inst, block, families).value};
      ++checked;
      for (Cost v : values) {
        if (v != ref) {
          ++mismatches;
          if (first.empty()) first = " first mismatch n=" + std::to_string(n) + " i=" + std::to_string(i);
          break;
        }
      }
    }
  }
  return {"", "", mismatches == 0,
          std::to_string(checked) + " instances, 7 solvers, mismatches=" + std::to_string(mismatches) + first};
}

inline SuiteResult suite_lemma37(std::uint64_t seed) {
  SplitMix64 rng(seed ^ 0x37);
  int bad = 0;
  for (int t = 0; t < 200; ++t) {
    const int n1 = 1 + static_cast<int>(rng.below(6));
    const int n2 = 1 + static_cast<int>(rng.below(6));
    const auto f1 = random_system(n1, 0.3 + 0.6 * rng.uniform01(), rng);
    const auto f2 = random_system(n2, 0.3 + 0.6 * rng.uniform01(), rng);
    const auto u = union_product(f1, f2);
    const BigInt multinomial = factorial(n1 + n2) / (factorial(n1) * factorial(n2));
    const bool ok = u.ground_size() == n1 + n2 && u.size() == f1.size() * f2.size() &&
                    count_chains(u) == multinomial * count_chains(f1) * count_chains(f2);
    bad += !ok;
  }
  return {"", "", bad == 0, "200 pairs, failures=" + std::to_string(bad)};
}

inline SuiteResult suite_split(std::uint64_t seed) {
  SplitMix64 rng(seed ^ 0x5b);
  const std::vector<int> sizes{3, 3};
  std::uint64_t checked = 0, bad = 0;
  for (int t = 0; t < 20; ++t) {
    const auto f1 = random_system(3, 0.4 + 0.5 * rng.uniform01(), rng);
    const auto f2 = random_system(3, 0.4 + 0.5 * rng.uniform01(), rng);
    const auto u = union_product(f1, f2);
    for_each_permutation(6, [&](std::span<const int> s) {
      const auto pi = perm_from(s);
      const auto parts = induced_split(pi, sizes);
      ++checked;
      bad += supports(u, pi) != (supports(f1, parts[0]) && supports(f2, parts[1]));
    });
  }
  return {"", "", bad == 0, std::to_string(checked) + " (pair, permutation) checks, exceptions=" + std::to_string(bad)};
}

inline SuiteResult suite_fraction(std::uint64_t seed) {
  SplitMix64 rng(seed ^ 0x46);
  int bad = 0, systems = 0;
  for (int n = 3; n <= 5; ++n) {
    for (int t = 0; t < 20; ++t) {
      const auto f = random_system(n, 0.3 + 0.6 * rng.uniform01(), rng);
      std::set<std::vector<Mask>> seen;
      std::uint64_t m = 0;
      for_each_permutation(n, [&](std::span<const int> s) {
        const auto g = relabel(f, perm_from(s));
        if (seen.insert(g.sets()).second) m += supports(g, Permutation::identity(n));
      });
      ++systems;
      // C(F)·N == M·n!
      bad += count_chains(f) * BigInt(seen.size()) != BigInt(m) * factorial(n);
    }
  }
  return {"", "", bad == 0, std::to_string(systems) + " systems, failures=" + std::to_string(bad)};
}

inline std::vector<std::pair<std::string, SetSystem>> lemma48_corpus() {
  std::vector<std::pair<std::string, SetSystem>> out;
  for (int n : {1, 4, 8, 12}) out.emplace_back("powerset:" + std::to_string(n), powerset(n));
  for (int n : {1, 6, 20}) out.emplace_back("chain:" + std::to_string(n), single_chain(n));
  out.emplace_back("tower:3,2", tower_of_cubes(3, 2));
  out.emplace_back("tower:4,3", tower_of_cubes(4, 3));
  out.emplace_back("tower:12,2", tower_of_cubes(12, 2));
  out.emplace_back("kp", koivisto_parviainen());
  out.emplace_back("warmup:4,0.75", warmup_system(4, 0.75));
  out.emplace_back("warmup:8,0.889972", warmup_system(8, 0.889972));
  const double g = solve_gamma(0.5, 0.4112);
  for (int n : {8, 16, 24}) out.emplace_back("thm41:" + std::to_string(n), theorem41_system({n, 0.5, 0.4112, g}));
  out.emplace_back("thm45:6", theorem45_system(Thm45Params{6, 2.0 / 3, 1.0 / 3}));
  out.emplace_back("thm45:20", theorem45_system(Thm45Params{20, 0.8412, 0.75 * 0.8412}));
  return out;
}

inline SuiteResult suite_lemma48() {
  int checks = 0, bad = 0;
  std::string first;
  for (const auto& [name, f] : lemma48_corpus()) {
    const int n = f.ground_size();
    const BigInt c = count_chains(f);
    const BigInt size(f.size());
    for (int k = 0; k <= 6; ++k) {
      const int block = (n + k) / (k + 1);
      BigInt bound = pow(factorial(block), static_cast<unsigned>(k + 1)) * pow(size, static_cast<unsigned>(k));
      ++checks;
      if (c > bound) {
        ++bad;
        if (first.empty()) first = " first violation " + name + " k=" + std::to_string(k);
      }
    }
  }
  return {"", "", bad == 0, std::to_string(checks) + " (system, k) checks, violations=" + std::to_string(bad) + first};
}

inline bool covers_by_enumeration(const CoverFamily& family, bool exactly_once) {
  std::vector<SetSystem> members;
  for (std::size_t j = 0; j < family.size(); ++j) members.push_back(family.member(j));
  bool ok = true;
  for_each_permutation(family.ground_size(), [&](std::span<const int> s) {
    if (!ok) return;
    const auto pi = perm_from(s);
    int hits = 0;
    for (const auto& m : members) hits += supports(m, pi);
    ok = exactly_once ? hits == 1 : hits >= 1;
  });
  return ok;
}

inline SuiteResult suite_cover(std::uint64_t seed) {
  int families = 0, bad = 0;
  const std::vector<SetSystem> covering_bases{tower_of_cubes(2, 2), theorem45_system(4, 2, 2),
                                              theorem45_system(5, 2, 2), theorem45_system(5, 3, 2)};
  for (const auto& base : covering_bases) {
    for (std::uint64_t s = 0; s < 3; ++s) {
      const auto family = greedy_prune(random_cover(base, seed + s));
      ++families;
      bad += !covers_by_enumeration(family, false);
    }
  }
  const std::vector<SetSystem> unique_bases{tower_of_cubes(2, 2), theorem45_system(5, 2, 2),
                                            theorem45_system(Thm45Params{6, 2.0 / 3, 1.0 / 3}), tower_of_cubes(3, 2)};
  for (const auto& base : unique_bases) {
    const int n = base.ground_size();
    const auto family = make_unique(greedy_prune(random_cover(base, seed + 7)));
    ++families;
    bad += !covers_by_enumeration(family, true);
    const PermutationProblem<SumProduct> ones{n, 0, [](Mask, std::span<const int>) -> BigInt { return 1; }};
    bad += evaluate_unique(ones, family) != factorial(n);
  }
  return {"", "", bad == 0, std::to_string(families) + " families, failures=" + std::to_string(bad)};
}

inline std::uint64_t brute_extensions(const Poset& poset) {
  std::uint64_t count = 0;
  for_each_permutation(poset.size(), [&](std::span<const int> p) {
    bool ok = true;
    for (std::size_t i = 0; i < p.size() && ok; ++i) {
      for (std::size_t j = i + 1; j < p.size() && ok; ++j) ok = !poset.less(p[j], p[i]);
    }
    count += ok;
  });
  return count;
}

inline SuiteResult suite_le(std::uint64_t seed) {
  SplitMix64 rng(seed ^ 0x1e);
  int bad = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + static_cast<int>(rng.below(8));
    const auto poset = random_poset(n, 0.05 + 0.4 * rng.uniform01(), rng);
    bad += count_linear_extensions(poset) != brute_extensions(poset);
  }
  for (int n = 1; n <= 8; ++n) {
    bad += count_linear_extensions(antichain_poset(n)) != factorial(n);
    bad += count_linear_extensions(chain_poset(n)) != 1;
  }
  return {"", "", bad == 0, "100 random posets + chains/antichains, failures=" + std::to_string(bad)};
}

inline SuiteResult suite_rsi() {
  const bool t45 = regularly_self_intersecting(theorem45_system(Thm45Params{6, 2.0 / 3, 1.0 / 3}));
  const bool pw = regularly_self_intersecting(powerset(6));
  return {"", "", t45 && pw, std::string("thm45:6 ") + (t45 ? "yes" : "no") + ", powerset:6 " + (pw ? "yes" : "no")};
}

inline SuiteResult suite_jlr() {
  std::ostringstream os;
  os << "tower P:";
  double prev = 0;
  bool rising = true;
  for (int t = 2; t <= 12; t += 2) {
    const double p = metrics(tower_of_cubes(t, 2)).inverse_density;
    os << " n=" << 2 * t << ':' << fmt("%.4f", p);
    rising = rising && p > prev && p < 2;
    prev = p;
  }
  const double g = solve_gamma(0.5, 0.4112);
  const double formula = thm41_bounds({0.5, 0.4112, g}).p();
  const auto thm = metrics(theorem41_system({24, 0.5, 0.4112, g}));
  const auto tower = metrics(tower_of_cubes(12, 2));
  const bool strict = thm.inverse_density < tower.inverse_density;
  os << "; formula P at S=sqrt2: " << fmt("%.6f", formula) << "; n=24 thm41 P=" << fmt("%.4f", thm.inverse_density)
     << " (S=" << fmt("%.4f", thm.normalized_size) << ") vs tower P=" << fmt("%.4f", tower.inverse_density)
     << " (S=" << fmt("%.4f", tower.normalized_size) << ')' << (strict ? "" : " [strictness fails; formula gap only]");
  return {"", "", rising && formula < 2 && strict, os.str()};
}

struct SuiteSpec {
  const char* id;
  const char* title;
  std::function<SuiteResult(std::uint64_t)> run;
};

inline const std::vector<SuiteSpec>& suite_table() {
  static const std::vector<SuiteSpec> table{
      {"kp", "Koivisto-Parviainen point", [](std::uint64_t) { return suite_kp(); }},
      {"cor42", "half-space thm41 point, ST < 3.572", [](std::uint64_t) { return suite_cor42(); }},
      {"cor43", "thm41 point at lg S = 0.46", [](std::uint64_t) { return suite_cor43(); }},
      {"cor47", "regular thm45 point, S^2 P < 3.864", [](std::uint64_t) { return suite_cor47(); }},
      {"warmup", "warm-up constants", [](std::uint64_t) { return suite_warmup(); }},
      {"solvers", "solver equivalence n=4..10", suite_solvers},
      {"lemma37", "union product identities", suite_lemma37},
      {"split", "induced split support equivalence", suite_split},
      {"fraction", "supported fraction over relabelings", suite_fraction},
      {"lemma48", "chain-count lower-bound inequality", [](std::uint64_t) { return suite_lemma48(); }},
      {"cover", "covering and unique families", suite_cover},
      {"le", "linear extension counts", suite_le},
      {"rsi", "regular self-intersection", [](std::uint64_t) { return suite_rsi(); }},
      {"jlr", "tower-of-cubes density comparison", [](std::uint64_t) { return suite_jlr(); }},
  };
  return table;
}

}  // namespace detail

inline std::vector<std::string> suite_ids() {
  std::vector<std::string> out;
  for (const auto& s : detail::suite_table()) out.emplace_back(s.id);
  return out;
}

/// Throws std::invalid_argument for an unknown id.
inline SuiteResult run_suite(const std::string& id, std::uint64_t seed = 0) {
  for (const auto& s : detail::suite_table()) {
    if (id != s.id) continue;
    const auto start = std::chrono::steady_clock::now();
    SuiteResult r;
    try {
      r = s.run(seed);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.id = s.id;
    r.title = s.title;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  }
  throw std::invalid_argument("unknown suite: " + id);
}

inline std::vector<SuiteResult> run_all(std::uint64_t seed = 0) {
  std::vector<SuiteResult> out;
  for (const auto& id : suite_ids()) out.push_back(run_suite(id, seed));
  return out;
}

}  // namespace chainfold

#endif  // CHAINFOLD_VERIFY_HPP
