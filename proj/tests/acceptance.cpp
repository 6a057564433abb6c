// One line per acceptance criterion, then the GoogleTest wrappers.
#include <gtest/gtest.h>

#include <cstdio>
#include <map>

#include "chainfold/verify.hpp"

using namespace chainfold;

namespace {

std::map<std::string, SuiteResult>& results() {
  static std::map<std::string, SuiteResult> r;
  return r;
}

void expect_pass(const std::string& id) {
  const auto& r = results().at(id);
  EXPECT_TRUE(r.passed) << r.detail;
}

}  // namespace

TEST(Acceptance, KoivistoParviainenPoint) { expect_pass("kp"); }
TEST(Acceptance, HalfSpacePoint) { expect_pass("cor42"); }
TEST(Acceptance, SmallerSpacePoint) { expect_pass("cor43"); }
TEST(Acceptance, RegularPoint) { expect_pass("cor47"); }
TEST(Acceptance, WarmupConstants) { expect_pass("warmup"); }
TEST(Acceptance, SolverEquivalence) { expect_pass("solvers"); }
TEST(Acceptance, UnionProductIdentities) { expect_pass("lemma37"); }
TEST(Acceptance, SplitEquivalence) { expect_pass("split"); }
TEST(Acceptance, SupportedFraction) { expect_pass("fraction"); }
TEST(Acceptance, ChainCountBound) { expect_pass("lemma48"); }
TEST(Acceptance, CoverCorrectness) { expect_pass("cover"); }
TEST(Acceptance, LinearExtensions) { expect_pass("le"); }
TEST(Acceptance, RegularSelfIntersection) { expect_pass("rsi"); }
TEST(Acceptance, TowerComparison) { expect_pass("jlr"); }

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  int index = 0;
  for (const auto& id : suite_ids()) {
    auto r = run_suite(id);
    std::printf("[%s] criterion %2d %-8s %-40s %7.2fs  %s\n", r.passed ? "PASS" : "FAIL", ++index, r.id.c_str(),
                r.title.c_str(), r.seconds, r.detail.c_str());
    std::fflush(stdout);
    results()[id] = std::move(r);
  }
  return RUN_ALL_TESTS();
}
