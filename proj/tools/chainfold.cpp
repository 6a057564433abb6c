#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "chainfold/chainfold.hpp"

using namespace chainfold;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitParse = 2;
constexpr int kExitCap = 3;

struct RunConfig {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool seed_given = false;
};

std::uint64_t effective_seed(const RunConfig& cfg) {
  if (cfg.seed_given) return cfg.seed;
  if (const char* env = std::getenv("CHAINFOLD_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw ParseError(std::string("CHAINFOLD_SEED is not an unsigned integer: ") + env);
  }
  return 0;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return in;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
}

TspInstance load_instance(const std::string& path) {
  auto in = open_input(path);
  return read_tsp_instance(in);
}

Poset load_poset(const std::string& path) {
  auto in = open_input(path);
  return read_poset(in);
}

CoverFamily load_cover(const std::string& path) {
  auto in = open_input(path);
  return read_cover_family(in, std::filesystem::path(path).parent_path());
}

std::vector<std::string> split_args(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(part);
  return out;
}

double to_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ParseError("bad number '" + s + "'");
  return v;
}

int to_int(const std::string& s) {
  const double v = to_real(s);
  if (v != static_cast<int>(v)) throw ParseError("expected an integer, got '" + s + "'");
  return static_cast<int>(v);
}

// powerset:n chain:n tower:t,k kp warmup:k,beta thm41:n,a,b,g|auto thm45:n,a,b; a plain path loads a file
SetSystem make_system(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const auto args = colon == std::string::npos ? std::vector<std::string>{} : split_args(spec.substr(colon + 1));
  auto want = [&](std::size_t count) {
    if (args.size() != count) {
      throw ParseError("construction '" + name + "' takes " + std::to_string(count) + " argument(s)");
    }
  };
  if (name == "powerset") {
    want(1);
    return powerset(to_int(args[0]));
  }
  if (name == "chain") {
    want(1);
    return single_chain(to_int(args[0]));
  }
  if (name == "tower") {
    want(2);
    return tower_of_cubes(to_int(args[0]), to_int(args[1]));
  }
  if (name == "kp") {
    want(0);
    return koivisto_parviainen();
  }
  if (name == "warmup") {
    want(2);
    return warmup_system(to_int(args[0]), to_real(args[1]));
  }
  if (name == "thm41") {
    want(4);
    const double a = to_real(args[1]), b = to_real(args[2]);
    const double g = args[3] == "auto" ? solve_gamma(a, b) : to_real(args[3]);
    return theorem41_system({to_int(args[0]), a, b, g});
  }
  if (name == "thm45") {
    want(3);
    return theorem45_system(Thm45Params{to_int(args[0]), to_real(args[1]), to_real(args[2])});
  }
  if (colon == std::string::npos && std::filesystem::exists(spec)) return load_set_system(spec);
  throw ParseError("unknown construction '" + spec + "'");
}

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void print_metrics(const SetSystem& f) {
  const auto m = metrics(f);
  std::cout << "n " << m.n << "\nsize " << m.size << "\nchains " << m.chains << "\nS " << fixed(m.normalized_size)
            << "\nP " << fixed(m.inverse_density) << "\nS2P " << fixed(m.st_product) << '\n';
}

void print_solution(const std::string& alg, const Solution& s) {
  std::cout << "algorithm " << alg << "\nvalue " << s.value << "\ntour " << s.tour.to_string() << "\ntable_entries "
            << s.table_entries << '\n';
}

class Timer {
 public:
  explicit Timer(std::string label) : label_(std::move(label)), start_(std::chrono::steady_clock::now()) {}
  ~Timer() {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::fprintf(stderr, "%s: %.3f s\n", label_.c_str(), s);
  }

 private:
  std::string label_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Set-system space/time tradeoffs for exact permutation problems"};
  app.require_subcommand(1);
  RunConfig cfg;
  auto common = [&cfg](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Random seed (default 0, or CHAINFOLD_SEED)")->each([&cfg](const std::string&) {
      cfg.seed_given = true;
    });
    sub->add_option("--threads", cfg.threads, "Worker threads for framework and curve")->check(CLI::Range(1u, 256u));
  };

  std::function<int()> action;

  // solve
  auto* solve = app.add_subcommand("solve", "Solve a TSP instance exactly");
  common(solve);
  std::string alg = "bhk", instance_path, system_path;
  int depth = 1, block_size = 0;
  double alpha = 0.5;
  std::size_t trials = 0;
  solve->add_option("--alg", alg, "Algorithm")
      ->check(CLI::IsMember({"brute", "bhk", "restricted", "gs", "warmup", "framework"}))
      ->capture_default_str();
  solve->add_option("--instance", instance_path, "Instance file");
  solve->add_option("--set-system", system_path, "Set-system file or construction for --alg restricted");
  solve->add_option("--depth", depth, "Divide-and-conquer depth for gs")->capture_default_str();
  solve->add_option("--alpha", alpha, "Warm-up prefix fraction")->capture_default_str();
  solve->add_option("--trials", trials, "Warm-up trials (default: the success-probability bound)");
  solve->add_option("--block-size", block_size, "Framework block size (default n/2)");
  solve->callback([&] {
    action = [&]() -> int {
      if (instance_path.empty()) throw ParseError("solve needs --instance");
      const TspInstance inst = load_instance(instance_path);
      Timer timer("solve " + alg);
      if (alg == "brute") {
        print_solution(alg, brute_force(inst));
      } else if (alg == "bhk") {
        print_solution(alg, held_karp(inst));
      } else if (alg == "restricted") {
        const auto f = system_path.empty() ? powerset(inst.size()) : make_system(system_path);
        const auto r = restricted_dp(inst, f);
        if (!r) {
          std::cerr << "no tour is supported by the set system\n";
          return kExitFailure;
        }
        print_solution(alg, *r);
      } else if (alg == "gs") {
        print_solution(alg, gurevich_shelah(inst, depth));
      } else if (alg == "warmup") {
        const std::size_t t =
            trials ? trials : static_cast<std::size_t>(warmup_trial_count(inst.size(), alpha).convert_to<unsigned long long>());
        WarmupStats stats;
        print_solution(alg, warmup_solver(inst, alpha, t, effective_seed(cfg), &stats));
        std::cout << "trials " << stats.trials << "\ndistinct_splits " << stats.distinct_splits << '\n';
      } else {
        const int m = block_size ? block_size : std::max(1, inst.size() / 2);
        print_solution(alg, framework_solver(inst, m, cfg.threads));
      }
      return 0;
    };
  });

  // sys
  auto* sys = app.add_subcommand("sys", "Build or inspect a set system");
  common(sys);
  std::string make_spec, sys_out;
  std::vector<std::string> metrics_arg;
  sys->add_option("--make", make_spec, "Construction: powerset:n chain:n tower:t,k kp warmup:k,beta thm41:n,a,b,g|auto thm45:n,a,b");
  sys->add_option("--out", sys_out, "Write the set system to FILE");
  auto* metrics_opt = sys->add_option("--metrics", metrics_arg, "Print |F|, C(F), S, P, S^2 P (of FILE, or of --make)")
                          ->expected(0, 1);
  sys->callback([&] {
    action = [&]() -> int {
      std::optional<SetSystem> f;
      if (!make_spec.empty()) f = make_system(make_spec);
      if (!metrics_arg.empty() && !metrics_arg.front().empty()) f = load_set_system(metrics_arg.front());
      if (!f) throw ParseError("sys needs --make or --metrics FILE");
      if (!sys_out.empty()) {
        std::ostringstream os;
        write_set_system(os, *f);
        write_file(sys_out, os.str());
      }
      if (metrics_opt->count() > 0 || sys_out.empty()) print_metrics(*f);
      return 0;
    };
  });

  // cover
  auto* cover = app.add_subcommand("cover", "Build a covering family of relabelings");
  common(cover);
  std::string cover_base, cover_out;
  bool exact = false, unique = false, prune = true;
  std::size_t max_tries = 100000;
  cover->add_option("--base", cover_base, "Base set system (construction or file)")->required();
  cover->add_flag("--exact", exact, "Exact minimum cover (n <= 5)");
  cover->add_flag("--unique", unique, "Make every permutation supported exactly once");
  cover->add_flag("!--no-prune", prune, "Skip greedy pruning of the random cover");
  cover->add_option("--max-tries", max_tries, "Random relabelings before giving up")->capture_default_str();
  cover->add_option("--out", cover_out, "Write FILE (family) and FILE.base.ss (base)");
  cover->callback([&] {
    action = [&]() -> int {
      const auto base = make_system(cover_base);
      Timer timer("cover");
      CoverFamily family = exact ? exact_min_cover(base) : random_cover(base, effective_seed(cfg), max_tries);
      if (!exact && prune) family = greedy_prune(family);
      if (unique) family = make_unique(family);
      std::cout << "n " << base.ground_size() << "\nbase_size " << base.size() << "\nfamily_size " << family.size()
                << "\nprescribed_size " << prescribed_family_size(base) << "\nmode "
                << (family.unique_mode ? "unique" : "plain") << '\n';
      if (!cover_out.empty()) {
        const std::string base_file = cover_out + ".base.ss";
        std::ostringstream bs, fs;
        write_set_system(bs, base);
        write_file(base_file, bs.str());
        write_cover_family(fs, family, std::filesystem::path(base_file).filename().string());
        write_file(cover_out, fs.str());
      }
      return 0;
    };
  });

  // count-le
  auto* count_le = app.add_subcommand("count-le", "Count linear extensions of a poset");
  common(count_le);
  std::string poset_path;
  count_le->add_option("--poset", poset_path, "Poset file")->required();
  count_le->callback([&] {
    action = [&]() -> int {
      std::cout << count_linear_extensions(load_poset(poset_path)) << '\n';
      return 0;
    };
  });

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a semiring permutation problem");
  common(eval);
  std::string problem, eval_instance, eval_poset, eval_cover;
  eval->add_option("--problem", problem, "Problem")->check(CLI::IsMember({"tsp", "path", "le"}))->required();
  eval->add_option("--instance", eval_instance, "Instance file (tsp, path)");
  eval->add_option("--poset", eval_poset, "Poset file (le)");
  eval->add_option("--cover", eval_cover, "Cover-family file: restrict the DP to its members");
  eval->callback([&] {
    action = [&]() -> int {
      std::optional<CoverFamily> family;
      if (!eval_cover.empty()) family = load_cover(eval_cover);
      if (problem == "le") {
        if (eval_poset.empty()) throw ParseError("eval --problem le needs --poset");
        const auto p = linear_extension_problem(load_poset(eval_poset));
        std::cout << "value " << (family ? evaluate_unique(p, *family) : evaluate_dp(p)) << '\n';
        return 0;
      }
      if (eval_instance.empty()) throw ParseError("eval --problem " + problem + " needs --instance");
      const auto inst = load_instance(eval_instance);
      const auto p = problem == "tsp" ? tsp_problem(inst) : hamiltonian_path_problem(inst);
      const Cost v = family ? evaluate_restricted(p, *family) : evaluate_dp(p);
      std::cout << "value " << v << '\n';
      return 0;
    };
  });

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Evaluate the closed-form S and P bounds");
  common(bounds);
  int theorem = 41;
  double b_alpha = 0, b_beta = 0;
  std::optional<double> b_gamma;
  bounds->add_option("--theorem", theorem, "41 or 45")->check(CLI::IsMember({41, 45}))->required();
  bounds->add_option("--alpha", b_alpha, "alpha")->required();
  bounds->add_option("--beta", b_beta, "beta")->required();
  bounds->add_option("--gamma", b_gamma, "gamma (41 only; default: root of the size equation)");
  bounds->callback([&] {
    action = [&]() -> int {
      BoundParams p{b_alpha, b_beta, 0};
      LogBounds r;
      if (theorem == 41) {
        p.gamma = b_gamma ? *b_gamma : solve_gamma(b_alpha, b_beta);
        r = thm41_bounds(p);
      } else {
        r = thm45_bounds(p);
      }
      std::cout << "alpha " << fixed(p.alpha) << "\nbeta " << fixed(p.beta) << "\ngamma " << fixed(p.gamma)
                << "\nlgS " << fixed(r.lg_s) << "\nlgP " << fixed(r.lg_p) << "\nS " << fixed(r.s()) << "\nP "
                << fixed(r.p()) << "\nST " << fixed(r.s() * r.p()) << "\nS2P " << fixed(r.s() * r.s() * r.p()) << '\n';
      return 0;
    };
  });

  // optimize
  auto* optimize = app.add_subcommand("optimize", "Minimize P subject to lg S <= target");
  common(optimize);
  double target = 0.5, grid = 1e-4;
  int o_theorem = 41;
  optimize->add_option("--target-lgS", target, "Target lg S")->required();
  optimize->add_option("--theorem", o_theorem, "41 or 45")->check(CLI::IsMember({41, 45}))->required();
  optimize->add_option("--grid", grid, "Parameter grid step")->capture_default_str();
  optimize->callback([&] {
    action = [&]() -> int {
      const auto r = optimize_params(target, o_theorem == 41 ? Theorem::thm41 : Theorem::thm45, grid);
      std::cout << "alpha " << fixed(r.params.alpha) << "\nbeta " << fixed(r.params.beta) << "\ngamma "
                << fixed(r.params.gamma) << "\nlgS " << fixed(r.bounds.lg_s) << "\nlgP " << fixed(r.bounds.lg_p)
                << "\nS " << fixed(r.bounds.s()) << "\nP " << fixed(r.bounds.p()) << '\n';
      return 0;
    };
  });

  // curve
  auto* curve = app.add_subcommand("curve", "Emit the space/time tradeoff curve as CSV");
  common(curve);
  std::string curve_out, points_out;
  int grid_points = 512;
  bool with_kp = true;
  curve->add_option("--out", curve_out, "CSV file (default stdout)");
  curve->add_option("--grid", grid_points, "Number of lg S grid points")->check(CLI::Range(2, 1 << 20))->capture_default_str();
  curve->add_flag("!--no-kp", with_kp, "Leave the measured KP point out of the hull");
  curve->add_option("--points", points_out, "Also write reference points (ST=4 line, KP, warm-up) as CSV");
  curve->callback([&] {
    action = [&]() -> int {
      Timer timer("curve");
      std::vector<MeasuredPoint> measured;
      if (with_kp) {
        const auto m = metrics(koivisto_parviainen());
        measured.push_back({std::log2(m.normalized_size), std::log2(m.inverse_density), "kp"});
      }
      if (!points_out.empty()) {
        auto pts = reference_points();
        const auto m = metrics(koivisto_parviainen());
        pts.push_back(make_point(m.normalized_size, m.normalized_size * m.inverse_density, "kp"));
        std::ostringstream ps;
        ps << "S,T,ST,source\n";
        for (const auto& pt : pts) ps << fixed(pt.s, 9) << ',' << fixed(pt.t, 9) << ',' << fixed(pt.product, 9) << ',' << pt.source << '\n';
        write_file(points_out, ps.str());
      }
      std::ostringstream os;
      write_curve_csv(os, emit_curve(grid_points, measured, cfg.threads));
      if (curve_out.empty()) {
        std::cout << os.str();
      } else {
        write_file(curve_out, os.str());
      }
      return 0;
    };
  });

  // verify
  auto* verify = app.add_subcommand("verify", "Run the verification suites");
  common(verify);
  std::vector<std::string> suites;
  std::string verify_system;
  verify->add_option("--suite", suites, "Suite id(s); default all")->check(CLI::IsMember(suite_ids()));
  verify->add_option("--set-system", verify_system, "Also check the chain-count bound on FILE");
  verify->callback([&] {
    action = [&]() -> int {
      const auto seed = effective_seed(cfg);
      std::optional<SetSystem> extra;
      if (!verify_system.empty()) extra = load_set_system(verify_system);
      const auto ids = suites.empty() ? suite_ids() : suites;
      bool all = true;
      std::cout << "suite,result,seconds,detail\n";
      for (const auto& id : ids) {
        const auto r = run_suite(id, seed);
        all = all && r.passed;
        std::cout << r.id << ',' << (r.passed ? "pass" : "fail") << ',' << fixed(r.seconds, 3) << ",\"" << r.detail
                  << "\"\n";
      }
      if (extra) {
        const BigInt c = count_chains(*extra);
        const int n = extra->ground_size();
        bool ok = true;
        for (int k = 0; k <= 6; ++k) {
          const int block = (n + k) / (k + 1);
          ok = ok && c <= pow(factorial(block), static_cast<unsigned>(k + 1)) *
                              pow(BigInt(extra->size()), static_cast<unsigned>(k));
        }
        all = all && ok;
        std::cout << "set-system," << (ok ? "pass" : "fail") << ",0.000,\"" << verify_system << " C(F)=" << c
                  << "\"\n";
      }
      return all ? 0 : kExitFailure;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    return action ? action() : kExitFailure;
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCap;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
