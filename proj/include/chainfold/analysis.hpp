#ifndef CHAINFOLD_ANALYSIS_HPP
#define CHAINFOLD_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "chainfold/error.hpp"

namespace chainfold {

/// Binary entropy in bits; H(0) = H(1) = 0.
inline double entropy(double x) {
  if (x < -1e-12 || x > 1 + 1e-12 || std::isnan(x)) throw std::domain_error("entropy: argument outside [0, 1]");
  if (x <= 0 || x >= 1) return 0;
  return -x * std::log2(x) - (1 - x) * std::log2(1 - x);
}

struct BoundParams {
  double alpha = 0;
  double beta = 0;
  double gamma = 0;
};

/// (lg S, lg P) upper bounds.
struct LogBounds {
  double lg_s = 0;
  double lg_p = 0;
  double s() const { return std::exp2(lg_s); }
  double p() const { return std::exp2(lg_p); }
};

namespace detail {

inline constexpr double kTol = 1e-12;

inline void check_thm41(const BoundParams& p) {
  if (!(p.beta >= 0.25 - kTol && p.beta <= p.gamma + kTol && p.gamma <= 0.5 + kTol && p.beta <= p.alpha + kTol &&
        p.alpha <= 0.5 + kTol)) {
    throw std::domain_error("thm41 bounds need 1/4 <= beta <= gamma <= 1/2 and beta <= alpha <= 1/2");
  }
}

inline void check_thm45(const BoundParams& p) {
  if (!(p.alpha > 0 && p.alpha <= 1 + kTol && p.beta >= p.alpha / 2 - kTol && p.beta <= p.alpha + kTol)) {
    throw std::domain_error("thm45 bounds need 0 < alpha <= 1 and alpha/2 <= beta <= alpha");
  }
}

inline double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

/// Ratio (a − b)/(c − b), taken as 0 when the band c − b is empty.
inline double band_ratio(double num, double den) { return den <= kTol ? 0.0 : clamp01(num / den); }

}  // namespace detail

inline LogBounds thm41_bounds(const BoundParams& p) {
  detail::check_thm41(p);
  const double a = p.alpha, b = p.beta, g = p.gamma;
  const double band = 0.5 - b;
  LogBounds out;
  out.lg_s = std::max(a, 0.5 * (entropy(detail::clamp01(2 * b)) + entropy(detail::clamp01(1 - 2 * g))));
  out.lg_p = 1 + entropy(detail::clamp01(2 * a)) -
             band * (entropy(detail::band_ratio(g - b, band)) + entropy(detail::band_ratio(0.5 - g, band)) +
                     2 * entropy(detail::band_ratio(a - b, band)));
  return out;
}

/// The displayed lg P bound's symbol b is read as β.
inline LogBounds thm45_bounds(const BoundParams& p) {
  detail::check_thm45(p);
  const double a = p.alpha, b = p.beta;
  LogBounds out;
  out.lg_s = std::max(a, (1 - a) + a * entropy(detail::clamp01(b / a)));
  out.lg_p = entropy(detail::clamp01(a)) - (1 - b) * entropy(detail::band_ratio(a - b, 1 - b));
  return out;
}

/// Bisection for a root of a monotone f on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo < 0) == (fhi < 0)) throw std::domain_error("bisect: no sign change on the bracket");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Root γ ∈ [β, 1/2] of H(2β) + H(1 − 2γ) = 2α.
inline double solve_gamma(double alpha, double beta) {
  if (!(beta >= 0.25 - detail::kTol && beta <= 0.5 + detail::kTol)) throw std::domain_error("solve_gamma: beta outside [1/4, 1/2]");
  const double h2b = entropy(detail::clamp01(2 * beta));
  auto g = [&](double gamma) { return h2b + entropy(detail::clamp01(1 - 2 * gamma)) - 2 * alpha; };
  if (std::abs(g(0.5)) <= 1e-13) return 0.5;
  if (std::abs(g(beta)) <= 1e-13) return beta;
  return bisect(g, beta, 0.5);
}

/// Smallest γ ∈ [β, 1/2] with ½(H(2β) + H(1 − 2γ)) ≤ x, if any.
inline std::optional<double> min_gamma(double beta, double x) {
  const double h2b = entropy(detail::clamp01(2 * beta));
  if (h2b > 2 * x) return std::nullopt;
  auto g = [&](double gamma) { return h2b + entropy(detail::clamp01(1 - 2 * gamma)) - 2 * x; };
  if (g(beta) <= 0) return beta;
  if (g(0.5) >= 0) return 0.5;
  double gamma = bisect(g, beta, 0.5);
  // g falls as γ grows; step onto the feasible side of the root.
  while (g(gamma) > 0 && gamma < 0.5) gamma = std::min(0.5, gamma + 1e-13);
  return gamma;
}

/// max over k ≥ 0 of (k+1)/s^k, with the maximizing k.
struct LowerBound {
  double p = 1;
  int k = 0;
};

inline LowerBound lower_bound_P_at(double s) {
  if (!(s > 1 && s <= 2 + detail::kTol)) throw std::domain_error("lower_bound_P: s must lie in (1, 2]");
  LowerBound best;
  const int last = static_cast<int>(std::ceil(1 / (s - 1))) + 2;
  for (int k = 0; k <= last; ++k) {
    const double v = (k + 1) / std::pow(s, k);
    if (v > best.p) best = {v, k};
  }
  return best;
}

inline double lower_bound_P(double s) { return lower_bound_P_at(s).p; }

struct TradeoffPoint {
  double s = 1;
  double t = 1;
  double product = 1;
  std::string source;
};

inline TradeoffPoint make_point(double s, double t, std::string source) { return {s, t, s * t, std::move(source)}; }

/// (S₁^μ S₂^{1−μ}, P₁^μ P₂^{1−μ}).
inline std::pair<double, double> interpolate(double s1, double p1, double s2, double p2, double mu) {
  if (!(mu >= 0 && mu <= 1)) throw std::domain_error("interpolate: mu outside [0, 1]");
  return {std::pow(s1, mu) * std::pow(s2, 1 - mu), std::pow(p1, mu) * std::pow(p2, 1 - mu)};
}

/// One divide-and-conquer level on top of an existing algorithm: (S, T) -> (√S, 2√T).
inline TradeoffPoint boost(const TradeoffPoint& pt) {
  return make_point(std::sqrt(pt.s), 2 * std::sqrt(pt.t), "boost(" + pt.source + ")");
}

enum class Theorem { thm41, thm45 };

struct OptimizeResult {
  BoundParams params;
  LogBounds bounds;
};

namespace detail {

/// Grid over [lo, hi] with the given step, then golden-section refinement
/// around the best grid point.  First best wins on ties.
inline std::pair<double, double> minimize_1d(const std::function<double(double)>& f, double lo, double hi, double step) {
  double best_x = lo;
  double best_v = f(lo);
  const int count = std::max(1, static_cast<int>(std::ceil((hi - lo) / step)));
  for (int i = 1; i <= count; ++i) {
    const double x = std::min(hi, lo + i * step);
    const double v = f(x);
    if (v < best_v) {
      best_v = v;
      best_x = x;
    }
  }
  double a = std::max(lo, best_x - step);
  double b = std::min(hi, best_x + step);
  const double r = (std::sqrt(5.0) - 1) / 2;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  const double mid = 0.5 * (a + b);
  const double fm = f(mid);
  if (fm < best_v) return {mid, fm};
  return {best_x, best_v};
}

inline constexpr double kInfeasible = std::numeric_limits<double>::infinity();

}  // namespace detail

/*
 * Minimizes lg P subject to lg S ≤ target.  For the first theorem lg P is
 * strictly decreasing in α and, for fixed (α, β), maximal at the band midpoint
 * γ = (β + 1/2)/2, so α = min(target, 1/2) and γ is the feasible value closest
 * to the midpoint; only β is searched.  For the second theorem lg P is
 * increasing in β, so β is the least value meeting the size constraint and
 * only α is searched.
 */
inline OptimizeResult optimize_params(double target_lg_s, Theorem theorem, double grid = 1e-4) {
  if (!(grid > 0 && grid <= 0.1)) throw std::domain_error("optimize_params: grid step must lie in (0, 0.1]");
  const double x = target_lg_s;
  if (theorem == Theorem::thm41) {
    const double alpha = std::min(x, 0.5);
    if (alpha < 0.25 - detail::kTol) throw std::domain_error("thm41 cannot reach lg S below 1/4");
    auto params_for = [&](double beta) -> std::optional<BoundParams> {
      auto gmin = min_gamma(beta, x);
      if (!gmin) return std::nullopt;
      const double gamma = std::max(*gmin, (beta + 0.5) / 2);
      return BoundParams{alpha, beta, std::min(gamma, 0.5)};
    };
    auto objective = [&](double beta) {
      auto p = params_for(beta);
      return p ? thm41_bounds(*p).lg_p : detail::kInfeasible;
    };
    const auto [beta, value] = detail::minimize_1d(objective, 0.25, alpha, grid);
    if (!std::isfinite(value)) throw std::domain_error("thm41: target lg S is infeasible");
    const BoundParams p = *params_for(beta);
    return {p, thm41_bounds(p)};
  }
  if (x < 0.5 - detail::kTol) throw std::domain_error("thm45 cannot reach lg S below 1/2");
  const double hi = std::min(x, 1.0);
  const double lo = std::max(1e-9, 1 - x);
  auto params_for = [&](double alpha) -> std::optional<BoundParams> {
    // Least β ∈ [α/2, α] with (1 − α) + α·H(β/α) ≤ x; H(β/α) falls as β grows.
    auto excess = [&](double beta) { return (1 - alpha) + alpha * entropy(detail::clamp01(beta / alpha)) - x; };
    if (alpha > x + detail::kTol || excess(alpha) > detail::kTol) return std::nullopt;
    double beta = alpha / 2;
    if (excess(beta) > 0) beta = excess(alpha) >= 0 ? alpha : bisect(excess, alpha / 2, alpha);
    // Bisection leaves β within 1e-12 of the root; step to its feasible side.
    while (excess(beta) > 0 && beta < alpha) beta = std::min(alpha, beta + 1e-13);
    return BoundParams{alpha, beta, 0};
  };
  auto objective = [&](double alpha) {
    auto p = params_for(alpha);
    return p ? thm45_bounds(*p).lg_p : detail::kInfeasible;
  };
  const auto [alpha, value] = detail::minimize_1d(objective, lo, hi, grid);
  if (!std::isfinite(value)) throw std::domain_error("thm45: target lg S is infeasible");
  const BoundParams p = *params_for(alpha);
  return {p, thm45_bounds(p)};
}

struct CurveRow {
  double x = 0;  ///< lg S
  double s = 1;
  double t_upper = 0;
  double st_upper = 0;
  double t_lower = 0;
  double st_lower = 0;
  std::string source;
  double t_set_system = std::numeric_limits<double>::infinity();  ///< best T before any boost
};

/// A set-system point (lg S, lg P) from outside the two parametric families.
struct MeasuredPoint {
  double lg_s = 0;
  double lg_p = 0;
  std::string label;
};

namespace detail {

struct HullPoint {
  double x, y;
  std::string label;
};

/// Lower convex hull of points sorted by x.
inline std::vector<HullPoint> lower_hull(std::vector<HullPoint> pts) {
  std::sort(pts.begin(), pts.end(), [](const HullPoint& a, const HullPoint& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  std::vector<HullPoint> hull;
  for (auto& p : pts) {
    if (!hull.empty() && std::abs(hull.back().x - p.x) < 1e-15) continue;
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
      if (cross <= 0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(std::move(p));
  }
  return hull;
}

}  // namespace detail

/*
 * Upper curve: parametric optima of both constructions plus measured points,
 * closed under interpolation (lower convex hull in (lg S, lg P)) and under
 * monotonicity in S, then under boosting: lg T(x) ≤ 1 + lg T(2x)/2.
 * Lower curve: T = S · max_k (k+1)/S^k.  Rows at x = i/N, i = 1..N.
 */
inline std::vector<CurveRow> emit_curve(int grid_points = 512, const std::vector<MeasuredPoint>& measured = {},
                                        unsigned threads = 1, double param_grid = 1e-3) {
  if (grid_points < 2) throw std::domain_error("emit_curve: need at least 2 grid points");
  const int n = grid_points;
  std::vector<std::optional<detail::HullPoint>> t41(static_cast<std::size_t>(n) + 1), t45(static_cast<std::size_t>(n) + 1);
  auto work = [&](unsigned w, unsigned workers) {
    for (int i = 1 + static_cast<int>(w); i <= n; i += static_cast<int>(workers)) {
      const double x = static_cast<double>(i) / n;
      // thm41 is infeasible below lg S ≈ 0.386 (β ≤ α forces H(2β) ≤ 2x)
      if (x >= 0.25) {
        try {
          const auto r = optimize_params(x, Theorem::thm41, param_grid);
          t41[static_cast<std::size_t>(i)] = detail::HullPoint{r.bounds.lg_s, r.bounds.lg_p, "thm41"};
        } catch (const std::domain_error&) {
        }
      }
      if (x >= 0.5) {
        const auto r = optimize_params(x, Theorem::thm45, param_grid);
        t45[static_cast<std::size_t>(i)] = detail::HullPoint{r.bounds.lg_s, r.bounds.lg_p, "thm45"};
      }
    }
  };
  const unsigned workers = std::max(1u, threads);
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }

  std::vector<detail::HullPoint> base{{1.0, 0.0, "powerset"}};
  for (const auto& m : measured) base.push_back({m.lg_s, m.lg_p, m.label});
  for (int i = 1; i <= n; ++i) {
    if (t41[static_cast<std::size_t>(i)]) base.push_back(*t41[static_cast<std::size_t>(i)]);
    if (t45[static_cast<std::size_t>(i)]) base.push_back(*t45[static_cast<std::size_t>(i)]);
  }
  const auto hull = detail::lower_hull(base);

  // Best lg P available at lg S ≤ x, with its label.
  auto hull_at = [&](double x) -> std::pair<double, std::string> {
    double best = std::numeric_limits<double>::infinity();
    std::string label;
    for (std::size_t j = 0; j < hull.size(); ++j) {
      const auto& a = hull[j];
      if (a.x > x + 1e-12) break;
      if (a.y < best) {
        best = a.y;
        label = a.label;
      }
      if (j + 1 < hull.size() && hull[j + 1].x > x + 1e-12) {
        const auto& b = hull[j + 1];
        const double mu = (x - a.x) / (b.x - a.x);
        const double y = a.y + mu * (b.y - a.y);
        if (y < best - 1e-15) {
          best = y;
          label = a.label == b.label ? a.label : "interp(" + a.label + "," + b.label + ")";
        }
      }
    }
    return {best, label};
  };

  std::vector<CurveRow> rows(static_cast<std::size_t>(n));
  std::vector<double> lg_t(static_cast<std::size_t>(n) + 1, std::numeric_limits<double>::infinity());
  std::vector<int> depth(static_cast<std::size_t>(n) + 1, 0);
  std::vector<std::string> label(static_cast<std::size_t>(n) + 1);
  for (int i = n; i >= 1; --i) {
    const double x = static_cast<double>(i) / n;
    const auto [lg_p, src] = hull_at(x);
    const auto ui = static_cast<std::size_t>(i);
    lg_t[ui] = x + lg_p;
    label[ui] = src;
    CurveRow& row = rows[ui - 1];
    row.t_set_system = std::exp2(lg_t[ui]);
    if (2 * i <= n) {
      const auto u2 = static_cast<std::size_t>(2 * i);
      const double boosted = 1 + lg_t[u2] / 2;
      if (boosted < lg_t[ui] - 1e-15 && depth[u2] < 40) {
        lg_t[ui] = boosted;
        depth[ui] = depth[u2] + 1;
        label[ui] = label[u2];
      }
    }
  }
  for (int i = 1; i <= n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    CurveRow& row = rows[ui - 1];
    row.x = static_cast<double>(i) / n;
    row.s = std::exp2(row.x);
    row.t_upper = std::exp2(lg_t[ui]);
    row.st_upper = row.s * row.t_upper;
    row.t_lower = row.s * lower_bound_P(row.s);
    row.st_lower = row.s * row.t_lower;
    row.source = depth[ui] == 0 ? label[ui]
                                : (depth[ui] == 1 ? "boost(" : "boost^" + std::to_string(depth[ui]) + "(") + label[ui] + ")";
  }
  return rows;
}

inline void write_curve_csv(std::ostream& os, const std::vector<CurveRow>& rows) {
  os << "x_lgS,S,T_upper,ST_upper,T_lower,ST_lower,source\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6f,%.9f,%.9f,%.9f,%.9f,%.9f,", r.x, r.s, r.t_upper, r.st_upper, r.t_lower,
                  r.st_lower);
    os << buf << r.source << '\n';
  }
}

/// Fixed reference points: the classic ST = 4 line and the warm-up point.
inline std::vector<TradeoffPoint> reference_points(int count = 16) {
  std::vector<TradeoffPoint> out;
  for (int i = 0; i <= count; ++i) {
    const double x = static_cast<double>(i) / count;
    const double s = std::exp2(x);
    out.push_back(make_point(s, 4 / s, "st4"));
  }
  const double h = 0.889972;
  out.push_back(make_point(std::sqrt(2.0), std::sqrt(2.0) * std::exp2(h), "warmup"));
  return out;
}

/// (P₁/P₂)^{1/(x₂ − x₁)}: the per-unit growth factor of the interpolated P between two points.
inline double interpolation_base(double x1, double p1, double x2, double p2) {
  return std::pow(p1 / p2, 1 / (x2 - x1));
}

}  // namespace chainfold

#endif  // CHAINFOLD_ANALYSIS_HPP
