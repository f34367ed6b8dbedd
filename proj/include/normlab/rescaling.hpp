#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "normlab/cpoint.hpp"
#include "normlab/domain.hpp"
#include "normlab/holo_expr.hpp"

namespace normlab {

/// r_j = c_r * j^{-b}
struct ExplicitScale {
  double c_r = 1.0;
  double b = 1.0;
};

/// rho_j = 1 / f#(z_j)
struct ZalcmanScale {};

/// Centers p_j = anchor + c_p * j^{-a} * inward approach the boundary point
/// `anchor` along the unit vector `inward`, for j in [j_min, j_max].
struct SequenceSpec {
  CPoint anchor;
  CPoint inward;
  double c_p = 1.0;
  double a = 1.0;
  std::variant<ExplicitScale, ZalcmanScale> scale_rule = ZalcmanScale{};
  int j_min = 1;
  int j_max = 10;

  void validate() const;
};

struct SequencePoint {
  CPoint center;
  std::optional<double> scale;  // set for explicit rules only
  double delta;                 // boundary distance of the center
};

SequencePoint make_sequence(const SequenceSpec& spec, const Domain& domain, int j);

/// zeta -> f(center + rho * zeta).
HoloExpr rescaled_function(const HoloExpr& f, const CPoint& center, double rho);

/// max over test points of the relative gap between g#(zeta) and
/// rho * f#(center + rho * zeta), where g = rescaled_function(f, center, rho).
double rescale_sharp_identity_check(const HoloExpr& f, const CPoint& center, double rho,
                                    const std::vector<CPoint>& test_points);

struct RunEntry {
  int j;
  CPoint center;
  double delta;
  double rho;
  double ratio;  // rho / delta
  HoloExpr g;
};

struct RescalingRun {
  HoloExpr f;
  Domain domain;
  std::vector<RunEntry> entries;
  /// Numerical proxy for the limit hypothesis of the construction
  /// (rho_j -> 0 for Zalcman runs, r_j/delta_j -> 0 for explicit runs).
  bool hypothesis_ok = true;
  std::string hypothesis_note;
};

/// Builds g_j with rho_j = 1/f#(z_j). Throws EvalError when f# vanishes at a center.
RescalingRun zalcman_rescale(const HoloExpr& f, const Domain& domain, const SequenceSpec& spec);

/// Builds g_j with the explicit scale rule of `spec`.
RescalingRun explicit_rescale(const HoloExpr& f, const Domain& domain, const SequenceSpec& spec);

enum class LimitVerdict { ConstantLimit, NonconstantLimit, NoConvergence };

std::string to_string(LimitVerdict v);

struct ExcludedIndex {
  int j;
  std::string reason;
};

struct ConvergenceReport {
  double radius;
  double tol;
  std::vector<CPoint> grid;
  std::vector<int> indices;          // usable j, ascending
  std::vector<double> osc;           // sup |g_j(zeta) - g_j(0)|, one per usable j
  std::vector<double> cauchy_gaps;   // sup |g_{j+1} - g_j|, one per consecutive usable pair
  std::vector<double> proxy_distance;  // sup |g_j - g_J| against the limit proxy
  std::vector<ExcludedIndex> excluded;
  std::optional<HoloExpr> limit_proxy;
  Complex limit_value_at_zero;
  LimitVerdict verdict = LimitVerdict::NoConvergence;
};

/// Sup statistics of the run on ball_grid(dimension, R, grid_size, seed).
/// Indices whose g_j fails to evaluate on the grid are excluded and listed.
ConvergenceReport convergence_report(const RescalingRun& run, double R, std::size_t grid_size,
                                     double tol, std::uint64_t seed = 0);

enum class ProfileStatus { Pass, Fail, Vacuous };

std::string to_string(ProfileStatus s);

struct SharpProfile {
  double sharp_at_zero;
  double max_sharp;
  CPoint argmax;
  ProfileStatus status;
};

/// g# on the grid of radius R; pass iff |g#(0) - 1| <= tol and max g# <= 1 + tol.
SharpProfile sharp_profile(const HoloExpr& g, double R, std::size_t grid_size, double tol,
                           std::uint64_t seed = 0);

/// sharp_profile of the report's limit proxy; Vacuous unless the verdict is
/// a non-constant limit.
SharpProfile limit_sharp_check(const ConvergenceReport& report, std::size_t grid_size, double tol,
                               std::uint64_t seed = 0);

struct ExplicitRunResult {
  RescalingRun run;
  ConvergenceReport report;
};

/// Checks the constant-limit consequence for an explicit-scale sequence.
/// hypothesis_ok requires r_j/delta_j non-increasing and its final value < 0.1.
ExplicitRunResult thm2_verify(const HoloExpr& f, const Domain& domain, const SequenceSpec& spec,
                       double R, std::size_t grid_size, double tol, std::uint64_t seed = 0);

struct MartyBoundCheck {
  double max_excess;  // max of g#(zeta) - sqrt(C) r delta / (delta^2 - |r zeta|^2)
  std::size_t points_checked;
  std::size_t points_skipped;  // |r zeta| >= delta, where the bound is not defined
};

/// Evaluates the bound g_j#(zeta) <= sqrt(C) r_j delta_j / (delta_j^2 - |r_j zeta|^2)
/// over the run and the grid.
MartyBoundCheck marty_bound_check(const RescalingRun& run, double C, double R,
                                  std::size_t grid_size, std::uint64_t seed = 0);

struct CounterexampleRow {
  int n;
  long long ratio_num;  // rho_n / (1 - |z_n|) as an exact fraction
  long long ratio_den;
  double ratio;
  double sup_dev;  // sup over the grid of |g_n(zeta) - 1|
  double bound;    // n^-3 + n^-2 R
};

struct CounterexampleReport {
  std::vector<CounterexampleRow> rows;
  ConvergenceReport convergence;
  bool constant_limit_one;  // verdict constant-limit and |g_J(0) - 1| <= tol
  bool ratio_divergent;     // ratios strictly increasing and final ratio >= 1
  bool refutes_converse;    // both of the above
};

/// f(z) = z on the unit disc, z_n = 1 - n^-3, rho_n = n^-2, n = 1..n_max.
CounterexampleReport remark_counterexample(int n_max, double R, std::size_t grid_size = 16,
                                   double tol = 1e-3, std::uint64_t seed = 0);

}  // namespace normlab
