#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "normlab/cpoint.hpp"
#include "normlab/domain.hpp"
#include "normlab/holo_expr.hpp"

namespace normlab {

using RealField = std::function<double(const CPoint&)>;

/// Default step for the finite-difference Levi form: 1e-4 * (1 + |z|).
double default_fd_step(const CPoint& z);

/// Five-point stencil for the Levi form along the complex line t -> z + t v:
///   [F(z+hv) + F(z-hv) + F(z+ihv) + F(z-ihv) - 4F(z)] / (4h^2).
/// Exact for real quadratics; O(h^2) otherwise.
double levi_form_fd(const RealField& field, const CPoint& z, const CPoint& v, double h);

/// Levi form of log(1+|f|^2) at z in direction v:
///   |<grad f(z), v>|^2 / (1 + |f(z)|^2)^2.
double levi_log1p_closed(const HoloExpr& f, const CPoint& z, const CPoint& v);

/// f#(z) = |grad f(z)| / (1 + |f(z)|^2), the supremum of sqrt(Levi) over unit v.
double sharp(const HoloExpr& f, const CPoint& z);

/// Brute-force f#: max over `sphere_samples` unit directions of
/// sqrt(max(0, levi_form_fd(log(1+|f|^2), z, v, h))), followed for n > 1 by a
/// compass search on the sphere from the best sample. Independent of the
/// gradient; used as the oracle for sharp().
double sharp_fd(const HoloExpr& f, const CPoint& z, std::size_t sphere_samples, double h,
                std::uint64_t seed = 0);

/// Kobayashi metric of a ball:
///   [(d^2 - |z-p|^2)|v|^2 + |(z-p, v)|^2]^{1/2} / (d^2 - |z-p|^2).
double kobayashi_ball(const Ball& ball, const CPoint& z, const CPoint& v);

/// d|v| / (d^2 - |z-p|^2), an upper bound for kobayashi_ball.
double kobayashi_upper(const Ball& ball, const CPoint& z, const CPoint& v);

struct KobayashiBounds {
  double lower;  // from the circumscribed ball
  double upper;  // from the inscribed ball at z
};

/// lower <= K_domain(z, v) <= upper by monotonicity under inclusion.
KobayashiBounds kobayashi_domain_bounds(const Domain& domain, const CPoint& z, const CPoint& v);

// ---------------------------------------------------------------------------
// Normality-constant scan.
// ---------------------------------------------------------------------------

/// Shells are boundary-distance fractions in (0, 1], relative to the boundary
/// distance of the domain's center; 1 is the center itself. Each shell
/// carries points_per_shell points, the first on the ray toward +e_1.
struct SamplingPlan {
  std::vector<double> shells;
  std::size_t points_per_shell = 16;
  std::size_t directions_per_point = 8;
  std::uint64_t seed = 0;
};

struct NormalitySample {
  std::size_t shell;
  CPoint point;
  CPoint direction;
  double levi;
  double k_lower;
  double k_upper;
  double ratio_lower;  // levi / k_upper^2
  double ratio_upper;  // levi / k_lower^2
};

struct ShellTrend {
  double fraction;
  double boundary_distance;
  double max_ratio_lower;
  double max_ratio_upper;
  std::size_t samples;
};

enum class NormalityVerdict { BoundedConsistent, Divergent, Inconclusive };

std::string to_string(NormalityVerdict v);

struct NormalityEstimate {
  std::vector<NormalitySample> samples;  // in plan order, failures omitted
  std::vector<ShellTrend> trend;
  double c_required_lower_bound = 0.0;   // certified: any admissible C is >= this
  std::size_t failures = 0;
  std::vector<std::string> failure_messages;
  NormalityVerdict verdict = NormalityVerdict::Inconclusive;
};

/// Divergence / boundedness rule over the per-shell maxima (last three shells).
NormalityVerdict classify_trend(const std::vector<double>& shell_maxima);

/// Points of one shell of the plan: boundary distance `distance` from the domain.
std::vector<CPoint> shell_points(const Domain& domain, double distance, std::size_t count,
                                 std::uint64_t seed);

NormalityEstimate normality_scan(const HoloExpr& f, const Domain& domain,
                                 const SamplingPlan& plan);

}  // namespace normlab
