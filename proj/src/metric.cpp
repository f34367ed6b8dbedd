#include "normlab/metric.hpp"

#include <algorithm>
#include <cmath>

#include "normlab/errors.hpp"
#include "normlab/parallel.hpp"
#include "normlab/sampling.hpp"

namespace normlab {

double default_fd_step(const CPoint& z) { return 1e-4 * (1.0 + z.norm()); }

double levi_form_fd(const RealField& field, const CPoint& z, const CPoint& v, double h) {
  require_same_dimension(z, v, "levi_form_fd");
  if (!(h > 0.0) || !std::isfinite(h)) throw ArgumentError("levi_form_fd: step must be positive");
  const Complex hi(0.0, h);
  const double sum = field(z + h * v) + field(z - h * v) + field(z + hi * v) +
                     field(z - hi * v) - 4.0 * field(z);
  return sum / (4.0 * h * h);
}

double levi_log1p_closed(const HoloExpr& f, const CPoint& z, const CPoint& v) {
  require_same_dimension(z, v, "levi_log1p_closed");
  const Jet jet = evaluate_jet(f, z);
  const double denom = 1.0 + std::norm(jet.value);
  return std::norm(bilinear(jet.gradient, v)) / (denom * denom);
}

double sharp(const HoloExpr& f, const CPoint& z) {
  const Jet jet = evaluate_jet(f, z);
  double grad_sq = 0.0;
  for (const auto& g : jet.gradient) grad_sq += std::norm(g);
  return std::sqrt(grad_sq) / (1.0 + std::norm(jet.value));
}

double sharp_fd(const HoloExpr& f, const CPoint& z, std::size_t sphere_samples, double h,
                std::uint64_t seed) {
  if (sphere_samples == 0) throw ArgumentError("sharp_fd: need at least one direction");
  const RealField field = [&f](const CPoint& p) { return std::log1p(std::norm(evaluate(f, p))); };
  const std::size_t n = f.dimension();
  double best = -1.0;
  CPoint best_v;
  for (const auto& v : sphere_directions(n, sphere_samples, seed)) {
    const double l = levi_form_fd(field, z, v, h);
    if (l > best) {
      best = l;
      best_v = v;
    }
  }
  // Compass search on the sphere around the best sample. In one variable all
  // unit directions differ by a phase, so there is nothing to refine.
  if (n > 1) {
    for (double step = 0.25; step > 1e-5;) {
      bool improved = false;
      for (std::size_t k = 0; k < n && !improved; ++k) {
        for (const Complex d : {Complex(step, 0.0), Complex(-step, 0.0), Complex(0.0, step),
                                Complex(0.0, -step)}) {
          CPoint w = best_v;
          w[k] += d;
          w *= Complex(1.0 / w.norm(), 0.0);
          const double l = levi_form_fd(field, z, w, h);
          if (l > best) {
            best = l;
            best_v = std::move(w);
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
  }
  return std::sqrt(std::max(0.0, best));
}

namespace {

struct BallGeometry {
  double gap;  // d^2 - |z - p|^2
  double pairing;
  double v_norm;
};

BallGeometry ball_geometry(const Ball& ball, const CPoint& z, const CPoint& v) {
  require_same_dimension(ball.center(), z, "kobayashi metric (point)");
  require_same_dimension(z, v, "kobayashi metric (direction)");
  const CPoint w = z - ball.center();
  const double wn = w.norm();
  const double d = ball.radius();
  if (!(wn < d)) throw DomainError("kobayashi metric: point is not inside the ball");
  const double v_norm = v.norm();
  if (!(v_norm > 0.0)) throw ArgumentError("kobayashi metric: zero direction");
  return {(d - wn) * (d + wn), std::abs(hermitian(w, v)), v_norm};
}

}  // namespace

double kobayashi_ball(const Ball& ball, const CPoint& z, const CPoint& v) {
  const auto g = ball_geometry(ball, z, v);
  return std::sqrt(g.gap * g.v_norm * g.v_norm + g.pairing * g.pairing) / g.gap;
}

double kobayashi_upper(const Ball& ball, const CPoint& z, const CPoint& v) {
  const auto g = ball_geometry(ball, z, v);
  return ball.radius() * g.v_norm / g.gap;
}

KobayashiBounds kobayashi_domain_bounds(const Domain& domain, const CPoint& z,
                                        const CPoint& v) {
  const Ball inner = inscribed_ball(domain, z);
  const Ball outer = circumscribed_ball(domain);
  return {kobayashi_ball(outer, z, v), kobayashi_ball(inner, z, v)};
}

std::string to_string(NormalityVerdict v) {
  switch (v) {
    case NormalityVerdict::BoundedConsistent:
      return "bounded-consistent";
    case NormalityVerdict::Divergent:
      return "divergent";
    case NormalityVerdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

NormalityVerdict classify_trend(const std::vector<double>& m) {
  if (m.size() < 3) return NormalityVerdict::Inconclusive;
  const double a = m[m.size() - 3];
  const double b = m[m.size() - 2];
  const double c = m[m.size() - 1];
  if (a < b && b < c && c >= 10.0 * a) return NormalityVerdict::Divergent;
  if (a >= b && b >= c) return NormalityVerdict::BoundedConsistent;
  return NormalityVerdict::Inconclusive;
}

std::vector<CPoint> shell_points(const Domain& domain, double distance, std::size_t count,
                                 std::uint64_t seed) {
  const std::size_t n = domain.dimension();
  const CPoint& a = domain.center();
  const double center_margin = boundary_distance(domain, a);
  if (!(distance > 0.0) || distance > center_margin) {
    throw ArgumentError("shell distance must lie in (0, boundary distance of the center]");
  }
  std::vector<CPoint> dirs;
  dirs.reserve(count);
  if (count > 0) dirs.push_back(CPoint::basis(n, 0));
  if (count > 1) {
    auto rest = sphere_directions(n, count - 1, seed);
    dirs.insert(dirs.end(), rest.begin(), rest.end());
  }
  std::vector<CPoint> pts;
  pts.reserve(count);
  for (const auto& u : dirs) {
    std::visit(
        [&](const auto& s) {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, Ball>) {
            pts.push_back(a + (s.radius() - distance) * u);
          } else {
            CPoint p(n);
            for (std::size_t k = 0; k < n; ++k) {
              const double m = std::abs(u[k]);
              const Complex phase = m > 0.0 ? u[k] / m : Complex(1.0);
              p[k] = a[k] + (s.radii()[k] - distance) * phase;
            }
            pts.push_back(std::move(p));
          }
        },
        domain.shape());
  }
  return pts;
}

NormalityEstimate normality_scan(const HoloExpr& f, const Domain& domain,
                                 const SamplingPlan& plan) {
  if (f.dimension() != domain.dimension()) {
    throw DomainError("normality_scan: function and domain dimensions differ");
  }
  if (plan.shells.empty()) throw ArgumentError("sampling plan has no shells");
  if (plan.points_per_shell == 0 || plan.directions_per_point == 0) {
    throw ArgumentError("sampling plan needs points and directions");
  }
  for (double s : plan.shells) {
    if (!(s > 0.0) || s > 1.0) throw ArgumentError("shell fractions must lie in (0, 1]");
  }

  const std::size_t n = f.dimension();
  const double center_margin = boundary_distance(domain, domain.center());
  const auto directions = sphere_directions(n, plan.directions_per_point, plan.seed + 1);

  struct Task {
    std::size_t shell;
    CPoint point;
  };
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < plan.shells.size(); ++s) {
    const double dist = plan.shells[s] * center_margin;
    for (auto& p : shell_points(domain, dist, plan.points_per_shell, plan.seed + 100 + s)) {
      tasks.push_back({s, std::move(p)});
    }
  }

  struct Outcome {
    std::vector<NormalitySample> samples;
    std::string error;
  };
  std::vector<Outcome> outcomes(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t t) {
    const Task& task = tasks[t];
    try {
      const Jet jet = evaluate_jet(f, task.point);
      const double denom = 1.0 + std::norm(jet.value);
      for (const auto& v : directions) {
        const double levi = std::norm(bilinear(jet.gradient, v)) / (denom * denom);
        const auto k = kobayashi_domain_bounds(domain, task.point, v);
        outcomes[t].samples.push_back({task.shell, task.point, v, levi, k.lower, k.upper,
                                       levi / (k.upper * k.upper),
                                       levi / (k.lower * k.lower)});
      }
    } catch (const Error& e) {
      outcomes[t].samples.clear();
      outcomes[t].error = e.what();
    }
  });

  NormalityEstimate est;
  est.trend.resize(plan.shells.size());
  for (std::size_t s = 0; s < plan.shells.size(); ++s) {
    est.trend[s] = {plan.shells[s], plan.shells[s] * center_margin, 0.0, 0.0, 0};
  }
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    if (!outcomes[t].error.empty()) {
      ++est.failures;
      est.failure_messages.push_back(outcomes[t].error);
      continue;
    }
    for (auto& s : outcomes[t].samples) {
      auto& tr = est.trend[s.shell];
      tr.max_ratio_lower = std::max(tr.max_ratio_lower, s.ratio_lower);
      tr.max_ratio_upper = std::max(tr.max_ratio_upper, s.ratio_upper);
      ++tr.samples;
      est.c_required_lower_bound = std::max(est.c_required_lower_bound, s.ratio_lower);
      est.samples.push_back(std::move(s));
    }
  }
  std::vector<double> maxima;
  for (const auto& tr : est.trend) maxima.push_back(tr.max_ratio_lower);
  est.verdict = classify_trend(maxima);
  return est;
}

}  // namespace normlab
