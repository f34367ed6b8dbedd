#include "normlab/rescaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "normlab/errors.hpp"
#include "normlab/metric.hpp"
#include "normlab/parallel.hpp"
#include "normlab/sampling.hpp"

namespace normlab {

void SequenceSpec::validate() const {
  if (anchor.dimension() == 0) throw ArgumentError("sequence anchor has dimension 0");
  require_same_dimension(anchor, inward, "sequence");
  if (std::abs(inward.norm() - 1.0) > 1e-9) {
    throw ArgumentError("sequence inward direction must be a unit vector");
  }
  if (!(c_p > 0.0)) throw ArgumentError("sequence c_p must be positive");
  if (!(a > 0.0)) throw ArgumentError("sequence exponent a must be positive");
  if (const auto* e = std::get_if<ExplicitScale>(&scale_rule)) {
    if (!(e->c_r > 0.0)) throw ArgumentError("explicit scale c_r must be positive");
    if (!(e->b > 0.0)) throw ArgumentError("explicit scale exponent b must be positive");
  }
  if (j_min < 1 || j_max < j_min) throw ArgumentError("sequence index range must satisfy 1 <= j_min <= j_max");
}

SequencePoint make_sequence(const SequenceSpec& spec, const Domain& domain, int j) {
  spec.validate();
  if (j < 1) throw ArgumentError("sequence index must be >= 1");
  const double jd = static_cast<double>(j);
  CPoint p = spec.anchor + (spec.c_p * std::pow(jd, -spec.a)) * spec.inward;
  if (!contains(domain, p)) {
    throw DomainError("sequence center for j = " + std::to_string(j) + " exits the domain");
  }
  SequencePoint out{std::move(p), std::nullopt, 0.0};
  out.delta = boundary_distance(domain, out.center);
  if (const auto* e = std::get_if<ExplicitScale>(&spec.scale_rule)) {
    const double r = e->c_r * std::pow(jd, -e->b);
    if (!(r > 0.0)) throw ArgumentError("explicit scale underflowed to zero at j = " + std::to_string(j));
    out.scale = r;
  }
  return out;
}

HoloExpr rescaled_function(const HoloExpr& f, const CPoint& center, double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ArgumentError("rescaling factor must be positive");
  return affine_pullback(f, center, rho);
}

double rescale_sharp_identity_check(const HoloExpr& f, const CPoint& center, double rho,
                                    const std::vector<CPoint>& test_points) {
  const HoloExpr g = rescaled_function(f, center, rho);
  double worst = 0.0;
  for (const auto& zeta : test_points) {
    const double lhs = sharp(g, zeta);
    const double rhs = rho * sharp(f, center + rho * zeta);
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    if (scale == 0.0) continue;
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

namespace {

RescalingRun build_run(const HoloExpr& f, const Domain& domain, const SequenceSpec& spec,
                       bool zalcman) {
  spec.validate();
  if (f.dimension() != domain.dimension() || spec.anchor.dimension() != f.dimension()) {
    throw DomainError("function, domain and sequence dimensions differ");
  }
  RescalingRun run{f, domain, {}, true, {}};
  for (int j = spec.j_min; j <= spec.j_max; ++j) {
    SequencePoint sp = make_sequence(spec, domain, j);
    double rho = 0.0;
    if (zalcman) {
      const double s = sharp(f, sp.center);
      if (!(s > 0.0)) {
        throw EvalError("sharp function vanishes at the center for j = " + std::to_string(j) +
                        "; rho_j is undefined");
      }
      rho = 1.0 / s;
    } else {
      rho = *sp.scale;
    }
    HoloExpr g = rescaled_function(f, sp.center, rho);
    run.entries.push_back({j, std::move(sp.center), sp.delta, rho, rho / sp.delta, std::move(g)});
  }
  return run;
}

}  // namespace

RescalingRun zalcman_rescale(const HoloExpr& f, const Domain& domain, const SequenceSpec& spec) {
  if (!std::holds_alternative<ZalcmanScale>(spec.scale_rule)) {
    throw ArgumentError("zalcman_rescale needs the zalcman scale rule");
  }
  RescalingRun run = build_run(f, domain, spec, true);
  for (std::size_t k = 1; k < run.entries.size(); ++k) {
    if (!(run.entries[k].rho < run.entries[k - 1].rho)) {
      run.hypothesis_ok = false;
      run.hypothesis_note = "rho_j is not decreasing at j = " + std::to_string(run.entries[k].j);
      break;
    }
  }
  return run;
}

RescalingRun explicit_rescale(const HoloExpr& f, const Domain& domain, const SequenceSpec& spec) {
  if (!std::holds_alternative<ExplicitScale>(spec.scale_rule)) {
    throw ArgumentError("explicit_rescale needs an explicit scale rule");
  }
  RescalingRun run = build_run(f, domain, spec, false);
  for (std::size_t k = 1; k < run.entries.size(); ++k) {
    if (run.entries[k].ratio > run.entries[k - 1].ratio) {
      run.hypothesis_ok = false;
      run.hypothesis_note =
          "r_j/delta_j increases at j = " + std::to_string(run.entries[k].j);
      break;
    }
  }
  if (run.hypothesis_ok && !(run.entries.back().ratio < 0.1)) {
    run.hypothesis_ok = false;
    run.hypothesis_note = "final r_j/delta_j is not below 0.1";
  }
  return run;
}

std::string to_string(LimitVerdict v) {
  switch (v) {
    case LimitVerdict::ConstantLimit:
      return "constant-limit";
    case LimitVerdict::NonconstantLimit:
      return "nonconstant-limit";
    case LimitVerdict::NoConvergence:
      return "no-convergence";
  }
  return "no-convergence";
}

ConvergenceReport convergence_report(const RescalingRun& run, double R, std::size_t grid_size,
                                     double tol, std::uint64_t seed) {
  if (!(R > 0.0)) throw ArgumentError("convergence radius must be positive");
  if (!(tol > 0.0)) throw ArgumentError("convergence tolerance must be positive");
  ConvergenceReport rep;
  rep.radius = R;
  rep.tol = tol;
  rep.grid = ball_grid(run.f.dimension(), R, grid_size, seed);

  const std::size_t m = run.entries.size();
  std::vector<std::vector<Complex>> values(m);
  std::vector<std::string> failure(m);
  parallel_for(m, [&](std::size_t e) {
    try {
      values[e].reserve(rep.grid.size());
      for (const auto& zeta : rep.grid) values[e].push_back(evaluate(run.entries[e].g, zeta));
    } catch (const Error& err) {
      values[e].clear();
      failure[e] = err.what();
    }
  });

  std::vector<std::size_t> usable;
  for (std::size_t e = 0; e < m; ++e) {
    if (failure[e].empty()) {
      usable.push_back(e);
    } else {
      rep.excluded.push_back({run.entries[e].j, failure[e]});
    }
  }
  if (usable.empty()) throw EvalError("no index of the run evaluates on the grid");

  auto sup_gap = [&](const std::vector<Complex>& x, const std::vector<Complex>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s = std::max(s, std::abs(x[i] - y[i]));
    return s;
  };

  const auto& last = values[usable.back()];
  for (std::size_t u = 0; u < usable.size(); ++u) {
    const auto& v = values[usable[u]];
    rep.indices.push_back(run.entries[usable[u]].j);
    double osc = 0.0;
    for (const auto& x : v) osc = std::max(osc, std::abs(x - v[0]));  // grid[0] is the origin
    rep.osc.push_back(osc);
    rep.proxy_distance.push_back(sup_gap(v, last));
    if (u > 0) rep.cauchy_gaps.push_back(sup_gap(v, values[usable[u - 1]]));
  }
  rep.limit_proxy = run.entries[usable.back()].g;
  rep.limit_value_at_zero = last[0];

  const double final_osc = rep.osc.back();
  const double final_gap =
      rep.cauchy_gaps.empty() ? std::numeric_limits<double>::infinity() : rep.cauchy_gaps.back();
  if (final_gap <= tol && final_osc <= tol) {
    rep.verdict = LimitVerdict::ConstantLimit;
  } else if (final_gap <= tol && final_osc > 10.0 * tol) {
    rep.verdict = LimitVerdict::NonconstantLimit;
  } else {
    rep.verdict = LimitVerdict::NoConvergence;
  }
  return rep;
}

std::string to_string(ProfileStatus s) {
  switch (s) {
    case ProfileStatus::Pass:
      return "pass";
    case ProfileStatus::Fail:
      return "fail";
    case ProfileStatus::Vacuous:
      return "vacuous";
  }
  return "fail";
}

SharpProfile sharp_profile(const HoloExpr& g, double R, std::size_t grid_size, double tol,
                           std::uint64_t seed) {
  const auto grid = ball_grid(g.dimension(), R, grid_size, seed);
  std::vector<double> values(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { values[i] = sharp(g, grid[i]); });
  const auto it = std::max_element(values.begin(), values.end());
  SharpProfile p{values[0], *it, grid[static_cast<std::size_t>(it - values.begin())],
                 ProfileStatus::Fail};
  if (std::abs(p.sharp_at_zero - 1.0) <= tol && p.max_sharp <= 1.0 + tol) {
    p.status = ProfileStatus::Pass;
  }
  return p;
}

SharpProfile limit_sharp_check(const ConvergenceReport& report, std::size_t grid_size, double tol,
                               std::uint64_t seed) {
  if (!report.limit_proxy) throw ArgumentError("convergence report has no limit proxy");
  SharpProfile p = sharp_profile(*report.limit_proxy, report.radius, grid_size, tol, seed);
  if (report.verdict != LimitVerdict::NonconstantLimit) p.status = ProfileStatus::Vacuous;
  return p;
}

ExplicitRunResult thm2_verify(const HoloExpr& f, const Domain& domain, const SequenceSpec& spec,
                       double R, std::size_t grid_size, double tol, std::uint64_t seed) {
  RescalingRun run = explicit_rescale(f, domain, spec);
  ConvergenceReport report = convergence_report(run, R, grid_size, tol, seed);
  return {std::move(run), std::move(report)};
}

MartyBoundCheck marty_bound_check(const RescalingRun& run, double C, double R,
                                  std::size_t grid_size, std::uint64_t seed) {
  if (!(C > 0.0)) throw ArgumentError("normality constant must be positive");
  const auto grid = ball_grid(run.f.dimension(), R, grid_size, seed);
  MartyBoundCheck out{-std::numeric_limits<double>::infinity(), 0, 0};
  const double root_c = std::sqrt(C);
  for (const auto& e : run.entries) {
    for (const auto& zeta : grid) {
      const double reach = e.rho * zeta.norm();
      if (!(reach < e.delta)) {
        ++out.points_skipped;
        continue;
      }
      const double bound =
          root_c * e.rho * e.delta / ((e.delta - reach) * (e.delta + reach));
      out.max_excess = std::max(out.max_excess, sharp(e.g, zeta) - bound);
      ++out.points_checked;
    }
  }
  return out;
}

CounterexampleReport remark_counterexample(int n_max, double R, std::size_t grid_size, double tol,
                                   std::uint64_t seed) {
  if (n_max < 3) throw ArgumentError("counterexample needs n_max >= 3");
  if (n_max > 1'000'000) throw ArgumentError("counterexample supports n_max <= 10^6");
  if (!(R > 0.0)) throw ArgumentError("radius must be positive");

  const HoloExpr f = parse("z1", 1);
  const Domain disc = Ball(CPoint{0.0}, 1.0);
  SequenceSpec spec;
  spec.anchor = CPoint{1.0};
  spec.inward = CPoint{-1.0};
  spec.c_p = 1.0;
  spec.a = 3.0;
  spec.scale_rule = ExplicitScale{1.0, 2.0};
  spec.j_min = 1;
  spec.j_max = n_max;
  const RescalingRun run = explicit_rescale(f, disc, spec);

  CounterexampleReport rep;
  rep.convergence = convergence_report(run, R, grid_size, tol, seed);
  const auto grid = ball_grid(1, R, grid_size, seed);
  for (const auto& e : run.entries) {
    const long long n = e.j;
    // z_n = (n^3 - 1)/n^3, so 1 - |z_n| = 1/n^3 and rho_n = 1/n^2.
    long long num = n * n * n;
    long long den = n * n;
    const long long g = std::gcd(num, den);
    num /= g;
    den /= g;
    double sup_dev = 0.0;
    for (const auto& zeta : grid) sup_dev = std::max(sup_dev, std::abs(evaluate(e.g, zeta) - 1.0));
    const double nd = static_cast<double>(n);
    rep.rows.push_back({e.j, num, den, static_cast<double>(num) / static_cast<double>(den), sup_dev,
                        1.0 / (nd * nd * nd) + R / (nd * nd)});
  }
  rep.constant_limit_one = rep.convergence.verdict == LimitVerdict::ConstantLimit &&
                           std::abs(rep.convergence.limit_value_at_zero - 1.0) <= tol;
  rep.ratio_divergent = rep.rows.back().ratio >= 1.0;
  for (std::size_t k = 1; k < rep.rows.size(); ++k) {
    // cross-multiplied comparison keeps the test exact
    const auto& p = rep.rows[k - 1];
    const auto& q = rep.rows[k];
    if (!(q.ratio_num * p.ratio_den > p.ratio_num * q.ratio_den)) rep.ratio_divergent = false;
  }
  rep.refutes_converse = rep.constant_limit_one && rep.ratio_divergent;
  return rep;
}

}  // namespace normlab
