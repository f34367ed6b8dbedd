// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "normlab/commands.hpp"
#include "normlab/errors.hpp"
#include "normlab/metric.hpp"
#include "normlab/rescaling.hpp"
#include "normlab/sampling.hpp"
#include "test_support.hpp"

using namespace normlab;
using normlab::testing::random_point;
using normlab::testing::random_unit;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Criterion {
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back("failed: " + what);
    }
  }
  void info(const std::string& what) { notes.push_back(what); }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

const Domain& unit_disc() {
  static const Domain d = Ball(CPoint{0.0}, 1.0);
  return d;
}

SequenceSpec spec_1d(double c_p, double a, std::variant<ExplicitScale, ZalcmanScale> rule, int j_min,
                     int j_max) {
  SequenceSpec s;
  s.anchor = CPoint{1.0};
  s.inward = CPoint{-1.0};
  s.c_p = c_p;
  s.a = a;
  s.scale_rule = rule;
  s.j_min = j_min;
  s.j_max = j_max;
  return s;
}

// 1. Closed-form sharp against the finite-difference oracle.
Criterion sharp_oracle() {
  Criterion c;
  struct Fn {
    const char* src;
    std::size_t n;
    double radius;  // sample points in |z| < radius
  };
  const Fn suite[] = {
      {"z1", 1, 0.9},
      {"z1^2 - 3*z1 + 1", 1, 0.9},
      {"z1^5", 1, 0.9},
      {"exp(z1)", 1, 0.9},
      {"exp(2*i*z1)", 1, 0.9},
      {"sin(1/(1-z1))", 1, 0.9},
      {"1/(z1 - 2)", 1, 0.9},
      {"z1*z2", 2, 0.9},
      {"z1^2 + z2^3", 2, 0.9},
      {"exp(z1)*z2", 2, 0.9},
      {"sin(z1)*cos(z2)", 2, 0.9},
      {"z1*z2*z3 + z1", 3, 0.9},
  };
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  std::size_t evaluated = 0;
  for (const auto& fn : suite) {
    const HoloExpr f = parse(fn.src, fn.n);
    for (int k = 0; k < 50; ++k) {
      const CPoint z = random_point(rng, fn.n, fn.radius);
      const double closed = sharp(f, z);
      const double fd = sharp_fd(f, z, 256, 1e-4, static_cast<std::uint64_t>(k));
      const double excess = std::abs(closed - fd) / (1e-3 * (1.0 + closed));
      worst = std::max(worst, excess);
      ++evaluated;
      if (excess > 1.0) {
        c.expect(false, std::string(fn.src) + " at sample " + std::to_string(k) + ": closed " +
                            fmt("%.9g", closed) + " fd " + fmt("%.9g", fd));
      }
    }
  }
  c.expect(evaluated >= 500, "at least 10 functions x 50 points");
  c.info(std::to_string(evaluated) + " points, worst |closed - fd| / (1e-3 (1 + closed)) = " +
         fmt("%.3g", worst));
  return c;
}

// 2. Kobayashi metric of balls.
Criterion kobayashi() {
  Criterion c;
  std::mt19937_64 rng(2002);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 3;
    const Ball b(random_point(rng, n, 2.0), 0.1 + 3.0 * unit(rng));
    const CPoint v = (0.01 + 5.0 * unit(rng)) * random_unit(rng, n);
    const double k = kobayashi_ball(b, b.center(), v);
    const double expected = v.norm() / b.radius();
    if (std::abs(k - expected) > 4.0 * std::numeric_limits<double>::epsilon() * expected) {
      c.expect(false, "K(center, v) = |v|/delta at trial " + std::to_string(t));
    }
  }

  int upper_violations = 0;
  int mono_violations = 0;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t n = 1 + t % 3;
    const Ball b(random_point(rng, n, 1.0), 0.2 + unit(rng));
    const CPoint z = b.center() + random_point(rng, n, b.radius() * 0.999);
    const CPoint v = random_point(rng, n, 2.0);
    if (kobayashi_ball(b, z, v) > kobayashi_upper(b, z, v) * (1.0 + 1e-14)) ++upper_violations;
    // Inclusion B(p, d) in B(p, D) gives K_big <= K_small.
    const Ball big(b.center(), b.radius() * (1.0 + 2.0 * unit(rng)));
    if (kobayashi_ball(big, z, v) > kobayashi_ball(b, z, v) * (1.0 + 1e-14)) ++mono_violations;
  }
  c.expect(upper_violations == 0, std::to_string(upper_violations) + " upper-bound violations");
  c.expect(mono_violations == 0, std::to_string(mono_violations) + " monotonicity violations");
  c.info("1e4 random (z, v): " + std::to_string(upper_violations) + " upper-bound and " +
         std::to_string(mono_violations) + " monotonicity violations");
  return c;
}

// 3. g#(zeta) = rho f#(center + rho zeta).
Criterion rescaling_identity() {
  Criterion c;
  std::mt19937_64 rng(3003);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  std::size_t trials = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    normlab::testing::ExprGen gen(3003 + n, n);
    for (int t = 0; t < 200; ++t) {
      const HoloExpr f = parse(gen.source(), n);
      const CPoint center = random_point(rng, n, 0.4);
      const double rho = std::pow(10.0, -4.0 * unit(rng));
      std::vector<CPoint> zeta;
      for (int k = 0; k < 8; ++k) zeta.push_back(random_point(rng, n, 0.5));
      try {
        worst = std::max(worst, rescale_sharp_identity_check(f, center, rho, zeta));
        ++trials;
      } catch (const EvalError&) {
      }
    }
  }
  c.expect(worst <= 1e-10, "max relative deviation " + fmt("%.3g", worst));
  c.expect(trials >= 400, "enough evaluable random functions");
  c.info(std::to_string(trials) + " random (f, center, rho), max relative deviation " +
         fmt("%.3g", worst));
  return c;
}

// 4. f(z) = z, p_j = 1 - 1/j, r_j = j^-2.
Criterion thm2_desk() {
  Criterion c;
  const auto res = thm2_verify(parse("z1", 1), unit_disc(), spec_1d(1.0, 1.0, ExplicitScale{1.0, 2.0}, 2, 50),
                               1.0, 16, 1e-3);
  c.expect(res.run.hypothesis_ok, "speed hypothesis holds");
  double worst = 0.0;
  for (std::size_t u = 0; u < res.report.osc.size(); ++u) {
    const double j = res.report.indices[u];
    worst = std::max(worst, std::abs(res.report.osc[u] - 1.0 / (j * j)));
  }
  c.expect(res.report.indices.size() == 49, "all j = 2..50 usable");
  c.expect(worst <= 1e-12, "osc_j = j^-2 within 1e-12 (got " + fmt("%.3g", worst) + ")");
  c.expect(res.report.verdict == LimitVerdict::ConstantLimit,
           "verdict constant-limit (got " + to_string(res.report.verdict) + ")");
  const auto marty = marty_bound_check(res.run, 1.0, 1.0, 16);
  c.expect(marty.max_excess <= 1e-8, "Marty bound with C = 1 (excess " + fmt("%.3g", marty.max_excess) + ")");
  c.expect(marty.points_skipped == 0, "bound defined at every grid point");
  c.info("max |osc_j - j^-2| = " + fmt("%.3g", worst) + ", Marty excess " + fmt("%.3g", marty.max_excess) +
         " over " + std::to_string(marty.points_checked) + " points");
  return c;
}

// 5. f(z) = z, z_n = 1 - n^-3, rho_n = n^-2.
Criterion counterexample() {
  Criterion c;
  const CounterexampleReport rep = remark_counterexample(50, 1.0);
  c.expect(rep.rows.size() == 50, "rows n = 1..50");
  double worst = -1.0;
  for (const auto& r : rep.rows) {
    if (r.ratio_num != r.n || r.ratio_den != 1) {
      c.expect(false, "ratio for n = " + std::to_string(r.n) + " is not exactly n");
    }
    const double nn = r.n;
    const double bound = 1.0 / (nn * nn * nn) + 1.0 / (nn * nn);
    worst = std::max(worst, r.sup_dev - bound);
  }
  c.expect(worst <= 1e-12, "sup |g_n - 1| <= n^-3 + n^-2 (excess " + fmt("%.3g", worst) + ")");
  c.expect(rep.constant_limit_one, "constant limit 1");
  c.expect(rep.ratio_divergent, "divergent ratio");
  c.expect(rep.refutes_converse, "report flags the refutation");
  c.info("exact ratios n/1 for n <= 50, max sup_dev - bound = " + fmt("%.3g", worst));
  return c;
}

// 6. f = sin(1/(1 - z)) along z_j = 1 - 1/(2 pi j).
Criterion witness() {
  Criterion c;
  const HoloExpr f = parse("sin(1/(1-z1))", 1);
  const RescalingRun run = zalcman_rescale(f, unit_disc(), spec_1d(1.0 / kTwoPi, 1.0, ZalcmanScale{}, 2, 30));
  double lo = 1e300, hi = -1e300;
  for (const auto& e : run.entries) {
    if (e.j < 5) continue;
    const double s = e.rho * (kTwoPi * e.j) * (kTwoPi * e.j);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  c.expect(lo >= 0.95 && hi <= 1.05, "rho_j (2 pi j)^2 in [0.95, 1.05] for j >= 5");
  c.info("rho_j (2 pi j)^2 in [" + fmt("%.9f", lo) + ", " + fmt("%.9f", hi) + "]");

  const ConvergenceReport rep = convergence_report(run, 1.0, 16, 1e-3);
  c.expect(rep.verdict == LimitVerdict::NonconstantLimit,
           "verdict nonconstant-limit (got " + to_string(rep.verdict) + ")");

  // Consecutive sup-gap ratios.
  double ratio_sum = 0.0;
  std::size_t ratio_count = 0;
  for (std::size_t k = 1; k < rep.cauchy_gaps.size(); ++k) {
    ratio_sum += rep.cauchy_gaps[k] / rep.cauchy_gaps[k - 1];
    ++ratio_count;
  }
  const double mean_ratio = ratio_sum / static_cast<double>(ratio_count);
  c.expect(mean_ratio >= 0.4 && mean_ratio <= 0.9, "mean gap ratio in [0.4, 0.9] (got " + fmt("%.4f", mean_ratio) + ")");

  // O(1/j) distance to the analytic limit sin(zeta), on the same grid.
  double jd_min = 1e300, jd_max = 0.0;
  for (std::size_t u = 0; u < rep.indices.size(); ++u) {
    const RunEntry& e = run.entries[static_cast<std::size_t>(rep.indices[u] - run.entries.front().j)];
    double d = 0.0;
    for (const auto& z : rep.grid) d = std::max(d, std::abs(evaluate(e.g, z) - std::sin(z[0])));
    if (e.j >= 5) {
      jd_min = std::min(jd_min, e.j * d);
      jd_max = std::max(jd_max, e.j * d);
    }
  }
  c.expect(jd_max <= 2.0 * jd_min, "j * sup |g_j - sin| stays within a factor 2");
  c.info("mean consecutive gap ratio " + fmt("%.4f", mean_ratio) + ", j * sup |g_j - sin| in [" +
         fmt("%.4f", jd_min) + ", " + fmt("%.4f", jd_max) + "]");

  const SharpProfile prof = limit_sharp_check(rep, 16, 1e-2);
  c.expect(prof.status == ProfileStatus::Pass, "limit sharp check passes");
  c.expect(std::abs(prof.sharp_at_zero - 1.0) <= 1e-2, "|g#(0) - 1| <= 1e-2");
  c.expect(prof.max_sharp <= 1.0 + 1e-6, "max g# <= 1 + 1e-6 (got " + fmt("%.12f", prof.max_sharp) + ")");
  c.info("g#(0) = " + fmt("%.12f", prof.sharp_at_zero) + ", grid max g# = " + fmt("%.12f", prof.max_sharp));

  SamplingPlan plan;
  for (int j : {1, 2, 4, 8, 16, 32}) plan.shells.push_back(1.0 / (kTwoPi * j));
  plan.points_per_shell = 16;
  plan.directions_per_point = 4;
  const NormalityEstimate est = normality_scan(f, unit_disc(), plan);
  c.expect(est.verdict == NormalityVerdict::Divergent, "marty-scan verdict divergent (got " + to_string(est.verdict) + ")");
  c.info("marty-scan " + to_string(est.verdict) + ", shell maxima " +
         fmt("%.3g", est.trend[est.trend.size() - 3].max_ratio_lower) + ", " +
         fmt("%.3g", est.trend[est.trend.size() - 2].max_ratio_lower) + ", " +
         fmt("%.3g", est.trend.back().max_ratio_lower));
  return c;
}

// 7. Invariants and reproducibility.
Criterion properties() {
  Criterion c;
  std::mt19937_64 rng(7007);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int homog = 0, negative = 0, unimodular = 0, reciprocal = 0;
  std::size_t trials = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    normlab::testing::ExprGen gen(7007 + n, n);
    for (int t = 0; t < 100; ++t) {
      const HoloExpr f = parse(gen.source(), n);
      const CPoint z = random_point(rng, n, 0.6);
      const CPoint v = random_point(rng, n, 1.0);
      const Complex lambda = std::polar(0.1 + 3.0 * unit(rng), kTwoPi * unit(rng));
      try {
        const double l = levi_log1p_closed(f, z, v);
        const double ll = levi_log1p_closed(f, z, lambda * v);
        if (std::abs(ll - std::norm(lambda) * l) > 1e-12 * (1.0 + ll)) ++homog;

        const RealField field = [&](const CPoint& w) { return std::log1p(std::norm(evaluate(f, w))); };
        if (levi_form_fd(field, z, v, default_fd_step(z)) < -1e-6 * (1.0 + l)) ++negative;

        const double s = sharp(f, z);
        const HoloExpr rotated(n, make::binary(BinaryOp::Mul, make::literal(std::polar(1.0, kTwoPi * unit(rng))),
                                               f.root_ptr()));
        if (std::abs(sharp(rotated, z) - s) > 1e-12 * (1.0 + s)) ++unimodular;

        const Complex fz = evaluate(f, z);
        if (std::abs(fz) > 1e-6) {
          const HoloExpr inv(n, make::binary(BinaryOp::Div, make::literal(1.0), f.root_ptr()));
          if (std::abs(sharp(inv, z) - s) > 1e-9 * (1.0 + s)) ++reciprocal;
        }
        ++trials;
      } catch (const EvalError&) {
      }
    }
  }
  c.expect(homog == 0, std::to_string(homog) + " homogeneity failures");
  c.expect(negative == 0, std::to_string(negative) + " negative Levi values");
  c.expect(unimodular == 0, std::to_string(unimodular) + " unimodular invariance failures");
  c.expect(reciprocal == 0, std::to_string(reciprocal) + " reciprocal invariance failures");
  c.info(std::to_string(trials) + " random (f, z, v): homogeneity, nonnegativity, unimodular and reciprocal invariance");

  // Every report twice under a fixed seed, with different thread counts.
  const nlohmann::json disc = {{"type", "ball"}, {"center", {{0, 0}}}, {"radius", 1}};
  const nlohmann::json seq = {{"anchor", {{1, 0}}}, {"inward", {{-1, 0}}}, {"c_p", 1.0 / kTwoPi}, {"a", 1},
                              {"scale", {{"rule", "zalcman"}}}, {"j_min", 2}, {"j_max", 12}};
  nlohmann::json seq2 = seq;
  seq2["c_p"] = 1;
  seq2["scale"] = {{"rule", "explicit"}, {"c_r", 1}, {"b", 2}};
  const std::pair<const char*, nlohmann::json> runs[] = {
      {"sharp", {{"function", "z1*z2"}, {"dimension", 2}, {"points", {{{1, 0}, {1, 0}}, {{0.2, 0.1}, {0, -0.3}}}}}},
      {"marty-scan", {{"function", "sin(1/(1-z1))"}, {"dimension", 1}, {"domain", disc},
                      {"plan", {{"shells", {1.0, 0.1, 0.01}}, {"points_per_shell", 8}}}}},
      {"rescale", {{"function", "sin(1/(1-z1))"}, {"dimension", 1}, {"domain", disc}, {"sequence", seq}}},
      {"thm2", {{"function", "z1"}, {"dimension", 1}, {"domain", disc}, {"sequence", seq2}}},
      {"counterexample", {{"n_max", 20}}},
  };
  CommandOptions opt;
  opt.seed = 99;
  int mismatches = 0;
  for (const auto& [cmd, cfg] : runs) {
    setenv("NORMLAB_THREADS", "1", 1);
    const auto a = run_command(cmd, cfg, opt);
    setenv("NORMLAB_THREADS", "3", 1);
    const auto b = run_command(cmd, cfg, opt);
    unsetenv("NORMLAB_THREADS");
    c.expect(a.exit_code == kExitOk, std::string(cmd) + " exit " + std::to_string(a.exit_code) + ": " + a.summary);
    if (a.files != b.files || a.files.empty()) ++mismatches;
  }
  c.expect(mismatches == 0, std::to_string(mismatches) + " commands with differing outputs");
  c.info("5 commands byte-identical across reruns and thread counts");
  return c;
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    Criterion (*run)();
  };
  const Entry entries[] = {
      {"1 sharp-function oracle agreement", sharp_oracle},
      {"2 Kobayashi ball checks", kobayashi},
      {"3 rescaling identity", rescaling_identity},
      {"4 explicit-speed constant limit (f = z)", thm2_desk},
      {"5 counterexample f(z) = z, rho_n = n^-2", counterexample},
      {"6 sin(1/(1-z)) non-normality witness", witness},
      {"7 property suite and determinism", properties},
  };
  int failed = 0;
  for (const auto& e : entries) {
    Criterion c;
    try {
      c = e.run();
    } catch (const std::exception& ex) {
      c.expect(false, std::string("exception: ") + ex.what());
    }
    std::printf("%s  criterion %s\n", c.ok ? "PASS" : "FAIL", e.name);
    for (const auto& note : c.notes) std::printf("      %s\n", note.c_str());
    if (!c.ok) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(entries)) - failed, std::size(entries));
  return failed == 0 ? 0 : 1;
}
