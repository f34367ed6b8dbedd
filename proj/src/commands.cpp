#include "normlab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "normlab/errors.hpp"
#include "normlab/metric.hpp"
#include "normlab/rescaling.hpp"
#include "normlab/run_config.hpp"

namespace normlab {

using ojson = nlohmann::ordered_json;

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ojson point_json(const CPoint& p) {
  ojson arr = ojson::array();
  for (const auto& c : p) arr.push_back({c.real(), c.imag()});
  return arr;
}

std::string point_columns_header(std::size_t n) {
  std::string h;
  for (std::size_t k = 1; k <= n; ++k) {
    h += "z" + std::to_string(k) + "_re,z" + std::to_string(k) + "_im,";
  }
  return h;
}

std::string point_columns(const CPoint& p) {
  std::string s;
  for (const auto& c : p) s += num(c.real()) + "," + num(c.imag()) + ",";
  return s;
}

bool want_json(OutputFormat f) { return f != OutputFormat::Csv; }
bool want_csv(OutputFormat f) { return f != OutputFormat::Json; }

void check_command_field(const nlohmann::json& config, const std::string& command) {
  if (config.is_object() && config.contains("command")) {
    const auto& c = config.at("command");
    if (!c.is_string() || c.get<std::string>() != command) {
      throw ConfigError("config.command does not match the subcommand '" + command + "'");
    }
  }
}

// ---------------------------------------------------------------------------

CommandOutput run_sharp(const nlohmann::json& j, const CommandOptions& opt) {
  auto cfg = config::parse_sharp(j);
  if (opt.seed) cfg.seed = *opt.seed;
  const std::size_t n = cfg.function.dimension();

  struct Row {
    double closed, fd, rel;
  };
  std::vector<Row> rows;
  for (std::size_t i = 0; i < cfg.points.size(); ++i) {
    const CPoint& z = cfg.points[i];
    try {
      const double h = cfg.h ? *cfg.h : default_fd_step(z);
      const double closed = sharp(cfg.function, z);
      const double fd = sharp_fd(cfg.function, z, cfg.sphere_samples, h, cfg.seed);
      const double scale = std::max(closed, fd);
      rows.push_back({closed, fd, scale > 0.0 ? std::abs(closed - fd) / scale : 0.0});
    } catch (const EvalError& e) {
      std::ostringstream msg;
      msg << "evaluation failed at point " << i << " " << point_json(z).dump() << ": " << e.what();
      throw EvalError(msg.str());
    }
  }

  CommandOutput out;
  if (want_csv(opt.format)) {
    std::string csv = "index," + point_columns_header(n) + "sharp_closed,sharp_fd,rel_dev\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      csv += std::to_string(i) + "," + point_columns(cfg.points[i]) + num(rows[i].closed) + "," +
             num(rows[i].fd) + "," + num(rows[i].rel) + "\n";
    }
    out.files.emplace_back("sharp.csv", std::move(csv));
  }
  if (want_json(opt.format)) {
    ojson doc;
    doc["command"] = "sharp";
    doc["function"] = cfg.function_text;
    doc["dimension"] = n;
    doc["sphere_samples"] = cfg.sphere_samples;
    doc["seed"] = cfg.seed;
    ojson arr = ojson::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      arr.push_back({{"point", point_json(cfg.points[i])},
                     {"sharp_closed", rows[i].closed},
                     {"sharp_fd", rows[i].fd},
                     {"rel_dev", rows[i].rel}});
    }
    doc["rows"] = std::move(arr);
    out.files.emplace_back("sharp.json", doc.dump(2) + "\n");
  }
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r.rel);
  out.summary = "sharp: " + std::to_string(rows.size()) + " points, max rel_dev " + num(worst);
  return out;
}

CommandOutput run_scan(const nlohmann::json& j, const CommandOptions& opt) {
  auto cfg = config::parse_scan(j);
  if (opt.seed) cfg.plan.seed = *opt.seed;
  const NormalityEstimate est = normality_scan(cfg.function, cfg.domain, cfg.plan);
  const std::size_t n = cfg.function.dimension();

  CommandOutput out;
  if (want_csv(opt.format)) {
    std::string trend =
        "shell,fraction,boundary_distance,max_ratio_lower,max_ratio_upper,samples\n";
    for (std::size_t s = 0; s < est.trend.size(); ++s) {
      const auto& t = est.trend[s];
      trend += std::to_string(s) + "," + num(t.fraction) + "," + num(t.boundary_distance) + "," +
               num(t.max_ratio_lower) + "," + num(t.max_ratio_upper) + "," +
               std::to_string(t.samples) + "\n";
    }
    out.files.emplace_back("marty_trend.csv", std::move(trend));

    std::string samples = "shell," + point_columns_header(n);
    for (std::size_t k = 1; k <= n; ++k) {
      samples += "v" + std::to_string(k) + "_re,v" + std::to_string(k) + "_im,";
    }
    samples += "levi,k_lower,k_upper,ratio_lower,ratio_upper\n";
    for (const auto& s : est.samples) {
      samples += std::to_string(s.shell) + "," + point_columns(s.point) +
                 point_columns(s.direction) + num(s.levi) + "," + num(s.k_lower) + "," +
                 num(s.k_upper) + "," + num(s.ratio_lower) + "," + num(s.ratio_upper) + "\n";
    }
    out.files.emplace_back("marty_samples.csv", std::move(samples));
  }
  if (want_json(opt.format)) {
    ojson doc;
    doc["command"] = "marty-scan";
    doc["function"] = cfg.function_text;
    doc["dimension"] = n;
    doc["seed"] = cfg.plan.seed;
    doc["verdict"] = to_string(est.verdict);
    doc["c_required_lower_bound"] = est.c_required_lower_bound;
    doc["failures"] = est.failures;
    doc["failure_messages"] = est.failure_messages;
    ojson trend = ojson::array();
    for (const auto& t : est.trend) {
      trend.push_back({{"fraction", t.fraction},
                       {"boundary_distance", t.boundary_distance},
                       {"max_ratio_lower", t.max_ratio_lower},
                       {"max_ratio_upper", t.max_ratio_upper},
                       {"samples", t.samples}});
    }
    doc["trend"] = std::move(trend);
    ojson samples = ojson::array();
    for (const auto& s : est.samples) {
      samples.push_back({{"shell", s.shell},
                         {"point", point_json(s.point)},
                         {"direction", point_json(s.direction)},
                         {"levi", s.levi},
                         {"k_lower", s.k_lower},
                         {"k_upper", s.k_upper},
                         {"ratio_lower", s.ratio_lower},
                         {"ratio_upper", s.ratio_upper}});
    }
    doc["samples"] = std::move(samples);
    out.files.emplace_back("marty_scan.json", doc.dump(2) + "\n");
  }
  out.summary = "marty-scan: verdict " + to_string(est.verdict) + ", C >= " +
                num(est.c_required_lower_bound) + ", " + std::to_string(est.failures) +
                " failed points";
  return out;
}

ojson run_json(const RescalingRun& run) {
  ojson entries = ojson::array();
  for (const auto& e : run.entries) {
    entries.push_back({{"j", e.j},
                       {"center", point_json(e.center)},
                       {"delta", e.delta},
                       {"rho", e.rho},
                       {"ratio", e.ratio},
                       {"g", to_string(e.g)}});
  }
  return {{"hypothesis_ok", run.hypothesis_ok},
          {"hypothesis_note", run.hypothesis_note},
          {"entries", std::move(entries)}};
}

ojson report_json(const ConvergenceReport& rep) {
  ojson grid = ojson::array();
  for (const auto& z : rep.grid) grid.push_back(point_json(z));
  ojson excluded = ojson::array();
  for (const auto& x : rep.excluded) excluded.push_back({{"j", x.j}, {"reason", x.reason}});
  return {{"R", rep.radius},
          {"tol", rep.tol},
          {"verdict", to_string(rep.verdict)},
          {"indices", rep.indices},
          {"osc", rep.osc},
          {"cauchy_gaps", rep.cauchy_gaps},
          {"proxy_distance", rep.proxy_distance},
          {"limit_proxy", rep.limit_proxy ? to_string(*rep.limit_proxy) : ""},
          {"limit_value_at_zero", {rep.limit_value_at_zero.real(), rep.limit_value_at_zero.imag()}},
          {"excluded", std::move(excluded)},
          {"grid_points", rep.grid.size()},
          {"grid", std::move(grid)}};
}

std::string run_csv(const RescalingRun& run, const ConvergenceReport& rep) {
  std::string csv = "j,abs_z,delta,rho,ratio,osc,cauchy_gap\n";
  for (const auto& e : run.entries) {
    csv += std::to_string(e.j) + "," + num(e.center.norm()) + "," + num(e.delta) + "," +
           num(e.rho) + "," + num(e.ratio) + ",";
    const auto it = std::find(rep.indices.begin(), rep.indices.end(), e.j);
    if (it != rep.indices.end()) {
      const auto u = static_cast<std::size_t>(it - rep.indices.begin());
      csv += num(rep.osc[u]) + ",";
      if (u > 0) csv += num(rep.cauchy_gaps[u - 1]);
    } else {
      csv += ",";  // excluded index
    }
    csv += "\n";
  }
  return csv;
}

CommandOutput run_rescale(const nlohmann::json& j, const CommandOptions& opt) {
  auto cfg = config::parse_rescale(j, false);
  if (opt.seed) cfg.seed = *opt.seed;
  const RescalingRun run = zalcman_rescale(cfg.function, cfg.domain, cfg.sequence);
  const ConvergenceReport rep = convergence_report(run, cfg.R, cfg.grid_size, cfg.tol, cfg.seed);
  const SharpProfile prof = limit_sharp_check(rep, cfg.grid_size, cfg.tol, cfg.seed);

  CommandOutput out;
  if (want_csv(opt.format)) out.files.emplace_back("rescale.csv", run_csv(run, rep));
  if (want_json(opt.format)) {
    ojson doc;
    doc["command"] = "rescale";
    doc["function"] = cfg.function_text;
    doc["seed"] = cfg.seed;
    doc["run"] = run_json(run);
    doc["report"] = report_json(rep);
    doc["sharp_profile"] = {{"sharp_at_zero", prof.sharp_at_zero},
                            {"max_sharp", prof.max_sharp},
                            {"argmax", point_json(prof.argmax)},
                            {"status", to_string(prof.status)}};
    doc["evidence"] = "numerical evidence on a finite index range and a fixed radius";
    out.files.emplace_back("rescale.json", doc.dump(2) + "\n");
  }
  out.summary = "rescale: verdict " + to_string(rep.verdict) + ", limit sharp check " +
                to_string(prof.status);
  if (!run.hypothesis_ok) {
    out.exit_code = kExitHypothesisFlagged;
    out.summary += ", hypothesis flagged: " + run.hypothesis_note;
  }
  return out;
}

CommandOutput run_thm2(const nlohmann::json& j, const CommandOptions& opt) {
  auto cfg = config::parse_rescale(j, true);
  if (opt.seed) cfg.seed = *opt.seed;
  const ExplicitRunResult res =
      thm2_verify(cfg.function, cfg.domain, cfg.sequence, cfg.R, cfg.grid_size, cfg.tol, cfg.seed);

  CommandOutput out;
  if (want_csv(opt.format)) out.files.emplace_back("thm2.csv", run_csv(res.run, res.report));
  if (want_json(opt.format)) {
    ojson doc;
    doc["command"] = "thm2";
    doc["function"] = cfg.function_text;
    doc["seed"] = cfg.seed;
    doc["run"] = run_json(res.run);
    doc["report"] = report_json(res.report);
    // A non-constant limit with the speed hypothesis intact witnesses non-normality.
    doc["non_normality_witness"] =
        res.run.hypothesis_ok && res.report.verdict == LimitVerdict::NonconstantLimit;
    out.files.emplace_back("thm2.json", doc.dump(2) + "\n");
  }
  out.summary = "thm2: verdict " + to_string(res.report.verdict);
  if (res.run.hypothesis_ok && res.report.verdict == LimitVerdict::NonconstantLimit) {
    out.summary += " (non-normality witness)";
  }
  if (!res.run.hypothesis_ok) {
    out.exit_code = kExitHypothesisFlagged;
    out.summary += ", hypothesis flagged: " + res.run.hypothesis_note;
  }
  return out;
}

CommandOutput run_counterexample(const nlohmann::json& j, const CommandOptions& opt) {
  auto cfg = config::parse_counterexample(j);
  if (opt.seed) cfg.seed = *opt.seed;
  const CounterexampleReport rep =
      remark_counterexample(cfg.n_max, cfg.R, cfg.grid_size, cfg.tol, cfg.seed);

  CommandOutput out;
  if (want_csv(opt.format)) {
    std::string csv = "n,ratio_num,ratio_den,ratio,sup_dev,bound\n";
    for (const auto& r : rep.rows) {
      csv += std::to_string(r.n) + "," + std::to_string(r.ratio_num) + "," +
             std::to_string(r.ratio_den) + "," + num(r.ratio) + "," + num(r.sup_dev) + "," +
             num(r.bound) + "\n";
    }
    out.files.emplace_back("counterexample.csv", std::move(csv));
  }
  if (want_json(opt.format)) {
    ojson rows = ojson::array();
    for (const auto& r : rep.rows) {
      rows.push_back({{"n", r.n},
                      {"ratio", {r.ratio_num, r.ratio_den}},
                      {"sup_dev", r.sup_dev},
                      {"bound", r.bound}});
    }
    ojson doc;
    doc["command"] = "counterexample";
    doc["n_max"] = cfg.n_max;
    doc["R"] = cfg.R;
    doc["seed"] = cfg.seed;
    doc["rows"] = std::move(rows);
    doc["report"] = report_json(rep.convergence);
    doc["constant_limit_one"] = rep.constant_limit_one;
    doc["ratio_divergent"] = rep.ratio_divergent;
    doc["refutes_converse"] = rep.refutes_converse;
    out.files.emplace_back("counterexample.json", doc.dump(2) + "\n");
  }
  out.summary = std::string("counterexample: constant limit 1 ") +
                (rep.constant_limit_one ? "yes" : "no") + ", ratio divergent " +
                (rep.ratio_divergent ? "yes" : "no") + ", refutes converse " +
                (rep.refutes_converse ? "yes" : "no");
  return out;
}

CommandOutput dispatch(const std::string& command, const nlohmann::json& config,
                       const CommandOptions& options) {
  if (command == "sharp") return run_sharp(config, options);
  if (command == "marty-scan") return run_scan(config, options);
  if (command == "rescale") return run_rescale(config, options);
  if (command == "thm2") return run_thm2(config, options);
  if (command == "counterexample") return run_counterexample(config, options);
  throw ConfigError("unknown command '" + command + "'");
}

void validate_only(const std::string& command, const nlohmann::json& config) {
  if (command == "sharp") {
    config::parse_sharp(config);
  } else if (command == "marty-scan") {
    config::parse_scan(config);
  } else if (command == "rescale") {
    config::parse_rescale(config, false);
  } else if (command == "thm2") {
    config::parse_rescale(config, true);
  } else if (command == "counterexample") {
    config::parse_counterexample(config);
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"sharp", "marty-scan", "rescale",
                                                 "thm2", "counterexample", "check-config"};
  return names;
}

CommandOutput run_command(const std::string& command, const nlohmann::json& config,
                          const CommandOptions& options) {
  // Validation happens first, so a config error never follows partial work.
  try {
    if (!config.is_object()) throw ConfigError("config: expected a JSON object");
    if (command == "check-config") {
      if (!config.contains("command") || !config.at("command").is_string()) {
        throw ConfigError("config.command: check-config needs the target command name");
      }
      const auto target = config.at("command").get<std::string>();
      validate_only(target, config);
      return {kExitOk, {}, "config ok for '" + target + "'"};
    }
    check_command_field(config, command);
    validate_only(command, config);
  } catch (const ConfigError& e) {
    return {kExitConfigError, {}, std::string("config error: ") + e.what()};
  } catch (const nlohmann::json::exception& e) {
    return {kExitConfigError, {}, std::string("config error: ") + e.what()};
  }

  try {
    return dispatch(command, config, options);
  } catch (const ConfigError& e) {
    return {kExitConfigError, {}, std::string("config error: ") + e.what()};
  } catch (const Error& e) {
    return {kExitEvalError, {}, std::string("evaluation error: ") + e.what()};
  }
}

}  // namespace normlab
