#include "normlab/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>

#include "normlab/errors.hpp"

namespace normlab::config {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional) {
  require_object(j, path);
  for (const char* k : required) {
    if (!j.contains(k)) throw ConfigError(path + ": missing required key '" + k + "'");
  }
  for (const auto& [key, value] : j.items()) {
    const auto known = [&](std::initializer_list<const char*> keys) {
      return std::any_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; });
    };
    if (!known(required) && !known(optional)) {
      throw ConfigError(path + ": unknown key '" + key + "'");
    }
  }
}

double get_number(const json& j, const char* key, const std::string& path) {
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(path + "." + key + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path + "." + key + ": must be finite");
  return x;
}

double get_positive(const json& j, const char* key, const std::string& path) {
  const double x = get_number(j, key, path);
  if (!(x > 0.0)) throw ConfigError(path + "." + key + ": must be positive");
  return x;
}

std::uint64_t get_unsigned(const json& j, const char* key, const std::string& path) {
  const json& v = j.at(key);
  const bool ok = v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
  if (!ok) throw ConfigError(path + "." + key + ": expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::size_t get_count(const json& j, const char* key, const std::string& path) {
  const auto v = get_unsigned(j, key, path);
  if (v == 0) throw ConfigError(path + "." + key + ": must be at least 1");
  return static_cast<std::size_t>(v);
}

int get_int(const json& j, const char* key, const std::string& path) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(path + "." + key + ": expected an integer");
  const auto x = v.get<long long>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    throw ConfigError(path + "." + key + ": out of range");
  }
  return static_cast<int>(x);
}

std::string get_string(const json& j, const char* key, const std::string& path) {
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError(path + "." + key + ": expected a string");
  return v.get<std::string>();
}

std::size_t get_dimension(const json& j) {
  const auto d = get_count(j, "dimension", "config");
  if (d > 9) throw ConfigError("config.dimension: at most 9 variables (z1..z9) are supported");
  return d;
}

HoloExpr get_function(const json& j, std::size_t dimension, std::string& text) {
  text = get_string(j, "function", "config");
  try {
    return parse(text, dimension);
  } catch (const Error& e) {
    throw ConfigError(std::string("config.function: ") + e.what());
  }
}

// Wraps construction-time validation errors as config errors.
template <class F>
auto validated(const std::string& path, F&& build) {
  try {
    return build();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace

CPoint parse_point(const json& j, std::size_t dimension, const std::string& path) {
  if (!j.is_array() || j.size() != dimension) {
    throw ConfigError(path + ": expected an array of " + std::to_string(dimension) +
                      " [re, im] pairs");
  }
  CPoint p(dimension);
  for (std::size_t k = 0; k < dimension; ++k) {
    const json& c = j[k];
    if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
      throw ConfigError(path + "[" + std::to_string(k) + "]: expected [re, im]");
    }
    p[k] = Complex(c[0].get<double>(), c[1].get<double>());
    if (!std::isfinite(p[k].real()) || !std::isfinite(p[k].imag())) {
      throw ConfigError(path + "[" + std::to_string(k) + "]: must be finite");
    }
  }
  return p;
}

Domain parse_domain(const json& j, std::size_t dimension) {
  require_object(j, "domain");
  if (!j.contains("type")) throw ConfigError("domain: missing required key 'type'");
  const std::string type = get_string(j, "type", "domain");
  if (type == "ball") {
    check_keys(j, "domain", {"type", "center", "radius"}, {});
    CPoint c = parse_point(j.at("center"), dimension, "domain.center");
    const double r = get_positive(j, "radius", "domain");
    return validated("domain", [&] { return Domain(Ball(std::move(c), r)); });
  }
  if (type == "polydisc") {
    check_keys(j, "domain", {"type", "center", "radii"}, {});
    CPoint c = parse_point(j.at("center"), dimension, "domain.center");
    const json& rj = j.at("radii");
    if (!rj.is_array() || rj.size() != dimension) {
      throw ConfigError("domain.radii: expected " + std::to_string(dimension) + " radii");
    }
    std::vector<double> radii;
    for (const auto& r : rj) {
      if (!r.is_number()) throw ConfigError("domain.radii: expected numbers");
      radii.push_back(r.get<double>());
    }
    return validated("domain", [&] { return Domain(Polydisc(std::move(c), std::move(radii))); });
  }
  throw ConfigError("domain.type: expected \"ball\" or \"polydisc\", got \"" + type + "\"");
}

SamplingPlan parse_plan(const json& j) {
  check_keys(j, "plan", {"shells"}, {"points_per_shell", "directions_per_point", "seed"});
  SamplingPlan plan;
  const json& shells = j.at("shells");
  if (!shells.is_array() || shells.empty()) {
    throw ConfigError("plan.shells: expected a non-empty array of fractions");
  }
  for (const auto& s : shells) {
    if (!s.is_number()) throw ConfigError("plan.shells: expected numbers");
    const double f = s.get<double>();
    if (!(f > 0.0) || f > 1.0) throw ConfigError("plan.shells: fractions must lie in (0, 1]");
    plan.shells.push_back(f);
  }
  if (j.contains("points_per_shell")) plan.points_per_shell = get_count(j, "points_per_shell", "plan");
  if (j.contains("directions_per_point")) {
    plan.directions_per_point = get_count(j, "directions_per_point", "plan");
  }
  if (j.contains("seed")) plan.seed = get_unsigned(j, "seed", "plan");
  return plan;
}

SequenceSpec parse_sequence(const json& j, std::size_t dimension) {
  check_keys(j, "sequence", {"anchor", "inward", "c_p", "a", "scale", "j_min", "j_max"}, {});
  SequenceSpec spec;
  spec.anchor = parse_point(j.at("anchor"), dimension, "sequence.anchor");
  spec.inward = parse_point(j.at("inward"), dimension, "sequence.inward");
  spec.c_p = get_number(j, "c_p", "sequence");
  spec.a = get_number(j, "a", "sequence");
  spec.j_min = get_int(j, "j_min", "sequence");
  spec.j_max = get_int(j, "j_max", "sequence");
  const json& scale = j.at("scale");
  require_object(scale, "sequence.scale");
  if (!scale.contains("rule")) throw ConfigError("sequence.scale: missing required key 'rule'");
  const std::string rule = get_string(scale, "rule", "sequence.scale");
  if (rule == "zalcman") {
    check_keys(scale, "sequence.scale", {"rule"}, {});
    spec.scale_rule = ZalcmanScale{};
  } else if (rule == "explicit") {
    check_keys(scale, "sequence.scale", {"rule", "c_r", "b"}, {});
    spec.scale_rule =
        ExplicitScale{get_number(scale, "c_r", "sequence.scale"), get_number(scale, "b", "sequence.scale")};
  } else {
    throw ConfigError("sequence.scale.rule: expected \"zalcman\" or \"explicit\"");
  }
  validated("sequence", [&] {
    spec.validate();
    return 0;
  });
  return spec;
}

SharpConfig parse_sharp(const json& j) {
  check_keys(j, "config", {"function", "dimension", "points"},
             {"command", "sphere_samples", "h", "seed", "out"});
  const std::size_t n = get_dimension(j);
  std::string text;
  HoloExpr f = get_function(j, n, text);
  SharpConfig c{f, text, {}, 256, std::nullopt, 0};
  const json& pts = j.at("points");
  if (!pts.is_array() || pts.empty()) throw ConfigError("config.points: expected a non-empty array");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    c.points.push_back(parse_point(pts[i], n, "config.points[" + std::to_string(i) + "]"));
  }
  if (j.contains("sphere_samples")) c.sphere_samples = get_count(j, "sphere_samples", "config");
  if (j.contains("h")) c.h = get_positive(j, "h", "config");
  if (j.contains("seed")) c.seed = get_unsigned(j, "seed", "config");
  return c;
}

ScanConfig parse_scan(const json& j) {
  check_keys(j, "config", {"function", "dimension", "domain", "plan"}, {"command", "out"});
  const std::size_t n = get_dimension(j);
  std::string text;
  HoloExpr f = get_function(j, n, text);
  return {f, text, parse_domain(j.at("domain"), n), parse_plan(j.at("plan"))};
}

RescaleConfig parse_rescale(const json& j, bool require_explicit) {
  check_keys(j, "config", {"function", "dimension", "domain", "sequence"},
             {"command", "R", "grid_size", "tol", "seed", "out"});
  const std::size_t n = get_dimension(j);
  std::string text;
  HoloExpr f = get_function(j, n, text);
  RescaleConfig c{f, text, parse_domain(j.at("domain"), n), parse_sequence(j.at("sequence"), n)};
  const bool is_explicit = std::holds_alternative<ExplicitScale>(c.sequence.scale_rule);
  if (require_explicit && !is_explicit) {
    throw ConfigError("sequence.scale.rule: thm2 needs the \"explicit\" rule");
  }
  if (!require_explicit && is_explicit) {
    throw ConfigError("sequence.scale.rule: rescale needs the \"zalcman\" rule");
  }
  if (j.contains("R")) c.R = get_positive(j, "R", "config");
  if (j.contains("grid_size")) c.grid_size = get_count(j, "grid_size", "config");
  if (j.contains("tol")) c.tol = get_positive(j, "tol", "config");
  if (j.contains("seed")) c.seed = get_unsigned(j, "seed", "config");
  return c;
}

CounterexampleConfig parse_counterexample(const json& j) {
  check_keys(j, "config", {}, {"command", "n_max", "R", "grid_size", "tol", "seed", "out"});
  CounterexampleConfig c;
  if (j.contains("n_max")) c.n_max = get_int(j, "n_max", "config");
  if (c.n_max < 3 || c.n_max > 1'000'000) throw ConfigError("config.n_max: must lie in [3, 10^6]");
  if (j.contains("R")) c.R = get_positive(j, "R", "config");
  if (j.contains("grid_size")) c.grid_size = get_count(j, "grid_size", "config");
  if (j.contains("tol")) c.tol = get_positive(j, "tol", "config");
  if (j.contains("seed")) c.seed = get_unsigned(j, "seed", "config");
  return c;
}

}  // namespace normlab::config
