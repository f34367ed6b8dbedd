#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "normlab/domain.hpp"
#include "normlab/holo_expr.hpp"
#include "normlab/metric.hpp"
#include "normlab/rescaling.hpp"

namespace normlab {

/// JSON run configurations. Every parser rejects unknown keys and throws
/// ConfigError with the offending key path.
namespace config {

struct SharpConfig {
  HoloExpr function;
  std::string function_text;
  std::vector<CPoint> points;
  std::size_t sphere_samples = 256;
  std::optional<double> h;  // default_fd_step(z) when absent
  std::uint64_t seed = 0;
};

struct ScanConfig {
  HoloExpr function;
  std::string function_text;
  Domain domain;
  SamplingPlan plan;
};

struct RescaleConfig {
  HoloExpr function;
  std::string function_text;
  Domain domain;
  SequenceSpec sequence;
  double R = 1.0;
  std::size_t grid_size = 16;
  double tol = 1e-3;
  std::uint64_t seed = 0;
};

struct CounterexampleConfig {
  int n_max = 50;
  double R = 1.0;
  std::size_t grid_size = 16;
  double tol = 1e-3;
  std::uint64_t seed = 0;
};

CPoint parse_point(const nlohmann::json& j, std::size_t dimension, const std::string& path);
Domain parse_domain(const nlohmann::json& j, std::size_t dimension);
SamplingPlan parse_plan(const nlohmann::json& j);
SequenceSpec parse_sequence(const nlohmann::json& j, std::size_t dimension);

SharpConfig parse_sharp(const nlohmann::json& j);
ScanConfig parse_scan(const nlohmann::json& j);
/// Used by both `rescale` (zalcman rule required) and `thm2` (explicit rule required).
RescaleConfig parse_rescale(const nlohmann::json& j, bool require_explicit);
CounterexampleConfig parse_counterexample(const nlohmann::json& j);

}  // namespace config
}  // namespace normlab
