// normlab command-line front end.
//
//   normlab <command> --config run.json [--out DIR] [--seed N] [--format json|csv|both]
//
// Exit codes: 0 ok, 2 config error, 3 evaluation error, 4 hypothesis-flagged run.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "normlab/commands.hpp"

namespace fs = std::filesystem;

namespace {

struct Args {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::string format = "both";
  std::optional<int> n_max;
  std::optional<double> radius;
};

const std::map<std::string, std::string> kDescriptions = {
    {"sharp", "closed-form sharp function against the finite-difference oracle"},
    {"marty-scan", "Levi form against Kobayashi bounds on shells toward the boundary"},
    {"rescale", "Zalcman rescaling run with convergence report and limit sharp check"},
    {"thm2", "explicit-speed rescaling run with convergence report"},
    {"counterexample", "f(z) = z with z_n = 1 - n^-3, rho_n = n^-2"},
    {"check-config", "validate a config for the command named in its \"command\" field"},
};

int load_config(const std::string& path, nlohmann::json& out) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "config error: cannot open " << path << "\n";
    return normlab::kExitConfigError;
  }
  try {
    out = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "config error: " << path << ": " << e.what() << "\n";
    return normlab::kExitConfigError;
  }
  return normlab::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"normlab: normality laboratory for holomorphic functions of several variables"};
  app.require_subcommand(1);

  Args args;
  std::map<std::string, CLI::App*> subs;
  for (const auto& name : normlab::command_names()) {
    auto* sub = app.add_subcommand(name, kDescriptions.at(name));
    const bool config_optional = name == "counterexample";
    auto* cfg = sub->add_option("--config", args.config_path, "run configuration (JSON)");
    if (!config_optional) cfg->required();
    if (name != "check-config") {
      sub->add_option("--out", args.out_dir, "output directory")->capture_default_str();
      sub->add_option("--seed", args.seed, "override the configured seed");
      sub->add_option("--format", args.format, "output format")
          ->check(CLI::IsMember({"json", "csv", "both"}))
          ->capture_default_str();
    }
    if (name == "counterexample") {
      sub->add_option("--n-max", args.n_max, "largest index n");
      sub->add_option("--radius", args.radius, "radius R of the zeta ball");
    }
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : normlab::kExitConfigError;
  }

  std::string command;
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) command = name;
  }

  nlohmann::json config = nlohmann::json::object();
  if (!args.config_path.empty()) {
    if (const int rc = load_config(args.config_path, config); rc != normlab::kExitOk) return rc;
  }
  if (args.n_max) config["n_max"] = *args.n_max;
  if (args.radius) config["R"] = *args.radius;

  normlab::CommandOptions options;
  options.seed = args.seed;
  options.format = args.format == "json"  ? normlab::OutputFormat::Json
                   : args.format == "csv" ? normlab::OutputFormat::Csv
                                          : normlab::OutputFormat::Both;

  const normlab::CommandOutput result = normlab::run_command(command, config, options);
  if (result.exit_code == normlab::kExitConfigError || result.exit_code == normlab::kExitEvalError) {
    std::cerr << result.summary << "\n";
    return result.exit_code;
  }

  std::error_code ec;
  fs::create_directories(args.out_dir, ec);
  if (ec) {
    std::cerr << "cannot create output directory " << args.out_dir << ": " << ec.message() << "\n";
    return normlab::kExitConfigError;
  }
  for (const auto& [name, contents] : result.files) {
    const fs::path path = fs::path(args.out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    out << contents;
    if (!out) {
      std::cerr << "failed to write " << path << "\n";
      return normlab::kExitConfigError;
    }
    std::cout << "wrote " << path.string() << "\n";
  }
  std::cout << result.summary << "\n";
  return result.exit_code;
}
