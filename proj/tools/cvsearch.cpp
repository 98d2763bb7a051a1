#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cvsearch/document.hpp"
#include "cvsearch/error.hpp"
#include "validate.hpp"

namespace {

using namespace cvsearch;
using nlohmann::json;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct RunFlags {
  std::string config_path;
  std::optional<int> grid_size;
  std::optional<int> qunats;
  std::optional<double> theta;
  std::optional<std::string> target_center;
  std::optional<std::string> target_width;
  std::optional<std::string> initial;
  std::optional<std::string> initial_center;
  std::optional<std::string> epsilon;
  std::optional<std::string> diffusion;
  std::optional<std::string> diffusion_width;
  std::optional<int> iterations;
  std::optional<std::uint64_t> seed;
  std::string format = "json";
  std::string output;
};

void add_run_flags(CLI::App& cmd, RunFlags& f) {
  cmd.add_option("--config", f.config_path, "JSON configuration file; flags override its fields");
  cmd.add_option("--grid-size", f.grid_size, "grid points per axis (even, >= 8)");
  cmd.add_option("--qunats", f.qunats, "number of axes (1 or 2)");
  cmd.add_option("--theta", f.theta, "transform angle in radians");
  cmd.add_option("--target-center", f.target_center, "target center, comma separated per axis");
  cmd.add_option("--target-width", f.target_width, "target width, e.g. 0.25 or 2dx");
  cmd.add_option("--initial", f.initial, "initial state")->check(CLI::IsMember({"delta", "gaussian"}));
  cmd.add_option("--initial-center", f.initial_center, "initial center, comma separated per axis");
  cmd.add_option("--epsilon", f.epsilon, "gaussian width");
  cmd.add_option("--diffusion", f.diffusion, "diffusion operator")
      ->check(CLI::IsMember({"auto", "interval", "state"}));
  cmd.add_option("--diffusion-width", f.diffusion_width, "interval diffusion window width");
  cmd.add_option("--iterations", f.iterations, "number of search iterations");
  cmd.add_option("--seed", f.seed, "seed recorded in the output");
  cmd.add_option("--format", f.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  cmd.add_option("--output", f.output, "output path (default: standard output)");
}

std::vector<Quantity> parse_center(const std::string& text) {
  std::vector<Quantity> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(Quantity::parse(item));
  if (out.empty()) throw Error(ErrorKind::InvalidParameter, "empty center list");
  return out;
}

SearchConfig build_config(const RunFlags& f) {
  SearchConfig c;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw Error(ErrorKind::InvalidParameter, "cannot read config file " + f.config_path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::InvalidParameter, "config file is not valid JSON: " + std::string(e.what()));
    }
    c = config_from_json(j);
  }
  if (f.grid_size) c.grid_size = *f.grid_size;
  if (f.qunats) c.qunats = *f.qunats;
  if (f.theta) c.theta = *f.theta;
  if (f.target_center) c.target.center = parse_center(*f.target_center);
  if (f.target_width) c.target.width = Quantity::parse(*f.target_width);
  if (f.initial) c.initial.kind = *f.initial == "gaussian" ? InitialKind::Gaussian : InitialKind::Delta;
  if (f.initial_center) c.initial.center = parse_center(*f.initial_center);
  if (f.epsilon) c.initial.epsilon = Quantity::parse(*f.epsilon);
  if (f.diffusion) {
    c.diffusion.mode = *f.diffusion == "interval" ? DiffusionMode::Interval
                       : *f.diffusion == "state"  ? DiffusionMode::State
                                                  : DiffusionMode::Auto;
  }
  if (f.diffusion_width) c.diffusion.width = Quantity::parse(*f.diffusion_width);
  if (f.iterations) c.max_iterations = *f.iterations;
  if (f.seed) c.seed = *f.seed;
  return c;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

int run_command(const RunFlags& f) {
  const auto config = build_config(f);
  const auto doc = make_run_document(config, run_search(config));
  std::ostringstream text;
  if (f.format == "csv") {
    write_trace_csv(text, doc.trace);
  } else {
    text << to_json(doc).dump(2) << '\n';
  }
  emit(f.output, text.str());
  // The summary goes to stdout unless stdout already carries the document.
  auto& summary = f.output.empty() ? std::cerr : std::cout;
  summary << "k_best " << doc.k_best << '\n' << "p_best " << format_real(doc.p_best) << '\n';
  return 0;
}

int sweep_command(const RunFlags& f, const std::string& vary, const std::vector<std::string>& values) {
  SweepPlan plan;
  plan.vary = parse_sweep_axis(vary);
  plan.base = build_config(f);
  for (const auto& v : values) plan.values.push_back(Quantity::parse(v));
  const auto rows = run_sweep(plan);
  std::ostringstream text;
  if (f.format == "json") {
    text << to_json(rows, plan).dump(2) << '\n';
  } else {
    write_sweep_csv(text, rows);
  }
  emit(f.output, text.str());
  for (const auto& r : rows) {
    if (!r.error) return 0;
  }
  std::cerr << "error: every sweep row failed\n";
  return kExitFailure;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter:
    case ErrorKind::EmptyWindow:
    case ErrorKind::ConstraintViolation:
      return kExitUsage;
    case ErrorKind::DegenerateInstance:
    case ErrorKind::NumericalRank:
      return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-variable Grover search on a self-conjugate grid"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  int v_grid = 0;
  int v_qunats = 1;
  std::optional<double> v_theta;
  std::string v_output;
  auto* validate = app.add_subcommand("validate", "check operator invariants on one grid");
  validate->add_option("--grid-size", v_grid, "grid points per axis")->required();
  validate->add_option("--qunats", v_qunats, "number of axes (1 or 2)");
  validate->add_option("--theta", v_theta, "also validate the transform at this angle");
  validate->add_option("--output", v_output, "report path (default: standard output)");

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "iterate the search operator and record the trace");
  add_run_flags(*run, run_flags);

  RunFlags sweep_flags;
  sweep_flags.format = "csv";
  std::string vary;
  std::vector<std::string> values;
  auto* sweep = app.add_subcommand("sweep", "run one search per parameter value");
  add_run_flags(*sweep, sweep_flags);
  sweep->add_option("--vary", vary, "grid_size, theta or epsilon")->required();
  sweep->add_option("--values", values, "comma separated values")->required()->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*validate) {
      const auto report = cvsearch::tools::run_validation(v_grid, v_qunats, v_theta);
      emit(v_output, report.dump(2) + "\n");
      return report["passed"].get<bool>() ? 0 : kExitFailure;
    }
    if (*run) return run_command(run_flags);
    return sweep_command(sweep_flags, vary, values);
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
