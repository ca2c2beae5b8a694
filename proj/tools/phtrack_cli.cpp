// phtrack: simulate, certify and verify sliding-manifold tracking controllers.
//
// Exit codes: 0 success, 1 property/condition/integration failure,
// 2 usage or configuration error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "phtrack/config.hpp"
#include "phtrack/contraction.hpp"
#include "phtrack/csv.hpp"
#include "phtrack/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace phtrack;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct Overrides {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> grid;
};

config::RunConfig load_config(const Overrides& o) {
  config::RunConfig c = o.config.empty() ? config::scara_preset() : config::load(o.config);
  if (o.out) c.output_dir = *o.out;
  if (o.seed) c.seed = *o.seed;
  if (o.grid) c.grid = *o.grid;
  c.validate();
  return c;
}

json vec_json(const Vector& v) { return std::vector<double>(v.begin(), v.end()); }

void write_json(const fs::path& path, const json& j) {
  std::ofstream f(path);
  f << j.dump(2) << '\n';
}

json summarize(const sim::SimLog& log, sim::Dynamics mode) {
  json s{{"mode", sim::to_string(mode)},
         {"ok", log.ok},
         {"rows", log.samples.size()}};
  if (!log.ok) s["failure"] = log.failure;
  if (!log.samples.empty()) {
    const auto& last = log.samples.back();
    s["t_final"] = last.t;
    s["q_tilde_final_norm"] = last.q_tilde.norm();
    s["sigma_final_norm"] = last.sigma.norm();
    s["distance_final"] = last.distance;
  }
  return s;
}

int cmd_simulate(const config::RunConfig& c) {
  const models::Model model = config::make_model(c.model);
  const Eigen::Index n = model.system->dimension();
  const bool nested = c.modes.size() > 1;

  std::vector<sim::Scenario> scenarios;
  for (auto mode : c.modes) scenarios.push_back(config::make_scenario(c, model, mode));

  std::vector<std::future<sim::SimLog>> runs;
  for (const auto& sc : scenarios) {
    runs.push_back(std::async(std::launch::async, [&sc] { return sim::simulate(sc); }));
  }

  int status = kOk;
  json summary = json::array();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const sim::SimLog log = runs[i].get();
    const sim::Dynamics mode = c.modes[i];
    const fs::path dir = nested ? fs::path(c.output_dir) / sim::to_string(mode)
                                : fs::path(c.output_dir);
    fs::create_directories(dir);
    std::ofstream csv(dir / "trajectory.csv");
    csv::write_trajectory(csv, log, n);
    summary.push_back(summarize(log, mode));
    std::cout << sim::to_string(mode) << ": " << log.samples.size() << " rows -> "
              << (dir / "trajectory.csv").string() << '\n';
    if (!log.ok) {
      std::cerr << "error: " << sim::to_string(mode) << " run failed: " << log.failure
                << '\n';
      status = kFailure;
    }
  }
  write_json(fs::path(c.output_dir) / "summary.json",
             nested ? summary : summary.front());
  return status;
}

int cmd_check_gains(const config::RunConfig& c) {
  const models::Model model = config::make_model(c.model);
  const auto grid = model.configuration_grid(c.grid);
  const GridSweep sweep = sweep_configurations(*model.system, c.gains, grid);
  const bool pass = sweep.all_hold && sweep.formulations_agree;

  std::printf("grid points:         %zu\n", sweep.points);
  std::printf("min gain margin:     %.10g\n", sweep.min_margin);
  std::printf("min beta:            %.10g\n", sweep.min_beta);
  std::printf("certified rate:      %.10g\n", 0.5 * sweep.min_beta);
  std::printf("formulations agree:  %s\n", sweep.formulations_agree ? "yes" : "no");
  std::printf("gain condition:      %s\n", pass ? "PASS" : "FAIL");

  fs::create_directories(c.output_dir);
  write_json(fs::path(c.output_dir) / "gain_report.json",
             {{"model", c.model.name},
              {"points", sweep.points},
              {"min_margin", sweep.min_margin},
              {"argmin_margin", vec_json(sweep.argmin_margin)},
              {"min_beta", sweep.min_beta},
              {"argmin_beta", vec_json(sweep.argmin_beta)},
              {"certified_rate", 0.5 * sweep.min_beta},
              {"formulations_agree", sweep.formulations_agree},
              {"pass", pass}});
  return pass ? kOk : kFailure;
}

int cmd_verify(const config::RunConfig& c) {
  const models::Model model = config::make_model(c.model);
  verify::SuiteOptions opts;
  opts.seed = c.seed;
  opts.samples = c.samples;
  const auto results = verify::run_property_suite(
      model, config::make_reference(c.reference), c.gains, opts);

  bool all = true;
  for (const auto& r : results) {
    std::printf("%-32s %-4s max %.3e  tol %.1e  (%zu samples)\n", r.name.c_str(),
                r.pass ? "PASS" : "FAIL", r.max_residual, r.tolerance, r.samples);
    all = all && r.pass;
  }
  std::printf("seed %llu: %s\n", static_cast<unsigned long long>(c.seed),
              all ? "all properties pass" : "property failure");
  return all ? kOk : kFailure;
}

int cmd_distance(const config::RunConfig& c) {
  const models::Model model = config::make_model(c.model);
  config::DistanceQuery query;
  if (c.distance) {
    query = *c.distance;
  } else {
    query.x = c.initial;
    query.x_d = desired_state(*model.system, config::make_reference(c.reference),
                              c.initial.t);
  }
  const double d =
      riemannian_distance(*model.system, c.gains, query.x, query.x_d, query.segments);
  std::printf("%.17g\n", d);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sliding-manifold contraction tracking for mechanical port-Hamiltonian systems"};
  app.require_subcommand(1);

  Overrides o;
  app.add_option("--config", o.config, "JSON configuration (defaults to the SCARA preset)");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--seed", o.seed, "Seed for randomized suites");
  app.add_option("--grid", o.grid, "Configuration grid size")->check(CLI::PositiveNumber);

  auto* simulate = app.add_subcommand("simulate", "Run the configured modes and write CSV logs");
  auto* check = app.add_subcommand("check-gains", "Sweep the gain condition over the configuration grid");
  auto* verify = app.add_subcommand("verify", "Run the randomized property suites");
  auto* distance = app.add_subcommand("distance", "Print the Riemannian distance d(x, x_d)");
  for (auto* sub : {simulate, check, verify, distance}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const config::RunConfig c = load_config(o);
    if (*simulate) return cmd_simulate(c);
    if (*check) return cmd_check_gains(c);
    if (*verify) return cmd_verify(c);
    if (*distance) return cmd_distance(c);
  } catch (const ValidationError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const DimensionError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
