#pragma once

// JSON run configuration.
//
// {
//   "model":     {"name": "scara", "params": {"m1": 1, ..., "d": 0.2}},
//   "reference": {"preset": "scara"}
//              | {"amplitude": [..], "omega": [..], "offset": [..]},
//   "gains":     {"lambda": [15, 15, 15] | [[..], ..], "kd": [..] | [[..]]},
//   "initial_state": {"q": [..], "p": [..]},
//   "horizon": 10.0, "step": 0.001,
//   "output_dir": "out",
//   "modes": ["closed_loop", "prolonged", ...],
//   "initial_tangent": [..],
//   "input": {"amplitude": [..], "omega": [..], "phase": [..], "offset": [..]},
//   "seed": 7, "grid": 720, "samples": 1000, "distance_segments": 16,
//   "distance": {"x": {"q": .., "p": ..}, "x_d": {"q": .., "p": ..}, "segments": 64}
// }
//
// Every key is optional; missing keys take the values of the bundled SCARA
// preset. Gains are always written back as full matrices.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "phtrack/models.hpp"
#include "phtrack/sim.hpp"

namespace phtrack::config {

struct ModelSpec {
  std::string name = "scara";
  std::map<std::string, double> params;  // normalized: every key present
};

/// a sin(omega t + phase) + offset, per component.
struct SinusoidSpec {
  Vector amplitude;
  Vector omega;
  Vector phase;
  Vector offset;
};

struct DistanceQuery {
  PhaseState x;
  PhaseState x_d;
  int segments = 64;
};

struct RunConfig {
  ModelSpec model;
  SinusoidSpec reference;
  ControllerGains gains;
  PhaseState initial;
  double horizon = 10.0;
  double step = 1e-3;
  std::string output_dir = "out";
  std::vector<sim::Dynamics> modes{sim::Dynamics::kClosedLoop};
  Vector initial_tangent;
  std::optional<SinusoidSpec> input;
  std::uint64_t seed = 7;
  std::size_t grid = 720;
  std::size_t samples = 1000;
  int distance_segments = 16;
  std::optional<DistanceQuery> distance;

  /// Throws ValidationError.
  void validate() const;
};

/// SCARA defaults, Lambda = diag(15,15,15), Kd = diag(30,60,90),
/// q_d = (sin t + 1, sin t, sin t), T = 10 s, h = 1e-3, x(0) = 0.
RunConfig scara_preset();

/// Throws ValidationError on schema violations.
RunConfig from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& c);
RunConfig load(const std::string& path);

/// Known model names: "scara", "toy_constant_inertia", "toy_pendulum".
models::Model make_model(const ModelSpec& spec);
/// Fills in default parameters; throws on unknown names or keys.
ModelSpec normalize(const ModelSpec& spec);

ReferenceTrajectory make_reference(const SinusoidSpec& spec);
std::function<Vector(double)> make_input(const SinusoidSpec& spec);

/// Scenario for one mode of the configuration.
sim::Scenario make_scenario(const RunConfig& c, const models::Model& model,
                            sim::Dynamics mode);

}  // namespace phtrack::config
