#include "phtrack/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace phtrack::config {

using nlohmann::json;

namespace {

const std::map<std::string, std::map<std::string, double>>& model_defaults() {
  static const std::map<std::string, std::map<std::string, double>> d{
      {"scara",
       {{"m1", 1.0}, {"m2", 1.0}, {"m3", 1.0}, {"l1", 0.5}, {"l2", 0.5},
        {"g", 9.81}, {"d", 0.2}}},
      {"toy_constant_inertia", {{"n", 3.0}, {"mass", 1.0}, {"damping", 0.0}}},
      {"toy_pendulum",
       {{"mass", 1.0}, {"length", 1.0}, {"g", 9.81}, {"damping", 0.0}}},
  };
  return d;
}

Vector vector_from(const json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string(what) + ": expected array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw ValidationError(std::string(what) + ": expected numbers");
    }
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

json vector_to(const Vector& v) {
  json j = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

// Accepts a diagonal (flat array) or a full matrix (array of rows).
Matrix matrix_from(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) {
    throw ValidationError(std::string(what) + ": expected non-empty array");
  }
  if (!j[0].is_array()) return vector_from(j, what).asDiagonal().toDenseMatrix();
  const auto rows = static_cast<Eigen::Index>(j.size());
  Matrix m(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Vector row = vector_from(j[static_cast<std::size_t>(r)], what);
    if (row.size() != rows) {
      throw ValidationError(std::string(what) + ": matrix must be square");
    }
    m.row(r) = row.transpose();
  }
  return m;
}

json matrix_to(const Matrix& m) {
  json j = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    j.push_back(vector_to(m.row(r).transpose()));
  }
  return j;
}

SinusoidSpec sinusoid_from(const json& j, const char* what) {
  SinusoidSpec s;
  s.amplitude = vector_from(j.at("amplitude"), what);
  const Eigen::Index n = s.amplitude.size();
  s.omega = j.contains("omega") ? vector_from(j["omega"], what)
                                : Vector(Vector::Ones(n));
  s.phase = j.contains("phase") ? vector_from(j["phase"], what)
                                : Vector(Vector::Zero(n));
  s.offset = j.contains("offset") ? vector_from(j["offset"], what)
                                  : Vector(Vector::Zero(n));
  if (s.omega.size() != n || s.phase.size() != n || s.offset.size() != n) {
    throw ValidationError(std::string(what) + ": coefficient sizes differ");
  }
  return s;
}

json sinusoid_to(const SinusoidSpec& s) {
  return json{{"amplitude", vector_to(s.amplitude)},
              {"omega", vector_to(s.omega)},
              {"phase", vector_to(s.phase)},
              {"offset", vector_to(s.offset)}};
}

SinusoidSpec benchmark_reference() {
  return SinusoidSpec{Eigen::Vector3d(1, 1, 1), Eigen::Vector3d(1, 1, 1),
                      Eigen::Vector3d::Zero(), Eigen::Vector3d(1, 0, 0)};
}

PhaseState state_from(const json& j, const char* what) {
  PhaseState x;
  x.q = vector_from(j.at("q"), what);
  x.p = vector_from(j.at("p"), what);
  x.t = j.value("t", 0.0);
  return x;
}

json state_to(const PhaseState& x) {
  return json{{"q", vector_to(x.q)}, {"p", vector_to(x.p)}, {"t", x.t}};
}

}  // namespace

ModelSpec normalize(const ModelSpec& spec) {
  const auto& defaults = model_defaults();
  const auto it = defaults.find(spec.name);
  if (it == defaults.end()) {
    throw ValidationError("unknown model '" + spec.name + "'");
  }
  ModelSpec out{spec.name, it->second};
  for (const auto& [k, v] : spec.params) {
    if (!out.params.contains(k)) {
      throw ValidationError("model '" + spec.name + "' has no parameter '" +
                            k + "'");
    }
    out.params[k] = v;
  }
  return out;
}

models::Model make_model(const ModelSpec& raw) {
  const ModelSpec spec = normalize(raw);
  const auto& p = spec.params;
  models::Model m;
  m.name = spec.name;
  if (spec.name == "scara") {
    models::ScaraParams sp;
    sp.m1 = p.at("m1");
    sp.m2 = p.at("m2");
    sp.m3 = p.at("m3");
    sp.l1 = p.at("l1");
    sp.l2 = p.at("l2");
    sp.g = p.at("g");
    sp.d = p.at("d");
    m.system = std::make_shared<const MechanicalPHSystem>(models::scara(sp));
    m.configuration_grid = models::scara_configuration_grid;
    return m;
  }
  if (spec.name == "toy_constant_inertia") {
    const double n = p.at("n");
    if (n < 1.0 || n != std::floor(n)) {
      throw ValidationError("toy_constant_inertia: n must be a positive integer");
    }
    const auto dim = static_cast<Eigen::Index>(n);
    m.system = std::make_shared<const MechanicalPHSystem>(
        models::toy_constant_inertia(dim, p.at("mass"), p.at("damping")));
    m.configuration_grid = [dim](std::size_t) {
      return std::vector<Vector>{Vector::Zero(dim)};
    };
    return m;
  }
  m.system = std::make_shared<const MechanicalPHSystem>(models::toy_pendulum(
      p.at("mass"), p.at("length"), p.at("g"), p.at("damping")));
  m.configuration_grid = [](std::size_t) {
    return std::vector<Vector>{Vector::Zero(1)};
  };
  return m;
}

ReferenceTrajectory make_reference(const SinusoidSpec& s) {
  return sinusoidal_reference(s.amplitude, s.omega, s.offset, s.phase);
}

std::function<Vector(double)> make_input(const SinusoidSpec& s) {
  return [s](double t) {
    return Vector(s.amplitude.array() * (s.omega.array() * t + s.phase.array()).sin() +
                  s.offset.array());
  };
}

RunConfig scara_preset() {
  RunConfig c;
  c.model = normalize(ModelSpec{"scara", {}});
  c.reference = benchmark_reference();
  c.gains = ControllerGains::diagonal(Eigen::Vector3d(15, 15, 15),
                                      Eigen::Vector3d(30, 60, 90));
  c.initial = PhaseState{Vector::Zero(3), Vector::Zero(3), 0.0};
  c.initial_tangent = Vector::Ones(6) / std::sqrt(6.0);
  return c;
}

void RunConfig::validate() const {
  const models::Model m = make_model(model);
  const Eigen::Index n = m.system->dimension();
  gains.validate(n);
  if (reference.amplitude.size() != n) {
    throw ValidationError("reference dimension does not match the model");
  }
  require_size(initial.q, n, "initial_state.q");
  require_size(initial.p, n, "initial_state.p");
  if (!(step > 0.0)) throw ValidationError("step must be positive");
  if (!(horizon > 0.0) || horizon < step) {
    throw ValidationError("horizon must be positive and at least one step");
  }
  if (modes.empty()) throw ValidationError("no modes to run");
  if (initial_tangent.size() != 2 * n) {
    throw ValidationError("initial_tangent must have size 2n");
  }
  if (input && input->amplitude.size() != n) {
    throw ValidationError("input dimension does not match the model");
  }
  if (grid == 0) throw ValidationError("grid must be positive");
  if (distance_segments < 1) throw ValidationError("distance_segments < 1");
  if (distance) {
    if (distance->segments < 1) throw ValidationError("distance.segments < 1");
    require_size(distance->x.q, n, "distance.x.q");
    require_size(distance->x.p, n, "distance.x.p");
    require_size(distance->x_d.q, n, "distance.x_d.q");
    require_size(distance->x_d.p, n, "distance.x_d.p");
  }
}

RunConfig from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  static const std::set<std::string> known{
      "model", "reference", "gains", "initial_state", "horizon", "step",
      "output_dir", "modes", "initial_tangent", "input", "seed", "grid",
      "samples", "distance_segments", "distance"};
  for (const auto& [k, _] : j.items()) {
    if (!known.contains(k)) throw ValidationError("unknown config key '" + k + "'");
  }

  RunConfig c = scara_preset();
  try {
    if (j.contains("model")) {
      const json& jm = j["model"];
      ModelSpec spec{jm.at("name").get<std::string>(), {}};
      if (jm.contains("params")) {
        for (const auto& [k, v] : jm["params"].items()) {
          if (!v.is_number()) {
            throw ValidationError("model parameter '" + k + "' must be a number");
          }
          spec.params[k] = v.get<double>();
        }
      }
      c.model = normalize(spec);
    }
    const Eigen::Index n = make_model(c.model).system->dimension();
    if (n != 3) {
      // The SCARA defaults below do not fit other dimensions.
      c.gains = ControllerGains::diagonal(Vector::Ones(n), Vector::Ones(n));
      c.initial = PhaseState{Vector::Zero(n), Vector::Zero(n), 0.0};
      c.reference = SinusoidSpec{Vector::Zero(n), Vector::Ones(n),
                                 Vector::Zero(n), Vector::Zero(n)};
      c.initial_tangent = Vector::Ones(2 * n) / std::sqrt(2.0 * n);
    }
    if (j.contains("reference")) {
      const json& jr = j["reference"];
      if (jr.contains("preset")) {
        if (jr["preset"] != "scara") {
          throw ValidationError("unknown reference preset");
        }
        c.reference = benchmark_reference();
      } else {
        c.reference = sinusoid_from(jr, "reference");
      }
    }
    if (j.contains("gains")) {
      const json& jg = j["gains"];
      if (jg.contains("lambda")) c.gains.Lambda = matrix_from(jg["lambda"], "gains.lambda");
      if (jg.contains("kd")) c.gains.Kd = matrix_from(jg["kd"], "gains.kd");
    }
    if (j.contains("initial_state")) {
      c.initial = state_from(j["initial_state"], "initial_state");
    }
    c.horizon = j.value("horizon", c.horizon);
    c.step = j.value("step", c.step);
    c.output_dir = j.value("output_dir", c.output_dir);
    if (j.contains("modes")) {
      c.modes.clear();
      for (const auto& m : j["modes"]) {
        const auto d = sim::dynamics_from_string(m.get<std::string>());
        if (!d) throw ValidationError("unknown mode '" + m.get<std::string>() + "'");
        c.modes.push_back(*d);
      }
    }
    if (j.contains("initial_tangent")) {
      c.initial_tangent = vector_from(j["initial_tangent"], "initial_tangent");
    }
    if (j.contains("input") && !j["input"].is_null()) {
      c.input = sinusoid_from(j["input"], "input");
    }
    c.seed = j.value("seed", c.seed);
    c.grid = j.value("grid", c.grid);
    c.samples = j.value("samples", c.samples);
    c.distance_segments = j.value("distance_segments", c.distance_segments);
    if (j.contains("distance") && !j["distance"].is_null()) {
      const json& jd = j["distance"];
      DistanceQuery dq;
      dq.x = state_from(jd.at("x"), "distance.x");
      dq.x_d = state_from(jd.at("x_d"), "distance.x_d");
      dq.segments = jd.value("segments", dq.segments);
      c.distance = dq;
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

json to_json(const RunConfig& c) {
  json params = json::object();
  for (const auto& [k, v] : c.model.params) params[k] = v;
  json modes = json::array();
  for (auto m : c.modes) modes.push_back(sim::to_string(m));
  json j{
      {"model", {{"name", c.model.name}, {"params", params}}},
      {"reference", sinusoid_to(c.reference)},
      {"gains", {{"lambda", matrix_to(c.gains.Lambda)}, {"kd", matrix_to(c.gains.Kd)}}},
      {"initial_state", state_to(c.initial)},
      {"horizon", c.horizon},
      {"step", c.step},
      {"output_dir", c.output_dir},
      {"modes", modes},
      {"initial_tangent", vector_to(c.initial_tangent)},
      {"seed", c.seed},
      {"grid", c.grid},
      {"samples", c.samples},
      {"distance_segments", c.distance_segments},
  };
  if (c.input) j["input"] = sinusoid_to(*c.input);
  if (c.distance) {
    j["distance"] = {{"x", state_to(c.distance->x)},
                     {"x_d", state_to(c.distance->x_d)},
                     {"segments", c.distance->segments}};
  }
  return j;
}

RunConfig load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return from_json(j);
}

sim::Scenario make_scenario(const RunConfig& c, const models::Model& model,
                            sim::Dynamics mode) {
  sim::Scenario sc;
  sc.system = model.system;
  sc.reference = make_reference(c.reference);
  sc.gains = c.gains;
  sc.initial = c.initial;
  sc.horizon = c.horizon;
  sc.step = c.step;
  sc.dynamics = mode;
  sc.initial_tangent = c.initial_tangent;
  sc.initial_virtual_error =
      error_coordinates(*model.system, sc.reference, c.gains, c.initial,
                        c.initial.t)
          .stacked();
  if (c.input) sc.input = make_input(*c.input);
  sc.distance_segments = c.distance_segments;
  return sc;
}

}  // namespace phtrack::config
