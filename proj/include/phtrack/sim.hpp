#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "phtrack/contraction.hpp"
#include "phtrack/tracking.hpp"

namespace phtrack::sim {

using Field = std::function<Vector(double t, const Vector& x)>;

/// Raised when a field evaluation produces NaN/Inf. Carries the state and
/// time at which the offending stage was evaluated.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, Vector state, double t)
      : std::runtime_error(what), state_(std::move(state)), t_(t) {}
  const Vector& state() const { return state_; }
  double time() const { return t_; }

 private:
  Vector state_;
  double t_;
};

/// Classical fourth-order Runge-Kutta step.
Vector rk4_step(const Field& field, const Vector& x, double t, double h);

enum class Dynamics {
  kOpenLoop,       // plant with the scenario input u(t)
  kClosedLoop,     // plant with u = u_eq + u_at
  kSlidingMotion,  // plant with u = u_eq only
  kErrorSystem,    // closed-loop error field integrated directly
  kVirtual,        // closed loop plus virtual error system
  kProlonged,      // closed loop plus its variational (tangent) system
};

const char* to_string(Dynamics d);
std::optional<Dynamics> dynamics_from_string(const std::string& s);

struct Scenario {
  std::shared_ptr<const MechanicalPHSystem> system;
  ReferenceTrajectory reference;
  ControllerGains gains;
  PhaseState initial;
  double horizon = 10.0;
  double step = 1e-3;
  Dynamics dynamics = Dynamics::kClosedLoop;
  /// kProlonged: initial tangent vector (size 2n).
  Vector initial_tangent;
  /// kVirtual: initial virtual error (size 2n).
  Vector initial_virtual_error;
  /// kOpenLoop: applied input. Zero input when empty.
  std::function<Vector(double)> input;
  /// Chord panels for the logged distance d(x, x_d).
  int distance_segments = 16;
  /// Log beta, gain margin and distance per sample.
  bool log_diagnostics = true;

  /// Throws ValidationError.
  void validate() const;
  std::size_t steps() const;
};

struct SimSample {
  double t = 0.0;
  Vector q, p, q_d;
  Vector u, u_eq, u_at;
  Vector q_tilde, sigma;
  double H = 0.0;
  double H_d = 0.0;
  double distance = 0.0;
  double beta = 0.0;
  double margin = 0.0;
  /// 1/2 d^T P d for prolonged runs, otherwise 0.
  double V = 0.0;
  Vector delta;          // kProlonged only
  Vector virtual_error;  // kVirtual only
};

struct SimLog {
  std::vector<SimSample> samples;
  bool ok = true;
  std::string failure;

  std::vector<ProlongedSample> prolonged() const;
};

/// Integrates the scenario on the grid t_k = k h, k = 0..round(T/h). On
/// integration failure the samples up to the failure are kept and the log is
/// marked with ok = false.
SimLog simulate(const Scenario& scenario);

}  // namespace phtrack::sim
