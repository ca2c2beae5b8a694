#include "phtrack/sim.hpp"

#include <cmath>
#include <iostream>

namespace phtrack::sim {

namespace {

Vector checked(const Field& field, double t, const Vector& x) {
  Vector k = field(t, x);
  if (!k.allFinite()) {
    throw IntegrationError("non-finite field evaluation", x, t);
  }
  return k;
}

}  // namespace

Vector rk4_step(const Field& field, const Vector& x, double t, double h) {
  if (!(h > 0.0)) throw ValidationError("rk4_step: step must be positive");
  const Vector k1 = checked(field, t, x);
  const Vector k2 = checked(field, t + 0.5 * h, x + 0.5 * h * k1);
  const Vector k3 = checked(field, t + 0.5 * h, x + 0.5 * h * k2);
  const Vector k4 = checked(field, t + h, x + h * k3);
  Vector next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!next.allFinite()) throw IntegrationError("non-finite state", x, t);
  return next;
}

const char* to_string(Dynamics d) {
  switch (d) {
    case Dynamics::kOpenLoop: return "open_loop";
    case Dynamics::kClosedLoop: return "closed_loop";
    case Dynamics::kSlidingMotion: return "sliding";
    case Dynamics::kErrorSystem: return "error";
    case Dynamics::kVirtual: return "virtual";
    case Dynamics::kProlonged: return "prolonged";
  }
  return "unknown";
}

std::optional<Dynamics> dynamics_from_string(const std::string& s) {
  for (Dynamics d : {Dynamics::kOpenLoop, Dynamics::kClosedLoop,
                     Dynamics::kSlidingMotion, Dynamics::kErrorSystem,
                     Dynamics::kVirtual, Dynamics::kProlonged}) {
    if (s == to_string(d)) return d;
  }
  return std::nullopt;
}

void Scenario::validate() const {
  if (!system) throw ValidationError("scenario: no system");
  if (!reference.q_d || !reference.qdot_d || !reference.qddot_d) {
    throw ValidationError("scenario: incomplete reference trajectory");
  }
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw ValidationError("scenario: step must be positive");
  }
  if (!(horizon >= step) || !std::isfinite(horizon)) {
    throw ValidationError("scenario: horizon must be at least one step");
  }
  if (distance_segments < 1) {
    throw ValidationError("scenario: distance_segments must be >= 1");
  }
  const Eigen::Index n = system->dimension();
  gains.validate(n);
  require_size(initial.q, n, "scenario: initial q");
  require_size(initial.p, n, "scenario: initial p");
  if (!initial.q.allFinite() || !initial.p.allFinite()) {
    throw ValidationError("scenario: initial state must be finite");
  }
  if (dynamics == Dynamics::kProlonged) {
    require_size(initial_tangent, 2 * n, "scenario: initial tangent");
  }
  if (dynamics == Dynamics::kVirtual) {
    require_size(initial_virtual_error, 2 * n, "scenario: virtual error");
  }
}

std::size_t Scenario::steps() const {
  return static_cast<std::size_t>(std::llround(horizon / step));
}

std::vector<ProlongedSample> SimLog::prolonged() const {
  std::vector<ProlongedSample> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back({s.t, s.q, s.delta});
  return out;
}

namespace {

class Runner {
 public:
  explicit Runner(const Scenario& sc)
      : sc_(sc), sys_(*sc.system), n_(sys_.dimension()) {}

  SimLog run() {
    SimLog log;
    const std::size_t steps = sc_.steps();
    log.samples.reserve(steps + 1);
    Vector z = initial_state();
    const double t0 = sc_.initial.t;
    try {
      log.samples.push_back(sample(z, t0));
      for (std::size_t k = 0; k < steps; ++k) {
        const double t = t0 + static_cast<double>(k) * sc_.step;
        z = rk4_step([this](double tt, const Vector& zz) { return field(tt, zz); },
                     z, t, sc_.step);
        log.samples.push_back(
            sample(z, t0 + static_cast<double>(k + 1) * sc_.step));
      }
    } catch (const IntegrationError& e) {
      log.ok = false;
      log.failure = std::string(e.what()) + " at t=" + std::to_string(e.time());
    } catch (const SingularInertiaError& e) {
      log.ok = false;
      log.failure = std::string("singular inertia: ") + e.what();
    } catch (const SingularInputMapError& e) {
      log.ok = false;
      log.failure = std::string("singular input map: ") + e.what();
    }
    return log;
  }

 private:
  Vector initial_state() const {
    const PhaseState& x0 = sc_.initial;
    switch (sc_.dynamics) {
      case Dynamics::kErrorSystem:
        return error_coordinates(sys_, sc_.reference, sc_.gains, x0, x0.t)
            .stacked();
      case Dynamics::kProlonged: {
        Vector z(4 * n_);
        z << x0.q, x0.p, sc_.initial_tangent;
        return z;
      }
      case Dynamics::kVirtual: {
        Vector z(4 * n_);
        z << x0.q, x0.p, sc_.initial_virtual_error;
        return z;
      }
      default:
        return x0.stacked();
    }
  }

  Vector input(double t) const {
    return sc_.input ? sc_.input(t) : Vector(Vector::Zero(n_));
  }

  Vector field(double t, const Vector& z) const {
    switch (sc_.dynamics) {
      case Dynamics::kOpenLoop:
        return open_loop_field(sys_, PhaseState::from_stacked(z, t), input(t));
      case Dynamics::kClosedLoop:
        return closed_loop_field(sys_, sc_.reference, sc_.gains,
                                 PhaseState::from_stacked(z, t), t);
      case Dynamics::kSlidingMotion:
        return closed_loop_field(sys_, sc_.reference, sc_.gains,
                                 PhaseState::from_stacked(z, t), t,
                                 ControlMode::kEquivalentOnly);
      case Dynamics::kErrorSystem:
        return closed_loop_error_field(sys_, sc_.reference, sc_.gains,
                                       ErrorState::from_stacked(z, t), t);
      case Dynamics::kVirtual:
      case Dynamics::kProlonged: {
        const PhaseState x = PhaseState::from_stacked(z.head(2 * n_), t);
        const ErrorState e =
            error_coordinates(sys_, sc_.reference, sc_.gains, x, t);
        Vector out(4 * n_);
        out.head(2 * n_) = closed_loop_field(sys_, sc_.reference, sc_.gains, x, t);
        if (sc_.dynamics == Dynamics::kProlonged) {
          out.tail(2 * n_) = variational_field(sys_, sc_.reference, sc_.gains,
                                               e, z.tail(2 * n_), t);
        } else {
          out.tail(2 * n_) = virtual_error_field(
              sys_, sc_.reference, sc_.gains,
              ErrorState::from_stacked(z.tail(2 * n_), t), e, t);
        }
        return out;
      }
    }
    return Vector();
  }

  SimSample sample(const Vector& z, double t) const {
    SimSample s;
    s.t = t;
    PhaseState x;
    if (sc_.dynamics == Dynamics::kErrorSystem) {
      x = state_from_error(sys_, sc_.reference, sc_.gains,
                           ErrorState::from_stacked(z, t));
    } else {
      x = PhaseState::from_stacked(z.head(2 * n_), t);
    }
    s.q = x.q;
    s.p = x.p;
    s.q_d = sc_.reference.q_d(t);

    if (sc_.dynamics == Dynamics::kOpenLoop) {
      s.u = input(t);
      s.u_eq = Vector::Zero(n_);
      s.u_at = Vector::Zero(n_);
    } else {
      const ControlSignal c = control_law(sys_, sc_.reference, sc_.gains, x, t);
      s.u_eq = c.u_eq;
      s.u_at = c.u_at;
      s.u = sc_.dynamics == Dynamics::kSlidingMotion ? c.u_eq : c.u;
    }

    if (sc_.dynamics == Dynamics::kErrorSystem) {
      const ErrorState e = ErrorState::from_stacked(z, t);
      s.q_tilde = e.q_tilde;
      s.sigma = e.sigma;
    } else {
      const ErrorState e = error_coordinates(sys_, sc_.reference, sc_.gains, x, t);
      s.q_tilde = e.q_tilde;
      s.sigma = e.sigma;
    }

    s.H = hamiltonian(sys_, x);
    const PhaseState xd = desired_state(sys_, sc_.reference, t);
    s.H_d = hamiltonian(sys_, xd);

    if (sc_.log_diagnostics) {
      s.distance = riemannian_distance(sys_, sc_.gains, x, xd,
                                       sc_.distance_segments);
      s.beta = contraction_rate(sys_, sc_.gains, x.q);
      s.margin = gain_condition(sys_, sc_.gains, x.q).margin;
    }

    if (sc_.dynamics == Dynamics::kProlonged) {
      s.delta = z.tail(2 * n_);
      s.V = differential_lyapunov(metric_P(sys_, sc_.gains, x.q), s.delta);
    } else if (sc_.dynamics == Dynamics::kVirtual) {
      s.virtual_error = z.tail(2 * n_);
    }
    return s;
  }

  const Scenario& sc_;
  const MechanicalPHSystem& sys_;
  Eigen::Index n_;
};

}  // namespace

SimLog simulate(const Scenario& scenario) {
  scenario.validate();
  if (scenario.dynamics != Dynamics::kOpenLoop) {
    const auto gc = gain_condition(*scenario.system, scenario.gains,
                                   scenario.initial.q);
    if (!gc.holds) {
      std::cerr << "warning: gain condition fails at the initial configuration"
                << " (margin " << gc.margin << ")\n";
    }
  }
  return Runner(scenario).run();
}

}  // namespace phtrack::sim
