#pragma once

// Sliding-manifold tracking controller.
//
// Error coordinates   q~ = q - q_d(t),   sigma = p - p_r,
// momentum reference  p_r = M(q) qdot_d - Lambda q~,
// control             G u = G u_eq + G u_at
//   G u_eq = p_r' + dH/dq(q, p_r) + D M^-1 p_r           (keeps sigma = 0 invariant)
//   G u_at = -Kd M^-1 sigma - M^-1 Lambda q~ + d/dq(p_r^T M^-1 sigma)
//
// In closed loop the error obeys
//   q~'    = -M^-1 Lambda q~ + M^-1 sigma
//   sigma' = -M^-1 Lambda q~ - (E(q, sigma) + Kd) M^-1 sigma.

#include "phtrack/phsys.hpp"
#include "phtrack/reference.hpp"

namespace phtrack {

struct ControllerGains {
  Matrix Lambda;  // symmetric positive definite
  Matrix Kd;      // symmetric positive semidefinite

  static ControllerGains diagonal(const Vector& lambda, const Vector& kd);
  /// Throws ValidationError on non-symmetric or indefinite gains.
  void validate(Eigen::Index n) const;
};

struct ErrorState {
  Vector q_tilde;
  Vector sigma;
  double t = 0.0;

  Vector stacked() const {
    Vector e(q_tilde.size() + sigma.size());
    e << q_tilde, sigma;
    return e;
  }
  static ErrorState from_stacked(const Vector& e, double t) {
    const Eigen::Index n = e.size() / 2;
    return ErrorState{e.head(n), e.tail(n), t};
  }
};

struct ControlSignal {
  Vector u;
  Vector u_eq;
  Vector u_at;
};

enum class ControlMode {
  kFull,            // u = u_eq + u_at
  kEquivalentOnly,  // u = u_eq (ideal sliding motion)
};

Vector p_reference(const MechanicalPHSystem& sys, const ReferenceTrajectory& ref,
                   const Vector& q, double t, const ControllerGains& gains);

/// d/dt p_r along the flow. The inertia rate uses the actual velocity M^-1 p.
Vector p_reference_rate(const MechanicalPHSystem& sys,
                        const ReferenceTrajectory& ref, const PhaseState& x,
                        double t, const ControllerGains& gains);

/// Throws SingularInputMapError when G(q) is not invertible.
ControlSignal control_law(const MechanicalPHSystem& sys,
                          const ReferenceTrajectory& ref,
                          const ControllerGains& gains, const PhaseState& x,
                          double t);

ErrorState error_coordinates(const MechanicalPHSystem& sys,
                             const ReferenceTrajectory& ref,
                             const ControllerGains& gains, const PhaseState& x,
                             double t);

/// sigma assembled as M(q)(M^-1 p - qdot_d) + Lambda q~.
Vector sliding_variable(const MechanicalPHSystem& sys,
                        const ReferenceTrajectory& ref,
                        const ControllerGains& gains, const PhaseState& x,
                        double t);

/// Inverse of error_coordinates.
PhaseState state_from_error(const MechanicalPHSystem& sys,
                            const ReferenceTrajectory& ref,
                            const ControllerGains& gains, const ErrorState& e);

/// Closed-loop error-coordinate field (q~', sigma'); E is taken at momentum
/// argument sigma.
Vector closed_loop_error_field(const MechanicalPHSystem& sys,
                               const ReferenceTrajectory& ref,
                               const ControllerGains& gains,
                               const ErrorState& e, double t);

/// Phase-space field of the plant driven by the controller.
Vector closed_loop_field(const MechanicalPHSystem& sys,
                         const ReferenceTrajectory& ref,
                         const ControllerGains& gains, const PhaseState& x,
                         double t, ControlMode mode = ControlMode::kFull);

/// Desired phase state (q_d, M(q_d) qdot_d).
PhaseState desired_state(const MechanicalPHSystem& sys,
                         const ReferenceTrajectory& ref, double t);

}  // namespace phtrack
