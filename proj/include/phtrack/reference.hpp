#pragma once

#include <functional>

#include "phtrack/types.hpp"

namespace phtrack {

/// Twice-differentiable desired configuration q_d(t) with its first two
/// derivatives. The controller never differentiates q_d numerically.
struct ReferenceTrajectory {
  std::function<Vector(double)> q_d;
  std::function<Vector(double)> qdot_d;
  std::function<Vector(double)> qddot_d;
};

/// Per joint: q_d,i(t) = amplitude_i sin(omega_i t) + offset_i.
ReferenceTrajectory sinusoidal_reference(const Vector& amplitude,
                                         const Vector& omega,
                                         const Vector& offset);

/// a sin(omega t + phase) + offset.
ReferenceTrajectory sinusoidal_reference(const Vector& amplitude,
                                         const Vector& omega,
                                         const Vector& offset,
                                         const Vector& phase);

/// Fixed configuration, zero velocity and acceleration.
ReferenceTrajectory constant_reference(const Vector& q);

/// Largest central-difference mismatch of qdot_d against q_d and of qddot_d
/// against qdot_d over the sample times.
double reference_consistency_residual(const ReferenceTrajectory& ref,
                                      double t0, double t1,
                                      std::size_t samples);

}  // namespace phtrack
