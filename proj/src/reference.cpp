#include "phtrack/reference.hpp"

#include <algorithm>
#include <cmath>

namespace phtrack {

ReferenceTrajectory sinusoidal_reference(const Vector& amplitude,
                                         const Vector& omega,
                                         const Vector& offset) {
  return sinusoidal_reference(amplitude, omega, offset,
                              Vector::Zero(amplitude.size()));
}

ReferenceTrajectory sinusoidal_reference(const Vector& amplitude,
                                         const Vector& omega,
                                         const Vector& offset,
                                         const Vector& phase) {
  if (amplitude.size() != omega.size() || amplitude.size() != offset.size() ||
      amplitude.size() != phase.size()) {
    throw DimensionError("sinusoidal_reference: coefficient sizes differ");
  }
  ReferenceTrajectory ref;
  ref.q_d = [=](double t) {
    return Vector(amplitude.array() * (omega.array() * t + phase.array()).sin() +
                  offset.array());
  };
  ref.qdot_d = [=](double t) {
    return Vector(amplitude.array() * omega.array() *
                  (omega.array() * t + phase.array()).cos());
  };
  ref.qddot_d = [=](double t) {
    return Vector(-amplitude.array() * omega.array().square() *
                  (omega.array() * t + phase.array()).sin());
  };
  return ref;
}

ReferenceTrajectory constant_reference(const Vector& q) {
  ReferenceTrajectory ref;
  ref.q_d = [q](double) { return q; };
  ref.qdot_d = [n = q.size()](double) { return Vector(Vector::Zero(n)); };
  ref.qddot_d = [n = q.size()](double) { return Vector(Vector::Zero(n)); };
  return ref;
}

double reference_consistency_residual(const ReferenceTrajectory& ref,
                                      double t0, double t1,
                                      std::size_t samples) {
  constexpr double h = 1e-5;
  double worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double t =
        samples == 1 ? t0
                     : t0 + (t1 - t0) * static_cast<double>(i) /
                                static_cast<double>(samples - 1);
    const Vector dq = (ref.q_d(t + h) - ref.q_d(t - h)) / (2.0 * h);
    const Vector ddq = (ref.qdot_d(t + h) - ref.qdot_d(t - h)) / (2.0 * h);
    worst = std::max(worst, (dq - ref.qdot_d(t)).cwiseAbs().maxCoeff());
    worst = std::max(worst, (ddq - ref.qddot_d(t)).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace phtrack
