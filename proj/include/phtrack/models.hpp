#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "phtrack/phsys.hpp"

namespace phtrack::models {

/// SCARA arm: q = (theta1, theta2, z). Defaults are the fixed reproducible
/// parameter set used throughout the tests and presets.
struct ScaraParams {
  double m1 = 1.0;
  double m2 = 1.0;
  double m3 = 1.0;
  double l1 = 0.5;
  double l2 = 0.5;
  double g = 9.81;
  double d = 0.2;

  void validate() const;
};

/// M11 = (m2+m3) l1^2 + m3 l2^2 + 2 m3 l1 l2 cos(theta2)
/// M12 = m3 l2^2 + m3 l1 l2 cos(theta2),  M22 = m3 l2^2
/// M33 = (m1+m2+m3) g (the gravity factor in the inertia is intentional)
/// V = (m1+m2+m3) g z,  D = d I,  G = I.
MechanicalPHSystem scara(const ScaraParams& params = {});

/// Configurations (0, theta2, 0) with theta2 on a uniform grid over [0, 2pi).
/// M depends on theta2 only, so this covers every inertia the arm can take.
std::vector<Vector> scara_configuration_grid(std::size_t count);

/// M = mass I, V = 0, D = damping I, G = I.
MechanicalPHSystem toy_constant_inertia(Eigen::Index n, double mass,
                                        double damping);

/// n = 1; M = m l^2, V = m g l (1 - cos q), D = damping, G = 1.
MechanicalPHSystem toy_pendulum(double mass, double length, double g,
                                double damping);

/// A system together with the configurations a gain sweep should visit.
struct Model {
  std::string name;
  std::shared_ptr<const MechanicalPHSystem> system;
  std::function<std::vector<Vector>(std::size_t)> configuration_grid;
};

}  // namespace phtrack::models
