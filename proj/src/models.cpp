#include "phtrack/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace phtrack::models {

void ScaraParams::validate() const {
  for (double v : {m1, m2, m3, l1, l2, g}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError("SCARA masses, lengths and g must be positive and finite");
    }
  }
  if (!(d >= 0.0) || !std::isfinite(d)) {
    throw ValidationError("SCARA damping must be nonnegative and finite");
  }
}

namespace {

Matrix scara_inertia(const ScaraParams& P, double theta2) {
  const double c = std::cos(theta2);
  Matrix M = Matrix::Zero(3, 3);
  M(0, 0) = (P.m2 + P.m3) * P.l1 * P.l1 + P.m3 * P.l2 * P.l2 +
            2.0 * P.m3 * P.l1 * P.l2 * c;
  M(0, 1) = M(1, 0) = P.m3 * P.l2 * P.l2 + P.m3 * P.l1 * P.l2 * c;
  M(1, 1) = P.m3 * P.l2 * P.l2;
  M(2, 2) = (P.m1 + P.m2 + P.m3) * P.g;
  return M;
}

std::pair<double, double> scara_bounds(const ScaraParams& P) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& q : scara_configuration_grid(720)) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(scara_inertia(P, q[1]),
                                             Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
    hi = std::max(hi, es.eigenvalues().maxCoeff());
  }
  return {lo, hi};
}

}  // namespace

std::vector<Vector> scara_configuration_grid(std::size_t count) {
  std::vector<Vector> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double theta2 =
        2.0 * std::numbers::pi * static_cast<double>(i) /
        static_cast<double>(count);
    out.push_back(Eigen::Vector3d(0.0, theta2, 0.0));
  }
  return out;
}

MechanicalPHSystem scara(const ScaraParams& params) {
  params.validate();
  const ScaraParams P = params;
  MechanicalPHSystem::Definition def;
  def.n = 3;
  def.inertia = [P](const Vector& q) { return scara_inertia(P, q[1]); };
  def.inertia_partials = [P](const Vector& q) {
    const double s = std::sin(q[1]);
    std::vector<Matrix> dM(3, Matrix::Zero(3, 3));
    dM[1](0, 0) = -2.0 * P.m3 * P.l1 * P.l2 * s;
    dM[1](0, 1) = dM[1](1, 0) = -P.m3 * P.l1 * P.l2 * s;
    return dM;
  };
  const double weight = (P.m1 + P.m2 + P.m3) * P.g;
  def.potential = [weight](const Vector& q) { return weight * q[2]; };
  def.potential_gradient = [weight](const Vector&) {
    return Vector(Eigen::Vector3d(0.0, 0.0, weight));
  };
  def.damping = [d = P.d](const Vector&) {
    return Matrix(d * Matrix::Identity(3, 3));
  };
  def.input_map = [](const Vector&) { return Matrix(Matrix::Identity(3, 3)); };
  def.inertia_bounds = scara_bounds(P);
  return MechanicalPHSystem(std::move(def));
}

MechanicalPHSystem toy_constant_inertia(Eigen::Index n, double mass,
                                        double damping) {
  if (n <= 0) throw ValidationError("toy system dimension must be positive");
  if (!(mass > 0.0)) throw ValidationError("mass must be positive");
  if (!(damping >= 0.0)) throw ValidationError("damping must be nonnegative");
  MechanicalPHSystem::Definition def;
  def.n = n;
  def.inertia = [n, mass](const Vector&) {
    return Matrix(mass * Matrix::Identity(n, n));
  };
  def.inertia_partials = [n](const Vector&) {
    return std::vector<Matrix>(static_cast<std::size_t>(n),
                               Matrix::Zero(n, n));
  };
  def.potential = [](const Vector&) { return 0.0; };
  def.potential_gradient = [n](const Vector&) {
    return Vector(Vector::Zero(n));
  };
  def.damping = [n, damping](const Vector&) {
    return Matrix(damping * Matrix::Identity(n, n));
  };
  def.input_map = [n](const Vector&) {
    return Matrix(Matrix::Identity(n, n));
  };
  def.inertia_bounds = {mass, mass};
  return MechanicalPHSystem(std::move(def));
}

MechanicalPHSystem toy_pendulum(double mass, double length, double g,
                                double damping) {
  if (!(mass > 0.0) || !(length > 0.0)) {
    throw ValidationError("pendulum mass and length must be positive");
  }
  if (!(g >= 0.0) || !(damping >= 0.0)) {
    throw ValidationError("pendulum gravity and damping must be nonnegative");
  }
  const double inertia = mass * length * length;
  const double mgl = mass * g * length;
  MechanicalPHSystem::Definition def;
  def.n = 1;
  def.inertia = [inertia](const Vector&) {
    return Matrix(Matrix::Constant(1, 1, inertia));
  };
  def.inertia_partials = [](const Vector&) {
    return std::vector<Matrix>{Matrix::Zero(1, 1)};
  };
  def.potential = [mgl](const Vector& q) { return mgl * (1.0 - std::cos(q[0])); };
  def.potential_gradient = [mgl](const Vector& q) {
    return Vector(Vector::Constant(1, mgl * std::sin(q[0])));
  };
  def.damping = [damping](const Vector&) {
    return Matrix(Matrix::Constant(1, 1, damping));
  };
  def.input_map = [](const Vector&) { return Matrix(Matrix::Identity(1, 1)); };
  def.inertia_bounds = {inertia, inertia};
  return MechanicalPHSystem(std::move(def));
}

}  // namespace phtrack::models
