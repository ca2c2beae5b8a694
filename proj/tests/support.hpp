#pragma once

// Test-side oracles. Nothing here calls into the library's numerics, so the
// checks below compare two independent computations.

#include <cmath>
#include <functional>
#include <memory>
#include <random>

#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>

#include "phtrack/models.hpp"
#include "phtrack/reference.hpp"
#include "phtrack/tracking.hpp"

namespace oracle {

using phtrack::Matrix;
using phtrack::Vector;

inline std::shared_ptr<const phtrack::MechanicalPHSystem> scara() {
  return std::make_shared<const phtrack::MechanicalPHSystem>(phtrack::models::scara());
}

inline phtrack::ReferenceTrajectory benchmark_reference() {
  return phtrack::sinusoidal_reference(Vector::Ones(3), Vector::Ones(3),
                                        Vector{{1.0, 0.0, 0.0}});
}

inline phtrack::ControllerGains benchmark_gains() {
  return phtrack::ControllerGains::diagonal(Vector::Constant(3, 15.0),
                                            Vector{{30.0, 60.0, 90.0}});
}

// Unit masses, l1 = l2 = 0.5, g = 9.81, written out by hand.
inline Matrix scara_inertia(const Vector& q) {
  const double c = std::cos(q[1]);
  Matrix M = Matrix::Zero(3, 3);
  M(0, 0) = 2 * 0.25 + 0.25 + 2 * 0.25 * c;
  M(0, 1) = M(1, 0) = 0.25 + 0.25 * c;
  M(1, 1) = 0.25;
  M(2, 2) = 3 * 9.81;
  return M;
}

inline Vector scara_gravity(const Vector&) { return Vector{{0.0, 0.0, 3 * 9.81}}; }

inline double diff(const std::function<double(double)>& f, double x, double h = 1e-5) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

inline Vector grad(const std::function<double(const Vector&)>& f, const Vector& x,
                   double h = 1e-5) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector a = x, b = x;
    a[i] += h;
    b[i] -= h;
    g[i] = (f(a) - f(b)) / (2 * h);
  }
  return g;
}

inline Matrix jac(const std::function<Vector(const Vector&)>& f, const Vector& x,
                  double h = 1e-6) {
  const Vector f0 = f(x);
  Matrix J(f0.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector a = x, b = x;
    a[i] += h;
    b[i] -= h;
    J.col(i) = (f(a) - f(b)) / (2 * h);
  }
  return J;
}

// Christoffel-symbol Coriolis matrix of the hand-written SCARA inertia.
inline Matrix scara_christoffel(const Vector& q, const Vector& qdot) {
  const auto dM = [&](int k) {
    return jac([&](const Vector& z) {
      const Matrix M = scara_inertia(z);
      return Vector(Eigen::Map<const Vector>(M.data(), M.size()));
    }, q).col(k).reshaped(3, 3).eval();
  };
  const Matrix d[3] = {dM(0), dM(1), dM(2)};
  Matrix C = Matrix::Zero(3, 3);
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i)
        C(k, j) += 0.5 * (d[i](k, j) + d[j](k, i) - d[k](i, j)) * qdot[i];
  return C;
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// Undamped pendulum released from rest at theta0:
// theta(t) = 2 asin(k sn(K - omega t, k)), k = sin(theta0/2).
inline double pendulum_angle(double theta0, double omega, double t) {
  const double k = std::sin(theta0 / 2);
  const double K = boost::math::ellint_1(k);
  return 2 * std::asin(k * boost::math::jacobi_sn(k, K - omega * t));
}

}  // namespace oracle
