#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace phtrack {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Inertia matrix is numerically singular (condition number above 1e12) or
/// not positive definite at the evaluated configuration.
class SingularInertiaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input map G(q) cannot be inverted (system is not fully actuated there).
class SingularInputMapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector or matrix sizes do not match the system dimension.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters, gains or configuration failed validation.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Point (q, p) on the cotangent bundle at time t.
struct PhaseState {
  Vector q;
  Vector p;
  double t = 0.0;

  /// Stacked (q, p).
  Vector stacked() const {
    Vector x(q.size() + p.size());
    x << q, p;
    return x;
  }

  static PhaseState from_stacked(const Vector& x, double t) {
    const Eigen::Index n = x.size() / 2;
    return PhaseState{x.head(n), x.tail(n), t};
  }
};

inline bool all_finite(const Vector& v) { return v.allFinite(); }

inline void require_size(const Vector& v, Eigen::Index n, const char* what) {
  if (v.size() != n) {
    throw DimensionError(std::string(what) + ": expected size " +
                         std::to_string(n) + ", got " +
                         std::to_string(v.size()));
  }
}

inline void require_shape(const Matrix& m, Eigen::Index n, const char* what) {
  if (m.rows() != n || m.cols() != n) {
    throw DimensionError(std::string(what) + ": expected " +
                         std::to_string(n) + "x" + std::to_string(n) +
                         ", got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
}

}  // namespace phtrack
