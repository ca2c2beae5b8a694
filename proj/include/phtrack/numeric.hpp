#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "phtrack/types.hpp"

namespace phtrack::numeric {

/// Central-difference step for coordinate value x.
inline double fd_step(double x) { return 1e-6 * std::max(1.0, std::abs(x)); }

/// Gradient of a scalar function by central differences.
inline Vector gradient(const std::function<double(const Vector&)>& f,
                       const Vector& x) {
  Vector g(x.size());
  Vector xp = x;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double h = fd_step(x[k]);
    xp[k] = x[k] + h;
    const double fp = f(xp);
    xp[k] = x[k] - h;
    const double fm = f(xp);
    xp[k] = x[k];
    g[k] = (fp - fm) / (2.0 * h);
  }
  return g;
}

/// Jacobian d f / d x by central differences; column k is df/dx_k.
inline Matrix jacobian(const std::function<Vector(const Vector&)>& f,
                       const Vector& x) {
  Vector xp = x;
  Matrix J;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double h = fd_step(x[k]);
    xp[k] = x[k] + h;
    const Vector fp = f(xp);
    xp[k] = x[k] - h;
    const Vector fm = f(xp);
    xp[k] = x[k];
    if (k == 0) J.resize(fp.size(), x.size());
    J.col(k) = (fp - fm) / (2.0 * h);
  }
  return J;
}

/// Partial derivatives of a matrix-valued function, one matrix per coordinate.
inline std::vector<Matrix> matrix_partials(
    const std::function<Matrix(const Vector&)>& f, const Vector& x) {
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(x.size()));
  Vector xp = x;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double h = fd_step(x[k]);
    xp[k] = x[k] + h;
    const Matrix fp = f(xp);
    xp[k] = x[k] - h;
    const Matrix fm = f(xp);
    xp[k] = x[k];
    out.push_back((fp - fm) / (2.0 * h));
  }
  return out;
}

/// Minimum eigenvalue of the symmetric part of a square matrix.
inline double min_sym_eigenvalue(const Matrix& A) {
  const Matrix sym = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline double max_sym_eigenvalue(const Matrix& A) {
  const Matrix sym = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

inline double inf_norm(const Matrix& A) {
  return A.size() == 0 ? 0.0 : A.cwiseAbs().maxCoeff();
}

}  // namespace phtrack::numeric
