#pragma once

// Fully-actuated mechanical port-Hamiltonian systems
//
//   q' =  dH/dp
//   p' = -dH/dq - D(q) dH/dp + G(q) u,     H(q, p) = 1/2 p^T M(q)^-1 p + V(q)
//
// plus the structure matrices built from the inertia partials: the
// Coriolis-like skew matrix S(q, v), the inertia rate M'(q, v), the
// "constant-like inertia" dissipation E(q, p) and the J/R/Phi split.

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "phtrack/types.hpp"

namespace phtrack {

class MechanicalPHSystem {
 public:
  using MatrixFn = std::function<Matrix(const Vector&)>;
  using PartialsFn = std::function<std::vector<Matrix>(const Vector&)>;
  using ScalarFn = std::function<double(const Vector&)>;
  using VectorFn = std::function<Vector(const Vector&)>;

  /// Everything needed to build a system. Optional providers fall back to
  /// central finite differences.
  struct Definition {
    Eigen::Index n = 0;
    MatrixFn inertia;
    PartialsFn inertia_partials;  // optional
    ScalarFn potential;
    VectorFn potential_gradient;  // optional
    MatrixFn damping;
    MatrixFn input_map;
    std::pair<double, double> inertia_bounds{0.0, 0.0};
  };

  explicit MechanicalPHSystem(Definition def);

  Eigen::Index dimension() const { return def_.n; }
  std::pair<double, double> inertia_bounds() const {
    return def_.inertia_bounds;
  }
  bool has_analytic_inertia_partials() const {
    return static_cast<bool>(def_.inertia_partials);
  }
  bool has_analytic_potential_gradient() const {
    return static_cast<bool>(def_.potential_gradient);
  }

  Matrix inertia(const Vector& q) const;
  /// dM/dq_k for k = 0..n-1.
  std::vector<Matrix> inertia_partials(const Vector& q) const;
  /// Always central differences, regardless of analytic availability.
  std::vector<Matrix> inertia_partials_fd(const Vector& q) const;
  double potential(const Vector& q) const;
  Vector potential_gradient(const Vector& q) const;
  Matrix damping(const Vector& q) const;
  Matrix input_map(const Vector& q) const;

 private:
  Definition def_;
};

/// M(q) evaluated once together with its factorization and partials. Every
/// solve goes through the Cholesky factor; M^-1 is never formed here.
class InertiaAt {
 public:
  static constexpr double kMaxCondition = 1e12;

  /// Throws SingularInertiaError when cond(M) > 1e12 or M is not PD.
  InertiaAt(const MechanicalPHSystem& sys, const Vector& q);

  const Matrix& M() const { return M_; }
  const std::vector<Matrix>& partials() const { return dM_; }
  /// M^-1 v
  Vector solve(const Vector& v) const { return llt_.solve(v); }
  Matrix solve(const Matrix& B) const { return llt_.solve(B); }
  /// Explicit M^-1; only for assembling block metrics (n is small).
  Matrix inverse() const;
  double condition_number() const { return condition_; }

  /// S(q, v), v a velocity.
  Matrix coriolis(const Vector& v) const;
  /// M'(q, v) = sum_k dM/dq_k v_k.
  Matrix rate(const Vector& v) const;

 private:
  Matrix M_;
  Eigen::LLT<Matrix> llt_;
  std::vector<Matrix> dM_;
  double condition_ = 0.0;
};

double hamiltonian(const MechanicalPHSystem& sys, const PhaseState& x);

struct HamiltonianGradient {
  Vector dH_dq;
  Vector dH_dp;
};
HamiltonianGradient hamiltonian_gradient(const MechanicalPHSystem& sys,
                                         const PhaseState& x);

/// S_ij = 1/2 sum_k v_k (dM_ik/dq_j - dM_jk/dq_i). Skew and linear in v.
/// The momentum form S(q, p) used throughout is coriolis_S(q, M^-1 p).
Matrix coriolis_S(const MechanicalPHSystem& sys, const Vector& q,
                  const Vector& v);

/// M' = sum_k (dM/dq_k) qdot_k.
Matrix inertia_rate(const MechanicalPHSystem& sys, const Vector& q,
                    const Vector& qdot);

/// E(q, p) = S(q, M^-1 p) - 1/2 M'(q, M^-1 p) + D(q).
Matrix E_matrix(const MechanicalPHSystem& sys, const Vector& q,
                const Vector& p);

/// (q', p') from the canonical form: q' = dH/dp, p' = -dH/dq - D dH/dp + G u.
Vector open_loop_field(const MechanicalPHSystem& sys, const PhaseState& x,
                       const Vector& u);

/// Same field assembled as q' = M^-1 p, p' = -dV/dq - E(q, p) M^-1 p + G u.
Vector open_loop_field_energy_form(const MechanicalPHSystem& sys,
                                   const PhaseState& x, const Vector& u);

struct StructureMatrices {
  Matrix J;    // [[0, I], [-I, -S]]
  Matrix R;    // [[0, 0], [0, D]]
  Matrix Phi;  // [[0, 0], [0, 1/2 M']]
};
StructureMatrices structure_decomposition(const MechanicalPHSystem& sys,
                                          const PhaseState& x);

/// (J - (R - Phi)) [dV/dq; M^-1 p] + [0; G u].
Vector reassembled_field(const MechanicalPHSystem& sys, const PhaseState& x,
                         const Vector& u);

/// || [S(q,p) - 1/2 M'] M^-1 p - d/dq (1/2 p^T M^-1 p) ||_inf with the right
/// side by central differences.
double coriolis_identity_residual(const MechanicalPHSystem& sys,
                                  const Vector& q, const Vector& p);

/// Velocity-form identity:
/// || [S(q,qd) - 1/2 M'(q,qd)] qd + d/dq (1/2 qd^T M qd) ||_inf.
double lagrange_identity_residual(const MechanicalPHSystem& sys,
                                  const Vector& q, const Vector& qdot);

/// d/dq (a^T M^-1(q) b) for fixed momenta a, b:
///   [S(q,a) - 1/2 M'(q,M^-1 a)] M^-1 b + [S(q,b) - 1/2 M'(q,M^-1 b)] M^-1 a.
Vector momentum_cross_gradient(const MechanicalPHSystem& sys, const Vector& q,
                               const Vector& a, const Vector& b);

}  // namespace phtrack
