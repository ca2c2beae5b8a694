#pragma once

// Contraction certificates for the closed-loop error system.
//
//   P   = [[Lambda, 0], [0, M^-1]]
//   Ups = [[2 M^-1, M^-1 - I], [M^-1 - I, 2 (D + Kd)]]
//   Pi  = Theta^T P Theta,  Theta = [[I, 0], [Lambda, I]]
//
// with the differential Lyapunov function V = 1/2 d^T P d whose analytic rate
// along the virtual variational system is V' = -d^T Sym(Xi) d = -1/2 d^T P Ups P d.

#include <span>
#include <vector>

#include "phtrack/tracking.hpp"

namespace phtrack {

Matrix metric_P(const MechanicalPHSystem& sys, const ControllerGains& gains,
                const Vector& q);

Matrix upsilon(const MechanicalPHSystem& sys, const ControllerGains& gains,
               const Vector& q);

struct GainCondition {
  bool holds = false;
  /// min eig of D + Kd + 1/2 I - 1/4 (M^-1 + M)
  double margin = 0.0;
  /// min eig of 2 (D + Kd) - 1/2 (M^-1 - I) M (M^-1 - I)
  double schur_complement_min_eig = 0.0;
  /// min eig of Ups
  double upsilon_min_eig = 0.0;
  /// The three formulations agree on the sign (with a 1e-10 dead band).
  bool formulations_agree = false;
};

GainCondition gain_condition(const MechanicalPHSystem& sys,
                             const ControllerGains& gains, const Vector& q);

/// beta = min eig(P^1/2 Ups P^1/2), P^1/2 the principal square root.
double contraction_rate(const MechanicalPHSystem& sys,
                        const ControllerGains& gains, const Vector& q);

/// Largest c with V' <= -2 c V implied by Sym(Xi) = 1/2 P Ups P, which is
/// half of contraction_rate.
double certified_rate(const MechanicalPHSystem& sys,
                      const ControllerGains& gains, const Vector& q);

struct ContractionCertificate {
  Matrix P;
  Matrix Upsilon;
  double schur_margin = 0.0;
  double beta = 0.0;
  bool valid() const { return schur_margin > 0.0; }
};

ContractionCertificate certificate(const MechanicalPHSystem& sys,
                                   const ControllerGains& gains,
                                   const Vector& q);

struct GridSweep {
  std::size_t points = 0;
  double min_margin = 0.0;
  double min_beta = 0.0;
  Vector argmin_margin;
  Vector argmin_beta;
  bool all_hold = false;
  bool formulations_agree = false;
};

GridSweep sweep_configurations(const MechanicalPHSystem& sys,
                               const ControllerGains& gains,
                               std::span<const Vector> configurations);

/// Principal square root of a symmetric PSD matrix. Eigenvalues in
/// [-1e-10, 0) are clipped to zero; anything more negative throws.
Matrix psd_sqrt(const Matrix& A);

/// V = 1/2 d^T P d
double differential_lyapunov(const Matrix& P, const Vector& delta);

/// Xi = [[L M^-1 L, -L M^-1], [M^-2 L, M^-1 (D + Kd) M^-1]].
Matrix xi_matrix(const MechanicalPHSystem& sys, const ControllerGains& gains,
                 const Vector& q);

/// Virtual error system driven by the actual error e (E frozen at e.sigma).
Vector virtual_error_field(const MechanicalPHSystem& sys,
                           const ReferenceTrajectory& ref,
                           const ControllerGains& gains,
                           const ErrorState& virtual_err,
                           const ErrorState& actual_err, double t);

/// F with d' = F d:  F = -[[M^-1 L, -M^-1], [M^-1 L, (E + Kd) M^-1]].
Matrix variational_matrix(const MechanicalPHSystem& sys,
                          const ReferenceTrajectory& ref,
                          const ControllerGains& gains, const ErrorState& e,
                          double t);

Vector variational_field(const MechanicalPHSystem& sys,
                         const ReferenceTrajectory& ref,
                         const ControllerGains& gains, const ErrorState& e,
                         const Vector& delta, double t);

/// Theta = [[I, 0], [Lambda, I]].
Matrix theta_matrix(const Matrix& Lambda);

/// Pi = [[L + L M^-1 L, L M^-1], [M^-1 L, M^-1]] assembled directly.
Matrix riemannian_metric_Pi(const MechanicalPHSystem& sys,
                            const ControllerGains& gains, const Vector& q);

/// Pi assembled as Theta^T P Theta.
Matrix riemannian_metric_Pi_congruence(const MechanicalPHSystem& sys,
                                       const ControllerGains& gains,
                                       const Vector& q);

/// Virtual system in original coordinates, with the actual state x and the
/// applied control frozen. Both x_v = x and x_v = (q_d, M(q) qdot_d) are
/// particular solutions.
Vector virtual_state_field(const MechanicalPHSystem& sys,
                           const ReferenceTrajectory& ref,
                           const ControllerGains& gains,
                           const PhaseState& virtual_state,
                           const PhaseState& actual, double t);

/// Jacobian of virtual_state_field with respect to the virtual state:
/// [[0, M^-1], [-A M^-1 L, -(E(q, p) + B) M^-1]].
Matrix virtual_state_variational_matrix(const MechanicalPHSystem& sys,
                                        const ReferenceTrajectory& ref,
                                        const ControllerGains& gains,
                                        const PhaseState& actual, double t);

/// Length of the straight chord from x to x_d under Pi, composite midpoint
/// rule: sum_i (1/N) sqrt(1/2 dx^T Pi(gamma(s_i)) dx).
double riemannian_distance(const MechanicalPHSystem& sys,
                           const ControllerGains& gains, const PhaseState& x,
                           const PhaseState& x_d, int segments);

/// One sample of a prolonged (state + tangent) run.
struct ProlongedSample {
  double t = 0.0;
  Vector q;
  Vector delta;
};

enum class RateConvention {
  kVerbatim,   // beta = min eig(P^1/2 Ups P^1/2)
  kCertified,  // beta / 2
};

struct ContractionCheckReport {
  /// max over samples of V' + 2 beta V, V' = -1/2 d^T P Ups P d.
  double max_violation = 0.0;
  std::vector<double> beta;
  double min_beta = 0.0;
  std::size_t samples = 0;
};

ContractionCheckReport contraction_check_along_trajectory(
    const MechanicalPHSystem& sys, const ControllerGains& gains,
    std::span<const ProlongedSample> log,
    RateConvention convention = RateConvention::kCertified);

}  // namespace phtrack
