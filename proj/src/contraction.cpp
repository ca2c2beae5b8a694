#include "phtrack/contraction.hpp"

#include <cmath>
#include <limits>

#include "phtrack/numeric.hpp"

namespace phtrack {

namespace {

constexpr double kPdTolerance = 1e-10;

// Stacks [[A, B], [C, D]].
Matrix blocks(const Matrix& A, const Matrix& B, const Matrix& C,
              const Matrix& D) {
  Matrix out(A.rows() + C.rows(), A.cols() + B.cols());
  out << A, B, C, D;
  return out;
}

int sign_with_deadband(double x) {
  if (x > kPdTolerance) return 1;
  if (x < -kPdTolerance) return -1;
  return 0;
}

}  // namespace

Matrix metric_P(const MechanicalPHSystem& sys, const ControllerGains& gains,
                const Vector& q) {
  const Eigen::Index n = sys.dimension();
  const InertiaAt in(sys, q);
  const Matrix Z = Matrix::Zero(n, n);
  return blocks(gains.Lambda, Z, Z, in.inverse());
}

Matrix upsilon(const MechanicalPHSystem& sys, const ControllerGains& gains,
               const Vector& q) {
  const Eigen::Index n = sys.dimension();
  const InertiaAt in(sys, q);
  const Matrix Minv = in.inverse();
  const Matrix I = Matrix::Identity(n, n);
  return blocks(2.0 * Minv, Minv - I, Minv - I,
                2.0 * (sys.damping(q) + gains.Kd));
}

GainCondition gain_condition(const MechanicalPHSystem& sys,
                             const ControllerGains& gains, const Vector& q) {
  const Eigen::Index n = sys.dimension();
  const InertiaAt in(sys, q);
  const Matrix M = in.M();
  const Matrix Minv = in.inverse();
  const Matrix I = Matrix::Identity(n, n);
  const Matrix DK = sys.damping(q) + gains.Kd;

  GainCondition out;
  out.margin =
      numeric::min_sym_eigenvalue(DK + 0.5 * I - 0.25 * (Minv + M));
  out.schur_complement_min_eig = numeric::min_sym_eigenvalue(
      2.0 * DK - 0.5 * (Minv - I) * M * (Minv - I));
  out.upsilon_min_eig = numeric::min_sym_eigenvalue(
      blocks(2.0 * Minv, Minv - I, Minv - I, 2.0 * DK));
  out.holds = out.margin > 0.0;
  const int s = sign_with_deadband(out.margin);
  out.formulations_agree =
      s == sign_with_deadband(out.schur_complement_min_eig) &&
      s == sign_with_deadband(out.upsilon_min_eig);
  return out;
}

Matrix psd_sqrt(const Matrix& A) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (A + A.transpose()));
  Vector lambda = es.eigenvalues();
  if (lambda.minCoeff() < -kPdTolerance) {
    throw ValidationError("psd_sqrt: matrix has a negative eigenvalue " +
                          std::to_string(lambda.minCoeff()));
  }
  lambda = lambda.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * lambda.asDiagonal() *
         es.eigenvectors().transpose();
}

double contraction_rate(const MechanicalPHSystem& sys,
                        const ControllerGains& gains, const Vector& q) {
  const Matrix Ph = psd_sqrt(metric_P(sys, gains, q));
  return numeric::min_sym_eigenvalue(Ph * upsilon(sys, gains, q) * Ph);
}

double certified_rate(const MechanicalPHSystem& sys,
                      const ControllerGains& gains, const Vector& q) {
  return 0.5 * contraction_rate(sys, gains, q);
}

ContractionCertificate certificate(const MechanicalPHSystem& sys,
                                   const ControllerGains& gains,
                                   const Vector& q) {
  ContractionCertificate c;
  c.P = metric_P(sys, gains, q);
  c.Upsilon = upsilon(sys, gains, q);
  c.schur_margin = gain_condition(sys, gains, q).margin;
  const Matrix Ph = psd_sqrt(c.P);
  c.beta = numeric::min_sym_eigenvalue(Ph * c.Upsilon * Ph);
  return c;
}

GridSweep sweep_configurations(const MechanicalPHSystem& sys,
                               const ControllerGains& gains,
                               std::span<const Vector> configurations) {
  GridSweep out;
  out.points = configurations.size();
  out.min_margin = std::numeric_limits<double>::infinity();
  out.min_beta = std::numeric_limits<double>::infinity();
  out.all_hold = true;
  out.formulations_agree = true;
  for (const Vector& q : configurations) {
    const GainCondition gc = gain_condition(sys, gains, q);
    const double beta = contraction_rate(sys, gains, q);
    out.all_hold = out.all_hold && gc.holds;
    out.formulations_agree = out.formulations_agree && gc.formulations_agree;
    if (gc.margin < out.min_margin) {
      out.min_margin = gc.margin;
      out.argmin_margin = q;
    }
    if (beta < out.min_beta) {
      out.min_beta = beta;
      out.argmin_beta = q;
    }
  }
  if (configurations.empty()) out.all_hold = false;
  return out;
}

double differential_lyapunov(const Matrix& P, const Vector& delta) {
  if (P.rows() != delta.size() || P.cols() != delta.size()) {
    throw DimensionError("differential_lyapunov: P and delta sizes differ");
  }
  return 0.5 * delta.dot(P * delta);
}

Matrix xi_matrix(const MechanicalPHSystem& sys, const ControllerGains& gains,
                 const Vector& q) {
  const InertiaAt in(sys, q);
  const Matrix Minv = in.inverse();
  const Matrix& L = gains.Lambda;
  return blocks(L * Minv * L, -L * Minv, Minv * Minv * L,
                Minv * (sys.damping(q) + gains.Kd) * Minv);
}

Vector virtual_error_field(const MechanicalPHSystem& sys,
                           const ReferenceTrajectory& ref,
                           const ControllerGains& gains,
                           const ErrorState& virtual_err,
                           const ErrorState& actual_err, double t) {
  const Eigen::Index n = sys.dimension();
  require_size(virtual_err.q_tilde, n, "virtual_error_field: q_tilde_a");
  require_size(virtual_err.sigma, n, "virtual_error_field: sigma_a");
  const Vector q = actual_err.q_tilde + ref.q_d(t);
  const InertiaAt in(sys, q);
  const Vector b_actual = in.solve(actual_err.sigma);
  const Matrix E =
      in.coriolis(b_actual) - 0.5 * in.rate(b_actual) + sys.damping(q);
  const Vector c = in.solve(Vector(gains.Lambda * virtual_err.q_tilde));
  const Vector b = in.solve(virtual_err.sigma);
  Vector f(2 * n);
  f.head(n) = -c + b;
  f.tail(n) = -c - (E + gains.Kd) * b;
  return f;
}

Matrix variational_matrix(const MechanicalPHSystem& sys,
                          const ReferenceTrajectory& ref,
                          const ControllerGains& gains, const ErrorState& e,
                          double t) {
  const Vector q = e.q_tilde + ref.q_d(t);
  const InertiaAt in(sys, q);
  const Matrix Minv = in.inverse();
  const Vector b = in.solve(e.sigma);
  const Matrix E = in.coriolis(b) - 0.5 * in.rate(b) + sys.damping(q);
  return -blocks(Minv * gains.Lambda, -Minv, Minv * gains.Lambda,
                 (E + gains.Kd) * Minv);
}

Vector variational_field(const MechanicalPHSystem& sys,
                         const ReferenceTrajectory& ref,
                         const ControllerGains& gains, const ErrorState& e,
                         const Vector& delta, double t) {
  require_size(delta, 2 * sys.dimension(), "variational_field: delta");
  return variational_matrix(sys, ref, gains, e, t) * delta;
}

Matrix theta_matrix(const Matrix& Lambda) {
  const Eigen::Index n = Lambda.rows();
  return blocks(Matrix::Identity(n, n), Matrix::Zero(n, n), Lambda,
                Matrix::Identity(n, n));
}

Matrix riemannian_metric_Pi(const MechanicalPHSystem& sys,
                            const ControllerGains& gains, const Vector& q) {
  const InertiaAt in(sys, q);
  const Matrix Minv = in.inverse();
  const Matrix& L = gains.Lambda;
  return blocks(L + L * Minv * L, L * Minv, Minv * L, Minv);
}

Matrix riemannian_metric_Pi_congruence(const MechanicalPHSystem& sys,
                                       const ControllerGains& gains,
                                       const Vector& q) {
  const Matrix Theta = theta_matrix(gains.Lambda);
  return Theta.transpose() * metric_P(sys, gains, q) * Theta;
}

namespace {

// Couplings of the original-coordinate virtual system, chosen so that both
// the actual and the desired trajectory solve it:
//   A = E(q, sigma) + Kd + I
//   B = Lambda + Kd - [S(q, p_r) - 1/2 M'(q, M^-1 p_r)]
struct VirtualCouplings {
  Matrix A;
  Matrix B;
  Matrix E_actual;  // E(q, p)
  Vector q_tilde;
};

VirtualCouplings virtual_couplings(const InertiaAt& in,
                                   const MechanicalPHSystem& sys,
                                   const ReferenceTrajectory& ref,
                                   const ControllerGains& gains,
                                   const PhaseState& actual, double t) {
  const Eigen::Index n = sys.dimension();
  const Matrix D = sys.damping(actual.q);
  VirtualCouplings c;
  c.q_tilde = actual.q - ref.q_d(t);
  const Vector p_r = in.M() * ref.qdot_d(t) - gains.Lambda * c.q_tilde;
  const Vector a = in.solve(p_r);
  const Vector b = in.solve(Vector(actual.p - p_r));
  const Vector v = in.solve(actual.p);
  c.A = in.coriolis(b) - 0.5 * in.rate(b) + D + gains.Kd +
        Matrix::Identity(n, n);
  c.B = gains.Lambda + gains.Kd - (in.coriolis(a) - 0.5 * in.rate(a));
  c.E_actual = in.coriolis(v) - 0.5 * in.rate(v) + D;
  return c;
}

}  // namespace

Vector virtual_state_field(const MechanicalPHSystem& sys,
                           const ReferenceTrajectory& ref,
                           const ControllerGains& gains,
                           const PhaseState& virtual_state,
                           const PhaseState& actual, double t) {
  const Eigen::Index n = sys.dimension();
  require_size(virtual_state.q, n, "virtual_state_field: q_v");
  require_size(virtual_state.p, n, "virtual_state_field: p_v");
  const InertiaAt in(sys, actual.q);
  const auto c = virtual_couplings(in, sys, ref, gains, actual, t);
  const Vector u = control_law(sys, ref, gains, actual, t).u;
  const Vector q_tilde_v = actual.q - virtual_state.q;
  const Vector p_tilde_v = actual.p - virtual_state.p;

  Vector f(2 * n);
  f.head(n) = in.solve(virtual_state.p);
  f.tail(n) = -sys.potential_gradient(actual.q) -
              c.E_actual * in.solve(virtual_state.p) +
              sys.input_map(actual.q) * u +
              c.A * in.solve(Vector(gains.Lambda * q_tilde_v)) +
              c.B * in.solve(p_tilde_v);
  return f;
}

Matrix virtual_state_variational_matrix(const MechanicalPHSystem& sys,
                                        const ReferenceTrajectory& ref,
                                        const ControllerGains& gains,
                                        const PhaseState& actual, double t) {
  const Eigen::Index n = sys.dimension();
  const InertiaAt in(sys, actual.q);
  const auto c = virtual_couplings(in, sys, ref, gains, actual, t);
  const Matrix Minv = in.inverse();
  return blocks(Matrix::Zero(n, n), Minv, -c.A * Minv * gains.Lambda,
                -(c.E_actual + c.B) * Minv);
}

double riemannian_distance(const MechanicalPHSystem& sys,
                           const ControllerGains& gains, const PhaseState& x,
                           const PhaseState& x_d, int segments) {
  if (segments < 1) throw ValidationError("riemannian_distance: segments < 1");
  const Vector a = x.stacked();
  const Vector dx = x_d.stacked() - a;
  if (dx.isZero(0.0)) return 0.0;
  const Eigen::Index n = sys.dimension();
  double sum = 0.0;
  for (int i = 0; i < segments; ++i) {
    const double s = (static_cast<double>(i) + 0.5) / segments;
    const Vector q = a.head(n) + s * dx.head(n);
    const double quad = dx.dot(riemannian_metric_Pi(sys, gains, q) * dx);
    sum += std::sqrt(std::max(0.0, 0.5 * quad));
  }
  return sum / segments;
}

ContractionCheckReport contraction_check_along_trajectory(
    const MechanicalPHSystem& sys, const ControllerGains& gains,
    std::span<const ProlongedSample> log, RateConvention convention) {
  ContractionCheckReport out;
  out.samples = log.size();
  out.max_violation = -std::numeric_limits<double>::infinity();
  out.min_beta = std::numeric_limits<double>::infinity();
  out.beta.reserve(log.size());
  for (const auto& s : log) {
    const Matrix P = metric_P(sys, gains, s.q);
    const Matrix Ph = psd_sqrt(P);
    const Matrix Ups = upsilon(sys, gains, s.q);
    double beta = numeric::min_sym_eigenvalue(Ph * Ups * Ph);
    if (convention == RateConvention::kCertified) beta *= 0.5;
    const double V = differential_lyapunov(P, s.delta);
    const double Vdot = -0.5 * s.delta.dot(P * Ups * P * s.delta);
    out.max_violation = std::max(out.max_violation, Vdot + 2.0 * beta * V);
    out.min_beta = std::min(out.min_beta, beta);
    out.beta.push_back(beta);
  }
  if (log.empty()) out.max_violation = 0.0;
  return out;
}

}  // namespace phtrack
