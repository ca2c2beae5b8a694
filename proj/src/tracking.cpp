#include "phtrack/tracking.hpp"

#include "phtrack/numeric.hpp"

namespace phtrack {

ControllerGains ControllerGains::diagonal(const Vector& lambda,
                                          const Vector& kd) {
  return {lambda.asDiagonal().toDenseMatrix(), kd.asDiagonal().toDenseMatrix()};
}

void ControllerGains::validate(Eigen::Index n) const {
  require_shape(Lambda, n, "gains: Lambda");
  require_shape(Kd, n, "gains: Kd");
  const auto symmetric = [](const Matrix& A) {
    return (A - A.transpose()).cwiseAbs().maxCoeff() <=
           1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff());
  };
  if (!symmetric(Lambda)) throw ValidationError("Lambda must be symmetric");
  if (!symmetric(Kd)) throw ValidationError("Kd must be symmetric");
  if (!(numeric::min_sym_eigenvalue(Lambda) > 0.0)) {
    throw ValidationError("Lambda must be positive definite");
  }
  if (numeric::min_sym_eigenvalue(Kd) < -1e-12) {
    throw ValidationError("Kd must be positive semidefinite");
  }
}

namespace {

struct TrackingTerms {
  Vector q_tilde;
  Vector p_r;
  Vector sigma;
};

TrackingTerms tracking_terms(const InertiaAt& in, const ReferenceTrajectory& ref,
                             const ControllerGains& gains, const PhaseState& x,
                             double t) {
  TrackingTerms out;
  out.q_tilde = x.q - ref.q_d(t);
  out.p_r = in.M() * ref.qdot_d(t) - gains.Lambda * out.q_tilde;
  out.sigma = x.p - out.p_r;
  return out;
}

void require_inputs(const MechanicalPHSystem& sys, const PhaseState& x) {
  require_size(x.q, sys.dimension(), "tracking: q");
  require_size(x.p, sys.dimension(), "tracking: p");
}

}  // namespace

Vector p_reference(const MechanicalPHSystem& sys, const ReferenceTrajectory& ref,
                   const Vector& q, double t, const ControllerGains& gains) {
  require_size(q, sys.dimension(), "p_reference: q");
  return sys.inertia(q) * ref.qdot_d(t) - gains.Lambda * (q - ref.q_d(t));
}

Vector p_reference_rate(const MechanicalPHSystem& sys,
                        const ReferenceTrajectory& ref, const PhaseState& x,
                        double t, const ControllerGains& gains) {
  require_inputs(sys, x);
  const InertiaAt in(sys, x.q);
  const Vector qdot = in.solve(x.p);
  const Vector qdot_d = ref.qdot_d(t);
  return in.rate(qdot) * qdot_d + in.M() * ref.qddot_d(t) -
         gains.Lambda * (qdot - qdot_d);
}

ControlSignal control_law(const MechanicalPHSystem& sys,
                          const ReferenceTrajectory& ref,
                          const ControllerGains& gains, const PhaseState& x,
                          double t) {
  require_inputs(sys, x);
  const InertiaAt in(sys, x.q);
  const auto terms = tracking_terms(in, ref, gains, x, t);
  const Vector qdot_d = ref.qdot_d(t);

  const Vector v = in.solve(x.p);           // actual velocity
  const Vector a = in.solve(terms.p_r);     // dH/dp(q, p_r)
  const Vector b = in.solve(terms.sigma);   // dH/dp(q, sigma)
  const Matrix Sa = in.coriolis(a);
  const Matrix Sb = in.coriolis(b);
  const Matrix Ma = in.rate(a);
  const Matrix Mb = in.rate(b);
  const Matrix D = sys.damping(x.q);

  const Vector p_r_rate = in.rate(v) * qdot_d + in.M() * ref.qddot_d(t) -
                          gains.Lambda * (v - qdot_d);
  const Vector dH_dq_r = sys.potential_gradient(x.q) + (Sa - 0.5 * Ma) * a;
  const Vector Gu_eq = p_r_rate + dH_dq_r + D * a;

  // d/dq (p_r^T M^-1 sigma) with p_r and sigma held fixed.
  const Vector cross = (Sb - 0.5 * Mb) * a + (Sa - 0.5 * Ma) * b;
  const Vector Gu_at =
      -gains.Kd * b - in.solve(Vector(gains.Lambda * terms.q_tilde)) + cross;

  const Matrix G = sys.input_map(x.q);
  Eigen::FullPivLU<Matrix> lu(G);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) {
    throw SingularInputMapError("G(q) is not invertible");
  }
  ControlSignal out;
  out.u_eq = lu.solve(Gu_eq);
  out.u_at = lu.solve(Gu_at);
  out.u = out.u_eq + out.u_at;
  return out;
}

ErrorState error_coordinates(const MechanicalPHSystem& sys,
                             const ReferenceTrajectory& ref,
                             const ControllerGains& gains, const PhaseState& x,
                             double t) {
  require_inputs(sys, x);
  const Vector q_tilde = x.q - ref.q_d(t);
  const Vector p_r = p_reference(sys, ref, x.q, t, gains);
  return ErrorState{q_tilde, x.p - p_r, t};
}

Vector sliding_variable(const MechanicalPHSystem& sys,
                        const ReferenceTrajectory& ref,
                        const ControllerGains& gains, const PhaseState& x,
                        double t) {
  require_inputs(sys, x);
  const InertiaAt in(sys, x.q);
  const Vector p_tilde = in.M() * (in.solve(x.p) - ref.qdot_d(t));
  return p_tilde + gains.Lambda * (x.q - ref.q_d(t));
}

PhaseState state_from_error(const MechanicalPHSystem& sys,
                            const ReferenceTrajectory& ref,
                            const ControllerGains& gains, const ErrorState& e) {
  require_size(e.q_tilde, sys.dimension(), "state_from_error: q_tilde");
  require_size(e.sigma, sys.dimension(), "state_from_error: sigma");
  const Vector q = e.q_tilde + ref.q_d(e.t);
  return PhaseState{q, e.sigma + p_reference(sys, ref, q, e.t, gains), e.t};
}

Vector closed_loop_error_field(const MechanicalPHSystem& sys,
                               const ReferenceTrajectory& ref,
                               const ControllerGains& gains,
                               const ErrorState& e, double t) {
  const Eigen::Index n = sys.dimension();
  require_size(e.q_tilde, n, "closed_loop_error_field: q_tilde");
  require_size(e.sigma, n, "closed_loop_error_field: sigma");
  const Vector q = e.q_tilde + ref.q_d(t);
  const InertiaAt in(sys, q);
  const Vector b = in.solve(e.sigma);
  const Vector c = in.solve(Vector(gains.Lambda * e.q_tilde));
  const Matrix E = in.coriolis(b) - 0.5 * in.rate(b) + sys.damping(q);
  Vector f(2 * n);
  f.head(n) = -c + b;
  f.tail(n) = -c - (E + gains.Kd) * b;
  return f;
}

Vector closed_loop_field(const MechanicalPHSystem& sys,
                         const ReferenceTrajectory& ref,
                         const ControllerGains& gains, const PhaseState& x,
                         double t, ControlMode mode) {
  const ControlSignal c = control_law(sys, ref, gains, x, t);
  return open_loop_field(sys, x, mode == ControlMode::kFull ? c.u : c.u_eq);
}

PhaseState desired_state(const MechanicalPHSystem& sys,
                         const ReferenceTrajectory& ref, double t) {
  const Vector q_d = ref.q_d(t);
  return PhaseState{q_d, sys.inertia(q_d) * ref.qdot_d(t), t};
}

}  // namespace phtrack
