#include "phtrack/phsys.hpp"

#include <cmath>
#include <string>

#include "phtrack/numeric.hpp"

namespace phtrack {

MechanicalPHSystem::MechanicalPHSystem(Definition def) : def_(std::move(def)) {
  if (def_.n <= 0) throw ValidationError("system dimension must be positive");
  if (!def_.inertia || !def_.potential || !def_.damping || !def_.input_map) {
    throw ValidationError(
        "inertia, potential, damping and input_map providers are required");
  }
  const auto [m1, m2] = def_.inertia_bounds;
  if (!(m1 > 0.0) || !(m2 >= m1)) {
    throw ValidationError("inertia bounds must satisfy 0 < m1 <= m2");
  }
}

Matrix MechanicalPHSystem::inertia(const Vector& q) const {
  require_size(q, def_.n, "inertia: q");
  Matrix M = def_.inertia(q);
  require_shape(M, def_.n, "inertia: M(q)");
  return M;
}

std::vector<Matrix> MechanicalPHSystem::inertia_partials(
    const Vector& q) const {
  if (!def_.inertia_partials) return inertia_partials_fd(q);
  require_size(q, def_.n, "inertia_partials: q");
  auto dM = def_.inertia_partials(q);
  if (static_cast<Eigen::Index>(dM.size()) != def_.n) {
    throw DimensionError("inertia_partials: expected one matrix per coordinate");
  }
  for (const auto& m : dM) require_shape(m, def_.n, "inertia_partials: dM/dq_k");
  return dM;
}

std::vector<Matrix> MechanicalPHSystem::inertia_partials_fd(
    const Vector& q) const {
  require_size(q, def_.n, "inertia_partials: q");
  return numeric::matrix_partials(def_.inertia, q);
}

double MechanicalPHSystem::potential(const Vector& q) const {
  require_size(q, def_.n, "potential: q");
  return def_.potential(q);
}

Vector MechanicalPHSystem::potential_gradient(const Vector& q) const {
  require_size(q, def_.n, "potential_gradient: q");
  if (def_.potential_gradient) {
    Vector g = def_.potential_gradient(q);
    require_size(g, def_.n, "potential_gradient: dV/dq");
    return g;
  }
  return numeric::gradient(def_.potential, q);
}

Matrix MechanicalPHSystem::damping(const Vector& q) const {
  require_size(q, def_.n, "damping: q");
  Matrix D = def_.damping(q);
  require_shape(D, def_.n, "damping: D(q)");
  return D;
}

Matrix MechanicalPHSystem::input_map(const Vector& q) const {
  require_size(q, def_.n, "input_map: q");
  Matrix G = def_.input_map(q);
  require_shape(G, def_.n, "input_map: G(q)");
  return G;
}

// ---------------------------------------------------------------------------

InertiaAt::InertiaAt(const MechanicalPHSystem& sys, const Vector& q)
    : M_(sys.inertia(q)) {
  if (!M_.allFinite()) throw SingularInertiaError("M(q) has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Matrix> es(M_, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxCondition) {
    throw SingularInertiaError("M(q) is singular (min eigenvalue " +
                               std::to_string(lo) + ", max " +
                               std::to_string(hi) + ")");
  }
  condition_ = hi / lo;
  llt_.compute(M_);
  if (llt_.info() != Eigen::Success) {
    throw SingularInertiaError("Cholesky factorization of M(q) failed");
  }
  dM_ = sys.inertia_partials(q);
}

Matrix InertiaAt::inverse() const {
  return llt_.solve(Matrix::Identity(M_.rows(), M_.cols()));
}

Matrix InertiaAt::coriolis(const Vector& v) const {
  const Eigen::Index n = M_.rows();
  require_size(v, n, "coriolis_S: v");
  // T(i, j) = sum_k v_k dM_ik/dq_j, i.e. column j is (dM/dq_j) v.
  Matrix T(n, n);
  for (Eigen::Index j = 0; j < n; ++j) T.col(j) = dM_[j] * v;
  return 0.5 * (T - T.transpose());
}

Matrix InertiaAt::rate(const Vector& v) const {
  const Eigen::Index n = M_.rows();
  require_size(v, n, "inertia_rate: qdot");
  Matrix Md = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) Md += dM_[k] * v[k];
  return Md;
}

// ---------------------------------------------------------------------------

namespace {

void require_state(const MechanicalPHSystem& sys, const PhaseState& x) {
  require_size(x.q, sys.dimension(), "state q");
  require_size(x.p, sys.dimension(), "state p");
}

}  // namespace

double hamiltonian(const MechanicalPHSystem& sys, const PhaseState& x) {
  require_state(sys, x);
  const InertiaAt in(sys, x.q);
  return 0.5 * x.p.dot(in.solve(x.p)) + sys.potential(x.q);
}

HamiltonianGradient hamiltonian_gradient(const MechanicalPHSystem& sys,
                                         const PhaseState& x) {
  require_state(sys, x);
  const InertiaAt in(sys, x.q);
  const Vector qdot = in.solve(x.p);
  Vector dH_dq = sys.potential_gradient(x.q);
  // d(M^-1)/dq_k = -M^-1 dM/dq_k M^-1
  for (Eigen::Index k = 0; k < sys.dimension(); ++k) {
    dH_dq[k] -= 0.5 * qdot.dot(in.partials()[k] * qdot);
  }
  return {std::move(dH_dq), qdot};
}

Matrix coriolis_S(const MechanicalPHSystem& sys, const Vector& q,
                  const Vector& v) {
  require_size(q, sys.dimension(), "coriolis_S: q");
  require_size(v, sys.dimension(), "coriolis_S: v");
  const auto dM = sys.inertia_partials(q);
  const Eigen::Index n = sys.dimension();
  Matrix T(n, n);
  for (Eigen::Index j = 0; j < n; ++j) T.col(j) = dM[j] * v;
  return 0.5 * (T - T.transpose());
}

Matrix inertia_rate(const MechanicalPHSystem& sys, const Vector& q,
                    const Vector& qdot) {
  require_size(q, sys.dimension(), "inertia_rate: q");
  require_size(qdot, sys.dimension(), "inertia_rate: qdot");
  const auto dM = sys.inertia_partials(q);
  Matrix Md = Matrix::Zero(sys.dimension(), sys.dimension());
  for (Eigen::Index k = 0; k < sys.dimension(); ++k) Md += dM[k] * qdot[k];
  return Md;
}

Matrix E_matrix(const MechanicalPHSystem& sys, const Vector& q,
                const Vector& p) {
  require_size(p, sys.dimension(), "E_matrix: p");
  const InertiaAt in(sys, q);
  const Vector v = in.solve(p);
  return in.coriolis(v) - 0.5 * in.rate(v) + sys.damping(q);
}

Vector open_loop_field(const MechanicalPHSystem& sys, const PhaseState& x,
                       const Vector& u) {
  require_size(u, sys.dimension(), "open_loop_field: u");
  const auto grad = hamiltonian_gradient(sys, x);
  const Eigen::Index n = sys.dimension();
  Vector f(2 * n);
  f.head(n) = grad.dH_dp;
  f.tail(n) = -grad.dH_dq - sys.damping(x.q) * grad.dH_dp +
              sys.input_map(x.q) * u;
  return f;
}

Vector open_loop_field_energy_form(const MechanicalPHSystem& sys,
                                   const PhaseState& x, const Vector& u) {
  require_state(sys, x);
  require_size(u, sys.dimension(), "open_loop_field: u");
  const InertiaAt in(sys, x.q);
  const Vector v = in.solve(x.p);
  const Matrix E = in.coriolis(v) - 0.5 * in.rate(v) + sys.damping(x.q);
  const Eigen::Index n = sys.dimension();
  Vector f(2 * n);
  f.head(n) = v;
  f.tail(n) = -sys.potential_gradient(x.q) - E * v + sys.input_map(x.q) * u;
  return f;
}

StructureMatrices structure_decomposition(const MechanicalPHSystem& sys,
                                          const PhaseState& x) {
  require_state(sys, x);
  const InertiaAt in(sys, x.q);
  const Vector v = in.solve(x.p);
  const Eigen::Index n = sys.dimension();
  const Matrix I = Matrix::Identity(n, n);

  StructureMatrices out;
  out.J = Matrix::Zero(2 * n, 2 * n);
  out.J.topRightCorner(n, n) = I;
  out.J.bottomLeftCorner(n, n) = -I;
  out.J.bottomRightCorner(n, n) = -in.coriolis(v);

  out.R = Matrix::Zero(2 * n, 2 * n);
  out.R.bottomRightCorner(n, n) = sys.damping(x.q);

  out.Phi = Matrix::Zero(2 * n, 2 * n);
  out.Phi.bottomRightCorner(n, n) = 0.5 * in.rate(v);
  return out;
}

Vector reassembled_field(const MechanicalPHSystem& sys, const PhaseState& x,
                         const Vector& u) {
  require_size(u, sys.dimension(), "reassembled_field: u");
  const auto sm = structure_decomposition(sys, x);
  const InertiaAt in(sys, x.q);
  const Eigen::Index n = sys.dimension();
  Vector effort(2 * n);
  effort << sys.potential_gradient(x.q), in.solve(x.p);
  Vector f = (sm.J - (sm.R - sm.Phi)) * effort;
  f.tail(n) += sys.input_map(x.q) * u;
  return f;
}

double coriolis_identity_residual(const MechanicalPHSystem& sys,
                                  const Vector& q, const Vector& p) {
  require_size(q, sys.dimension(), "coriolis_identity_residual: q");
  require_size(p, sys.dimension(), "coriolis_identity_residual: p");
  const InertiaAt in(sys, q);
  const Vector v = in.solve(p);
  const Vector lhs = (in.coriolis(v) - 0.5 * in.rate(v)) * v;
  const auto kinetic = [&](const Vector& qq) {
    const InertiaAt at(sys, qq);
    return 0.5 * p.dot(at.solve(p));
  };
  const Vector rhs = numeric::gradient(kinetic, q);
  return numeric::inf_norm(lhs - rhs);
}

double lagrange_identity_residual(const MechanicalPHSystem& sys,
                                  const Vector& q, const Vector& qdot) {
  require_size(q, sys.dimension(), "lagrange_identity_residual: q");
  require_size(qdot, sys.dimension(), "lagrange_identity_residual: qdot");
  const auto dM = sys.inertia_partials(q);
  const Eigen::Index n = sys.dimension();
  Matrix T(n, n);
  Matrix Md = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    T.col(k) = dM[k] * qdot;
    Md += dM[k] * qdot[k];
  }
  const Matrix S = 0.5 * (T - T.transpose());
  const auto kinetic = [&](const Vector& qq) {
    return 0.5 * qdot.dot(sys.inertia(qq) * qdot);
  };
  const Vector lhs = (S - 0.5 * Md) * qdot;
  return numeric::inf_norm(lhs + numeric::gradient(kinetic, q));
}

Vector momentum_cross_gradient(const MechanicalPHSystem& sys, const Vector& q,
                               const Vector& a, const Vector& b) {
  require_size(a, sys.dimension(), "momentum_cross_gradient: a");
  require_size(b, sys.dimension(), "momentum_cross_gradient: b");
  const InertiaAt in(sys, q);
  const Vector va = in.solve(a);
  const Vector vb = in.solve(b);
  return (in.coriolis(vb) - 0.5 * in.rate(vb)) * va +
         (in.coriolis(va) - 0.5 * in.rate(va)) * vb;
}

}  // namespace phtrack
