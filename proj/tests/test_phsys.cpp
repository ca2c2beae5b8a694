#include <gtest/gtest.h>

#include <random>

#include "phtrack/phsys.hpp"
#include "support.hpp"

using namespace phtrack;

namespace {

class ScaraDynamics : public ::testing::Test {
 protected:
  std::shared_ptr<const MechanicalPHSystem> sys = oracle::scara();
  std::mt19937_64 rng{42};
};

TEST_F(ScaraDynamics, HamiltonianMatchesHandComputation) {
  const Vector q{{0.3, 1.1, -0.4}};
  const Vector p{{0.5, -0.2, 2.0}};
  const Matrix M = oracle::scara_inertia(q);
  const double expected = 0.5 * p.dot(M.inverse() * p) + 3 * 9.81 * q[2];
  EXPECT_NEAR(hamiltonian(*sys, {q, p, 0.0}), expected, 1e-12);
}

TEST_F(ScaraDynamics, GradientMatchesFiniteDifferences) {
  for (int i = 0; i < 20; ++i) {
    const Vector q = oracle::random_vector(rng, 3, 3.0);
    const Vector p = oracle::random_vector(rng, 3, 3.0);
    const auto H = [&](const Vector& qq, const Vector& pp) {
      return 0.5 * pp.dot(oracle::scara_inertia(qq).inverse() * pp) + 3 * 9.81 * qq[2];
    };
    const auto g = hamiltonian_gradient(*sys, {q, p, 0.0});
    EXPECT_LT((g.dH_dq - oracle::grad([&](const Vector& z) { return H(z, p); }, q))
                  .cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_LT((g.dH_dp - oracle::scara_inertia(q).inverse() * p).cwiseAbs().maxCoeff(),
              1e-12);
  }
}

TEST_F(ScaraDynamics, CoriolisIsSkewAndLinear) {
  for (int i = 0; i < 50; ++i) {
    const Vector q = oracle::random_vector(rng, 3, 10.0);
    const Vector v = oracle::random_vector(rng, 3, 10.0);
    const Vector w = oracle::random_vector(rng, 3, 10.0);
    const Matrix S = coriolis_S(*sys, q, v);
    EXPECT_LT((S + S.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    const Matrix combo = coriolis_S(*sys, q, Vector(2.0 * v - 0.5 * w));
    EXPECT_LT((combo - 2.0 * S + 0.5 * coriolis_S(*sys, q, w)).cwiseAbs().maxCoeff(),
              1e-10);
  }
}

TEST_F(ScaraDynamics, CoriolisEnergyIdentityAgainstOracle) {
  for (int i = 0; i < 50; ++i) {
    const Vector q = oracle::random_vector(rng, 3, 5.0);
    const Vector p = oracle::random_vector(rng, 3, 5.0);
    const Vector v = oracle::scara_inertia(q).inverse() * p;
    const Vector lhs = (coriolis_S(*sys, q, v) - 0.5 * inertia_rate(*sys, q, v)) * v;
    const Vector rhs = oracle::grad(
        [&](const Vector& z) { return 0.5 * p.dot(oracle::scara_inertia(z).inverse() * p); }, q);
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_LT(coriolis_identity_residual(*sys, q, p), 1e-4);
  }
}

// The plant written in Lagrangian form with Christoffel symbols must give the
// same momentum rate: pdot = d/dt(M qdot) = Mdot qdot + M qddot.
TEST_F(ScaraDynamics, OpenLoopFieldMatchesLagrangianForm) {
  for (int i = 0; i < 20; ++i) {
    const Vector q = oracle::random_vector(rng, 3, 3.0);
    const Vector p = oracle::random_vector(rng, 3, 3.0);
    const Vector u = oracle::random_vector(rng, 3, 3.0);
    const Matrix M = oracle::scara_inertia(q);
    const Vector qdot = M.inverse() * p;
    const Vector qddot = M.inverse() * (u - oracle::scara_christoffel(q, qdot) * qdot -
                                        oracle::scara_gravity(q) - 0.2 * qdot);
    const Matrix Mdot = oracle::jac(
        [&](const Vector& z) {
          const Matrix Mz = oracle::scara_inertia(z);
          return Vector(Mz * qdot);
        }, q) ;
    // Mdot qdot = sum_k dM/dq_k qdot_k qdot = jac(M qdot) qdot.
    const Vector pdot = Mdot * qdot + M * qddot;

    const Vector f = open_loop_field(*sys, {q, p, 0.0}, u);
    EXPECT_LT((f.head(3) - qdot).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((f.tail(3) - pdot).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_LT((f - open_loop_field_energy_form(*sys, {q, p, 0.0}, u)).cwiseAbs().maxCoeff(),
              1e-8);
    EXPECT_LT((f - reassembled_field(*sys, {q, p, 0.0}, u)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST_F(ScaraDynamics, StructureMatricesHaveExpectedSymmetry) {
  const PhaseState x{Vector{{0.1, 0.7, 0.0}}, Vector{{1.0, -2.0, 0.5}}, 0.0};
  const auto s = structure_decomposition(*sys, x);
  EXPECT_LT((s.J + s.J.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((s.R - s.R.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((s.Phi - s.Phi.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_DOUBLE_EQ(s.R(3, 3), 0.2);
  EXPECT_DOUBLE_EQ(s.R(0, 0), 0.0);
}

TEST_F(ScaraDynamics, LagrangeIdentityHolds) {
  for (int i = 0; i < 20; ++i) {
    EXPECT_LT(lagrange_identity_residual(*sys, oracle::random_vector(rng, 3, 10.0),
                                         oracle::random_vector(rng, 3, 10.0)),
              1e-4);
  }
}

TEST_F(ScaraDynamics, MomentumCrossGradientMatchesFiniteDifferences) {
  for (int i = 0; i < 20; ++i) {
    const Vector q = oracle::random_vector(rng, 3, 5.0);
    const Vector a = oracle::random_vector(rng, 3, 5.0);
    const Vector b = oracle::random_vector(rng, 3, 5.0);
    const Vector fd = oracle::grad(
        [&](const Vector& z) { return a.dot(oracle::scara_inertia(z).inverse() * b); }, q);
    EXPECT_LT((momentum_cross_gradient(*sys, q, a, b) - fd).cwiseAbs().maxCoeff(), 1e-6);
  }
}

MechanicalPHSystem::Definition diagonal_definition(double m2) {
  MechanicalPHSystem::Definition def;
  def.n = 2;
  def.inertia = [m2](const Vector&) { return Matrix(Vector{{1.0, m2}}.asDiagonal()); };
  def.potential = [](const Vector&) { return 0.0; };
  def.damping = [](const Vector&) { return Matrix::Zero(2, 2).eval(); };
  def.input_map = [](const Vector&) { return Matrix::Identity(2, 2).eval(); };
  def.inertia_bounds = {std::min(1.0, m2), std::max(1.0, m2)};
  return def;
}

TEST(InertiaFactorization, RejectsIllConditionedInertia) {
  const MechanicalPHSystem bad(diagonal_definition(1e-14));
  EXPECT_THROW(InertiaAt(bad, Vector::Zero(2)), SingularInertiaError);
  const MechanicalPHSystem ok(diagonal_definition(1e-6));
  EXPECT_NO_THROW(InertiaAt(ok, Vector::Zero(2)));
}

TEST(InertiaFactorization, FallsBackToFiniteDifferencePartials) {
  const MechanicalPHSystem sys(diagonal_definition(2.0));
  EXPECT_FALSE(sys.has_analytic_inertia_partials());
  for (const Matrix& d : sys.inertia_partials(Vector::Ones(2))) {
    EXPECT_LT(d.cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Dimensions, MismatchedStateIsRejected) {
  const auto sys = oracle::scara();
  EXPECT_THROW(hamiltonian(*sys, {Vector::Zero(2), Vector::Zero(3), 0.0}), DimensionError);
}

}  // namespace
