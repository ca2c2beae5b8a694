#include <gtest/gtest.h>

#include <random>

#include "phtrack/tracking.hpp"
#include "support.hpp"

using namespace phtrack;

namespace {

class Tracking : public ::testing::Test {
 protected:
  std::shared_ptr<const MechanicalPHSystem> sys = oracle::scara();
  ReferenceTrajectory ref = oracle::benchmark_reference();
  ControllerGains gains = oracle::benchmark_gains();
  std::mt19937_64 rng{3};

  PhaseState random_state(double t) {
    return {oracle::random_vector(rng, 3, 2.0), oracle::random_vector(rng, 3, 2.0), t};
  }
};

TEST_F(Tracking, ReferenceMomentumByHand) {
  const double t = 0.8;
  const Vector q{{0.1, 0.2, 0.3}};
  const Vector qd{{std::sin(t) + 1, std::sin(t), std::sin(t)}};
  const Vector qd_dot = Vector::Constant(3, std::cos(t));
  const Vector expected = oracle::scara_inertia(q) * qd_dot - 15.0 * (q - qd);
  EXPECT_LT((p_reference(*sys, ref, q, t, gains) - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST_F(Tracking, ErrorCoordinatesRoundTrip) {
  for (int i = 0; i < 20; ++i) {
    const double t = 0.37 * i;
    const PhaseState x = random_state(t);
    const ErrorState e = error_coordinates(*sys, ref, gains, x, t);
    const PhaseState back = state_from_error(*sys, ref, gains, e);
    EXPECT_LT((back.q - x.q).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((back.p - x.p).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((sliding_variable(*sys, ref, gains, x, t) - e.sigma).cwiseAbs().maxCoeff(),
              1e-12);
  }
}

// d/dt p_r along the closed-loop flow, by differencing p_r(q(t), t).
TEST_F(Tracking, ReferenceMomentumRateMatchesTimeDerivative) {
  for (int i = 0; i < 10; ++i) {
    const double t = 0.5 + i;
    const PhaseState x = random_state(t);
    const Vector qdot = oracle::scara_inertia(x.q).inverse() * x.p;
    const auto pr = [&](double s) {
      return p_reference(*sys, ref, Vector(x.q + (s - t) * qdot), s, gains);
    };
    const double h = 1e-5;
    const Vector fd = (pr(t + h) - pr(t - h)) / (2 * h);
    EXPECT_LT((p_reference_rate(*sys, ref, x, t, gains) - fd).cwiseAbs().maxCoeff(), 1e-5);
  }
}

// The error field must be the time derivative of e(x(t), t) along the
// closed-loop plant.
TEST_F(Tracking, ErrorFieldIsPushforwardOfClosedLoop) {
  for (int i = 0; i < 20; ++i) {
    const double t = 0.3 * i;
    const PhaseState x = random_state(t);
    const Vector f = closed_loop_field(*sys, ref, gains, x, t);
    const auto e_at = [&](double s) {
      const Vector z = x.stacked() + (s - t) * f;
      return error_coordinates(*sys, ref, gains, PhaseState::from_stacked(z, s), s).stacked();
    };
    const double h = 1e-5;
    const Vector fd = (e_at(t + h) - e_at(t - h)) / (2 * h);
    const Vector analytic =
        closed_loop_error_field(*sys, ref, gains, error_coordinates(*sys, ref, gains, x, t), t);
    EXPECT_LT((analytic - fd).cwiseAbs().maxCoeff(), 1e-4 * std::max(1.0, fd.norm()));
  }
}

TEST_F(Tracking, AttractivityVanishesOnTarget) {
  for (double t : {0.0, 1.0, 4.2}) {
    const PhaseState x = state_from_error(*sys, ref, gains,
                                          {Vector::Zero(3), Vector::Zero(3), t});
    const auto u = control_law(*sys, ref, gains, x, t);
    EXPECT_LT(u.u_at.cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((u.u - u.u_eq).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST_F(Tracking, EquivalentControlKeepsZeroSlidingVariableStationary) {
  const double t = 1.3;
  const PhaseState x = state_from_error(*sys, ref, gains,
                                        {Vector{{0.5, -0.5, 0.2}}, Vector::Zero(3), t});
  const Vector f = closed_loop_field(*sys, ref, gains, x, t, ControlMode::kEquivalentOnly);
  // sigma = p - p_r; its rate must vanish when sigma = 0 and u = u_eq.
  const Vector sigma_rate = f.tail(3) - p_reference_rate(*sys, ref, x, t, gains);
  EXPECT_LT(sigma_rate.cwiseAbs().maxCoeff(), 1e-10);
}

TEST_F(Tracking, SingularInputMapIsReported) {
  auto def = MechanicalPHSystem::Definition{};
  def.n = 2;
  def.inertia = [](const Vector&) { return Matrix::Identity(2, 2).eval(); };
  def.potential = [](const Vector&) { return 0.0; };
  def.damping = [](const Vector&) { return Matrix::Zero(2, 2).eval(); };
  def.input_map = [](const Vector&) { return Matrix(Vector{{1.0, 0.0}}.asDiagonal()); };
  def.inertia_bounds = {1.0, 1.0};
  const MechanicalPHSystem under(def);
  const auto r = constant_reference(Vector::Zero(2));
  const auto g = ControllerGains::diagonal(Vector::Ones(2), Vector::Ones(2));
  EXPECT_THROW(control_law(under, r, g, {Vector::Ones(2), Vector::Zero(2), 0.0}, 0.0),
               SingularInputMapError);
}

TEST(Gains, ValidationRules) {
  auto g = oracle::benchmark_gains();
  EXPECT_NO_THROW(g.validate(3));
  EXPECT_THROW(g.validate(2), DimensionError);
  g.Lambda(0, 1) = 1.0;
  EXPECT_THROW(g.validate(3), ValidationError);
  g = oracle::benchmark_gains();
  g.Lambda(2, 2) = 0.0;
  EXPECT_THROW(g.validate(3), ValidationError);
  g = oracle::benchmark_gains();
  g.Kd(1, 1) = -1.0;
  EXPECT_THROW(g.validate(3), ValidationError);
  g = oracle::benchmark_gains();
  g.Kd.setZero();
  EXPECT_NO_THROW(g.validate(3));
}

TEST(Reference, SinusoidDerivativesAreConsistent) {
  EXPECT_LT(reference_consistency_residual(oracle::benchmark_reference(), 0.0, 10.0, 101), 1e-6);
  const auto r = sinusoidal_reference(Vector{{2.0}}, Vector{{3.0}}, Vector{{1.0}},
                                      Vector{{0.5}});
  EXPECT_NEAR(r.q_d(0.2)[0], 2 * std::sin(0.6 + 0.5) + 1, 1e-15);
  EXPECT_NEAR(r.qddot_d(0.2)[0], -18 * std::sin(0.6 + 0.5), 1e-12);
}

}  // namespace
