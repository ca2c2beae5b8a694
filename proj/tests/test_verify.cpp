#include <gtest/gtest.h>

#include <map>

#include "phtrack/verify.hpp"
#include "support.hpp"

using namespace phtrack;

namespace {

models::Model scara_model() {
  return {"scara", oracle::scara(), models::scara_configuration_grid};
}

std::map<std::string, verify::PropertyResult> run(const verify::SuiteOptions& opts) {
  std::map<std::string, verify::PropertyResult> out;
  for (auto& r : verify::run_property_suite(scara_model(), oracle::benchmark_reference(),
                                            oracle::benchmark_gains(), opts)) {
    out[r.name] = r;
  }
  return out;
}

verify::SuiteOptions small(std::uint64_t seed) {
  verify::SuiteOptions o;
  o.seed = seed;
  o.samples = 200;
  o.passivity_horizon = 0.5;
  return o;
}

TEST(PropertySuite, AllPassOnScara) {
  for (const auto& [name, r] : run(small(7))) {
    EXPECT_TRUE(r.pass) << name << ": " << r.max_residual << " vs " << r.tolerance;
    EXPECT_GT(r.samples, 0u) << name;
  }
}

TEST(PropertySuite, SeedChangesSamplesNotVerdicts) {
  const auto a = run(small(7));
  const auto b = run(small(8));
  ASSERT_EQ(a.size(), b.size());
  bool any_residual_differs = false;
  for (const auto& [name, r] : a) {
    EXPECT_EQ(r.pass, b.at(name).pass) << name;
    any_residual_differs |= r.max_residual != b.at(name).max_residual;
  }
  EXPECT_TRUE(any_residual_differs);
}

TEST(PropertySuite, SameSeedIsReproducible) {
  const auto a = run(small(3));
  const auto b = run(small(3));
  for (const auto& [name, r] : a) EXPECT_EQ(r.max_residual, b.at(name).max_residual) << name;
}

// Mutation check: flipping the sign of S must break the energy identity while
// leaving the structural properties intact.
TEST(PropertySuite, NegatedCoriolisIsCaught) {
  auto opts = small(7);
  opts.coriolis = [](const MechanicalPHSystem& s, const Vector& q, const Vector& v) {
    return Matrix(-coriolis_S(s, q, v));
  };
  const auto r = run(opts);
  EXPECT_FALSE(r.at("coriolis_identity").pass);
  EXPECT_TRUE(r.at("coriolis_skew_symmetry").pass);
  EXPECT_TRUE(r.at("coriolis_linearity").pass);
}

TEST(Passivity, WrongDampingIsCaught) {
  sim::Scenario sc;
  sc.system = oracle::scara();
  sc.reference = oracle::benchmark_reference();
  sc.gains = oracle::benchmark_gains();
  sc.initial = {Vector::Zero(3), Vector::Zero(3), 0.0};
  sc.horizon = 2.0;
  sc.dynamics = sim::Dynamics::kOpenLoop;
  sc.input = [](double t) { return Vector{{std::sin(t), std::cos(t), 0.1}}; };
  const auto log = sim::simulate(sc);
  ASSERT_TRUE(log.ok);
  EXPECT_LT(verify::passivity_residual(*sc.system, log, sc.step).max_residual, 1e-3);

  models::ScaraParams undamped;
  undamped.d = 0.0;
  EXPECT_GT(verify::passivity_residual(models::scara(undamped), log, sc.step).max_residual,
            1e-2);
}

TEST(Sampling, BallRespectsRadius) {
  std::mt19937_64 rng(1);
  double largest = 0.0;
  for (int i = 0; i < 2000; ++i) largest = std::max(largest, verify::sample_ball(rng, 3, 10.0).norm());
  EXPECT_LE(largest, 10.0);
  EXPECT_GT(largest, 9.5);
}

}  // namespace
