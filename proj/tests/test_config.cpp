#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "phtrack/config.hpp"
#include "support.hpp"

using namespace phtrack;
using nlohmann::json;

namespace {

TEST(Preset, MatchesBenchmarkSetup) {
  const auto c = config::scara_preset();
  EXPECT_EQ(c.model.name, "scara");
  EXPECT_EQ(c.gains.Lambda, oracle::benchmark_gains().Lambda);
  EXPECT_EQ(c.gains.Kd, oracle::benchmark_gains().Kd);
  EXPECT_EQ(c.horizon, 10.0);
  EXPECT_EQ(c.step, 1e-3);
  EXPECT_EQ(c.initial.q, Vector::Zero(3));
  const auto ref = config::make_reference(c.reference);
  const auto want = oracle::benchmark_reference();
  for (double t : {0.0, 1.7, 9.9}) {
    EXPECT_LT((ref.q_d(t) - want.q_d(t)).cwiseAbs().maxCoeff(), 1e-15);
  }
  EXPECT_NEAR(c.initial_tangent.norm(), 1.0, 1e-15);
}

TEST(Preset, BundledFileEqualsBuiltinPreset) {
  auto file = config::load(PHTRACK_SOURCE_DIR "/configs/scara_tracking.json");
  auto builtin = config::scara_preset();
  builtin.output_dir = file.output_dir;
  EXPECT_EQ(config::to_json(file), config::to_json(builtin));
}

config::RunConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 5.0);
  std::uniform_int_distribution<int> pick(0, 2);
  json j;
  const int model = pick(rng);
  Eigen::Index n = 3;
  if (model == 0) {
    j["model"] = {{"name", "scara"}, {"params", {{"m1", u(rng)}, {"l2", u(rng)}, {"d", u(rng)}}}};
  } else if (model == 1) {
    n = 1 + pick(rng);
    j["model"] = {{"name", "toy_constant_inertia"},
                  {"params", {{"n", n}, {"mass", u(rng)}, {"damping", u(rng)}}}};
  } else {
    n = 1;
    j["model"] = {{"name", "toy_pendulum"}, {"params", {{"length", u(rng)}}}};
  }
  // A random symmetric positive definite Lambda.
  const Matrix A = oracle::random_vector(rng, n * n, 1.0).reshaped(n, n);
  const Matrix L = A * A.transpose() + Matrix::Identity(n, n);
  std::vector<std::vector<double>> rows(n, std::vector<double>(n));
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) rows[r][c] = L(r, c);
  std::vector<double> kd(n), amp(n), om(n), off(n), q0(n), p0(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    kd[i] = u(rng);
    amp[i] = u(rng);
    om[i] = u(rng);
    off[i] = u(rng) - 2.5;
    q0[i] = u(rng);
    p0[i] = u(rng);
  }
  j["gains"] = {{"lambda", rows}, {"kd", kd}};
  j["reference"] = {{"amplitude", amp}, {"omega", om}, {"offset", off}};
  j["initial_state"] = {{"q", q0}, {"p", p0}};
  j["horizon"] = u(rng);
  j["step"] = 1e-3 * u(rng);
  j["modes"] = {"closed_loop", "prolonged", "error"};
  j["seed"] = std::uniform_int_distribution<std::uint64_t>()(rng);
  j["input"] = {{"amplitude", amp}, {"omega", om}, {"offset", off}};
  j["distance"] = {{"x", {{"q", q0}, {"p", p0}}}, {"x_d", {{"q", off}, {"p", amp}}},
                   {"segments", 32}};
  return config::from_json(j);
}

// serialize . parse = identity, through text.
TEST(RoundTrip, SerializeParseIsIdentity) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 50; ++i) {
    const auto c = random_config(rng);
    const json once = config::to_json(c);
    const auto back = config::from_json(json::parse(once.dump()));
    EXPECT_EQ(config::to_json(back), once);
    EXPECT_EQ(back.gains.Lambda, c.gains.Lambda);
    EXPECT_EQ(back.seed, c.seed);
    EXPECT_EQ(back.modes, c.modes);
    EXPECT_EQ(back.horizon, c.horizon);
  }
}

TEST(RoundTrip, PresetRoundTrips) {
  const auto c = config::scara_preset();
  EXPECT_EQ(config::to_json(config::from_json(config::to_json(c))), config::to_json(c));
}

TEST(Validation, RejectsBadInput) {
  EXPECT_THROW(config::from_json(json{{"horizon", 0.0}}), ValidationError);
  EXPECT_THROW(config::from_json(json{{"step", 0.0}}), ValidationError);
  EXPECT_THROW(config::from_json(json{{"horizonn", 1.0}}), ValidationError);
  EXPECT_THROW(config::from_json(json{{"modes", {"fast"}}}), ValidationError);
  EXPECT_THROW(config::from_json(json{{"model", {{"name", "quadrotor"}}}}), ValidationError);
  EXPECT_THROW(config::from_json(json{{"model", {{"name", "scara"}, {"params", {{"m9", 1}}}}}}),
               ValidationError);
  EXPECT_THROW(config::from_json(json{{"horizon", "ten"}}), ValidationError);
  const json asym = {{"gains", {{"lambda", {{15, 1, 0}, {0, 15, 0}, {0, 0, 15}}}}}};
  EXPECT_THROW(config::from_json(asym), ValidationError);
  const json short_kd = {{"gains", {{"kd", {1, 2}}}}};
  EXPECT_THROW(config::from_json(short_kd), std::invalid_argument);
  EXPECT_THROW(config::load("/nonexistent/config.json"), ValidationError);
}

TEST(Validation, DefaultsForOtherDimensions) {
  const auto c = config::from_json(json{{"model", {{"name", "toy_pendulum"}}}});
  EXPECT_EQ(c.gains.Lambda.rows(), 1);
  EXPECT_EQ(c.initial.q.size(), 1);
  EXPECT_EQ(c.initial_tangent.size(), 2);
  const auto model = config::make_model(c.model);
  EXPECT_EQ(model.system->dimension(), 1);
}

TEST(Scenario, BuiltFromConfig) {
  auto c = config::scara_preset();
  const auto model = config::make_model(c.model);
  const auto sc = config::make_scenario(c, model, sim::Dynamics::kProlonged);
  EXPECT_EQ(sc.steps(), 10000u);
  EXPECT_EQ(sc.initial_tangent, c.initial_tangent);
  EXPECT_NO_THROW(sc.validate());
  c.input = config::SinusoidSpec{Vector{{1.0, 1.0, 0.0}}, Vector::Ones(3),
                                 Vector{{0.0, std::acos(0.0), 0.0}}, Vector{{0.0, 0.0, 0.1}}};
  const auto u = config::make_input(*c.input);
  // (sin t, cos t, 0.1)
  EXPECT_NEAR(u(0.3)[0], std::sin(0.3), 1e-15);
  EXPECT_NEAR(u(0.3)[1], std::cos(0.3), 1e-15);
  EXPECT_NEAR(u(0.3)[2], 0.1, 1e-15);
}

}  // namespace
