#pragma once

// Seeded randomized property suites over a model, reference and gains.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "phtrack/models.hpp"
#include "phtrack/sim.hpp"

namespace phtrack::verify {

using CoriolisFn =
    std::function<Matrix(const MechanicalPHSystem&, const Vector&, const Vector&)>;

struct PropertyResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;
  bool pass = false;
};

struct SuiteOptions {
  std::uint64_t seed = 7;
  std::size_t samples = 1000;
  /// States are drawn with ||q||, ||p|| <= radius.
  double radius = 10.0;
  /// Horizon of the open-loop passivity run.
  double passivity_horizon = 2.0;
  /// S(q, v) under test; swapped out by mutation tests.
  CoriolisFn coriolis = coriolis_S;
};

/// Uniform sample from the closed ball of the given radius.
Vector sample_ball(std::mt19937_64& rng, Eigen::Index n, double radius);

/// || [S(q,p) - 1/2 M'] M^-1 p - d/dq(1/2 p^T M^-1 p) ||_inf with a
/// pluggable S.
double coriolis_identity_residual(const MechanicalPHSystem& sys,
                                  const Vector& q, const Vector& p,
                                  const CoriolisFn& coriolis);

struct PassivityResult {
  double max_residual = 0.0;
  std::size_t samples = 0;
};

/// Centered-difference H' from the log against the supply rate:
/// max_k |H'(t_k) + qdot^T D qdot - u^T G^T qdot| over interior samples.
PassivityResult passivity_residual(const MechanicalPHSystem& sys,
                                   const sim::SimLog& log, double step);

std::vector<PropertyResult> run_property_suite(const models::Model& model,
                                               const ReferenceTrajectory& ref,
                                               const ControllerGains& gains,
                                               const SuiteOptions& options);

}  // namespace phtrack::verify
