#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "phtrack/sim.hpp"

namespace phtrack::csv {

/// Column names for an n-dimensional system, in file order:
/// t, q1..qn, p1..pn, qd1..qdn, u1..un, ueq1..ueqn, uat1..uatn,
/// qtilde1..qtilden, sigma1..sigman, H, H_d, distance, beta, V
std::vector<std::string> trajectory_columns(Eigen::Index n);

/// Lossless (%.17g) rendering of a double.
std::string format_double(double v);

void write_trajectory(std::ostream& out, const sim::SimLog& log,
                      Eigen::Index n);

}  // namespace phtrack::csv
