#include "phtrack/csv.hpp"

#include <cstdio>

namespace phtrack::csv {

std::vector<std::string> trajectory_columns(Eigen::Index n) {
  std::vector<std::string> cols{"t"};
  for (const char* prefix :
       {"q", "p", "qd", "u", "ueq", "uat", "qtilde", "sigma"}) {
    for (Eigen::Index i = 1; i <= n; ++i) {
      cols.push_back(prefix + std::to_string(i));
    }
  }
  for (const char* c : {"H", "H_d", "distance", "beta", "V"}) cols.push_back(c);
  return cols;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory(std::ostream& out, const sim::SimLog& log,
                      Eigen::Index n) {
  const auto cols = trajectory_columns(n);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out << (i ? "," : "") << cols[i];
  }
  out << '\n';
  for (const auto& s : log.samples) {
    out << format_double(s.t);
    for (const Vector* v :
         {&s.q, &s.p, &s.q_d, &s.u, &s.u_eq, &s.u_at, &s.q_tilde, &s.sigma}) {
      for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_double((*v)[i]);
    }
    for (double v : {s.H, s.H_d, s.distance, s.beta, s.V}) {
      out << ',' << format_double(v);
    }
    out << '\n';
  }
}

}  // namespace phtrack::csv
