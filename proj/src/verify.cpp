#include "phtrack/verify.hpp"

#include <algorithm>
#include <cmath>

#include "phtrack/contraction.hpp"
#include "phtrack/numeric.hpp"

namespace phtrack::verify {

Vector sample_ball(std::mt19937_64& rng, Eigen::Index n, double radius) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  const double norm = v.norm();
  if (norm == 0.0) return Vector::Zero(n);
  const double r = radius * std::pow(uniform(rng), 1.0 / static_cast<double>(n));
  return v * (r / norm);
}

double coriolis_identity_residual(const MechanicalPHSystem& sys,
                                  const Vector& q, const Vector& p,
                                  const CoriolisFn& coriolis) {
  const InertiaAt in(sys, q);
  const Vector v = in.solve(p);
  const Vector lhs = (coriolis(sys, q, v) - 0.5 * in.rate(v)) * v;
  const auto kinetic = [&](const Vector& qq) {
    return 0.5 * p.dot(InertiaAt(sys, qq).solve(p));
  };
  return numeric::inf_norm(lhs - numeric::gradient(kinetic, q));
}

PassivityResult passivity_residual(const MechanicalPHSystem& sys,
                                   const sim::SimLog& log, double step) {
  PassivityResult out;
  const auto& s = log.samples;
  for (std::size_t k = 1; k + 1 < s.size(); ++k) {
    const double Hdot = (s[k + 1].H - s[k - 1].H) / (2.0 * step);
    const InertiaAt in(sys, s[k].q);
    const Vector qdot = in.solve(s[k].p);
    const double dissipated = qdot.dot(sys.damping(s[k].q) * qdot);
    const double supplied = s[k].u.dot(sys.input_map(s[k].q).transpose() * qdot);
    out.max_residual =
        std::max(out.max_residual, std::abs(Hdot + dissipated - supplied));
    ++out.samples;
  }
  return out;
}

namespace {

class Suite {
 public:
  Suite(const models::Model& model, const ReferenceTrajectory& ref,
        const ControllerGains& gains, const SuiteOptions& opts)
      : sys_(*model.system),
        model_(model),
        ref_(ref),
        gains_(gains),
        opts_(opts),
        rng_(opts.seed),
        n_(sys_.dimension()) {}

  std::vector<PropertyResult> run() {
    std::vector<PropertyResult> out;
    out.push_back(coriolis_identity());
    out.push_back(skew_symmetry());
    out.push_back(linearity());
    out.push_back(lagrange_identity());
    out.push_back(cross_gradient_identity());
    out.push_back(hamiltonian_gradient_fd());
    out.push_back(inertia_partials_fd());
    out.push_back(inertia_spd());
    out.push_back(field_assemblies());
    out.push_back(reference_consistency());
    out.push_back(zero_error_control());
    out.push_back(positivity_agreement());
    out.push_back(pi_assemblies());
    out.push_back(xi_symmetric_part());
    out.push_back(theta_conjugation());
    out.push_back(variational_jacobian());
    out.push_back(passivity());
    out.push_back(sliding_invariance());
    out.push_back(error_system_consistency());
    return out;
  }

 private:
  PropertyResult make(std::string name, double worst, double tol,
                      std::size_t samples) const {
    return {std::move(name), worst, tol, samples, worst < tol};
  }
  Vector draw() { return sample_ball(rng_, n_, opts_.radius); }
  double draw_time() {
    return std::uniform_real_distribution<double>(0.0, 10.0)(rng_);
  }

  PropertyResult coriolis_identity() {
    double worst = 0.0;
    for (std::size_t i = 0; i < opts_.samples; ++i) {
      const Vector q = draw();
      const Vector p = draw();
      worst = std::max(worst,
                       coriolis_identity_residual(sys_, q, p, opts_.coriolis));
    }
    return make("coriolis_identity", worst, 1e-4, opts_.samples);
  }

  PropertyResult skew_symmetry() {
    double worst = 0.0;
    for (std::size_t i = 0; i < opts_.samples; ++i) {
      const Matrix S = opts_.coriolis(sys_, draw(), draw());
      worst = std::max(worst, numeric::inf_norm(S + S.transpose()));
    }
    return make("coriolis_skew_symmetry", worst, 1e-12, opts_.samples);
  }

  PropertyResult linearity() {
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < opts_.samples; ++i) {
      const Vector q = draw();
      const Vector v1 = draw();
      const Vector v2 = draw();
      const double a = coef(rng_);
      const double b = coef(rng_);
      const Matrix lhs = opts_.coriolis(sys_, q, Vector(a * v1 + b * v2));
      const Matrix rhs =
          a * opts_.coriolis(sys_, q, v1) + b * opts_.coriolis(sys_, q, v2);
      worst = std::max(worst, numeric::inf_norm(lhs - rhs));
    }
    return make("coriolis_linearity", worst, 1e-10, opts_.samples);
  }

  PropertyResult lagrange_identity() {
    double worst = 0.0;
    for (std::size_t i = 0; i < opts_.samples; ++i) {
      worst = std::max(worst, lagrange_identity_residual(sys_, draw(), draw()));
    }
    return make("lagrange_identity", worst, 1e-4, opts_.samples);
  }

  PropertyResult cross_gradient_identity() {
    double worst = 0.0;
    for (std::size_t i = 0; i < opts_.samples; ++i) {
      const Vector q = draw();
      const Vector a = draw();
      const Vector b = draw();
      const auto f = [&](const Vector& qq) {
        return a.dot(InertiaAt(sys_, qq).solve(b));
      };
      worst = std::max(worst,
                       numeric::inf_norm(momentum_cross_gradient(sys_, q, a, b) -
                                         numeric::gradient(f, q)));
    }
    return make("momentum_cross_gradient", worst, 1e-4, opts_.samples);
  }

  PropertyResult hamiltonian_gradient_fd() {
    double worst = 0.0;
    for (std::size_t i = 0; i < opts_.samples; ++i) {
      const Vector q = draw();
      const Vector p = draw();
      const auto g = hamiltonian_gradient(sys_, PhaseState{q, p, 0.0});
      const auto H = [&](const Vector& qq) {
        return hamiltonian(sys_, PhaseState{qq, p, 0.0});
      };
      const Vector fd = numeric::gradient(H, q);
      worst = std::max(worst, numeric::inf_norm(g.dH_dq - fd) /
                                  std::max(1.0, numeric::inf_norm(fd)));
    }
    return make("hamiltonian_gradient_fd", worst, 1e-4, opts_.samples);
  }

  PropertyResult inertia_partials_fd() {
    double worst = 0.0;
    for (std::size_t i = 0; i < opts_.samples; ++i) {
      const Vector q = draw();
      const auto analytic = sys_.inertia_partials(q);
      const auto fd = sys_.inertia_partials_fd(q);
      for (std::size_t k = 0; k < analytic.size(); ++k) {
        worst = std::max(worst, numeric::inf_norm(analytic[k] - fd[k]) /
                                    std::max(1.0, numeric::inf_norm(analytic[k])));
      }
    }
    return make("inertia_partials_fd", worst, 1e-6, opts_.samples);
  }

  // Residual is the worst violation of m1 <= eig(M) <= m2, relative to m2.
  PropertyResult inertia_spd() {
    const auto [m1, m2] = sys_.inertia_bounds();
    double worst = 0.0;
    const auto grid = model_.configuration_grid(720);
    for (const Vector& q : grid) {
      const Matrix M = sys_.inertia(q);
      worst = std::max(worst, numeric::inf_norm(M - M.transpose()));
      Eigen::SelfAdjointEigenSolver<Matrix> es(M, Eigen::EigenvaluesOnly);
      worst = std::max(worst, (m1 - es.eigenvalues().minCoeff()) / m2);
      worst = std::max(worst, (es.eigenvalues().maxCoeff() - m2) / m2);
    }
    return make("inertia_spd_bounds", std::max(worst, 0.0), 1e-12, grid.size());
  }

  PropertyResult field_assemblies() {
    double worst = 0.0;
    for (std::size_t i = 0; i < opts_.samples; ++i) {
      const PhaseState x{draw(), draw(), 0.0};
      const Vector u = draw();
      const Vector f = open_loop_field(sys_, x, u);
      worst = std::max(worst, numeric::inf_norm(f - open_loop_field_energy_form(sys_, x, u)));
      worst = std::max(worst, numeric::inf_norm(f - reassembled_field(sys_, x, u)));
    }
    return make("field_assemblies", worst, 1e-8, opts_.samples);
  }

  PropertyResult reference_consistency() {
    return make("reference_consistency",
                reference_consistency_residual(ref_, 0.0, 10.0, 101), 1e-4, 101);
  }

  PropertyResult zero_error_control() {
    double worst = 0.0;
    for (std::size_t i = 0; i < opts_.samples; ++i) {
      const double t = draw_time();
      const PhaseState x = state_from_error(
          sys_, ref_, gains_, ErrorState{Vector::Zero(n_), Vector::Zero(n_), t});
      worst = std::max(worst,
                       numeric::inf_norm(control_law(sys_, ref_, gains_, x, t).u_at));
    }
    return make("u_at_zero_on_zero_error", worst, 1e-10, opts_.samples);
  }

  PropertyResult positivity_agreement() {
    const auto grid = model_.configuration_grid(720);
    std::size_t disagreements = 0;
    for (const Vector& q : grid) {
      if (!gain_condition(sys_, gains_, q).formulations_agree) ++disagreements;
    }
    return make("positivity_formulations_agree",
                static_cast<double>(disagreements), 0.5, grid.size());
  }

  PropertyResult pi_assemblies() {
    double worst = 0.0;
    for (std::size_t i = 0; i < opts_.samples; ++i) {
      const Vector q = draw();
      worst = std::max(worst,
                       numeric::inf_norm(riemannian_metric_Pi(sys_, gains_, q) -
                                         riemannian_metric_Pi_congruence(sys_, gains_, q)));
    }
    return make("pi_theta_congruence", worst, 1e-10, opts_.samples);
  }

  PropertyResult xi_symmetric_part() {
    double worst = 0.0;
    const std::size_t count = std::min<std::size_t>(opts_.samples, 100);
    for (std::size_t i = 0; i < count; ++i) {
      const Vector q = draw();
      const Matrix Xi = xi_matrix(sys_, gains_, q);
      const Matrix P = metric_P(sys_, gains_, q);
      const Matrix target = 0.5 * P * upsilon(sys_, gains_, q) * P;
      worst = std::max(worst,
                       numeric::inf_norm(0.5 * (Xi + Xi.transpose()) - target));
    }
    return make("sym_xi_half_p_upsilon_p", worst, 1e-10, count);
  }

  PropertyResult theta_conjugation() {
    double worst = 0.0;
    const std::size_t count = std::min<std::size_t>(opts_.samples, 100);
    const Matrix Theta = theta_matrix(gains_.Lambda);
    const Matrix Theta_inv = Theta.inverse();
    for (std::size_t i = 0; i < count; ++i) {
      const double t = draw_time();
      const PhaseState x{draw(), draw(), t};
      const ErrorState e = error_coordinates(sys_, ref_, gains_, x, t);
      const Matrix conj = Theta *
                          virtual_state_variational_matrix(sys_, ref_, gains_, x, t) *
                          Theta_inv;
      worst = std::max(worst, numeric::inf_norm(
                                  conj - variational_matrix(sys_, ref_, gains_, e, t)));
    }
    return make("theta_conjugation", worst, 1e-8, count);
  }

  PropertyResult variational_jacobian() {
    double worst = 0.0;
    const std::size_t count = std::min<std::size_t>(opts_.samples, 100);
    for (std::size_t i = 0; i < count; ++i) {
      const double t = draw_time();
      const PhaseState x{draw(), draw(), t};
      const ErrorState e = error_coordinates(sys_, ref_, gains_, x, t);
      const Vector ea{e.stacked() + sample_ball(rng_, 2 * n_, 1.0)};
      const auto f = [&](const Vector& z) {
        return virtual_error_field(sys_, ref_, gains_,
                                   ErrorState::from_stacked(z, t), e, t);
      };
      const Matrix F = variational_matrix(sys_, ref_, gains_, e, t);
      worst = std::max(worst, numeric::inf_norm(numeric::jacobian(f, ea) - F) /
                                  std::max(1.0, numeric::inf_norm(F)));
    }
    return make("variational_jacobian_fd", worst, 1e-4, count);
  }

  sim::Scenario base_scenario(double horizon) const {
    sim::Scenario sc;
    sc.system = model_.system;
    sc.reference = ref_;
    sc.gains = gains_;
    sc.initial = PhaseState{Vector::Zero(n_), Vector::Zero(n_), 0.0};
    sc.horizon = horizon;
    sc.step = 1e-3;
    sc.log_diagnostics = false;
    return sc;
  }

  PropertyResult passivity() {
    sim::Scenario sc = base_scenario(opts_.passivity_horizon);
    sc.dynamics = sim::Dynamics::kOpenLoop;
    sc.initial = PhaseState{draw(), Vector::Zero(n_), 0.0};
    sc.input = [n = n_](double t) {
      Vector u(n);
      for (Eigen::Index i = 0; i < n; ++i) u[i] = std::sin(t + 0.5 * i);
      return u;
    };
    const auto log = sim::simulate(sc);
    const auto r = passivity_residual(sys_, log, sc.step);
    return make("passivity", log.ok ? r.max_residual : INFINITY, 1e-3, r.samples);
  }

  PropertyResult sliding_invariance() {
    sim::Scenario sc = base_scenario(opts_.passivity_horizon);
    sc.dynamics = sim::Dynamics::kSlidingMotion;
    const Vector q_tilde = sample_ball(rng_, n_, 0.5);
    sc.initial = state_from_error(sys_, ref_, gains_,
                                  ErrorState{q_tilde, Vector::Zero(n_), 0.0});
    const auto log = sim::simulate(sc);
    double worst = log.ok ? 0.0 : INFINITY;
    for (const auto& s : log.samples) worst = std::max(worst, s.sigma.norm());
    return make("sliding_manifold_invariance", worst, 1e-4, log.samples.size());
  }

  PropertyResult error_system_consistency() {
    sim::Scenario full = base_scenario(opts_.passivity_horizon);
    full.dynamics = sim::Dynamics::kClosedLoop;
    full.initial = PhaseState{draw() * 0.1, draw() * 0.1, 0.0};
    // The two formulations differ by RK4 truncation error in the stiff
    // initial transient; 1e-3 leaves ~1e-3 of it, a quarter of that ~1e-6.
    full.step = 2.5e-4;
    sim::Scenario err = full;
    err.dynamics = sim::Dynamics::kErrorSystem;
    const auto a = sim::simulate(full);
    const auto b = sim::simulate(err);
    double worst = (a.ok && b.ok) ? 0.0 : INFINITY;
    const std::size_t count = std::min(a.samples.size(), b.samples.size());
    for (std::size_t k = 0; k < count; ++k) {
      worst = std::max(worst, (a.samples[k].q_tilde - b.samples[k].q_tilde)
                                  .cwiseAbs().maxCoeff());
      worst = std::max(worst, (a.samples[k].sigma - b.samples[k].sigma)
                                  .cwiseAbs().maxCoeff());
    }
    return make("error_system_consistency", worst, 1e-5, count);
  }

  const MechanicalPHSystem& sys_;
  const models::Model& model_;
  const ReferenceTrajectory& ref_;
  const ControllerGains& gains_;
  const SuiteOptions& opts_;
  std::mt19937_64 rng_;
  Eigen::Index n_;
};

}  // namespace

std::vector<PropertyResult> run_property_suite(const models::Model& model,
                                               const ReferenceTrajectory& ref,
                                               const ControllerGains& gains,
                                               const SuiteOptions& options) {
  return Suite(model, ref, gains, options).run();
}

}  // namespace phtrack::verify
