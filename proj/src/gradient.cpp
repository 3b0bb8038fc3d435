#include "qoct/gradient.hpp"

#include "qoct/functional.hpp"
#include "qoct/parallel.hpp"

namespace qoct {

namespace {

void require_canonical(const CostateTrajectory& chi, const char* what) {
  if (!chi.boundary.is_canonical()) {
    throw Error(std::string(what) + ": requires a costate computed with the canonical boundary");
  }
}

void check_lengths(const StateTrajectory& psi, const CostateTrajectory& chi,
                   const ControlField& field, const ControlField& eps_ref, const TimeGrid& grid,
                   const char* what) {
  if (psi.size() != grid.n_nodes() || chi.size() != grid.n_nodes() ||
      field.size() != grid.n_steps() || eps_ref.size() != grid.n_steps()) {
    throw DimensionMismatch(std::string(what) + ": trajectory or field length mismatch");
  }
}

// Im <chi_k | M_k | psi_k>
double coupling_overlap(const StateVector& chi, const StateVector& psi, const IntervalStep& step,
                        const HermitianOperator& coupling) {
  return chi.dot(step.averaged_coupling(coupling) * psi).imag();
}

}  // namespace

RealVector analytic_gradient(const StateTrajectory& psi, const CostateTrajectory& chi,
                             const ControlField& field, const ControlField& eps_ref, double alpha,
                             const StepSequence& steps, const HermitianOperator& coupling,
                             const TimeGrid& grid) {
  require_canonical(chi, "analytic_gradient");
  check_lengths(psi, chi, field, eps_ref, grid, "analytic_gradient");
  const double dt = grid.dt();
  RealVector g = RealVector::Zero(grid.n_steps());
  for (Index k = 0; k < grid.index_T(); ++k) {
    const double overlap =
        coupling_overlap(chi[k], psi[k], steps[static_cast<std::size_t>(k)], coupling);
    g[k] = 2.0 * dt * (-alpha * (field[k] - eps_ref[k]) + overlap);
  }
  return g;
}

RealVector analytic_gradient(const StateTrajectory& psi, const CostateTrajectory& chi,
                             const ControlField& field, const ControlField& eps_ref, double alpha,
                             const ControlHamiltonian& hamiltonian, const TimeGrid& grid) {
  return analytic_gradient(psi, chi, field, eps_ref, alpha, make_steps(hamiltonian, field, grid),
                           hamiltonian.coupling(), grid);
}

double reduced_functional(const ControlProblem& problem, const ControlField& field) {
  const StateTrajectory psi =
      propagate_forward(problem.psi0, field, problem.hamiltonian, problem.grid);
  return eval_j_opt(psi, problem.observable, problem.grid) +
         eval_j_cost(field, problem.eps_ref, problem.alpha, problem.grid);
}

double fd_gradient(const ControlProblem& problem, const ControlField& field, Index k, double h) {
  if (k < 0 || k >= problem.grid.n_steps()) {
    throw Error("fd_gradient: sample index " + std::to_string(k) + " out of range");
  }
  if (!(h > 0.0)) throw Error("fd_gradient: probe step must be positive");
  RealVector plus = field.samples();
  RealVector minus = field.samples();
  plus[k] += h;
  minus[k] -= h;
  return (reduced_functional(problem, ControlField(std::move(plus))) -
          reduced_functional(problem, ControlField(std::move(minus)))) /
         (2.0 * h);
}

RealVector fd_gradient_all(const ControlProblem& problem, const ControlField& field, double h) {
  RealVector g(problem.grid.n_steps());
  parallel_for(static_cast<std::size_t>(g.size()), [&](std::size_t k) {
    g[static_cast<Index>(k)] = fd_gradient(problem, field, static_cast<Index>(k), h);
  });
  return g;
}

double stationarity_residual(const StateTrajectory& psi, const CostateTrajectory& chi,
                             const ControlField& field, const ControlField& eps_ref, double alpha,
                             const StepSequence& steps, const HermitianOperator& coupling,
                             const TimeGrid& grid) {
  require_canonical(chi, "stationarity_residual");
  check_lengths(psi, chi, field, eps_ref, grid, "stationarity_residual");
  if (!(alpha > 0.0)) throw Error("stationarity_residual: alpha must be positive");
  double worst = 0.0;
  for (Index k = 0; k < grid.index_T(); ++k) {
    const double overlap =
        coupling_overlap(chi[k], psi[k], steps[static_cast<std::size_t>(k)], coupling);
    worst = std::max(worst, std::abs(field[k] - eps_ref[k] - overlap / alpha));
  }
  return worst;
}

double stationarity_residual(const StateTrajectory& psi, const CostateTrajectory& chi,
                             const ControlField& field, const ControlField& eps_ref, double alpha,
                             const ControlHamiltonian& hamiltonian, const TimeGrid& grid) {
  return stationarity_residual(psi, chi, field, eps_ref, alpha,
                               make_steps(hamiltonian, field, grid), hamiltonian.coupling(), grid);
}

GradientReport gradient_report(const ControlProblem& problem, const ControlField& field,
                               double h) {
  const StepSequence steps = make_steps(problem.hamiltonian, field, problem.grid);
  const StateTrajectory psi = propagate_forward(problem.psi0, steps);
  const CostateTrajectory chi = propagate_costate(psi, problem.observable, steps, problem.grid,
                                                  CostateBoundary::canonical());
  GradientReport report;
  report.probe_step = h;
  report.analytic = analytic_gradient(psi, chi, field, problem.eps_ref, problem.alpha, steps,
                                      problem.hamiltonian.coupling(), problem.grid);
  report.finite_diff = fd_gradient_all(problem, field, h);
  const double scale = std::max(report.finite_diff.cwiseAbs().maxCoeff(), 1e-300);
  report.max_rel_error = (report.analytic - report.finite_diff).cwiseAbs().maxCoeff() / scale;
  return report;
}

}  // namespace qoct
