#include "qoct/analysis.hpp"

#include <numbers>

namespace qoct {

Solution solve(const ControlProblem& problem, const ControlField& field,
               CostateBoundary boundary) {
  const StepSequence steps = make_steps(problem.hamiltonian, field, problem.grid);
  Solution s{problem, field, propagate_forward(problem.psi0, steps), {}};
  s.chi = propagate_costate(s.psi, problem.observable, steps, problem.grid, boundary);
  return s;
}

ContinuityReport check_canonical_jump(const Solution& solution) {
  if (!solution.chi.boundary.is_canonical()) {
    throw Error("check_canonical_jump: solution was not built with the canonical boundary");
  }
  const auto& grid = solution.problem.grid;
  const StateVector target = solution.problem.observable.matrix() * solution.psi[grid.index_T()];
  ContinuityReport report;
  report.jump_norm_at_T = (solution.chi.chi_T_plus - solution.chi.chi_T_minus).norm();
  report.costate_matches_O_psi = (solution.chi.chi_T_minus - target).norm();
  return report;
}

ContinuityReport check_field_continuity(const Solution& solution) {
  ContinuityReport report = check_canonical_jump(solution);
  const auto& problem = solution.problem;
  const Index m = problem.grid.index_T();
  const auto& mu = problem.hamiltonian.coupling();

  const double overlap =
      solution.chi.chi_T_minus.dot(mu.matrix() * solution.psi[m]).imag() / problem.alpha;
  report.field_left_limit = problem.eps_ref[m] + overlap;
  report.field_left_limit_gap = std::abs(overlap);
  report.field_right_limit = problem.eps_ref[m];

  double deviation = 0.0;
  for (Index k = m; k < problem.grid.n_steps(); ++k) {
    deviation = std::max(deviation, std::abs(solution.field[k] - problem.eps_ref[k]));
  }
  report.post_T_field_deviation = deviation;
  report.commutator_condition_holds = commutes(problem.observable, mu, kCommutatorTolerance);
  return report;
}

ContinuityReport check_continuous_family(const StateTrajectory& psi,
                                         const HermitianOperator& observable,
                                         const ControlField& field,
                                         const ControlHamiltonian& hamiltonian,
                                         const TimeGrid& grid, int n) {
  const CostateBoundary boundary = CostateBoundary::continuous(n);
  const StepSequence steps = make_steps(hamiltonian, field, grid);
  const CostateTrajectory chi = propagate_costate(psi, observable, steps, grid, boundary);
  const Index m = grid.index_T();
  const Complex scale(0.0, 1.0 / (2.0 * std::numbers::pi * n));

  ContinuityReport report;
  report.jump_norm_at_T = (chi.chi_T_plus - chi.chi_T_minus).norm();
  report.costate_matches_O_psi = (chi[m] - scale * (observable.matrix() * psi[m])).norm();
  report.homogeneous_tdse_residual = tdse_residual(chi.states, steps);
  const double phi = std::numbers::pi * (2.0 * n - 1.0);
  report.phase_defect_jump = std::abs(std::polar(1.0, phi) - 1.0);
  return report;
}

double check_conjugate_independence(const StateVector& psi0, const ControlField& field,
                                    const ControlHamiltonian& hamiltonian, const TimeGrid& grid,
                                    Complex beta) {
  const StepSequence steps = make_steps(hamiltonian, field, grid);
  const ControlHamiltonian conjugated(
      HermitianOperator(hamiltonian.drift().matrix().conjugate()),
      HermitianOperator(hamiltonian.coupling().matrix().conjugate()));
  const StepSequence conj_steps = make_steps(conjugated, field, grid);

  StateVector psi = psi0;
  StateVector phi = beta * psi0.conjugate();
  double worst = (phi - beta * psi.conjugate()).norm();
  for (std::size_t k = 0; k < steps.size(); ++k) {
    psi = steps[k].apply(psi, Direction::Forward);
    phi = conj_steps[k].apply(phi, Direction::Backward);
    worst = std::max(worst, (phi - beta * psi.conjugate()).norm());
  }
  return worst;
}

}  // namespace qoct
