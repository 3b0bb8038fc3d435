#include "qoct/functional.hpp"

namespace qoct {

namespace {

void check_nodes(Index count, const TimeGrid& grid, const char* what) {
  if (count != grid.n_nodes()) {
    throw DimensionMismatch(std::string(what) + ": expected " + std::to_string(grid.n_nodes()) +
                            " nodes, got " + std::to_string(count));
  }
}

}  // namespace

double eval_j_opt(const StateTrajectory& traj, const HermitianOperator& observable,
                  const TimeGrid& grid) {
  check_nodes(traj.size(), grid, "eval_j_opt");
  return expectation(observable, traj[grid.index_T()]);
}

double eval_j_cost(const ControlField& field, const ControlField& eps_ref, double alpha,
                   const TimeGrid& grid) {
  if (!(alpha > 0.0)) throw Error("eval_j_cost: alpha must be positive");
  if (field.size() != grid.n_steps() || eps_ref.size() != grid.n_steps()) {
    throw DimensionMismatch("eval_j_cost: field length does not match the grid");
  }
  long double sum = 0.0L;
  for (Index k = 0; k < grid.index_T(); ++k) {
    const long double d = static_cast<long double>(field[k]) - eps_ref[k];
    sum += d * d;
  }
  return static_cast<double>(-static_cast<long double>(alpha) * sum * grid.dt());
}

double eval_j_tdse(const StateTrajectory& psi, const CostateTrajectory& chi,
                   const StepSequence& steps, const TimeGrid& grid) {
  check_nodes(psi.size(), grid, "eval_j_tdse");
  check_nodes(chi.size(), grid, "eval_j_tdse");
  if (static_cast<Index>(steps.size()) != grid.n_steps()) {
    throw DimensionMismatch("eval_j_tdse: step count does not match the grid");
  }
  const double dt = grid.dt();
  Complex sum = 0.0;
  for (Index k = 0; k < grid.n_steps(); ++k) {
    const auto& u = steps[static_cast<std::size_t>(k)].forward();
    const StateVector defect =
        Complex(0.0, 1.0 / dt) * (u.adjoint() * psi[k + 1] - psi[k]);
    sum += chi[k].dot(defect) * dt;
  }
  return -2.0 * sum.imag();
}

double eval_j_tdse(const StateTrajectory& psi, const CostateTrajectory& chi,
                   const ControlField& field, const ControlHamiltonian& hamiltonian,
                   const TimeGrid& grid) {
  return eval_j_tdse(psi, chi, make_steps(hamiltonian, field, grid), grid);
}

FunctionalBreakdown eval_total(const StateTrajectory& psi, const CostateTrajectory& chi,
                               const ControlField& field, const ControlField& eps_ref,
                               double alpha, const StepSequence& steps,
                               const HermitianOperator& observable, const TimeGrid& grid) {
  FunctionalBreakdown out;
  out.j_opt = eval_j_opt(psi, observable, grid);
  out.j_cost = eval_j_cost(field, eps_ref, alpha, grid);
  out.j_tdse = eval_j_tdse(psi, chi, steps, grid);
  out.j_total = out.j_opt + out.j_cost + out.j_tdse;
  return out;
}

FunctionalBreakdown eval_total(const StateTrajectory& psi, const CostateTrajectory& chi,
                               const ControlField& field, const ControlField& eps_ref,
                               double alpha, const ControlHamiltonian& hamiltonian,
                               const HermitianOperator& observable, const TimeGrid& grid) {
  return eval_total(psi, chi, field, eps_ref, alpha, make_steps(hamiltonian, field, grid),
                    observable, grid);
}

}  // namespace qoct
