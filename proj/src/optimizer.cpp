#include "qoct/optimizer.hpp"

#include "qoct/gradient.hpp"

namespace qoct {

void OptimizationConfig::validate(const TimeGrid& grid) const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error("optimizer: alpha must be positive");
  if (max_iters <= 0) throw Error("optimizer: max_iters must be positive");
  if (!(j_tol > 0.0)) throw Error("optimizer: j_tol must be positive");
  if (!(stationarity_tol > 0.0)) throw Error("optimizer: stationarity_tol must be positive");
  if (initial_field.size() != grid.n_steps()) {
    throw DimensionMismatch("optimizer: initial field length does not match the grid");
  }
  if (eps_ref.size() != grid.n_steps()) {
    throw DimensionMismatch("optimizer: reference field length does not match the grid");
  }
}

OptimizationResult optimize(const StateVector& psi0, const ControlHamiltonian& hamiltonian,
                            const HermitianOperator& observable, const TimeGrid& grid,
                            const OptimizationConfig& config) {
  config.validate(grid);
  detail::require_same_size(psi0.size(), hamiltonian.dim(), "optimize");
  detail::require_same_size(observable.dim(), hamiltonian.dim(), "optimize");
  if (!is_normalized(psi0)) throw Error("optimize: initial state is not normalized");

  const Index m = grid.index_T();
  const Index n = grid.n_steps();
  const auto& coupling = hamiltonian.coupling();
  const auto& eps_ref = config.eps_ref;

  ControlField field = config.initial_field;
  StepSequence steps = make_steps(hamiltonian, field, grid);
  StateTrajectory psi = propagate_forward(psi0, steps);
  CostateTrajectory chi =
      propagate_costate(psi, observable, steps, grid, CostateBoundary::canonical());

  OptimizationResult result;
  result.j_history.push_back(
      eval_total(psi, chi, field, eps_ref, config.alpha, steps, observable, grid));

  bool stagnated = false;
  for (int iter = 1; iter <= config.max_iters && !stagnated; ++iter) {
    RealVector samples(n);
    StepSequence next_steps;
    next_steps.reserve(static_cast<std::size_t>(n));
    StateTrajectory next_psi;
    next_psi.states.reserve(static_cast<std::size_t>(n + 1));
    next_psi.states.push_back(psi0);

    for (Index k = 0; k < n; ++k) {
      const StateVector& current = next_psi.states.back();
      if (k < m) {
        const auto& old_step = steps[static_cast<std::size_t>(k)];
        const double overlap = chi[k].dot(old_step.averaged_coupling(coupling) * current).imag();
        samples[k] = eps_ref[k] + overlap / config.alpha;
      } else {
        samples[k] = eps_ref[k];
      }
      next_steps.emplace_back(hamiltonian, samples[k], grid.dt());
      next_psi.states.push_back(next_steps.back().forward() * current);
    }

    field = ControlField(std::move(samples));
    steps = std::move(next_steps);
    psi = std::move(next_psi);
    chi = propagate_costate(psi, observable, steps, grid, CostateBoundary::canonical());

    const FunctionalBreakdown current =
        eval_total(psi, chi, field, eps_ref, config.alpha, steps, observable, grid);
    const double delta = current.j_total - result.j_history.back().j_total;
    result.j_history.push_back(current);
    result.iterations_run = iter;
    result.max_j_decrease = std::max(result.max_j_decrease, -delta);
    if (-delta > kMonotonicSlack) result.monotonic = false;
    stagnated = std::abs(delta) < config.j_tol;
  }

  result.final_field = field;
  result.final_fidelity = result.j_history.back().j_opt;
  result.final_stationarity_residual =
      stationarity_residual(psi, chi, field, eps_ref, config.alpha, steps, coupling, grid);
  result.converged = stagnated && result.final_stationarity_residual < config.stationarity_tol;
  return result;
}

}  // namespace qoct
