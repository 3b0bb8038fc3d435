#include "qoct/propagator.hpp"

#include <numbers>

namespace qoct {

namespace {

constexpr double kConsistencyTolerance = 1e-9;

// (e^{ix} - 1) / (ix) = e^{ix/2} sin(x/2) / (x/2)
Complex phi1_imaginary(double x) {
  const double half = 0.5 * x;
  const double sinc = half == 0.0 ? 1.0 : std::sin(half) / half;
  return std::polar(sinc, half);
}

}  // namespace

IntervalStep::IntervalStep(const ControlHamiltonian& hamiltonian, double eps, double dt)
    : dt_(dt) {
  if (!std::isfinite(eps) || !std::isfinite(dt)) throw NonFiniteValue("step: non-finite input");
  if (!(dt > 0.0)) throw Error("step: dt must be positive");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hamiltonian.evaluate(eps));
  if (solver.info() != Eigen::Success) throw Error("step: eigendecomposition failed");
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
  Eigen::VectorXcd phases(eigenvalues_.size());
  for (Index j = 0; j < phases.size(); ++j) phases[j] = std::polar(1.0, -eigenvalues_[j] * dt_);
  forward_ = eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

StateVector IntervalStep::apply(const StateVector& psi, Direction direction) const {
  detail::require_same_size(psi.size(), forward_.rows(), "step");
  if (direction == Direction::Forward) return forward_ * psi;
  return forward_.adjoint() * psi;
}

ComplexMatrix IntervalStep::averaged_coupling(const HermitianOperator& coupling) const {
  detail::require_same_size(coupling.dim(), forward_.rows(), "averaged_coupling");
  ComplexMatrix m = eigenvectors_.adjoint() * coupling.matrix() * eigenvectors_;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      m(i, j) *= phi1_imaginary((eigenvalues_[i] - eigenvalues_[j]) * dt_);
    }
  }
  return eigenvectors_ * m * eigenvectors_.adjoint();
}

ComplexMatrix IntervalStep::forward_derivative(const HermitianOperator& coupling) const {
  return Complex(0.0, -dt_) * (forward_ * averaged_coupling(coupling));
}

StepSequence make_steps(const ControlHamiltonian& hamiltonian, const ControlField& field,
                        const TimeGrid& grid) {
  if (field.size() != grid.n_steps()) {
    throw DimensionMismatch("field has " + std::to_string(field.size()) + " samples, grid has " +
                            std::to_string(grid.n_steps()) + " intervals");
  }
  StepSequence steps;
  steps.reserve(static_cast<std::size_t>(grid.n_steps()));
  for (Index k = 0; k < grid.n_steps(); ++k) steps.emplace_back(hamiltonian, field[k], grid.dt());
  return steps;
}

StateVector step(const StateVector& psi, const ControlHamiltonian& hamiltonian, double eps,
                 double dt, Direction direction) {
  if (!all_finite(psi)) throw NonFiniteValue("step: non-finite state");
  return IntervalStep(hamiltonian, eps, dt).apply(psi, direction);
}

StateTrajectory propagate_forward(const StateVector& psi0, const StepSequence& steps) {
  StateTrajectory traj;
  traj.states.reserve(steps.size() + 1);
  traj.states.push_back(psi0);
  for (const auto& s : steps) traj.states.push_back(s.forward() * traj.states.back());
  return traj;
}

StateTrajectory propagate_forward(const StateVector& psi0, const ControlField& field,
                                  const ControlHamiltonian& hamiltonian, const TimeGrid& grid) {
  detail::require_same_size(psi0.size(), hamiltonian.dim(), "propagate_forward");
  if (!all_finite(psi0)) throw NonFiniteValue("propagate_forward: non-finite initial state");
  return propagate_forward(psi0, make_steps(hamiltonian, field, grid));
}

CostateTrajectory propagate_costate(const StateTrajectory& psi, const HermitianOperator& observable,
                                    const StepSequence& steps, const TimeGrid& grid,
                                    CostateBoundary boundary) {
  const Index m = grid.index_T();
  const Index n = grid.n_steps();
  const StateVector source = observable.matrix() * psi[m];

  CostateTrajectory chi;
  chi.boundary = boundary;
  chi.states.assign(static_cast<std::size_t>(n + 1), StateVector::Zero(source.size()));

  if (boundary.is_canonical()) {
    chi.chi_T_minus = source;
    chi.chi_T_plus = StateVector::Zero(source.size());
    chi.states[static_cast<std::size_t>(m)] = chi.chi_T_plus;
    StateVector current = chi.chi_T_minus;
    for (Index k = m - 1; k >= 0; --k) {
      current = steps[static_cast<std::size_t>(k)].forward().adjoint() * current;
      chi.states[static_cast<std::size_t>(k)] = current;
    }
    return chi;
  }

  const Complex scale(0.0, 1.0 / (2.0 * std::numbers::pi * boundary.winding()));
  chi.chi_T_plus = scale * source;
  chi.chi_T_minus = chi.chi_T_plus;
  chi.states[static_cast<std::size_t>(m)] = chi.chi_T_plus;
  for (Index k = m - 1; k >= 0; --k) {
    chi.states[static_cast<std::size_t>(k)] =
        steps[static_cast<std::size_t>(k)].forward().adjoint() * chi[k + 1];
  }
  for (Index k = m; k < n; ++k) {
    chi.states[static_cast<std::size_t>(k + 1)] =
        steps[static_cast<std::size_t>(k)].forward() * chi[k];
  }
  return chi;
}

CostateTrajectory propagate_costate(const StateTrajectory& psi, const HermitianOperator& observable,
                                    const ControlField& field,
                                    const ControlHamiltonian& hamiltonian, const TimeGrid& grid,
                                    CostateBoundary boundary) {
  if (psi.size() != grid.n_nodes()) {
    throw DimensionMismatch("propagate_costate: trajectory has " + std::to_string(psi.size()) +
                            " nodes, grid has " + std::to_string(grid.n_nodes()));
  }
  detail::require_same_size(observable.dim(), hamiltonian.dim(), "propagate_costate");
  const StepSequence steps = make_steps(hamiltonian, field, grid);
  const double residual = tdse_residual(psi.states, steps);
  if (!(residual < kConsistencyTolerance)) {
    throw InconsistentTrajectory("propagate_costate: state trajectory violates the TDSE (residual " +
                                 std::to_string(residual) + ")");
  }
  return propagate_costate(psi, observable, steps, grid, boundary);
}

double tdse_residual(const std::vector<StateVector>& nodes, const StepSequence& steps) {
  if (nodes.size() != steps.size() + 1) {
    throw DimensionMismatch("tdse_residual: node count does not match step count");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    worst = std::max(worst, (nodes[k + 1] - steps[k].forward() * nodes[k]).norm());
  }
  return worst;
}

double tdse_residual(const StateTrajectory& traj, const ControlField& field,
                     const ControlHamiltonian& hamiltonian, const TimeGrid& grid) {
  return tdse_residual(traj.states, make_steps(hamiltonian, field, grid));
}

}  // namespace qoct
