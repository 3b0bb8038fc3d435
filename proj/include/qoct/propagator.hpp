#pragma once

#include "qoct/core.hpp"

namespace qoct {

enum class Direction { Forward, Backward };

class InconsistentTrajectory : public Error {
 public:
  using Error::Error;
};

/// Spectral data of H(eps) on one interval of length dt.
///
/// Holds the eigendecomposition H = V diag(lambda) V^dagger and the exact
/// one-step propagator U = exp(-i H dt). Backward stepping uses U^dagger.
class IntervalStep {
 public:
  IntervalStep(const ControlHamiltonian& hamiltonian, double eps, double dt);

  /// exp(-i H dt).
  const ComplexMatrix& forward() const { return forward_; }
  ComplexMatrix backward() const { return forward_.adjoint(); }

  StateVector apply(const StateVector& psi, Direction direction) const;

  /// Hermitian operator M with dU/deps = -i dt U M, i.e. the coupling averaged
  /// over the interval in the interaction picture:
  ///   M = (1/dt) int_0^dt exp(iHs) mu exp(-iHs) ds.
  /// Reduces to mu when [H, mu] = 0.
  ComplexMatrix averaged_coupling(const HermitianOperator& coupling) const;

  /// Exact Frechet derivative dU/deps.
  ComplexMatrix forward_derivative(const HermitianOperator& coupling) const;

  const RealVector& eigenvalues() const { return eigenvalues_; }
  double dt() const { return dt_; }

 private:
  double dt_;
  RealVector eigenvalues_;
  ComplexMatrix eigenvectors_;
  ComplexMatrix forward_;
};

using StepSequence = std::vector<IntervalStep>;

StepSequence make_steps(const ControlHamiltonian& hamiltonian, const ControlField& field,
                        const TimeGrid& grid);

/// Forward: exp(-i H(eps) dt) psi. Backward: exp(+i H(eps) dt) psi.
StateVector step(const StateVector& psi, const ControlHamiltonian& hamiltonian, double eps,
                 double dt, Direction direction);

StateTrajectory propagate_forward(const StateVector& psi0, const ControlField& field,
                                  const ControlHamiltonian& hamiltonian, const TimeGrid& grid);
StateTrajectory propagate_forward(const StateVector& psi0, const StepSequence& steps);

/// Costate for the source -i O psi delta(t - T).
///
/// Canonical: chi_T_minus = O psi(T), chi = 0 from T on, earlier nodes by
/// backward steps. Continuous(n): chi(T) = (i / 2 pi n) O psi(T), propagated
/// backward before T and forward after T.
///
/// Throws InconsistentTrajectory if `psi` does not solve the state equation
/// for `field` (residual above 1e-9).
CostateTrajectory propagate_costate(const StateTrajectory& psi, const HermitianOperator& observable,
                                    const ControlField& field,
                                    const ControlHamiltonian& hamiltonian, const TimeGrid& grid,
                                    CostateBoundary boundary);
/// Unchecked variant over precomputed steps.
CostateTrajectory propagate_costate(const StateTrajectory& psi, const HermitianOperator& observable,
                                    const StepSequence& steps, const TimeGrid& grid,
                                    CostateBoundary boundary);

/// max_k || psi_{k+1} - exp(-i H(eps_k) dt) psi_k ||.
double tdse_residual(const StateTrajectory& traj, const ControlField& field,
                     const ControlHamiltonian& hamiltonian, const TimeGrid& grid);
double tdse_residual(const std::vector<StateVector>& nodes, const StepSequence& steps);

}  // namespace qoct
