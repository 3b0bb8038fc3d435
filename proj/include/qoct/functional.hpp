#pragma once

#include "qoct/core.hpp"
#include "qoct/propagator.hpp"

namespace qoct {

/// J = J_opt + J_cost + J_TDSE evaluated on a discrete trajectory.
struct FunctionalBreakdown {
  double j_opt = 0.0;
  double j_cost = 0.0;
  double j_tdse = 0.0;
  double j_total = 0.0;
};

/// <psi(T)| O |psi(T)>.
double eval_j_opt(const StateTrajectory& traj, const HermitianOperator& observable,
                  const TimeGrid& grid);

/// -alpha * sum_{k < index_T} (eps_k - eps_ref_k)^2 dt. Only [0, T] is penalized.
double eval_j_cost(const ControlField& field, const ControlField& eps_ref, double alpha,
                   const TimeGrid& grid);

/// -2 Im sum_k <chi_k | (i D psi)_k - H(eps_k) psi_k> dt over [0, T_hat].
///
/// The discrete defect is i (U_k^dagger psi_{k+1} - psi_k) / dt, so any
/// trajectory produced by the exact stepper annihilates it.
double eval_j_tdse(const StateTrajectory& psi, const CostateTrajectory& chi,
                   const ControlField& field, const ControlHamiltonian& hamiltonian,
                   const TimeGrid& grid);
double eval_j_tdse(const StateTrajectory& psi, const CostateTrajectory& chi,
                   const StepSequence& steps, const TimeGrid& grid);

FunctionalBreakdown eval_total(const StateTrajectory& psi, const CostateTrajectory& chi,
                               const ControlField& field, const ControlField& eps_ref,
                               double alpha, const ControlHamiltonian& hamiltonian,
                               const HermitianOperator& observable, const TimeGrid& grid);
FunctionalBreakdown eval_total(const StateTrajectory& psi, const CostateTrajectory& chi,
                               const ControlField& field, const ControlField& eps_ref,
                               double alpha, const StepSequence& steps,
                               const HermitianOperator& observable, const TimeGrid& grid);

}  // namespace qoct
