#pragma once

#include <optional>

#include "qoct/core.hpp"
#include "qoct/problem.hpp"
#include "qoct/propagator.hpp"

namespace qoct {

/// A field together with the state and costate it induces.
struct Solution {
  ControlProblem problem;
  ControlField field;
  StateTrajectory psi;
  CostateTrajectory chi;
};

Solution solve(const ControlProblem& problem, const ControlField& field,
               CostateBoundary boundary = CostateBoundary::canonical());

/// Behaviour of the costate and field at the measurement time.
/// Entries that do not apply to a given check are left empty.
struct ContinuityReport {
  /// ||chi_T_plus - chi_T_minus||
  double jump_norm_at_T = 0.0;
  /// Canonical: ||chi_T_minus - O psi(T)||. Continuous: ||chi(T) - (i/2 pi n) O psi(T)||.
  double costate_matches_O_psi = 0.0;
  /// |eps(T-) - eps_ref(T)| from the field law evaluated with chi_T_minus.
  std::optional<double> field_left_limit_gap;
  std::optional<double> field_left_limit;
  /// eps(T+) = eps_ref(T), since chi vanishes after T.
  std::optional<double> field_right_limit;
  /// max_{k >= index_T} |eps_k - eps_ref_k| of the stored field.
  std::optional<double> post_T_field_deviation;
  std::optional<bool> commutator_condition_holds;
  /// Homogeneous TDSE residual of the costate over the whole grid.
  std::optional<double> homogeneous_tdse_residual;
  /// |exp(i phi) - 1| for the off-lattice phase phi = pi (2n - 1).
  std::optional<double> phase_defect_jump;
};

inline constexpr double kCommutatorTolerance = 1e-12;

ContinuityReport check_canonical_jump(const Solution& solution);
ContinuityReport check_field_continuity(const Solution& solution);
ContinuityReport check_continuous_family(const StateTrajectory& psi,
                                         const HermitianOperator& observable,
                                         const ControlField& field,
                                         const ControlHamiltonian& hamiltonian,
                                         const TimeGrid& grid, int n);

/// max_k ||Phi_k - beta conj(Psi_k)||, where Psi solves (i d/dt - H) Psi = 0
/// from psi0 and Phi solves (i d/dt + H*) Phi = 0 from beta conj(psi0).
/// H* is the entrywise conjugate matrix; for real Hamiltonians it is H itself
/// and Phi is produced by the backward stepper run forward in time.
double check_conjugate_independence(const StateVector& psi0, const ControlField& field,
                                    const ControlHamiltonian& hamiltonian, const TimeGrid& grid,
                                    Complex beta = 1.0);

}  // namespace qoct
