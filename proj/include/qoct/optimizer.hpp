#pragma once

#include "qoct/core.hpp"
#include "qoct/functional.hpp"

namespace qoct {

struct OptimizationConfig {
  double alpha = 1.0;
  int max_iters = 500;
  /// Stop once |J_total(i) - J_total(i-1)| < j_tol.
  double j_tol = 1e-13;
  double stationarity_tol = 1e-6;
  ControlField initial_field;
  ControlField eps_ref;

  void validate(const TimeGrid& grid) const;
};

struct OptimizationResult {
  ControlField final_field;
  /// Entry 0 is the initial guess, entry i the state after sweep i.
  std::vector<FunctionalBreakdown> j_history;
  double final_fidelity = 0.0;
  int iterations_run = 0;
  bool converged = false;
  double final_stationarity_residual = 0.0;
  /// Largest drop of J_total between consecutive iterates (0 when monotone).
  double max_j_decrease = 0.0;
  /// False if J_total dropped by more than kMonotonicSlack at any iteration.
  bool monotonic = true;
};

inline constexpr double kMonotonicSlack = 1e-8;

/// Immediate-feedback sweeps for the coupled state/costate/field equations.
///
/// Each iteration propagates the canonical costate backward under the current
/// field, then sweeps forward updating every sample before it is used:
///   eps_k = eps_ref_k + Im<chi_k| M_k |psi_k> / alpha    (k < index_T)
///   eps_k = eps_ref_k                                     (k >= index_T)
/// with chi_k from the backward pass and psi_k from the running forward pass.
/// J_total increases monotonically for positive semidefinite observables.
OptimizationResult optimize(const StateVector& psi0, const ControlHamiltonian& hamiltonian,
                            const HermitianOperator& observable, const TimeGrid& grid,
                            const OptimizationConfig& config);

}  // namespace qoct
