#pragma once

#include "qoct/core.hpp"
#include "qoct/problem.hpp"
#include "qoct/propagator.hpp"

namespace qoct {

struct GradientReport {
  RealVector analytic;
  RealVector finite_diff;
  /// max_k |analytic_k - fd_k| / max_k |fd_k|
  double max_rel_error = 0.0;
  double probe_step = 0.0;
};

/// Derivative of the discrete reduced functional
///   j(eps) = <psi(T)|O|psi(T)> - alpha sum_{k<index_T} (eps_k - eps_ref_k)^2 dt
/// with respect to every field sample, from a canonical costate:
///   g_k = 2 dt [ -alpha (eps_k - eps_ref_k) + Im <chi_k| M_k |psi_k> ],  k < index_T
///   g_k = 0,                                                             k >= index_T
/// where M_k is the interval-averaged coupling (see IntervalStep). This is the
/// exact derivative, not a first-order approximation in dt.
RealVector analytic_gradient(const StateTrajectory& psi, const CostateTrajectory& chi,
                             const ControlField& field, const ControlField& eps_ref, double alpha,
                             const ControlHamiltonian& hamiltonian, const TimeGrid& grid);
RealVector analytic_gradient(const StateTrajectory& psi, const CostateTrajectory& chi,
                             const ControlField& field, const ControlField& eps_ref, double alpha,
                             const StepSequence& steps, const HermitianOperator& coupling,
                             const TimeGrid& grid);

/// j_opt(propagate_forward(eps)) + j_cost(eps); the TDSE constraint is eliminated.
double reduced_functional(const ControlProblem& problem, const ControlField& field);

inline constexpr double kDefaultProbeStep = 1e-5;

/// Central difference of the reduced functional in sample k.
double fd_gradient(const ControlProblem& problem, const ControlField& field, Index k,
                   double h = kDefaultProbeStep);
/// All samples; probes run in parallel.
RealVector fd_gradient_all(const ControlProblem& problem, const ControlField& field,
                           double h = kDefaultProbeStep);

/// max_{k<index_T} | eps_k - eps_ref_k - Im<chi_k|M_k|psi_k> / alpha |.
double stationarity_residual(const StateTrajectory& psi, const CostateTrajectory& chi,
                             const ControlField& field, const ControlField& eps_ref, double alpha,
                             const ControlHamiltonian& hamiltonian, const TimeGrid& grid);
double stationarity_residual(const StateTrajectory& psi, const CostateTrajectory& chi,
                             const ControlField& field, const ControlField& eps_ref, double alpha,
                             const StepSequence& steps, const HermitianOperator& coupling,
                             const TimeGrid& grid);

/// Analytic vs finite-difference comparison at `field`.
GradientReport gradient_report(const ControlProblem& problem, const ControlField& field,
                               double h = kDefaultProbeStep);

}  // namespace qoct
