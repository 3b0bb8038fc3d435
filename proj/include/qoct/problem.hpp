#pragma once

#include "qoct/core.hpp"

namespace qoct {

/// Everything that defines a control problem apart from the field itself.
struct ControlProblem {
  ControlHamiltonian hamiltonian;
  HermitianOperator observable;
  StateVector psi0;
  TimeGrid grid;
  ControlField eps_ref;
  double alpha;
};

}  // namespace qoct
