#include "qoct/core.hpp"

#include <utility>

namespace qoct {

HermitianOperator::HermitianOperator(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw DimensionMismatch("HermitianOperator: matrix is not square");
  }
  if (!all_finite(m_)) throw NonFiniteValue("HermitianOperator: non-finite entry");
  const double defect = hermiticity_defect(m_);
  if (!(defect < kTolerance)) {
    throw NotHermitian("HermitianOperator: ||A - A^dagger||_max = " + std::to_string(defect));
  }
}

HermitianOperator HermitianOperator::zero(Index n) {
  return HermitianOperator(ComplexMatrix::Zero(n, n));
}

HermitianOperator HermitianOperator::identity(Index n) {
  return HermitianOperator(ComplexMatrix::Identity(n, n));
}

HermitianOperator HermitianOperator::diagonal(const RealVector& d) {
  return HermitianOperator(d.cast<Complex>().asDiagonal().toDenseMatrix());
}

HermitianOperator sigma_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return HermitianOperator(m);
}

HermitianOperator sigma_y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return HermitianOperator(m);
}

HermitianOperator sigma_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return HermitianOperator(m);
}

bool commutes(const HermitianOperator& a, const HermitianOperator& b, double tol) {
  detail::require_same_size(a.dim(), b.dim(), "commutes");
  if (a.dim() == 0) return true;
  const ComplexMatrix c = a.matrix() * b.matrix() - b.matrix() * a.matrix();
  return c.cwiseAbs().maxCoeff() < tol;
}

ControlHamiltonian::ControlHamiltonian(HermitianOperator drift, HermitianOperator coupling)
    : drift_(std::move(drift)), coupling_(std::move(coupling)) {
  detail::require_same_size(drift_.dim(), coupling_.dim(), "ControlHamiltonian");
}

TimeGrid::TimeGrid(double dt, Index index_T, Index n_steps)
    : dt_(dt), index_T_(index_T), n_steps_(n_steps) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw GridError("time grid: dt must be positive");
  if (!(0 < index_T && index_T < n_steps)) {
    throw GridError("time grid: need 0 < index_T < n_steps (T strictly before T_hat)");
  }
}

namespace {

Index checked_steps(double t, double dt, const char* name) {
  const double ratio = t / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) > 1e-12 * std::max(1.0, std::abs(ratio))) {
    throw GridError(std::string("time grid: ") + name + " = " + std::to_string(t) +
                    " is not an integer multiple of dt = " + std::to_string(dt));
  }
  return static_cast<Index>(nearest);
}

}  // namespace

TimeGrid make_grid(double T, double T_hat, double dt) {
  if (!std::isfinite(T) || !std::isfinite(T_hat) || !std::isfinite(dt)) {
    throw GridError("time grid: non-finite parameter");
  }
  if (!(dt > 0.0)) throw GridError("time grid: dt must be positive");
  if (!(T > 0.0)) throw GridError("time grid: T must be positive");
  if (!(T < T_hat)) throw GridError("time grid: T_hat must exceed T");
  const Index index_T = checked_steps(T, dt, "T");
  const Index n_steps = checked_steps(T_hat, dt, "T_hat");
  return TimeGrid(dt, index_T, n_steps);
}

ControlField::ControlField(RealVector samples) : samples_(std::move(samples)) {
  if (!all_finite(samples_)) throw NonFiniteValue("ControlField: non-finite sample");
}

ControlField ControlField::constant(Index n, double value) {
  return ControlField(RealVector::Constant(n, value));
}

CostateBoundary CostateBoundary::continuous(int n) {
  if (n == 0) throw Error("continuous costate boundary requires n != 0");
  return CostateBoundary(Mode::Continuous, n);
}

}  // namespace qoct
