#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qoct {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using StateVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class GridError : public Error {
 public:
  using Error::Error;
};

class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require_same_size(Index a, Index b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimension mismatch (" +
                            std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace detail

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& x) {
  for (Index i = 0; i < x.size(); ++i) {
    const auto v = x.derived().coeff(i);
    if constexpr (Eigen::NumTraits<typename Derived::Scalar>::IsComplex) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    } else {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

/// <a|b>, conjugate-linear in `a`.
template <typename DerivedA, typename DerivedB>
Complex inner_product(const Eigen::MatrixBase<DerivedA>& a,
                      const Eigen::MatrixBase<DerivedB>& b) {
  detail::require_same_size(a.size(), b.size(), "inner_product");
  return a.dot(b);
}

/// Max-norm of A - A^dagger.
template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// Dense Hermitian matrix, checked on construction to ||A - A^dagger||_max < 1e-12.
class HermitianOperator {
 public:
  static constexpr double kTolerance = 1e-12;

  explicit HermitianOperator(ComplexMatrix m);

  static HermitianOperator zero(Index n);
  static HermitianOperator identity(Index n);
  static HermitianOperator diagonal(const RealVector& d);

  const ComplexMatrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

HermitianOperator sigma_x();
HermitianOperator sigma_y();
HermitianOperator sigma_z();

/// Re<psi|O psi>. Throws if the imaginary part exceeds 1e-12 (scaled by ||psi||^2 ||O||).
template <typename Derived>
double expectation(const HermitianOperator& op, const Eigen::MatrixBase<Derived>& psi) {
  detail::require_same_size(op.dim(), psi.size(), "expectation");
  const Complex value = psi.dot(op.matrix() * psi);
  const double scale = std::max(1.0, psi.squaredNorm() * op.matrix().cwiseAbs().maxCoeff());
  if (std::abs(value.imag()) >= 1e-12 * scale) {
    throw NotHermitian("expectation: imaginary part " + std::to_string(value.imag()));
  }
  return value.real();
}

/// True iff ||O mu - mu O||_max < tol.
bool commutes(const HermitianOperator& a, const HermitianOperator& b, double tol);

/// Drift plus bilinear control coupling, H(eps) = H0 + eps * mu.
class ControlHamiltonian {
 public:
  ControlHamiltonian(HermitianOperator drift, HermitianOperator coupling);

  const HermitianOperator& drift() const { return drift_; }
  /// dH/deps; field-independent for bilinear control.
  const HermitianOperator& coupling() const { return coupling_; }
  Index dim() const { return drift_.dim(); }

  ComplexMatrix evaluate(double eps) const {
    return drift_.matrix() + eps * coupling_.matrix();
  }

 private:
  HermitianOperator drift_;
  HermitianOperator coupling_;
};

/// Uniform grid on [0, T_hat] with the measurement node T strictly inside.
class TimeGrid {
 public:
  /// Builds a grid directly from step counts; requires 0 < index_T < n_steps.
  TimeGrid(double dt, Index index_T, Index n_steps);

  double dt() const { return dt_; }
  Index n_steps() const { return n_steps_; }
  Index index_T() const { return index_T_; }
  Index n_nodes() const { return n_steps_ + 1; }
  double T() const { return static_cast<double>(index_T_) * dt_; }
  double T_hat() const { return static_cast<double>(n_steps_) * dt_; }
  double time(Index k) const { return static_cast<double>(k) * dt_; }

 private:
  double dt_;
  Index index_T_;
  Index n_steps_;
};

/// Rejects T, T_hat that are not integer multiples of dt (relative 1e-12).
TimeGrid make_grid(double T, double T_hat, double dt);

/// Piecewise-constant field; sample k holds on [t_k, t_{k+1}).
class ControlField {
 public:
  ControlField() = default;
  explicit ControlField(RealVector samples);

  static ControlField constant(Index n, double value);

  Index size() const { return samples_.size(); }
  double operator[](Index k) const { return samples_[k]; }
  const RealVector& samples() const { return samples_; }

 private:
  RealVector samples_;
};

struct StateTrajectory {
  std::vector<StateVector> states;

  Index size() const { return static_cast<Index>(states.size()); }
  const StateVector& operator[](Index k) const { return states[static_cast<std::size_t>(k)]; }
};

/// Boundary rule for the costate at the measurement time.
class CostateBoundary {
 public:
  enum class Mode { Canonical, Continuous };

  static CostateBoundary canonical() { return CostateBoundary(Mode::Canonical, 0); }
  /// chi(T) = (i / 2 pi n) O psi(T); n must be nonzero.
  static CostateBoundary continuous(int n);

  Mode mode() const { return mode_; }
  bool is_canonical() const { return mode_ == Mode::Canonical; }
  int winding() const { return n_; }

 private:
  CostateBoundary(Mode mode, int n) : mode_(mode), n_(n) {}

  Mode mode_;
  int n_;
};

/// Costate on the grid with both one-sided limits at T stored explicitly.
/// states[index_T] holds chi_T_plus.
struct CostateTrajectory {
  CostateBoundary boundary = CostateBoundary::canonical();
  std::vector<StateVector> states;
  StateVector chi_T_minus;
  StateVector chi_T_plus;

  Index size() const { return static_cast<Index>(states.size()); }
  const StateVector& operator[](Index k) const { return states[static_cast<std::size_t>(k)]; }
};

/// True iff | ||psi|| - 1 | < 1e-10.
template <typename Derived>
bool is_normalized(const Eigen::MatrixBase<Derived>& psi) {
  return std::abs(psi.norm() - 1.0) < 1e-10;
}

}  // namespace qoct
