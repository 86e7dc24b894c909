// Copyright (c) the povmx developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <string>

#include "povmx/errors.hpp"
#include "povmx/rng.hpp"
#include "povmx/tolerances.hpp"

namespace povmx {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

/// Density matrix: positive operator with unit trace. Invariants are checked
/// by validate(), not enforced on construction.
struct DensityMatrix {
  Operator op;
};

//=========================================================================
// Basic operations
//=========================================================================

inline void require_same_dim(Eigen::Index a, Eigen::Index b,
                             const char *what) {
  if (a != b)
    throw DimensionError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(a) + " vs " + std::to_string(b) + ")");
}

/// Inner product, conjugate-linear in the first argument.
inline Complex inner(const StateVector &psi, const StateVector &phi) {
  require_same_dim(psi.size(), phi.size(), "inner");
  return psi.dot(phi);
}

/// <psi|B psi>. Real whenever B is Hermitian.
inline Complex quadratic_form(const Operator &b, const StateVector &psi) {
  require_same_dim(b.rows(), b.cols(), "quadratic_form");
  require_same_dim(b.rows(), psi.size(), "quadratic_form");
  return psi.dot(b * psi);
}

/// Entrywise max absolute value; the residual norm used throughout.
inline double max_abs(const Operator &b) {
  return b.size() == 0 ? 0.0 : b.cwiseAbs().maxCoeff();
}

inline double hermiticity_residual(const Operator &b) {
  return max_abs(b - b.adjoint().eval());
}

inline bool is_hermitian(const Operator &b, double tol) {
  return b.rows() == b.cols() && hermiticity_residual(b) <= tol;
}

/// Smallest eigenvalue of a Hermitian operator.
inline double lambda_min(const Operator &b, const Tolerances &tol = {}) {
  if (b.rows() != b.cols())
    throw DimensionError("lambda_min: matrix not square");
  const double scale = 1.0 + max_abs(b);
  if (hermiticity_residual(b) > tol.positivity * scale)
    throw ValidationError("lambda_min: matrix is not Hermitian within tolerance");
  if (b.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Operator> es(b, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Largest singular value.
inline double operator_norm(const Operator &b) {
  if (b.size() == 0) return 0.0;
  return b.jacobiSvd().singularValues()(0);
}

/// max(0, -lambda_min): how far below zero the spectrum reaches.
inline double positivity_residual(const Operator &b, const Tolerances &tol = {}) {
  return std::max(0.0, -lambda_min(b, tol));
}

inline bool is_positive(const Operator &b, const Tolerances &tol = {}) {
  const double scale = 1.0 + max_abs(b);
  if (!is_hermitian(b, tol.positivity * scale)) return false;
  return lambda_min(b, tol) >= -tol.positivity * scale;
}

inline bool is_normalized(const StateVector &psi, const Tolerances &tol = {}) {
  return std::abs(psi.norm() - 1.0) <= tol.norm;
}

inline void require_normalized(const StateVector &psi,
                               const Tolerances &tol = {}) {
  if (!is_normalized(psi, tol))
    throw NormalizationError("state vector is not normalized: |psi| = " +
                             std::to_string(psi.norm()));
}

/// Checks the DensityMatrix invariants: positive, trace within tol of 1.
inline void validate_density_matrix(const DensityMatrix &rho,
                                    const Tolerances &tol = {}) {
  if (rho.op.rows() != rho.op.cols())
    throw DimensionError("density matrix not square");
  if (!is_positive(rho.op, tol))
    throw ValidationError("density matrix is not a positive operator");
  if (std::abs(rho.op.trace().real() - 1.0) > tol.norm ||
      std::abs(rho.op.trace().imag()) > tol.norm)
    throw NormalizationError("density matrix trace is not 1: tr = " +
                             std::to_string(rho.op.trace().real()));
}

inline DensityMatrix pure_state(const StateVector &psi) {
  return DensityMatrix{psi * psi.adjoint()};
}

//=========================================================================
// Random instances (standard-normal entries; used by the randomized
// verification ops and by tests)
//=========================================================================

inline StateVector random_vector(Eigen::Index dim, std::mt19937_64 &eng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  StateVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double re = gauss(eng);
    const double im = gauss(eng);
    v(i) = Complex(re, im);
  }
  return v;
}

inline StateVector random_unit_vector(Eigen::Index dim, std::mt19937_64 &eng) {
  StateVector v = random_vector(dim, eng);
  while (v.norm() == 0.0) v = random_vector(dim, eng);
  return v / v.norm();
}

inline Operator random_operator(Eigen::Index dim, std::mt19937_64 &eng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Operator b(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      b(i, j) = Complex(gauss(eng), gauss(eng));
  return b;
}

inline Operator random_hermitian(Eigen::Index dim, std::mt19937_64 &eng) {
  Operator b = random_operator(dim, eng);
  return (b + b.adjoint()).eval() / 2.0;
}

} // namespace povmx
