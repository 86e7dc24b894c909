// Copyright (c) the povmx developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace povmx {

/// Numerical tolerances threaded through every module. One record, one set
/// of defaults; callers override per field when a test pins something else.
struct Tolerances {
  /// |norm(psi) - 1| and |trace(rho) - 1| bound; POVM normalization bound.
  double norm = 1e-9;
  /// Positivity: lambda_min(B) >= -positivity * (1 + max|B|).
  double positivity = 1e-9;
  /// Eigenvalue accuracy, relative to the operator norm.
  double eig = 1e-10;
  /// Family consistency residual bound (entrywise max over effects).
  double consistency = 1e-10;
  /// Polarization / reconstruction round-trip residual bound.
  double reconstruction = 1e-10;
  /// Below this, a prefix probability counts as zero and conditional
  /// sampling aborts instead of renormalizing noise.
  double zero_probability = 1e-14;
};

} // namespace povmx
