// Copyright (c) the povmx developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace povmx {

/// Base class for all povmx errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operands have incompatible dimensions.
struct DimensionError : Error {
  using Error::Error;
};

/// A state vector is not unit-norm, or a density matrix violates trace one.
struct NormalizationError : Error {
  using Error::Error;
};

/// Structurally invalid input: atom outside its space, index set not a
/// subset, non-Hermitian matrix where one is required, bad configuration.
struct ValidationError : Error {
  using Error::Error;
};

/// A prefix family violates the projectivity condition. Carries the level
/// at which the violation was found and its residual.
struct ConsistencyError : Error {
  ConsistencyError(const std::string &msg, int level_, double residual_)
      : Error(msg), level(level_), residual(residual_) {}
  int level;
  double residual;
};

/// Operator reconstruction round-trip failed: the input was not a bounded
/// sesquilinear form. Carries a witness vector (as interleaved re/im pairs
/// to keep this header free of linear-algebra includes).
struct ReconstructionError : Error {
  ReconstructionError(const std::string &msg, std::vector<double> witness_,
                      double residual_)
      : Error(msg), witness(std::move(witness_)), residual(residual_) {}
  std::vector<double> witness;
  double residual;
};

/// The sampler hit a prefix of (numerically) zero probability, so the next
/// conditional distribution is undefined. Carries the offending prefix as
/// atom indices.
struct ZeroProbabilityError : Error {
  ZeroProbabilityError(const std::string &msg, std::vector<int> prefix_)
      : Error(msg), prefix(std::move(prefix_)) {}
  std::vector<int> prefix;
};

/// Malformed or unreadable input file.
struct IoError : Error {
  using Error::Error;
};

} // namespace povmx
