// Copyright (c) the povmx developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "povmx/operators.hpp"

namespace povmx {

//=========================================================================
// Outcome spaces
//=========================================================================

/// Atom identifier: integer or string, ordered by declaration order only.
using Atom = std::variant<std::int64_t, std::string>;

inline std::string atom_label(const Atom &a) {
  if (std::holds_alternative<std::int64_t>(a))
    return std::to_string(std::get<std::int64_t>(a));
  return std::get<std::string>(a);
}

/// Finite outcome space: a nonempty list of pairwise-distinct atoms.
struct OutcomeSpace {
  std::string label;
  std::vector<Atom> atoms;

  int size() const { return static_cast<int>(atoms.size()); }
};

inline OutcomeSpace int_space(const std::string &label, int n) {
  OutcomeSpace s{label, {}};
  s.atoms.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) s.atoms.emplace_back(std::int64_t{i});
  return s;
}

inline void validate_space(const OutcomeSpace &s) {
  if (s.atoms.empty())
    throw ValidationError("outcome space '" + s.label + "' has no atoms");
  for (std::size_t i = 0; i < s.atoms.size(); ++i)
    for (std::size_t j = i + 1; j < s.atoms.size(); ++j)
      if (s.atoms[i] == s.atoms[j])
        throw ValidationError("outcome space '" + s.label +
                              "' has duplicate atom " + atom_label(s.atoms[i]));
}

/// Product of outcome spaces. Atom tuples are enumerated lexicographically
/// in declared factor order (first factor most significant); `index_of` and
/// `tuple_of` convert between tuples and that linear order. A rank-0 product
/// has exactly one (empty) tuple.
struct ProductSpace {
  std::vector<OutcomeSpace> factors;

  int rank() const { return static_cast<int>(factors.size()); }

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto &f : factors) n *= static_cast<std::size_t>(f.size());
    return n;
  }

  std::size_t index_of(std::span<const int> tuple) const {
    if (static_cast<int>(tuple.size()) != rank())
      throw DimensionError("tuple length does not match product rank");
    std::size_t idx = 0;
    for (int k = 0; k < rank(); ++k) {
      const int m = factors[static_cast<std::size_t>(k)].size();
      if (tuple[static_cast<std::size_t>(k)] < 0 ||
          tuple[static_cast<std::size_t>(k)] >= m)
        throw ValidationError("atom index out of range in factor " +
                              std::to_string(k));
      idx = idx * static_cast<std::size_t>(m) +
            static_cast<std::size_t>(tuple[static_cast<std::size_t>(k)]);
    }
    return idx;
  }

  std::vector<int> tuple_of(std::size_t index) const {
    if (index >= size())
      throw ValidationError("tuple index out of range");
    std::vector<int> t(static_cast<std::size_t>(rank()));
    for (int k = rank() - 1; k >= 0; --k) {
      const auto m = static_cast<std::size_t>(factors[static_cast<std::size_t>(k)].size());
      t[static_cast<std::size_t>(k)] = static_cast<int>(index % m);
      index /= m;
    }
    return t;
  }

  std::string tuple_label(std::size_t index, const char *sep = ",") const {
    const auto t = tuple_of(index);
    std::string out;
    for (int k = 0; k < rank(); ++k) {
      if (k) out += sep;
      out += atom_label(factors[static_cast<std::size_t>(k)]
                            .atoms[static_cast<std::size_t>(t[static_cast<std::size_t>(k)])]);
    }
    return out;
  }
};

inline ProductSpace product_of(const OutcomeSpace &s) { return ProductSpace{{s}}; }

inline ProductSpace power_space(const OutcomeSpace &s, int n) {
  ProductSpace p;
  p.factors.assign(static_cast<std::size_t>(n), s);
  return p;
}

inline bool same_space(const OutcomeSpace &a, const OutcomeSpace &b) {
  return a.label == b.label && a.atoms == b.atoms;
}

inline bool same_space(const ProductSpace &a, const ProductSpace &b) {
  if (a.rank() != b.rank()) return false;
  for (int k = 0; k < a.rank(); ++k)
    if (!same_space(a.factors[static_cast<std::size_t>(k)],
                    b.factors[static_cast<std::size_t>(k)]))
      return false;
  return true;
}

//=========================================================================
// Events
//=========================================================================

/// Finite event: a sorted, duplicate-free set of tuple indices of some
/// ProductSpace. Membership in the space is checked against its size.
struct EventSet {
  std::vector<std::size_t> indices;

  static EventSet empty() { return {}; }

  static EventSet full(const ProductSpace &space) {
    EventSet e;
    e.indices.resize(space.size());
    for (std::size_t i = 0; i < e.indices.size(); ++i) e.indices[i] = i;
    return e;
  }

  static EventSet of_indices(const ProductSpace &space,
                             std::vector<std::size_t> idx) {
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    if (!idx.empty() && idx.back() >= space.size())
      throw ValidationError("event contains an atom tuple outside the space");
    return EventSet{std::move(idx)};
  }

  static EventSet of_tuples(const ProductSpace &space,
                            const std::vector<std::vector<int>> &tuples) {
    std::vector<std::size_t> idx;
    idx.reserve(tuples.size());
    for (const auto &t : tuples) idx.push_back(space.index_of(t));
    return of_indices(space, std::move(idx));
  }

  EventSet complement(const ProductSpace &space) const {
    EventSet out;
    out.indices.reserve(space.size() - indices.size());
    std::size_t j = 0;
    for (std::size_t i = 0; i < space.size(); ++i) {
      if (j < indices.size() && indices[j] == i) {
        ++j;
      } else {
        out.indices.push_back(i);
      }
    }
    return out;
  }

  bool contains(std::size_t idx) const {
    return std::binary_search(indices.begin(), indices.end(), idx);
  }

  std::size_t size() const { return indices.size(); }
};

//=========================================================================
// POVMs on finite outcome spaces
//=========================================================================

/// POVM on a finite product space: one effect per atom tuple, in tuple
/// order. sigma-additivity is finite additivity here: G(A) is the sum of
/// the effects of the atoms of A.
struct Povm {
  ProductSpace space;
  Eigen::Index dim = 0;
  std::vector<Operator> effects;
};

inline Povm povm_on(const OutcomeSpace &s, std::vector<Operator> effects) {
  Povm p{product_of(s), effects.empty() ? 0 : effects.front().rows(),
         std::move(effects)};
  return p;
}

/// Structural checks shared by every operation: effect count, squareness,
/// matching dimensions.
inline void validate_povm_shape(const Povm &p) {
  for (const auto &f : p.space.factors) validate_space(f);
  if (p.effects.size() != p.space.size())
    throw ValidationError(
        "POVM is missing effects: " + std::to_string(p.effects.size()) +
        " stored, " + std::to_string(p.space.size()) + " atom tuples");
  for (const auto &e : p.effects) {
    if (e.rows() != e.cols())
      throw DimensionError("POVM effect is not square");
    if (e.rows() != p.dim)
      throw DimensionError("POVM effects have mismatched dimensions");
  }
}

struct VerificationReport {
  bool pass = false;
  bool normalization_pass = false;
  bool positivity_pass = false;
  double normalization_residual = 0.0;     // max|sum effects - I|
  std::vector<double> positivity_residuals; // per effect, max(0, -lambda_min)
  double max_positivity_residual = 0.0;
  int worst_effect = -1;
};

/// Axiom verifier: positivity of every effect and normalization of the sum.
inline VerificationReport verify_povm(const Povm &p,
                                      const Tolerances &tol = {}) {
  validate_povm_shape(p);
  VerificationReport r;
  r.positivity_residuals.reserve(p.effects.size());
  for (std::size_t i = 0; i < p.effects.size(); ++i) {
    const auto &e = p.effects[i];
    const double scale = 1.0 + max_abs(e);
    double res;
    if (hermiticity_residual(e) > tol.positivity * scale) {
      res = hermiticity_residual(e); // non-Hermitian counts against positivity
    } else {
      res = positivity_residual(e, tol);
    }
    r.positivity_residuals.push_back(res);
    if (res > r.max_positivity_residual) {
      r.max_positivity_residual = res;
      r.worst_effect = static_cast<int>(i);
    }
  }
  Operator sum = Operator::Zero(p.dim, p.dim);
  for (const auto &e : p.effects) sum += e;
  r.normalization_residual = max_abs(sum - Operator::Identity(p.dim, p.dim));
  r.normalization_pass = r.normalization_residual <= tol.norm;

  double pos_bound = 0.0;
  for (const auto &e : p.effects)
    pos_bound = std::max(pos_bound, tol.positivity * (1.0 + max_abs(e)));
  r.positivity_pass = r.max_positivity_residual <= pos_bound;
  r.pass = r.normalization_pass && r.positivity_pass;
  return r;
}

/// G(A): finite additivity over the atoms of A. Empty A gives the zero
/// operator; the full space gives the identity (within tolerance).
inline Operator event_operator(const Povm &p, const EventSet &a) {
  validate_povm_shape(p);
  if (!a.indices.empty() && a.indices.back() >= p.space.size())
    throw ValidationError("event contains an atom tuple outside the POVM space");
  Operator sum = Operator::Zero(p.dim, p.dim);
  for (std::size_t idx : a.indices) sum += p.effects[idx];
  return sum;
}

/// <psi|G(A) psi> for normalized psi.
inline double born_probability(const Povm &p, const EventSet &a,
                               const StateVector &psi,
                               const Tolerances &tol = {}) {
  require_same_dim(p.dim, psi.size(), "born_probability");
  require_normalized(psi, tol);
  return quadratic_form(event_operator(p, a), psi).real();
}

/// tr(rho G(A)).
inline double density_probability(const Povm &p, const EventSet &a,
                                  const DensityMatrix &rho,
                                  const Tolerances &tol = {}) {
  require_same_dim(p.dim, rho.op.rows(), "density_probability");
  validate_density_matrix(rho, tol);
  return (rho.op * event_operator(p, a)).trace().real();
}

//=========================================================================
// Marginals and products
//=========================================================================

/// Marginal onto the factors at positions `keep` (sorted, in declared
/// order): each kept-tuple effect is the sum over all extensions. Keeping
/// every factor returns the POVM unchanged.
inline Povm marginal(const Povm &p, std::span<const int> keep) {
  validate_povm_shape(p);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= p.space.rank())
      throw ValidationError("marginal: kept position out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw ValidationError("marginal: kept positions must be strictly increasing");
  }
  if (static_cast<int>(keep.size()) == p.space.rank()) return p;

  Povm out;
  out.dim = p.dim;
  for (int k : keep)
    out.space.factors.push_back(p.space.factors[static_cast<std::size_t>(k)]);
  out.effects.assign(out.space.size(), Operator::Zero(p.dim, p.dim));

  std::vector<int> restricted(keep.size());
  for (std::size_t idx = 0; idx < p.space.size(); ++idx) {
    const auto tuple = p.space.tuple_of(idx);
    for (std::size_t i = 0; i < keep.size(); ++i)
      restricted[i] = tuple[static_cast<std::size_t>(keep[i])];
    out.effects[out.space.index_of(restricted)] += p.effects[idx];
  }
  return out;
}

enum class ProductMode {
  kronecker, // effects Q(a) (x) R(b) on H_Q (x) H_R
  commuting, // effects Q(a) * R(b) on a shared H; requires commutativity
};

inline Operator kronecker(const Operator &a, const Operator &b) {
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Product POVM of Q and R on the concatenated product space. Kronecker mode
/// is always a POVM; commuting mode multiplies effects on the shared Hilbert
/// space and fails if any pair does not commute within tolerance.
inline Povm tensor_product(const Povm &q, const Povm &r, ProductMode mode,
                           const Tolerances &tol = {}) {
  validate_povm_shape(q);
  validate_povm_shape(r);
  Povm out;
  out.space.factors = q.space.factors;
  out.space.factors.insert(out.space.factors.end(), r.space.factors.begin(),
                           r.space.factors.end());
  out.effects.reserve(q.effects.size() * r.effects.size());

  if (mode == ProductMode::commuting) {
    require_same_dim(q.dim, r.dim, "tensor_product(commuting)");
    out.dim = q.dim;
    for (const auto &eq : q.effects)
      for (const auto &er : r.effects) {
        const double comm = max_abs(eq * er - er * eq);
        const double scale =
            1.0 + std::max(max_abs(eq), max_abs(er));
        if (comm > tol.positivity * scale)
          throw ValidationError(
              "tensor_product: effects do not commute (commutator norm " +
              std::to_string(comm) + ")");
        out.effects.push_back(eq * er);
      }
  } else {
    out.dim = q.dim * r.dim;
    for (const auto &eq : q.effects)
      for (const auto &er : r.effects) out.effects.push_back(kronecker(eq, er));
  }
  return out;
}

} // namespace povmx
