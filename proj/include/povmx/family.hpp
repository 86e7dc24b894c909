// Copyright (c) the povmx developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "povmx/povm.hpp"
#include "povmx/rng.hpp"

namespace povmx {

//=========================================================================
// Index sets and families
//=========================================================================

/// The finite window into the index set: ordered coordinate names, each with
/// its outcome space.
struct IndexSet {
  std::vector<std::string> names;
  std::vector<OutcomeSpace> spaces;

  int rank() const { return static_cast<int>(names.size()); }

  int position_of(const std::string &name) const {
    for (int i = 0; i < rank(); ++i)
      if (names[static_cast<std::size_t>(i)] == name) return i;
    throw ValidationError("unknown coordinate '" + name + "'");
  }

  ProductSpace subspace(std::span<const int> positions) const {
    ProductSpace p;
    for (int k : positions) {
      if (k < 0 || k >= rank())
        throw ValidationError("coordinate position out of range");
      p.factors.push_back(spaces[static_cast<std::size_t>(k)]);
    }
    return p;
  }

  std::string key_label(std::span<const int> positions) const {
    std::string out = "{";
    for (std::size_t i = 0; i < positions.size(); ++i) {
      if (i) out += ",";
      out += names[static_cast<std::size_t>(positions[i])];
    }
    return out + "}";
  }
};

inline void validate_index_set(const IndexSet &idx) {
  if (idx.names.size() != idx.spaces.size())
    throw ValidationError("index set: names and spaces differ in length");
  for (std::size_t i = 0; i < idx.names.size(); ++i)
    for (std::size_t j = i + 1; j < idx.names.size(); ++j)
      if (idx.names[i] == idx.names[j])
        throw ValidationError("index set has duplicate coordinate '" +
                              idx.names[i] + "'");
  for (const auto &s : idx.spaces) validate_space(s);
}

/// Family {G_K} of POVMs over finite subsets K of the coordinates, all
/// acting on the same Hilbert space. Keys are sorted coordinate positions;
/// members not stored are derivable by marginalizing a stored superset.
struct PovmFamily {
  IndexSet index;
  Eigen::Index dim = 0;
  std::map<std::vector<int>, Povm> members;
};

inline void add_member(PovmFamily &f, std::vector<int> key, Povm p) {
  std::sort(key.begin(), key.end());
  if (std::adjacent_find(key.begin(), key.end()) != key.end())
    throw ValidationError("family member key has duplicate coordinates");
  validate_povm_shape(p);
  if (!same_space(p.space, f.index.subspace(key)))
    throw ValidationError("member POVM space does not match coordinates " +
                          f.index.key_label(key));
  if (f.members.empty() && f.dim == 0) f.dim = p.dim;
  if (p.dim != f.dim)
    throw DimensionError("family members act on mismatched Hilbert spaces");
  f.members.insert_or_assign(std::move(key), std::move(p));
}

inline bool is_subset(std::span<const int> k, std::span<const int> kp) {
  return std::includes(kp.begin(), kp.end(), k.begin(), k.end());
}

/// Positions of the elements of `k` within the sorted superset `kp`.
inline std::vector<int> relative_positions(std::span<const int> k,
                                           std::span<const int> kp) {
  std::vector<int> rel;
  rel.reserve(k.size());
  for (int c : k) {
    const auto it = std::lower_bound(kp.begin(), kp.end(), c);
    if (it == kp.end() || *it != c)
      throw ValidationError("coordinate set is not a subset");
    rel.push_back(static_cast<int>(it - kp.begin()));
  }
  return rel;
}

/// G_K: the stored member, or the marginal of the smallest stored superset.
inline Povm family_member(const PovmFamily &f, std::vector<int> key) {
  std::sort(key.begin(), key.end());
  if (auto it = f.members.find(key); it != f.members.end()) return it->second;
  const std::vector<int> *best = nullptr;
  for (const auto &[k, povm] : f.members) {
    if (!is_subset(key, k)) continue;
    if (!best || k.size() < best->size()) best = &k;
  }
  if (!best)
    throw ValidationError("member " + f.index.key_label(key) +
                          " is not stored and not derivable from any stored superset");
  const auto rel = relative_positions(key, *best);
  return marginal(f.members.at(*best), rel);
}

//=========================================================================
// Consistency check (projectivity across stored members)
//=========================================================================

struct ConsistencyOptions {
  int sampled_pairs = 50;      // extra randomly sampled sub-subset checks
  std::uint64_t seed = 2026;
};

struct ConsistencyCheck {
  std::vector<int> subset;
  std::vector<int> superset;   // second operand; for sampled checks, the
                               // other superset the subset was derived from
  double residual = 0.0;
  std::vector<int> worst_atom; // atom tuple on the subset space
  bool sampled = false;
};

struct ConsistencyReport {
  bool pass = false;
  double max_residual = 0.0;
  std::string worst_subset;
  std::string worst_superset;
  std::string worst_atom;
  int pairs_checked = 0;
  std::vector<ConsistencyCheck> checks;
};

namespace detail {

inline std::pair<double, std::size_t> povm_distance(const Povm &a,
                                                    const Povm &b) {
  double worst = 0.0;
  std::size_t worst_atom = 0;
  for (std::size_t i = 0; i < a.effects.size(); ++i) {
    const double d = max_abs(a.effects[i] - b.effects[i]);
    if (d > worst) {
      worst = d;
      worst_atom = i;
    }
  }
  return {worst, worst_atom};
}

} // namespace detail

/// Verifies the consistency (projectivity) condition on all stored pairs
/// K subset-of K', plus `sampled_pairs` randomly drawn sub-subsets compared
/// across two stored supersets. Residual is the entrywise max over effects.
inline ConsistencyReport check_consistency(const PovmFamily &f,
                                           const Tolerances &tol = {},
                                           const ConsistencyOptions &opts = {}) {
  validate_index_set(f.index);
  for (const auto &[k, p] : f.members) {
    validate_povm_shape(p);
    if (p.dim != f.dim)
      throw DimensionError("family members act on mismatched Hilbert spaces");
  }

  ConsistencyReport r;
  auto record = [&](std::vector<int> k, std::vector<int> kp, const Povm &lhs,
                    const Povm &rhs, bool sampled) {
    const auto [res, atom] = detail::povm_distance(lhs, rhs);
    ConsistencyCheck c{std::move(k), std::move(kp), res,
                       lhs.space.rank() ? lhs.space.tuple_of(atom)
                                        : std::vector<int>{},
                       sampled};
    if (res > r.max_residual || r.pairs_checked == 0) {
      r.max_residual = std::max(r.max_residual, res);
      if (res >= r.max_residual) {
        r.worst_subset = f.index.key_label(c.subset);
        r.worst_superset = f.index.key_label(c.superset);
        r.worst_atom = lhs.space.rank() ? lhs.space.tuple_label(atom) : "()";
      }
    }
    ++r.pairs_checked;
    r.checks.push_back(std::move(c));
  };

  // All stored pairs with a strict subset relation.
  for (const auto &[k, gk] : f.members) {
    for (const auto &[kp, gkp] : f.members) {
      if (k.size() >= kp.size() || !is_subset(k, kp)) continue;
      const Povm m = marginal(gkp, relative_positions(k, kp));
      record(k, kp, m, gk, false);
    }
  }

  // Randomly sampled sub-subsets, derived from two stored supersets each.
  std::vector<const std::vector<int> *> keys;
  for (const auto &[k, p] : f.members) keys.push_back(&k);
  if (keys.size() >= 2 && opts.sampled_pairs > 0) {
    auto eng = make_engine(derive_seed(opts.seed, 0x636f6e73ULL));
    for (int s = 0; s < opts.sampled_pairs; ++s) {
      const auto &k1 = *keys[static_cast<std::size_t>(
          uniform01(eng) * static_cast<double>(keys.size()))];
      const auto &k2 = *keys[static_cast<std::size_t>(
          uniform01(eng) * static_cast<double>(keys.size()))];
      std::vector<int> common;
      std::set_intersection(k1.begin(), k1.end(), k2.begin(), k2.end(),
                            std::back_inserter(common));
      std::vector<int> sub;
      for (int c : common)
        if (uniform01(eng) < 0.5) sub.push_back(c);
      const Povm m1 = marginal(f.members.at(k1), relative_positions(sub, k1));
      const Povm m2 = marginal(f.members.at(k2), relative_positions(sub, k2));
      record(sub, k2, m1, m2, true);
    }
  }

  r.pass = r.max_residual <= tol.consistency;
  return r;
}

//=========================================================================
// Prefix families and the lift to a family over all finite subsets
//=========================================================================

/// G_1, G_2, ..., G_N on M, M^2, ..., M^N, all on one Hilbert space.
struct PrefixFamily {
  OutcomeSpace space;
  Eigen::Index dim = 0;
  std::vector<Povm> povms; // povms[n-1] acts on M^n
};

inline void validate_prefix_family(const PrefixFamily &f) {
  validate_space(f.space);
  if (f.povms.empty()) throw ValidationError("prefix family has no members");
  for (std::size_t n = 0; n < f.povms.size(); ++n) {
    const auto &p = f.povms[n];
    validate_povm_shape(p);
    if (p.dim != f.dim)
      throw DimensionError("prefix family members act on mismatched Hilbert spaces");
    if (p.space.rank() != static_cast<int>(n) + 1)
      throw ValidationError("prefix member " + std::to_string(n + 1) +
                            " has wrong rank");
    for (const auto &fac : p.space.factors)
      if (fac.atoms != f.space.atoms)
        throw ValidationError("prefix member factors differ from the base space");
  }
}

inline int prefix_depth(const PrefixFamily &f) {
  return static_cast<int>(f.povms.size());
}

/// Residual of the step-n projectivity relation (marginal of G_{n+1} onto
/// its first n coordinates vs G_n).
inline double prefix_consistency_residual(const PrefixFamily &f, int n) {
  std::vector<int> keep(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) keep[static_cast<std::size_t>(i)] = i;
  const Povm m = marginal(f.povms[static_cast<std::size_t>(n)], keep);
  return detail::povm_distance(m, f.povms[static_cast<std::size_t>(n - 1)]).first;
}

inline IndexSet prefix_index_set(const PrefixFamily &f) {
  IndexSet idx;
  for (int t = 1; t <= prefix_depth(f); ++t) {
    idx.names.push_back("t" + std::to_string(t));
    idx.spaces.push_back(f.space);
  }
  return idx;
}

/// Lifts a consistent prefix family to a PovmFamily over every subset of
/// {1..N}: G_K is the marginal of G_max(K) onto K, which the projectivity
/// condition makes independent of the member it is derived from. The prefix
/// members themselves are stored unchanged.
inline PovmFamily lift_prefix_family(const PrefixFamily &f,
                                     const Tolerances &tol = {}) {
  validate_prefix_family(f);
  const int depth = prefix_depth(f);
  if (depth > 20)
    throw ValidationError("prefix family too deep to lift (2^N members)");
  for (int n = 1; n < depth; ++n) {
    const double res = prefix_consistency_residual(f, n);
    if (res > tol.consistency)
      throw ConsistencyError(
          "prefix family violates consistency at level " + std::to_string(n + 1) +
              ": residual " + std::to_string(res),
          n + 1, res);
  }

  PovmFamily out;
  out.index = prefix_index_set(f);
  out.dim = f.dim;
  const auto nsubsets = std::size_t{1} << depth;
  for (std::size_t mask = 0; mask < nsubsets; ++mask) {
    std::vector<int> key;
    int maxk = -1;
    for (int t = 0; t < depth; ++t)
      if (mask & (std::size_t{1} << t)) {
        key.push_back(t);
        maxk = t;
      }
    const Povm &src = f.povms[static_cast<std::size_t>(std::max(maxk, 0))];
    add_member(out, key, marginal(src, key));
  }
  return out;
}

//=========================================================================
// Cylinder sets
//=========================================================================

/// Set constrained on finitely many coordinates: an event on the product
/// space of the base coordinates (every other coordinate is unrestricted).
struct CylinderSet {
  std::vector<std::string> base; // coordinate names, in index-set order
  EventSet event;
};

inline std::vector<int> base_positions(const IndexSet &idx,
                                       const CylinderSet &c) {
  std::vector<int> pos;
  pos.reserve(c.base.size());
  for (const auto &name : c.base) pos.push_back(idx.position_of(name));
  for (std::size_t i = 1; i < pos.size(); ++i)
    if (pos[i] <= pos[i - 1])
      throw ValidationError("cylinder base must list distinct coordinates in index order");
  return pos;
}

/// G evaluated on the cylinder set: event operator of the base member.
/// Well-definedness across base enlargements is the consistency condition.
inline Operator cylinder_operator(const PovmFamily &f, const CylinderSet &c) {
  const auto pos = base_positions(f.index, c);
  const Povm g = family_member(f, pos);
  return event_operator(g, c.event);
}

/// mu^psi of the cylinder set.
inline double cylinder_probability(const PovmFamily &f, const CylinderSet &c,
                                   const StateVector &psi,
                                   const Tolerances &tol = {}) {
  require_same_dim(f.dim, psi.size(), "cylinder_probability");
  require_normalized(psi, tol);
  return quadratic_form(cylinder_operator(f, c), psi).real();
}

/// Rewrites the cylinder over a larger base: the event becomes every tuple
/// whose restriction to the old base lies in the old event.
inline CylinderSet enlarge_base(const PovmFamily &f, const CylinderSet &c,
                                const std::vector<std::string> &larger_base) {
  CylinderSet out{larger_base, {}};
  const auto pos = base_positions(f.index, c);
  const auto lpos = base_positions(f.index, out);
  if (!is_subset(pos, lpos))
    throw ValidationError("enlarge_base: new base does not contain the old one");
  const auto rel = relative_positions(pos, lpos);
  const ProductSpace small = f.index.subspace(pos);
  const ProductSpace large = f.index.subspace(lpos);
  std::vector<std::size_t> indices;
  std::vector<int> restricted(rel.size());
  for (std::size_t i = 0; i < large.size(); ++i) {
    const auto tuple = large.tuple_of(i);
    for (std::size_t j = 0; j < rel.size(); ++j)
      restricted[j] = tuple[static_cast<std::size_t>(rel[j])];
    if (c.event.contains(small.index_of(restricted))) indices.push_back(i);
  }
  out.event = EventSet::of_indices(large, std::move(indices));
  return out;
}

} // namespace povmx
