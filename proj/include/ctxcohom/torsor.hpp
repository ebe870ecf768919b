#pragma once

// F-torsors trivialized by the cover, presented by a defining 1-cocycle z.
// The sections over U are the tuples (t_i) ∈ ⊕_i F(C_i ∩ U) with
// t_i| - t_j| = z(C_i, C_j)| on every C_i ∩ C_j ∩ U, and g ∈ F(U) acts by
// (t_i) ↦ (t_i - g|_{C_i∩U}).

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "ctxcohom/cech.hpp"

namespace ctxcohom {

/// The affine lattice T(U) = particular + span(homogeneous).
struct TorsorDescriptor {
  MeasurementSet open;
  /// Contexts meeting U, in cover order; component k of a tuple lives in F(C ∩ U).
  std::vector<std::size_t> components;
  std::vector<std::size_t> offsets;
  IntMatrix system;
  IntVector rhs;
  std::optional<IntVector> particular;
  IntMatrix homogeneous;
  /// g ↦ (-g|_{C_i∩U})_i.
  IntMatrix action;

  std::size_t dimension() const { return offsets.back(); }
};

class CocycleTorsor {
 public:
  /// Throws NotACocycle unless δ¹z = 0.
  CocycleTorsor(ComplexPtr base, IntVector z);

  const CechComplex& complex() const { return *base_; }
  const ComplexPtr& complex_ptr() const { return base_; }
  const AbPresheaf& presheaf() const { return base_->presheaf(); }
  const IntVector& cocycle() const { return z_; }

  /// Nonempty relevant opens of the base presheaf.
  const std::vector<MeasurementSet>& opens() const { return opens_; }
  const TorsorDescriptor& descriptor(MeasurementSet u) const;

  bool nonempty(MeasurementSet u) const { return descriptor(u).particular.has_value(); }
  bool contains(MeasurementSet u, const IntVector& t) const;
  IntVector act(MeasurementSet u, const IntVector& g, const IntVector& t) const;
  /// T(V) -> T(U) for U ⊆ V.
  IntVector restrict(MeasurementSet u, MeasurementSet v, const IntVector& t) const;
  /// The action at U is free and transitive: its image is exactly the
  /// homogeneous lattice, and it is injective.
  bool simply_transitive_at(MeasurementSet u) const;

  /// t_k = (z(C_i, C_k))_i ∈ T(C_k).
  IntVector canonical_section(std::size_t k) const;
  std::vector<IntVector> canonical_trivialization() const;
  /// h^j_U : F(U) -> T(U), g ↦ (z(C_i, C_j)| - g|)_i, for U ⊆ C_j.
  IntVector trivializing_map(std::size_t j, MeasurementSet u, const IntVector& g) const;
  /// Inverse of h^j_U: (t_i) ↦ -t_j.
  IntVector trivializing_inverse(std::size_t j, MeasurementSet u, const IntVector& t) const;

 private:
  TorsorDescriptor build(MeasurementSet u) const;
  std::size_t component_index(const TorsorDescriptor& d, std::size_t context) const;

  ComplexPtr base_;
  IntVector z_;
  std::vector<MeasurementSet> opens_;
  std::map<MeasurementSet, TorsorDescriptor> descriptors_;
};

CocycleTorsor torsor_from_cocycle(ComplexPtr base, IntVector z);

/// Recovers g_ij with g_ij · t^j| = t^i| on C_i ∩ C_j. Throws NotASection
/// when some t^k ∉ T(C_k) and NonUniqueSolution when g_ij is not unique.
IntVector cocycle_from_torsor(const CocycleTorsor& t, const std::vector<IntVector>& trivialization);
/// cocycle_from_torsor with the canonical trivialization.
IntVector torsor_class(const CocycleTorsor& t);

/// T(X) ≠ ∅.
bool is_trivial(const CocycleTorsor& t);

/// g([z]) + g([w]) = g([z + w]). Throws BaseMismatch for different base complexes.
CocycleTorsor torsor_add(const CocycleTorsor& a, const CocycleTorsor& b);
CocycleTorsor torsor_negate(const CocycleTorsor& a);
/// Isomorphic torsors: their classes agree in Ȟ¹.
bool isomorphic(const CocycleTorsor& a, const CocycleTorsor& b);

/// For to.cocycle() = from.cocycle() + δ⁰h, the isomorphism T_from(U) -> T_to(U),
/// (t_i) ↦ (t_i - h_i|). Throws InvalidArgument when the cocycles do not differ by δ⁰h.
IntVector comparison_map(const CocycleTorsor& from, const CocycleTorsor& to, const IntVector& h, MeasurementSet u,
                         const IntVector& t);

}  // namespace ctxcohom
