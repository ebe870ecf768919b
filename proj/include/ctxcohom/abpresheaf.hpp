#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ctxcohom/empirical.hpp"
#include "ctxcohom/scenario.hpp"
#include "ctxcohom/zlinalg.hpp"

namespace ctxcohom {

using zlinalg::IntMatrix;
using zlinalg::IntVector;
// IntVector is a std::vector, so its arithmetic is not found by ADL.
using zlinalg::operator+;
using zlinalg::operator-;

/// A presheaf of finitely generated free abelian groups on the relevant opens
/// of a scenario (intersections of contexts, the empty set, and X). Each group
/// has a chosen ordered basis; restriction(U, V) for U ⊆ V is the matrix of
/// F(V) -> F(U) in those bases.
class AbPresheaf {
 public:
  struct Group {
    std::size_t rank = 0;
    std::vector<std::string> labels;
  };

  AbPresheaf(std::string name, Scenario scenario, std::map<MeasurementSet, Group> groups,
             std::map<std::pair<MeasurementSet, MeasurementSet>, IntMatrix> restrictions);

  const std::string& name() const { return name_; }
  const Scenario& scenario() const { return scenario_; }
  const std::vector<MeasurementSet>& opens() const { return opens_; }
  bool has_open(MeasurementSet u) const { return groups_.count(u) != 0; }

  std::size_t rank(MeasurementSet u) const { return group(u).rank; }
  const Group& group(MeasurementSet u) const;
  /// Matrix of the restriction F(V) -> F(U); requires U ⊆ V.
  const IntMatrix& restriction(MeasurementSet u, MeasurementSet v) const;

 private:
  std::string name_;
  Scenario scenario_;
  std::vector<MeasurementSet> opens_;
  std::map<MeasurementSet, Group> groups_;
  std::map<std::pair<MeasurementSet, MeasurementSet>, IntMatrix> restrictions_;
};

using PresheafPtr = std::shared_ptr<const AbPresheaf>;

/// Componentwise homomorphisms F(U) -> G(U) on the shared relevant opens.
struct PresheafMorphism {
  std::map<MeasurementSet, IntMatrix> components;
  const IntMatrix& at(MeasurementSet u) const;
};

/// F = F_Z S. Beneath the cover the basis of F(U) is sections_at(U) (the empty
/// open carries the single empty section, so F(∅) ≅ Z). F(X) is the group of
/// compatible families over the cover, so the presheaf glues along M.
PresheafPtr free_presheaf(const EmpiricalModel& model);

/// F|_{C0}: U ↦ F(U ∩ C0).
PresheafPtr restrict_presheaf(const AbPresheaf& f, std::size_t context);

/// p^{C0}: F ⇒ F|_{C0}, U ↦ restriction to U ∩ C0. Throws SurjectivityViolated
/// when some component is not onto.
PresheafMorphism projection_morphism(const AbPresheaf& f, std::size_t context);

/// F_{~C0}(U) = ker p_U together with the inclusion into F.
struct KernelPresheaf {
  PresheafPtr presheaf;
  PresheafMorphism inclusion;
};

KernelPresheaf kernel_presheaf(const AbPresheaf& f, const PresheafMorphism& p, std::size_t context);

/// restriction(U⊆U) = 1 and restriction(U⊆W) = restriction(U⊆V)·restriction(V⊆W).
bool is_functorial(const AbPresheaf& f);
/// Every naturality square commutes.
bool is_natural(const PresheafMorphism& m, const AbPresheaf& source, const AbPresheaf& target);

}  // namespace ctxcohom
