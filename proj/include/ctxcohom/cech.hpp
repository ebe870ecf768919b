#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ctxcohom/abpresheaf.hpp"
#include "ctxcohom/scenario.hpp"
#include "ctxcohom/zlinalg.hpp"

namespace ctxcohom {

using NervePtr = std::shared_ptr<const Nerve>;

/// Basis of C^q(M, F): simplex-major, generator-minor.
class CochainSpace {
 public:
  CochainSpace(const AbPresheaf& f, const Nerve& nerve, std::size_t q);

  std::size_t degree() const { return q_; }
  std::size_t dimension() const { return offsets_.back(); }
  std::size_t num_simplices() const { return offsets_.size() - 1; }
  std::size_t offset(std::size_t simplex) const { return offsets_.at(simplex); }
  std::size_t block_size(std::size_t simplex) const { return offsets_.at(simplex + 1) - offsets_.at(simplex); }

  struct BasisElement {
    std::size_t simplex;
    std::size_t generator;
  };
  BasisElement basis(std::size_t i) const;

  /// Value of a cochain at one simplex.
  IntVector value(const IntVector& cochain, std::size_t simplex) const;

 private:
  std::size_t q_;
  std::vector<std::size_t> offsets_;
};

/// δ^q : C^q -> C^{q+1}, δ(ω)(σ) = Σ_j (-1)^j ρ(ω(∂_j σ)). Row blocks are
/// assembled in parallel.
IntMatrix coboundary(const AbPresheaf& f, const Nerve& nerve, std::size_t q);

namespace serial {
IntMatrix coboundary(const AbPresheaf& f, const Nerve& nerve, std::size_t q);
}  // namespace serial

/// δ^q applied to one cochain without forming the matrix.
IntVector apply_coboundary(const AbPresheaf& f, const Nerve& nerve, std::size_t q, const IntVector& cochain);

/// Block-diagonal cochain map C^q(F) -> C^q(G) induced by a presheaf morphism.
IntMatrix cochain_map(const PresheafMorphism& m, const AbPresheaf& source, const AbPresheaf& target,
                      const Nerve& nerve, std::size_t q);

/// Lattice basis (as columns) of Z^q = ker δ^q.
IntMatrix cocycles(const AbPresheaf& f, const Nerve& nerve, std::size_t q);

struct CohomologyGroup {
  std::size_t degree = 0;
  std::size_t free_rank = 0;
  std::vector<zlinalg::Integer> torsion;
  IntMatrix cocycle_basis;
  IntMatrix coboundary_image_basis;
  /// Class representatives: column k generates a cyclic summand of order
  /// orders[k] (0 = infinite).
  IntMatrix generators;
  std::vector<zlinalg::Integer> orders;

  bool is_zero() const { return free_rank == 0 && torsion.empty(); }
};

/// Ȟ^0 = Z^0 (augmented complex) and Ȟ^q = Z^q / im δ^{q-1} for q ≥ 1.
CohomologyGroup cohomology(const AbPresheaf& f, const Nerve& nerve, std::size_t q);

/// z ∈ im δ^{q-1}; q = 0 means z = 0. Throws NotACocycle when δ^q z ≠ 0.
bool class_is_zero(const AbPresheaf& f, const Nerve& nerve, std::size_t q, const IntVector& z);

/// The cochain complex of one presheaf with coboundary matrices and their
/// echelon forms computed once and shared. Thread-safe.
class CechComplex {
 public:
  CechComplex(PresheafPtr f, NervePtr nerve, bool parallel = true)
      : f_(std::move(f)), nerve_(std::move(nerve)), parallel_(parallel) {}

  const AbPresheaf& presheaf() const { return *f_; }
  const PresheafPtr& presheaf_ptr() const { return f_; }
  const Nerve& nerve() const { return *nerve_; }
  const NervePtr& nerve_ptr() const { return nerve_; }
  bool parallel() const { return parallel_; }

  const CochainSpace& space(std::size_t q) const;
  const IntMatrix& coboundary(std::size_t q) const;
  /// Echelon form of δ^q, for image membership in degree q+1.
  const zlinalg::ColumnEchelon& coboundary_echelon(std::size_t q) const;
  IntVector apply(std::size_t q, const IntVector& cochain) const;

  bool is_cocycle(std::size_t q, const IntVector& z) const;
  /// z ∈ im δ^{q-1}; throws NotACocycle.
  bool class_is_zero(std::size_t q, const IntVector& z) const;
  /// w with δ^{q-1} w = z, when one exists.
  std::optional<IntVector> primitive(std::size_t q, const IntVector& z) const;

 private:
  PresheafPtr f_;
  NervePtr nerve_;
  bool parallel_;
  mutable std::mutex mutex_;
  mutable std::map<std::size_t, std::unique_ptr<CochainSpace>> spaces_;
  mutable std::map<std::size_t, std::unique_ptr<IntMatrix>> coboundaries_;
  mutable std::map<std::size_t, std::unique_ptr<zlinalg::ColumnEchelon>> echelons_;
};

using ComplexPtr = std::shared_ptr<const CechComplex>;

}  // namespace ctxcohom
