#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "ctxcohom/abpresheaf.hpp"
#include "ctxcohom/cech.hpp"
#include "ctxcohom/empirical.hpp"

namespace ctxcohom {

/// Verdict for γ^q_{C0}(s0). When the class vanishes, `witness` is a family
/// s ∈ Z^{2q}(M, F) with p(s) = ψ^{2q}(s0); otherwise it is the obstruction
/// cocycle in Z^{2q+1}(M, F_{~C0}).
struct ObstructionResult {
  std::size_t context = 0;
  std::optional<std::size_t> section;  // index into S(C0) when s0 is a generator
  std::size_t level = 0;
  bool vanishes = false;
  /// Vanishes over Q but not over Z.
  bool rational_only = false;
  IntVector witness;
};

/// Everything attached to one choice of C0: F|_{C0}, p, F_{~C0} and their
/// complexes over the shared nerve.
class ContextAnalysis {
 public:
  ContextAnalysis(ComplexPtr f, std::size_t context);

  std::size_t context() const { return c0_; }
  const CechComplex& full() const { return *f_; }
  const CechComplex& relative() const { return *rel_; }
  const CechComplex& kernel() const { return *ker_; }
  const ComplexPtr& kernel_ptr() const { return ker_; }
  const PresheafMorphism& projection() const { return p_; }
  const PresheafMorphism& inclusion() const { return inclusion_; }
  std::size_t section_rank() const;

  /// ψ^q(s0): the cochain σ ↦ s0|_{C0∩|σ|}.
  IntVector psi(const IntVector& s0, std::size_t q) const;
  IntMatrix psi_matrix(std::size_t q) const;
  /// Cochain maps p: C^q(F) -> C^q(F|_{C0}) and ι: C^q(F_{~C0}) -> C^q(F).
  IntMatrix projection_matrix(std::size_t q) const;
  IntMatrix inclusion_matrix(std::size_t q) const;
  IntVector project(std::size_t q, const IntVector& cochain) const;
  IntVector include(std::size_t q, const IntVector& kernel_cochain) const;

  /// Preimage under p chosen blockwise: each generator goes to the smallest
  /// section restricting to it. Throws LiftFailed.
  IntVector lift(std::size_t q, const IntVector& rel_cochain) const;
  /// lift() plus a seeded random element of ι(C^q(F_{~C0})).
  IntVector random_lift(std::size_t q, const IntVector& rel_cochain, std::uint64_t seed) const;
  /// Coordinates in F_{~C0} of a cochain of F killed by p; nothing if not in the kernel.
  std::optional<IntVector> kernel_coordinates(std::size_t q, const IntVector& cochain) const;

  /// γ^q by the snake: lift ψ^{2q}(s0), apply δ^{2q}, test the class.
  ObstructionResult gamma(const IntVector& s0, std::size_t q) const;
  /// Same with an explicit lift of ψ^{2q}(s0).
  ObstructionResult gamma_with_lift(const IntVector& s0, std::size_t q, const IntVector& lift) const;
  /// Solves [δ^{2q}; p] s = [0; ψ^{2q}(s0)] directly.
  std::optional<IntVector> vanishes_via_family(const IntVector& s0, std::size_t q) const;
  /// The family s(C_i, C_j, C_k) = r_{C_j}|, r the lift of ψ^0(s0); solves the q = 1 system.
  IntVector middle_vertex_family(const IntVector& s0) const;

  /// Basis of ker γ_{C0} ⊆ F(C0) as columns.
  IntMatrix gamma_kernel() const;

  /// Builds echelon forms needed up to level q so later queries only solve.
  void prepare(std::size_t q_max) const;

 private:
  const zlinalg::ColumnEchelon& family_system(std::size_t q) const;

  ComplexPtr f_;
  std::size_t c0_;
  ComplexPtr rel_;
  ComplexPtr ker_;
  PresheafMorphism p_;
  PresheafMorphism inclusion_;
  std::map<MeasurementSet, zlinalg::ColumnEchelon> inclusion_echelons_;
  mutable std::mutex mutex_;
  mutable std::map<std::size_t, std::unique_ptr<zlinalg::ColumnEchelon>> family_systems_;
};

struct ContextSummary {
  std::size_t context = 0;
  IntMatrix gamma_kernel;
  bool gamma_injective = false;
  /// Distinct possible sections have distinct nonzero obstructions.
  bool gamma_separates_sections = false;
};

struct ClassificationReport {
  std::size_t q_max = 0;
  LogicalClassification logical;
  /// Ordered by context, then section index, then level.
  std::vector<ObstructionResult> table;
  std::vector<ContextSummary> contexts;
  /// Indexed by level.
  std::vector<bool> clc;
  std::vector<bool> csc;
  /// All γ_C injective. Implies CSC; the converse can fail when a sum of
  /// sections lies in the kernel.
  bool all_gamma_injective = false;

  bool is_lc() const { return logical.is_lc; }
  bool is_sc() const { return logical.is_sc; }
  bool is_clc(std::size_t q = 0) const { return clc.at(q); }
  bool is_csc(std::size_t q = 0) const { return csc.at(q); }
  const ObstructionResult& at(std::size_t context, std::size_t section, std::size_t level) const;
};

/// The free presheaf, a nerve deep enough for level q_max and one
/// ContextAnalysis per context.
class Analyzer {
 public:
  Analyzer(const EmpiricalModel& model, std::size_t q_max, bool parallel = true);

  const EmpiricalModel& model() const { return model_; }
  std::size_t q_max() const { return q_max_; }
  bool parallel() const { return parallel_; }
  const PresheafPtr& presheaf() const { return f_; }
  const NervePtr& nerve() const { return nerve_; }
  const CechComplex& complex() const { return *complex_; }
  const ComplexPtr& complex_ptr() const { return complex_; }
  const ContextAnalysis& context(std::size_t c0) const { return *contexts_.at(c0); }

  /// Unit vector of one possible section in F(C0).
  IntVector section_vector(std::size_t c0, std::size_t section) const;
  ObstructionResult obstruction(std::size_t c0, std::size_t section, std::size_t level) const;

 private:
  EmpiricalModel model_;
  std::size_t q_max_;
  bool parallel_;
  PresheafPtr f_;
  NervePtr nerve_;
  ComplexPtr complex_;
  std::vector<std::unique_ptr<ContextAnalysis>> contexts_;
};

/// Both vanishing routes are run for every entry and must agree.
ClassificationReport classify(const Analyzer& analyzer);
ClassificationReport classify(const EmpiricalModel& model, std::size_t q_max);

namespace serial {
ClassificationReport classify(const EmpiricalModel& model, std::size_t q_max);
}  // namespace serial

}  // namespace ctxcohom
