#include "ctxcohom/obstruction.hpp"

#include <exception>
#include <random>

#include "ctxcohom/errors.hpp"

namespace ctxcohom {

ContextAnalysis::ContextAnalysis(ComplexPtr f, std::size_t context) : f_(std::move(f)), c0_(context) {
  const AbPresheaf& base = f_->presheaf();
  const bool par = f_->parallel();
  rel_ = std::make_shared<CechComplex>(restrict_presheaf(base, c0_), f_->nerve_ptr(), par);
  p_ = projection_morphism(base, c0_);
  auto k = kernel_presheaf(base, p_, c0_);
  ker_ = std::make_shared<CechComplex>(k.presheaf, f_->nerve_ptr(), par);
  inclusion_ = std::move(k.inclusion);
  for (const auto& [u, m] : inclusion_.components) inclusion_echelons_.emplace(u, zlinalg::ColumnEchelon(m, par));
}

std::size_t ContextAnalysis::section_rank() const {
  return f_->presheaf().rank(f_->presheaf().scenario().context(c0_).set);
}

IntVector ContextAnalysis::psi(const IntVector& s0, std::size_t q) const {
  if (s0.size() != section_rank()) throw Error(ErrorCode::DimensionMismatch, "s0 must lie in F(C0)");
  const AbPresheaf& base = f_->presheaf();
  const MeasurementSet c0 = base.scenario().context(c0_).set;
  const CochainSpace& space = rel_->space(q);
  const auto& level = f_->nerve().level(q);
  IntVector out(space.dimension());
  for (std::size_t s = 0; s < level.size(); ++s) {
    IntVector v = base.restriction(level[s].open & c0, c0) * s0;
    std::copy(v.begin(), v.end(), out.begin() + static_cast<std::ptrdiff_t>(space.offset(s)));
  }
  return out;
}

IntMatrix ContextAnalysis::psi_matrix(std::size_t q) const {
  std::vector<IntVector> cols;
  for (std::size_t k = 0; k < section_rank(); ++k) cols.push_back(psi(zlinalg::unit_vector(section_rank(), k), q));
  return IntMatrix::from_columns(rel_->space(q).dimension(), cols);
}

IntMatrix ContextAnalysis::projection_matrix(std::size_t q) const {
  return cochain_map(p_, f_->presheaf(), rel_->presheaf(), f_->nerve(), q);
}

IntMatrix ContextAnalysis::inclusion_matrix(std::size_t q) const {
  return cochain_map(inclusion_, ker_->presheaf(), f_->presheaf(), f_->nerve(), q);
}

namespace {

// Applies a per-open morphism block by block.
IntVector apply_blockwise(const PresheafMorphism& m, const Nerve& nerve, std::size_t q, const CochainSpace& src,
                          const CochainSpace& dst, const IntVector& v) {
  if (v.size() != src.dimension()) throw Error(ErrorCode::DimensionMismatch, "cochain length");
  IntVector out(dst.dimension());
  const auto& level = nerve.level(q);
  for (std::size_t s = 0; s < level.size(); ++s) {
    IntVector block = m.at(level[s].open) * src.value(v, s);
    std::copy(block.begin(), block.end(), out.begin() + static_cast<std::ptrdiff_t>(dst.offset(s)));
  }
  return out;
}

}  // namespace

IntVector ContextAnalysis::project(std::size_t q, const IntVector& cochain) const {
  return apply_blockwise(p_, f_->nerve(), q, f_->space(q), rel_->space(q), cochain);
}

IntVector ContextAnalysis::include(std::size_t q, const IntVector& kernel_cochain) const {
  return apply_blockwise(inclusion_, f_->nerve(), q, ker_->space(q), f_->space(q), kernel_cochain);
}

IntVector ContextAnalysis::lift(std::size_t q, const IntVector& rel_cochain) const {
  const CochainSpace& src = rel_->space(q);
  const CochainSpace& dst = f_->space(q);
  if (rel_cochain.size() != src.dimension()) throw Error(ErrorCode::DimensionMismatch, "cochain length");
  const auto& level = f_->nerve().level(q);
  IntVector out(dst.dimension());
  for (std::size_t s = 0; s < level.size(); ++s) {
    const IntMatrix& p = p_.at(level[s].open);
    IntVector target = src.value(rel_cochain, s);
    IntVector block(p.cols());
    bool direct = true;
    for (std::size_t k = 0; k < p.rows() && direct; ++k) {
      if (sgn(target[k]) == 0) continue;
      // Smallest section whose restriction is exactly generator k.
      std::optional<std::size_t> pick;
      for (std::size_t c = 0; c < p.cols() && !pick; ++c) {
        if (p.column(c) == zlinalg::unit_vector(p.rows(), k)) pick = c;
      }
      if (pick) {
        block[*pick] += target[k];
      } else {
        direct = false;
      }
    }
    if (!direct) {
      auto x = zlinalg::solve(p, target);
      if (!x) {
        throw Error(ErrorCode::LiftFailed,
                    "no preimage over " + f_->presheaf().scenario().open_name(level[s].open));
      }
      block = std::move(*x);
    }
    std::copy(block.begin(), block.end(), out.begin() + static_cast<std::ptrdiff_t>(dst.offset(s)));
  }
  return out;
}

IntVector ContextAnalysis::random_lift(std::size_t q, const IntVector& rel_cochain, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coeff(-2, 2);
  IntVector w(ker_->space(q).dimension());
  for (auto& x : w) x = coeff(rng);
  return lift(q, rel_cochain) + include(q, w);
}

std::optional<IntVector> ContextAnalysis::kernel_coordinates(std::size_t q, const IntVector& cochain) const {
  const CochainSpace& src = f_->space(q);
  const CochainSpace& dst = ker_->space(q);
  if (cochain.size() != src.dimension()) throw Error(ErrorCode::DimensionMismatch, "cochain length");
  const auto& level = f_->nerve().level(q);
  IntVector out(dst.dimension());
  for (std::size_t s = 0; s < level.size(); ++s) {
    auto x = inclusion_echelons_.at(level[s].open).solve(src.value(cochain, s));
    if (!x) return std::nullopt;
    std::copy(x->begin(), x->end(), out.begin() + static_cast<std::ptrdiff_t>(dst.offset(s)));
  }
  return out;
}

ObstructionResult ContextAnalysis::gamma(const IntVector& s0, std::size_t q) const {
  return gamma_with_lift(s0, q, lift(2 * q, psi(s0, 2 * q)));
}

ObstructionResult ContextAnalysis::gamma_with_lift(const IntVector& s0, std::size_t q, const IntVector& r) const {
  const std::size_t d = 2 * q;
  IntVector c = psi(s0, d);
  CTXCOHOM_ASSERT(rel_->is_cocycle(d, c), "psi in even degree is not a cocycle");
  if (project(d, r) != c) throw Error(ErrorCode::InvalidArgument, "cochain is not a lift of psi(s0)");

  IntVector z_full = f_->apply(d, r);
  auto z = kernel_coordinates(d + 1, z_full);
  CTXCOHOM_ASSERT(z.has_value(), "coboundary of the lift is not killed by p");
  CTXCOHOM_ASSERT(ker_->is_cocycle(d + 1, *z), "obstruction representative is not a cocycle");

  ObstructionResult out;
  out.context = c0_;
  out.level = q;
  if (auto w = ker_->primitive(d + 1, *z)) {
    out.vanishes = true;
    out.witness = r - include(d, *w);
    CTXCOHOM_ASSERT(f_->is_cocycle(d, out.witness) && project(d, out.witness) == c,
                    "witness family does not solve the vanishing system");
  } else {
    out.vanishes = false;
    out.rational_only = zlinalg::rationally_solvable(ker_->coboundary(d), *z);
    out.witness = std::move(*z);
  }
  return out;
}

const zlinalg::ColumnEchelon& ContextAnalysis::family_system(std::size_t q) const {
  std::lock_guard lock(mutex_);
  auto& slot = family_systems_[q];
  if (!slot) {
    IntMatrix a = IntMatrix::vstack(f_->coboundary(2 * q), projection_matrix(2 * q));
    slot = std::make_unique<zlinalg::ColumnEchelon>(a, f_->parallel());
  }
  return *slot;
}

std::optional<IntVector> ContextAnalysis::vanishes_via_family(const IntVector& s0, std::size_t q) const {
  IntVector c = psi(s0, 2 * q);
  IntVector rhs(f_->space(2 * q + 1).dimension());
  rhs.insert(rhs.end(), c.begin(), c.end());
  return family_system(q).solve(rhs);
}

IntVector ContextAnalysis::middle_vertex_family(const IntVector& s0) const {
  IntVector r = lift(0, psi(s0, 0));
  const AbPresheaf& base = f_->presheaf();
  const CochainSpace& zero = f_->space(0);
  const CochainSpace& two = f_->space(2);
  const auto& level = f_->nerve().level(2);
  IntVector out(two.dimension());
  for (std::size_t s = 0; s < level.size(); ++s) {
    const std::size_t j = level[s].contexts[1];
    IntVector v = base.restriction(level[s].open, base.scenario().context(j).set) * zero.value(r, j);
    std::copy(v.begin(), v.end(), out.begin() + static_cast<std::ptrdiff_t>(two.offset(s)));
  }
  return out;
}

IntMatrix ContextAnalysis::gamma_kernel() const {
  IntMatrix families = f_->coboundary_echelon(0).kernel_basis();
  const CochainSpace& zero = f_->space(0);
  return zlinalg::image_basis(families.block(zero.offset(c0_), 0, zero.block_size(c0_), families.cols()));
}

void ContextAnalysis::prepare(std::size_t q_max) const {
  f_->coboundary_echelon(0);
  for (std::size_t q = 0; q <= q_max; ++q) {
    ker_->coboundary_echelon(2 * q);
    family_system(q);
  }
}

// ---------------------------------------------------------------------------

const ObstructionResult& ClassificationReport::at(std::size_t context, std::size_t section, std::size_t level) const {
  for (const auto& r : table) {
    if (r.context == context && r.section == section && r.level == level) return r;
  }
  throw Error(ErrorCode::IndexOutOfRange, "no such obstruction entry");
}

Analyzer::Analyzer(const EmpiricalModel& model, std::size_t q_max, bool parallel)
    : model_(model), q_max_(q_max), parallel_(parallel) {
  f_ = free_presheaf(model_);
  nerve_ = std::make_shared<Nerve>(model_.scenario(), 2 * q_max_ + 2);
  complex_ = std::make_shared<CechComplex>(f_, nerve_, parallel_);
  for (std::size_t c = 0; c < model_.scenario().num_contexts(); ++c) {
    contexts_.push_back(std::make_unique<ContextAnalysis>(complex_, c));
    contexts_.back()->prepare(q_max_);
  }
}

IntVector Analyzer::section_vector(std::size_t c0, std::size_t section) const {
  const std::size_t n = model_.support(c0).size();
  if (section >= n) throw Error(ErrorCode::SectionIndexOutOfRange, "section index " + std::to_string(section));
  return zlinalg::unit_vector(n, section);
}

ObstructionResult Analyzer::obstruction(std::size_t c0, std::size_t section, std::size_t level) const {
  if (level > q_max_) throw Error(ErrorCode::IndexOutOfRange, "level exceeds q_max");
  ObstructionResult r = context(c0).gamma(section_vector(c0, section), level);
  r.section = section;
  return r;
}

namespace {

bool separates_sections(const IntMatrix& kernel) {
  const std::size_t n = kernel.rows();
  zlinalg::ColumnEchelon ech(kernel, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (ech.in_image(zlinalg::unit_vector(n, i))) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (ech.in_image(zlinalg::unit_vector(n, i) - zlinalg::unit_vector(n, j))) return false;
    }
  }
  return true;
}

}  // namespace

ClassificationReport classify(const Analyzer& analyzer) {
  const EmpiricalModel& model = analyzer.model();
  const Scenario& sc = model.scenario();
  const std::size_t levels = analyzer.q_max() + 1;

  struct Task {
    std::size_t context, section, level;
  };
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < sc.num_contexts(); ++c)
    for (std::size_t s = 0; s < model.support(c).size(); ++s)
      for (std::size_t q = 0; q < levels; ++q) tasks.push_back({c, s, q});

  ClassificationReport out;
  out.q_max = analyzer.q_max();
  out.table.resize(tasks.size());
  std::vector<char> agree(tasks.size(), 1);
  std::exception_ptr failure;
  const auto n = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic) if (analyzer.parallel())
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      const Task& t = tasks[static_cast<std::size_t>(i)];
      auto& r = out.table[static_cast<std::size_t>(i)];
      r = analyzer.obstruction(t.context, t.section, t.level);
      auto family = analyzer.context(t.context).vanishes_via_family(analyzer.section_vector(t.context, t.section), t.level);
      agree[static_cast<std::size_t>(i)] = family.has_value() == r.vanishes;
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    CTXCOHOM_ASSERT(agree[i], "snake verdict disagrees with the family system at " +
                                  sc.context_name(tasks[i].context) + " section " + std::to_string(tasks[i].section) +
                                  " level " + std::to_string(tasks[i].level));
  }

  out.logical = classify_logical(model);
  out.all_gamma_injective = true;
  bool some_injective = false;
  for (std::size_t c = 0; c < sc.num_contexts(); ++c) {
    ContextSummary cs;
    cs.context = c;
    cs.gamma_kernel = analyzer.context(c).gamma_kernel();
    cs.gamma_injective = cs.gamma_kernel.cols() == 0;
    cs.gamma_separates_sections = separates_sections(cs.gamma_kernel);
    out.all_gamma_injective = out.all_gamma_injective && cs.gamma_injective;
    some_injective = some_injective || cs.gamma_injective;
    out.contexts.push_back(std::move(cs));
  }

  out.clc.assign(levels, false);
  out.csc.assign(levels, true);
  for (const auto& r : out.table) {
    if (!r.vanishes) out.clc[r.level] = true;
    if (r.vanishes) out.csc[r.level] = false;
  }

  for (std::size_t i = 0; i + 1 < out.table.size(); ++i) {
    const auto& lo = out.table[i];
    const auto& hi = out.table[i + 1];
    if (hi.context == lo.context && hi.section == lo.section && hi.level == lo.level + 1) {
      CTXCOHOM_ASSERT(hi.vanishes || !lo.vanishes, "level hierarchy violated at " + sc.context_name(lo.context));
    }
  }
  CTXCOHOM_ASSERT(!out.clc[0] || out.logical.is_lc, "cohomological contextuality without logical contextuality");
  CTXCOHOM_ASSERT(!out.csc[0] || out.logical.is_sc, "cohomological strong contextuality without strong contextuality");
  CTXCOHOM_ASSERT(!out.csc[0] || out.clc[0], "CSC without CLC");
  CTXCOHOM_ASSERT(!out.all_gamma_injective || out.csc[0], "every gamma injective but some section unobstructed");
  CTXCOHOM_ASSERT(!some_injective || out.logical.is_sc, "an injective gamma on a model with a global section");
  return out;
}

ClassificationReport classify(const EmpiricalModel& model, std::size_t q_max) {
  return classify(Analyzer(model, q_max, true));
}

ClassificationReport serial::classify(const EmpiricalModel& model, std::size_t q_max) {
  return ctxcohom::classify(Analyzer(model, q_max, false));
}

}  // namespace ctxcohom
