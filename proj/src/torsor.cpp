#include "ctxcohom/torsor.hpp"

#include <exception>

#include "ctxcohom/errors.hpp"

namespace ctxcohom {

namespace {

IntVector slice(const IntVector& v, std::size_t from, std::size_t to) {
  return IntVector(v.begin() + static_cast<std::ptrdiff_t>(from), v.begin() + static_cast<std::ptrdiff_t>(to));
}

void paste(IntVector& dst, std::size_t at, const IntVector& src) {
  std::copy(src.begin(), src.end(), dst.begin() + static_cast<std::ptrdiff_t>(at));
}

}  // namespace

CocycleTorsor::CocycleTorsor(ComplexPtr base, IntVector z) : base_(std::move(base)), z_(std::move(z)) {
  if (z_.size() != base_->space(1).dimension()) throw Error(ErrorCode::DimensionMismatch, "1-cochain length");
  if (!base_->is_cocycle(1, z_)) throw Error(ErrorCode::NotACocycle, "torsor data must be a 1-cocycle");
  for (auto u : presheaf().opens())
    if (!u.empty()) opens_.push_back(u);

  std::vector<TorsorDescriptor> built(opens_.size());
  std::exception_ptr failure;
  const auto n = static_cast<std::ptrdiff_t>(opens_.size());
#pragma omp parallel for schedule(dynamic) if (base_->parallel())
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      built[static_cast<std::size_t>(i)] = build(opens_[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  for (auto& d : built) {
    MeasurementSet u = d.open;
    descriptors_.emplace(u, std::move(d));
  }
}

TorsorDescriptor CocycleTorsor::build(MeasurementSet u) const {
  const AbPresheaf& f = presheaf();
  const Scenario& sc = f.scenario();
  const Nerve& nerve = base_->nerve();
  const CochainSpace& one = base_->space(1);

  TorsorDescriptor d;
  d.open = u;
  d.offsets.push_back(0);
  for (std::size_t i = 0; i < sc.num_contexts(); ++i) {
    auto ci = sc.context(i).set & u;
    if (ci.empty()) continue;
    d.components.push_back(i);
    d.offsets.push_back(d.offsets.back() + f.rank(ci));
  }

  struct Pair {
    std::size_t a, b;
    MeasurementSet w;
  };
  std::vector<Pair> pairs;
  std::size_t rows = 0;
  for (std::size_t a = 0; a < d.components.size(); ++a) {
    for (std::size_t b = a + 1; b < d.components.size(); ++b) {
      auto w = sc.context(d.components[a]).set & sc.context(d.components[b]).set & u;
      if (w.empty()) continue;
      pairs.push_back({a, b, w});
      rows += f.rank(w);
    }
  }

  d.system = IntMatrix(rows, d.dimension());
  d.rhs = IntVector(rows);
  std::size_t row = 0;
  for (const auto& [a, b, w] : pairs) {
    const std::size_t i = d.components[a], j = d.components[b];
    const auto ci = sc.context(i).set, cj = sc.context(j).set;
    d.system.add_block(row, d.offsets[a], f.restriction(w, ci & u), 1);
    d.system.add_block(row, d.offsets[b], f.restriction(w, cj & u), -1);
    auto idx = nerve.index_of({i, j});
    CTXCOHOM_ASSERT(idx.has_value(), "overlapping contexts missing from the nerve");
    paste(d.rhs, row, f.restriction(w, ci & cj) * one.value(z_, *idx));
    row += f.rank(w);
  }

  zlinalg::ColumnEchelon ech(d.system, false);
  d.particular = ech.solve(d.rhs);
  d.homogeneous = ech.kernel_basis();

  d.action = IntMatrix(d.dimension(), f.rank(u));
  for (std::size_t a = 0; a < d.components.size(); ++a) {
    d.action.add_block(d.offsets[a], 0, f.restriction(sc.context(d.components[a]).set & u, u), -1);
  }
  return d;
}

const TorsorDescriptor& CocycleTorsor::descriptor(MeasurementSet u) const {
  auto it = descriptors_.find(u);
  if (it == descriptors_.end()) {
    throw Error(ErrorCode::UnknownOpen, "torsor has no sections over " + presheaf().scenario().open_name(u));
  }
  return it->second;
}

std::size_t CocycleTorsor::component_index(const TorsorDescriptor& d, std::size_t context) const {
  for (std::size_t a = 0; a < d.components.size(); ++a)
    if (d.components[a] == context) return a;
  throw Error(ErrorCode::IndexOutOfRange, "context does not meet the open");
}

bool CocycleTorsor::contains(MeasurementSet u, const IntVector& t) const {
  const auto& d = descriptor(u);
  return t.size() == d.dimension() && d.system * t == d.rhs;
}

IntVector CocycleTorsor::act(MeasurementSet u, const IntVector& g, const IntVector& t) const {
  const auto& d = descriptor(u);
  if (g.size() != d.action.cols() || t.size() != d.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "action operands");
  }
  return t + d.action * g;
}

IntVector CocycleTorsor::restrict(MeasurementSet u, MeasurementSet v, const IntVector& t) const {
  if (!u.subset_of(v)) throw Error(ErrorCode::InvalidArgument, "restriction needs U ⊆ V");
  const auto& du = descriptor(u);
  const auto& dv = descriptor(v);
  if (t.size() != dv.dimension()) throw Error(ErrorCode::DimensionMismatch, "torsor element length");
  const Scenario& sc = presheaf().scenario();
  IntVector out(du.dimension());
  for (std::size_t a = 0; a < du.components.size(); ++a) {
    const std::size_t i = du.components[a];
    const std::size_t b = component_index(dv, i);
    const auto ci = sc.context(i).set;
    paste(out, du.offsets[a], presheaf().restriction(ci & u, ci & v) * slice(t, dv.offsets[b], dv.offsets[b + 1]));
  }
  return out;
}

bool CocycleTorsor::simply_transitive_at(MeasurementSet u) const {
  const auto& d = descriptor(u);
  return zlinalg::rank(d.action) == d.action.cols() && zlinalg::same_lattice(d.action, d.homogeneous);
}

IntVector CocycleTorsor::canonical_section(std::size_t k) const {
  const Scenario& sc = presheaf().scenario();
  const MeasurementSet ck = sc.context(k).set;
  const auto& d = descriptor(ck);
  const CochainSpace& one = base_->space(1);
  IntVector out(d.dimension());
  for (std::size_t a = 0; a < d.components.size(); ++a) {
    auto idx = base_->nerve().index_of({d.components[a], k});
    CTXCOHOM_ASSERT(idx.has_value(), "overlapping contexts missing from the nerve");
    paste(out, d.offsets[a], one.value(z_, *idx));
  }
  return out;
}

std::vector<IntVector> CocycleTorsor::canonical_trivialization() const {
  std::vector<IntVector> out;
  for (std::size_t k = 0; k < presheaf().scenario().num_contexts(); ++k) out.push_back(canonical_section(k));
  return out;
}

IntVector CocycleTorsor::trivializing_map(std::size_t j, MeasurementSet u, const IntVector& g) const {
  const Scenario& sc = presheaf().scenario();
  const MeasurementSet cj = sc.context(j).set;
  if (!u.subset_of(cj)) throw Error(ErrorCode::InvalidArgument, "trivializing map needs U ⊆ C_j");
  const auto& d = descriptor(u);
  if (g.size() != presheaf().rank(u)) throw Error(ErrorCode::DimensionMismatch, "element of F(U)");
  const CochainSpace& one = base_->space(1);
  IntVector out(d.dimension());
  for (std::size_t a = 0; a < d.components.size(); ++a) {
    const std::size_t i = d.components[a];
    const auto ci = sc.context(i).set;
    auto idx = base_->nerve().index_of({i, j});
    CTXCOHOM_ASSERT(idx.has_value(), "overlapping contexts missing from the nerve");
    IntVector zij = presheaf().restriction(ci & u, ci & cj) * one.value(z_, *idx);
    paste(out, d.offsets[a], zij - presheaf().restriction(ci & u, u) * g);
  }
  return out;
}

IntVector CocycleTorsor::trivializing_inverse(std::size_t j, MeasurementSet u, const IntVector& t) const {
  const auto& d = descriptor(u);
  if (!u.subset_of(presheaf().scenario().context(j).set)) {
    throw Error(ErrorCode::InvalidArgument, "trivializing map needs U ⊆ C_j");
  }
  if (t.size() != d.dimension()) throw Error(ErrorCode::DimensionMismatch, "torsor element length");
  const std::size_t a = component_index(d, j);
  return -slice(t, d.offsets[a], d.offsets[a + 1]);
}

CocycleTorsor torsor_from_cocycle(ComplexPtr base, IntVector z) { return CocycleTorsor(std::move(base), std::move(z)); }

IntVector cocycle_from_torsor(const CocycleTorsor& t, const std::vector<IntVector>& trivialization) {
  const AbPresheaf& f = t.presheaf();
  const Scenario& sc = f.scenario();
  if (trivialization.size() != sc.num_contexts()) {
    throw Error(ErrorCode::DimensionMismatch, "trivialization needs one element per context");
  }
  for (std::size_t k = 0; k < sc.num_contexts(); ++k) {
    if (!t.contains(sc.context(k).set, trivialization[k])) {
      throw Error(ErrorCode::NotASection, "trivialization entry " + sc.context_name(k) + " is not in T(C)");
    }
  }
  const CochainSpace& one = t.complex().space(1);
  const auto& level = t.complex().nerve().level(1);
  IntVector out(one.dimension());
  for (std::size_t s = 0; s < level.size(); ++s) {
    const std::size_t i = level[s].contexts[0], j = level[s].contexts[1];
    const MeasurementSet w = level[s].open;
    IntVector diff = t.restrict(w, sc.context(i).set, trivialization[i]) -
                     t.restrict(w, sc.context(j).set, trivialization[j]);
    const auto& d = t.descriptor(w);
    zlinalg::ColumnEchelon ech(d.action, false);
    auto g = ech.solve(diff);
    if (!g || ech.rank() != d.action.cols()) {
      throw Error(ErrorCode::NonUniqueSolution,
                  "transition over " + sc.open_name(w) + (g ? " is not unique" : " does not exist"));
    }
    paste(out, one.offset(s), *g);
  }
  CTXCOHOM_ASSERT(t.complex().is_cocycle(1, out), "recovered transition functions are not a cocycle");
  return out;
}

IntVector torsor_class(const CocycleTorsor& t) { return cocycle_from_torsor(t, t.canonical_trivialization()); }

bool is_trivial(const CocycleTorsor& t) { return t.nonempty(t.presheaf().scenario().all()); }

namespace {

void require_same_base(const CocycleTorsor& a, const CocycleTorsor& b) {
  if (a.complex_ptr() != b.complex_ptr()) throw Error(ErrorCode::BaseMismatch, "torsors over different presheaves");
}

}  // namespace

CocycleTorsor torsor_add(const CocycleTorsor& a, const CocycleTorsor& b) {
  require_same_base(a, b);
  return CocycleTorsor(a.complex_ptr(), a.cocycle() + b.cocycle());
}

CocycleTorsor torsor_negate(const CocycleTorsor& a) { return CocycleTorsor(a.complex_ptr(), -a.cocycle()); }

bool isomorphic(const CocycleTorsor& a, const CocycleTorsor& b) {
  require_same_base(a, b);
  return a.complex().class_is_zero(1, torsor_class(a) - torsor_class(b));
}

IntVector comparison_map(const CocycleTorsor& from, const CocycleTorsor& to, const IntVector& h, MeasurementSet u,
                         const IntVector& t) {
  require_same_base(from, to);
  if (to.cocycle() != from.cocycle() + from.complex().apply(0, h)) {
    throw Error(ErrorCode::InvalidArgument, "cocycles do not differ by the coboundary of h");
  }
  const auto& d = from.descriptor(u);
  if (t.size() != d.dimension()) throw Error(ErrorCode::DimensionMismatch, "torsor element length");
  const AbPresheaf& f = from.presheaf();
  const Scenario& sc = f.scenario();
  const CochainSpace& zero = from.complex().space(0);
  IntVector out(d.dimension());
  for (std::size_t a = 0; a < d.components.size(); ++a) {
    const std::size_t i = d.components[a];
    const auto ci = sc.context(i).set;
    IntVector hi = f.restriction(ci & u, ci) * zero.value(h, i);
    paste(out, d.offsets[a], slice(t, d.offsets[a], d.offsets[a + 1]) - hi);
  }
  return out;
}

}  // namespace ctxcohom
