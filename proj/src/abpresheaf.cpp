#include "ctxcohom/abpresheaf.hpp"

#include <algorithm>

#include "ctxcohom/errors.hpp"

namespace ctxcohom {

AbPresheaf::AbPresheaf(std::string name, Scenario scenario, std::map<MeasurementSet, Group> groups,
                       std::map<std::pair<MeasurementSet, MeasurementSet>, IntMatrix> restrictions)
    : name_(std::move(name)),
      scenario_(std::move(scenario)),
      groups_(std::move(groups)),
      restrictions_(std::move(restrictions)) {
  for (const auto& [u, g] : groups_) opens_.push_back(u);
  std::sort(opens_.begin(), opens_.end(), [](MeasurementSet a, MeasurementSet b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.bits() < b.bits();
  });
}

const AbPresheaf::Group& AbPresheaf::group(MeasurementSet u) const {
  auto it = groups_.find(u);
  if (it == groups_.end()) {
    throw Error(ErrorCode::UnknownOpen, name_ + " has no group at " + scenario_.open_name(u));
  }
  return it->second;
}

const IntMatrix& AbPresheaf::restriction(MeasurementSet u, MeasurementSet v) const {
  auto it = restrictions_.find({u, v});
  if (it == restrictions_.end()) {
    throw Error(ErrorCode::UnknownOpen,
                name_ + " has no restriction " + scenario_.open_name(v) + " -> " + scenario_.open_name(u));
  }
  return it->second;
}

const IntMatrix& PresheafMorphism::at(MeasurementSet u) const {
  auto it = components.find(u);
  if (it == components.end()) throw Error(ErrorCode::UnknownOpen, "morphism has no component there");
  return it->second;
}

namespace {

using RestrictionMap = std::map<std::pair<MeasurementSet, MeasurementSet>, IntMatrix>;

std::vector<std::pair<MeasurementSet, MeasurementSet>> comparable_pairs(const std::vector<MeasurementSet>& opens) {
  std::vector<std::pair<MeasurementSet, MeasurementSet>> out;
  for (auto u : opens)
    for (auto v : opens)
      if (u.subset_of(v)) out.emplace_back(u, v);
  return out;
}

IntMatrix section_restriction(const std::vector<Section>& target, const std::vector<Section>& source,
                              MeasurementSet u) {
  IntMatrix m(target.size(), source.size());
  for (std::size_t c = 0; c < source.size(); ++c) {
    auto r = source[c].restrict_to(u);
    auto it = std::lower_bound(target.begin(), target.end(), r);
    CTXCOHOM_ASSERT(it != target.end() && *it == r, "restricted section missing from the smaller open");
    m(static_cast<std::size_t>(it - target.begin()), c) = 1;
  }
  return m;
}

}  // namespace

PresheafPtr free_presheaf(const EmpiricalModel& model) {
  const Scenario& sc = model.scenario();
  const auto opens = sc.relevant_opens();
  std::map<MeasurementSet, std::vector<Section>> bases;
  std::map<MeasurementSet, AbPresheaf::Group> groups;
  for (auto u : opens) {
    if (!sc.beneath_cover(u)) continue;
    bases[u] = sections_at(model, u);
    AbPresheaf::Group g;
    g.rank = bases[u].size();
    for (const auto& s : bases[u]) g.labels.push_back(section_label(sc, s));
    groups[u] = std::move(g);
  }

  RestrictionMap restrictions;
  for (auto [u, v] : comparable_pairs(opens)) {
    if (bases.count(v)) restrictions[{u, v}] = section_restriction(bases.at(u), bases.at(v), u);
  }

  const MeasurementSet x = sc.all();
  if (!bases.count(x)) {
    // Gluing group at X: families (r_C) agreeing on every nonempty overlap.
    std::vector<std::size_t> offset(sc.num_contexts() + 1, 0);
    for (std::size_t i = 0; i < sc.num_contexts(); ++i) offset[i + 1] = offset[i] + groups.at(sc.context(i).set).rank;
    std::vector<std::pair<std::size_t, std::size_t>> overlaps;
    std::size_t nrows = 0;
    for (std::size_t i = 0; i < sc.num_contexts(); ++i) {
      for (std::size_t j = i + 1; j < sc.num_contexts(); ++j) {
        auto w = sc.context(i).set & sc.context(j).set;
        if (w.empty()) continue;
        overlaps.emplace_back(i, j);
        nrows += groups.at(w).rank;
      }
    }
    IntMatrix constraints(nrows, offset.back());
    std::size_t row = 0;
    for (auto [i, j] : overlaps) {
      auto ci = sc.context(i).set, cj = sc.context(j).set, w = ci & cj;
      constraints.add_block(row, offset[i], restrictions.at({w, ci}), 1);
      constraints.add_block(row, offset[j], restrictions.at({w, cj}), -1);
      row += groups.at(w).rank;
    }
    IntMatrix families = zlinalg::kernel_basis(constraints);
    AbPresheaf::Group gx;
    gx.rank = families.cols();
    for (std::size_t k = 0; k < gx.rank; ++k) gx.labels.push_back("family[" + std::to_string(k) + "]");
    groups[x] = std::move(gx);
    restrictions[{x, x}] = IntMatrix::identity(families.cols());
    for (auto u : opens) {
      if (u == x) continue;
      std::size_t k = *sc.containing_context(u);
      auto ck = sc.context(k).set;
      IntMatrix component = families.block(offset[k], 0, offset[k + 1] - offset[k], families.cols());
      restrictions[{u, x}] = restrictions.at({u, ck}) * component;
    }
  }
  return std::make_shared<AbPresheaf>("F", sc, std::move(groups), std::move(restrictions));
}

PresheafPtr restrict_presheaf(const AbPresheaf& f, std::size_t context) {
  const Scenario& sc = f.scenario();
  const MeasurementSet c0 = sc.context(context).set;
  std::map<MeasurementSet, AbPresheaf::Group> groups;
  for (auto u : f.opens()) groups[u] = f.group(u & c0);
  RestrictionMap restrictions;
  for (auto [u, v] : comparable_pairs(f.opens())) restrictions[{u, v}] = f.restriction(u & c0, v & c0);
  return std::make_shared<AbPresheaf>(f.name() + "|" + sc.context_name(context), sc, std::move(groups),
                                      std::move(restrictions));
}

PresheafMorphism projection_morphism(const AbPresheaf& f, std::size_t context) {
  const Scenario& sc = f.scenario();
  const MeasurementSet c0 = sc.context(context).set;
  PresheafMorphism p;
  for (auto u : f.opens()) {
    const IntMatrix& m = f.restriction(u & c0, u);
    // Above the cover the projection need not be onto; its image is exactly
    // the set of C0-components of compatible families.
    if (sc.beneath_cover(u) && !zlinalg::is_surjective(m)) {
      throw Error(ErrorCode::SurjectivityViolated,
                  "projection " + sc.open_name(u) + " -> " + sc.open_name(u & c0) + " is not onto");
    }
    p.components[u] = m;
  }
  return p;
}

KernelPresheaf kernel_presheaf(const AbPresheaf& f, const PresheafMorphism& p, std::size_t context) {
  const Scenario& sc = f.scenario();
  std::map<MeasurementSet, AbPresheaf::Group> groups;
  std::map<MeasurementSet, zlinalg::ColumnEchelon> echelons;
  PresheafMorphism inclusion;
  for (auto u : f.opens()) {
    IntMatrix k = zlinalg::kernel_basis(p.at(u));
    AbPresheaf::Group g;
    g.rank = k.cols();
    for (std::size_t i = 0; i < g.rank; ++i) g.labels.push_back("ker[" + std::to_string(i) + "]");
    groups[u] = std::move(g);
    echelons.emplace(u, zlinalg::ColumnEchelon(k));
    inclusion.components[u] = std::move(k);
  }
  RestrictionMap restrictions;
  for (auto [u, v] : comparable_pairs(f.opens())) {
    IntMatrix image = f.restriction(u, v) * inclusion.at(v);
    IntMatrix coords(groups.at(u).rank, groups.at(v).rank);
    const auto& ech = echelons.at(u);
    for (std::size_t c = 0; c < image.cols(); ++c) {
      auto x = ech.solve(image.column(c));
      CTXCOHOM_ASSERT(x.has_value(), "restriction does not preserve the kernel");
      for (std::size_t r = 0; r < coords.rows(); ++r) coords(r, c) = (*x)[r];
    }
    restrictions[{u, v}] = std::move(coords);
  }
  KernelPresheaf out;
  out.presheaf = std::make_shared<AbPresheaf>(f.name() + "~" + sc.context_name(context), sc, std::move(groups),
                                              std::move(restrictions));
  out.inclusion = std::move(inclusion);
  return out;
}

bool is_functorial(const AbPresheaf& f) {
  const auto& opens = f.opens();
  for (auto u : opens) {
    if (f.restriction(u, u) != IntMatrix::identity(f.rank(u))) return false;
  }
  for (auto u : opens)
    for (auto v : opens)
      for (auto w : opens) {
        if (!u.subset_of(v) || !v.subset_of(w)) continue;
        if (f.restriction(u, w) != f.restriction(u, v) * f.restriction(v, w)) return false;
      }
  return true;
}

bool is_natural(const PresheafMorphism& m, const AbPresheaf& source, const AbPresheaf& target) {
  for (auto u : source.opens())
    for (auto v : source.opens()) {
      if (!u.subset_of(v)) continue;
      if (m.at(u) * source.restriction(u, v) != target.restriction(u, v) * m.at(v)) return false;
    }
  return true;
}

}  // namespace ctxcohom
