#include "ctxcohom/empirical.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

namespace ctxcohom {

Section Section::restrict_to(MeasurementSet u) const {
  Section out{domain & u, values};
  for (std::size_t m = 0; m < out.values.size(); ++m) {
    if (!out.domain.contains(m)) out.values[m] = -1;
  }
  return out;
}

std::string section_string(const Scenario& scenario, const Section& s, const std::vector<std::size_t>& members) {
  std::string out;
  for (std::size_t m : members) out += scenario.outcomes().at(static_cast<std::size_t>(s.values.at(m)));
  return out;
}

std::string section_label(const Scenario& scenario, const Section& s) {
  std::string lhs = "(", rhs = "(";
  bool first = true;
  for (std::size_t m : s.domain.indices()) {
    if (!first) {
      lhs += ',';
      rhs += ',';
    }
    lhs += scenario.measurements()[m];
    rhs += scenario.outcomes()[static_cast<std::size_t>(s.values[m])];
    first = false;
  }
  return lhs + ")->" + rhs + ")";
}

std::size_t EmpiricalModel::total_sections() const {
  std::size_t n = 0;
  for (const auto& s : support_) n += s.size();
  return n;
}

Section make_section(const Scenario& scenario, std::size_t context, const std::vector<int>& outcomes) {
  const auto& ctx = scenario.context(context);
  if (outcomes.size() != ctx.members.size()) {
    throw Error(ErrorCode::DimensionMismatch, "section for " + scenario.context_name(context) + " needs " +
                                                  std::to_string(ctx.members.size()) + " outcomes");
  }
  Section s{ctx.set, std::vector<int>(scenario.num_measurements(), -1)};
  for (std::size_t k = 0; k < outcomes.size(); ++k) s.values[ctx.members[k]] = outcomes[k];
  return s;
}

namespace {

std::vector<Section> restrict_all(const std::vector<Section>& sections, MeasurementSet u) {
  std::set<Section> out;
  for (const auto& s : sections) out.insert(s.restrict_to(u));
  return {out.begin(), out.end()};
}

// All nonempty subsets of U, used by strict checking.
std::vector<MeasurementSet> nonempty_subsets(MeasurementSet u) {
  std::vector<MeasurementSet> out;
  const std::uint64_t bits = u.bits();
  for (std::uint64_t sub = bits; sub != 0; sub = (sub - 1) & bits) out.emplace_back(sub);
  return out;
}

void check_no_signalling(const Scenario& scenario, const std::vector<std::vector<Section>>& support,
                         const std::vector<MeasurementSet>& opens) {
  for (MeasurementSet u : opens) {
    if (u.empty()) continue;
    std::optional<std::size_t> first;
    std::vector<Section> reference;
    for (std::size_t c = 0; c < scenario.num_contexts(); ++c) {
      if (!u.subset_of(scenario.context(c).set)) continue;
      auto here = restrict_all(support[c], u);
      if (!first) {
        first = c;
        reference = std::move(here);
      } else if (here != reference) {
        throw SignallingError("restrictions to " + scenario.open_name(u) + " differ between " +
                                  scenario.context_name(*first) + " and " + scenario.context_name(c),
                              u, *first, c);
      }
    }
  }
}

}  // namespace

EmpiricalModel load_model(Scenario scenario, std::vector<std::vector<Section>> table, const LoadOptions& options) {
  if (table.size() != scenario.num_contexts()) {
    throw Error(ErrorCode::DimensionMismatch, "support table needs one row per context");
  }
  for (std::size_t c = 0; c < table.size(); ++c) {
    const auto& ctx = scenario.context(c);
    for (const auto& s : table[c]) {
      if (s.domain != ctx.set || s.values.size() != scenario.num_measurements()) {
        throw Error(ErrorCode::InvalidArgument, "section listed under " + scenario.context_name(c) +
                                                    " has a different domain");
      }
      for (std::size_t m = 0; m < s.values.size(); ++m) {
        const int v = s.values[m];
        if (ctx.set.contains(m) ? (v < 0 || v >= static_cast<int>(scenario.num_outcomes())) : v != -1) {
          throw Error(ErrorCode::OutcomeOutOfRange,
                      "outcome index " + std::to_string(v) + " for measurement " + scenario.measurements()[m] +
                          " in context " + scenario.context_name(c));
        }
      }
    }
    std::sort(table[c].begin(), table[c].end());
    table[c].erase(std::unique(table[c].begin(), table[c].end()), table[c].end());
    if (table[c].empty()) {
      throw Error(ErrorCode::EmptyContextSupport, "context " + scenario.context_name(c) + " has no possible section");
    }
  }

  std::vector<MeasurementSet> opens;
  if (options.strict) {
    std::set<MeasurementSet> all;
    for (const auto& ctx : scenario.contexts())
      for (auto u : nonempty_subsets(ctx.set)) all.insert(u);
    opens.assign(all.begin(), all.end());
  } else {
    opens = scenario.relevant_opens();
  }
  check_no_signalling(scenario, table, opens);
  return EmpiricalModel(std::move(scenario), std::move(table));
}

std::vector<Section> sections_at(const EmpiricalModel& model, MeasurementSet u) {
  auto c = model.scenario().containing_context(u);
  if (!c) throw Error(ErrorCode::NotBeneathCover, model.scenario().open_name(u) + " lies in no context");
  return restrict_all(model.support(*c), u);
}

namespace {

// Depth-first over contexts; `assignment` holds outcomes fixed so far.
void extend(const EmpiricalModel& model, std::size_t c, std::vector<int>& assignment,
            std::vector<Section>& out) {
  const auto& sc = model.scenario();
  if (c == sc.num_contexts()) {
    out.push_back(Section{sc.all(), assignment});
    return;
  }
  for (const auto& s : model.support(c)) {
    bool agrees = true;
    for (std::size_t m : sc.context(c).members) {
      if (assignment[m] != -1 && assignment[m] != s.values[m]) {
        agrees = false;
        break;
      }
    }
    if (!agrees) continue;
    std::vector<std::size_t> fresh;
    for (std::size_t m : sc.context(c).members) {
      if (assignment[m] == -1) {
        assignment[m] = s.values[m];
        fresh.push_back(m);
      }
    }
    extend(model, c + 1, assignment, out);
    for (std::size_t m : fresh) assignment[m] = -1;
  }
}

}  // namespace

std::vector<Section> global_sections(const EmpiricalModel& model) {
  std::vector<int> assignment(model.scenario().num_measurements(), -1);
  std::vector<Section> out;
  extend(model, 0, assignment, out);
  std::sort(out.begin(), out.end());
  return out;
}

LogicalClassification classify_logical(const EmpiricalModel& model) {
  LogicalClassification out;
  out.global_sections = global_sections(model);
  const auto& sc = model.scenario();
  for (std::size_t c = 0; c < sc.num_contexts(); ++c) {
    std::set<Section> extendable;
    for (const auto& g : out.global_sections) extendable.insert(g.restrict_to(sc.context(c).set));
    const auto& sup = model.support(c);
    for (std::size_t i = 0; i < sup.size(); ++i) {
      if (!extendable.count(sup[i])) out.lc_sections.push_back(SectionRef{c, i});
    }
  }
  out.is_lc = !out.lc_sections.empty();
  out.is_sc = out.global_sections.empty();
  CTXCOHOM_ASSERT(out.is_sc == (out.lc_sections.size() == model.total_sections()),
                  "strong contextuality disagrees with the set of contextual sections");
  return out;
}

namespace {

std::vector<Section> all_sections(const Scenario& scenario, std::size_t context) {
  const auto& members = scenario.context(context).members;
  const std::size_t k = members.size();
  const int base = static_cast<int>(scenario.num_outcomes());
  std::vector<Section> out;
  std::vector<int> digits(k, 0);
  while (true) {
    out.push_back(make_section(scenario, context, digits));
    std::size_t pos = k;
    while (pos > 0) {
      --pos;
      if (++digits[pos] < base) break;
      digits[pos] = 0;
      if (pos == 0) {
        std::sort(out.begin(), out.end());
        return out;
      }
    }
  }
}

// Removes sections whose restriction to an overlap has no partner on the other
// side, until stable.
void prune_to_no_signalling(const Scenario& scenario, std::vector<std::vector<Section>>& support) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t c = 0; c < scenario.num_contexts(); ++c) {
      for (std::size_t d = 0; d < scenario.num_contexts(); ++d) {
        if (c == d) continue;
        MeasurementSet u = scenario.context(c).set & scenario.context(d).set;
        if (u.empty()) continue;
        auto partner = restrict_all(support[d], u);
        auto& mine = support[c];
        auto keep_end = std::stable_partition(mine.begin(), mine.end(), [&](const Section& s) {
          return std::binary_search(partner.begin(), partner.end(), s.restrict_to(u));
        });
        if (keep_end != mine.end()) {
          mine.erase(keep_end, mine.end());
          changed = true;
        }
      }
    }
  }
}

}  // namespace

EmpiricalModel random_model(const Scenario& scenario, std::uint64_t seed, const RandomModelOptions& options) {
  if (!(options.density > 0.0 && options.density <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "density must lie in (0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(options.density);
  for (int attempt = 0; attempt < options.max_retries; ++attempt) {
    std::vector<std::vector<Section>> support(scenario.num_contexts());
    for (std::size_t c = 0; c < scenario.num_contexts(); ++c) {
      for (auto& s : all_sections(scenario, c)) {
        if (keep(rng)) support[c].push_back(std::move(s));
      }
    }
    prune_to_no_signalling(scenario, support);
    if (std::any_of(support.begin(), support.end(), [](const auto& s) { return s.empty(); })) continue;
    return load_model(scenario, std::move(support));
  }
  throw Error(ErrorCode::GenerationFailed,
              "no no-signalling model after " + std::to_string(options.max_retries) + " draws");
}

}  // namespace ctxcohom
