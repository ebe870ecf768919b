#include "ctxcohom/scenario.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "ctxcohom/errors.hpp"

namespace ctxcohom {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotACover: return "NotACover";
    case ErrorCode::NotAnAntichain: return "NotAnAntichain";
    case ErrorCode::DisconnectedCover: return "DisconnectedCover";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::EmptyContextSupport: return "EmptyContextSupport";
    case ErrorCode::SignallingDetected: return "SignallingDetected";
    case ErrorCode::OutcomeOutOfRange: return "OutcomeOutOfRange";
    case ErrorCode::NotBeneathCover: return "NotBeneathCover";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotASublattice: return "NotASublattice";
    case ErrorCode::SurjectivityViolated: return "SurjectivityViolated";
    case ErrorCode::NotACocycle: return "NotACocycle";
    case ErrorCode::LiftFailed: return "LiftFailed";
    case ErrorCode::UnknownOpen: return "UnknownOpen";
    case ErrorCode::NotASection: return "NotASection";
    case ErrorCode::NonUniqueSolution: return "NonUniqueSolution";
    case ErrorCode::BaseMismatch: return "BaseMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownContext: return "UnknownContext";
    case ErrorCode::SectionIndexOutOfRange: return "SectionIndexOutOfRange";
    case ErrorCode::UnsupportedTopology: return "UnsupportedTopology";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InternalAssertion: return "InternalAssertion";
  }
  return "Unknown";
}

std::vector<std::size_t> MeasurementSet::indices() const {
  std::vector<std::size_t> out;
  out.reserve(size());
  for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
  }
  return out;
}

Scenario Scenario::build(std::vector<std::string> measurements,
                         const std::vector<std::vector<std::string>>& contexts,
                         std::vector<std::string> outcomes) {
  if (measurements.empty() || contexts.empty() || outcomes.empty()) {
    throw Error(ErrorCode::InvalidArgument, "scenario needs measurements, contexts and outcomes");
  }
  if (measurements.size() > 64) {
    throw Error(ErrorCode::InvalidArgument, "at most 64 measurements are supported");
  }
  auto check_unique = [](const std::vector<std::string>& labels, const char* what) {
    std::set<std::string> seen;
    for (const auto& l : labels) {
      if (!seen.insert(l).second) {
        throw Error(ErrorCode::DuplicateLabel, std::string(what) + " label '" + l + "' repeated");
      }
    }
  };
  check_unique(measurements, "measurement");
  check_unique(outcomes, "outcome");

  Scenario s;
  s.measurements_ = std::move(measurements);
  s.outcomes_ = std::move(outcomes);

  for (const auto& ctx : contexts) {
    if (ctx.empty()) throw Error(ErrorCode::InvalidArgument, "empty context");
    Context c;
    for (const auto& label : ctx) {
      auto m = s.measurement_index(label);
      if (!m) throw Error(ErrorCode::UnknownLabel, "context mentions unknown measurement '" + label + "'");
      if (c.set.contains(*m)) {
        throw Error(ErrorCode::DuplicateLabel, "measurement '" + label + "' repeated inside a context");
      }
      c.members.push_back(*m);
      c.set = c.set | MeasurementSet::singleton(*m);
    }
    s.contexts_.push_back(std::move(c));
  }

  MeasurementSet covered;
  for (const auto& c : s.contexts_) covered = covered | c.set;
  if (covered != s.all()) {
    std::vector<std::string> missing;
    for (std::size_t m : (s.all() & MeasurementSet(~covered.bits())).indices()) {
      missing.push_back(s.measurements_[m]);
    }
    std::ostringstream os;
    os << "measurements not in any context:";
    for (const auto& m : missing) os << ' ' << m;
    throw Error(ErrorCode::NotACover, os.str());
  }

  for (std::size_t i = 0; i < s.contexts_.size(); ++i) {
    for (std::size_t j = 0; j < s.contexts_.size(); ++j) {
      if (i != j && s.contexts_[i].set.subset_of(s.contexts_[j].set)) {
        throw Error(ErrorCode::NotAnAntichain,
                    "context " + s.context_name(i) + " is contained in " + s.context_name(j));
      }
    }
  }

  // connectivity by flood fill over nonempty pairwise intersections
  std::vector<bool> reached(s.contexts_.size(), false);
  std::vector<std::size_t> stack{0};
  reached[0] = true;
  while (!stack.empty()) {
    std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < s.contexts_.size(); ++j) {
      if (!reached[j] && !(s.contexts_[i].set & s.contexts_[j].set).empty()) {
        reached[j] = true;
        stack.push_back(j);
      }
    }
  }
  for (std::size_t j = 0; j < reached.size(); ++j) {
    if (!reached[j]) {
      throw Error(ErrorCode::DisconnectedCover,
                  "context " + s.context_name(j) + " is not connected to " + s.context_name(0));
    }
  }
  return s;
}

std::optional<std::size_t> Scenario::measurement_index(const std::string& label) const {
  auto it = std::find(measurements_.begin(), measurements_.end(), label);
  if (it == measurements_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - measurements_.begin());
}

std::optional<std::size_t> Scenario::outcome_index(const std::string& label) const {
  auto it = std::find(outcomes_.begin(), outcomes_.end(), label);
  if (it == outcomes_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - outcomes_.begin());
}

std::optional<std::size_t> Scenario::find_context(const std::string& spec) const {
  std::string body = spec;
  if (body.size() >= 2 && (body.front() == '(' || body.front() == '{')) {
    body = body.substr(1, body.size() - 2);
  }
  MeasurementSet wanted;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    auto m = measurement_index(item);
    if (!m) return std::nullopt;
    wanted = wanted | MeasurementSet::singleton(*m);
  }
  for (std::size_t i = 0; i < contexts_.size(); ++i) {
    if (contexts_[i].set == wanted) return i;
  }
  return std::nullopt;
}

std::string Scenario::context_name(std::size_t i) const {
  std::string out = "(";
  const auto& c = contexts_.at(i);
  for (std::size_t k = 0; k < c.members.size(); ++k) {
    if (k) out += ',';
    out += measurements_[c.members[k]];
  }
  return out + ")";
}

std::string Scenario::open_name(MeasurementSet u) const {
  std::string out = "{";
  bool first = true;
  for (std::size_t m : u.indices()) {
    if (!first) out += ',';
    out += measurements_[m];
    first = false;
  }
  return out + "}";
}

bool Scenario::beneath_cover(MeasurementSet u) const { return containing_context(u).has_value(); }

std::optional<std::size_t> Scenario::containing_context(MeasurementSet u) const {
  for (std::size_t i = 0; i < contexts_.size(); ++i) {
    if (u.subset_of(contexts_[i].set)) return i;
  }
  return std::nullopt;
}

std::vector<MeasurementSet> Scenario::relevant_opens() const {
  std::set<MeasurementSet> family;
  for (const auto& c : contexts_) family.insert(c.set);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<MeasurementSet> current(family.begin(), family.end());
    for (std::size_t i = 0; i < current.size(); ++i) {
      for (std::size_t j = i + 1; j < current.size(); ++j) {
        if (family.insert(current[i] & current[j]).second) grew = true;
      }
    }
  }
  family.insert(MeasurementSet{});
  family.insert(all());
  std::vector<MeasurementSet> out(family.begin(), family.end());
  std::sort(out.begin(), out.end(), [](MeasurementSet a, MeasurementSet b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.bits() < b.bits();
  });
  return out;
}

MeasurementSet open_of(const Scenario& scenario, const std::vector<std::size_t>& contexts) {
  MeasurementSet u = scenario.all();
  for (std::size_t c : contexts) u = u & scenario.context(c).set;
  return u;
}

std::vector<Simplex> nerve(const Scenario& scenario, std::size_t q) {
  const std::size_t n = scenario.num_contexts();
  std::vector<Simplex> out;
  std::vector<std::size_t> tuple(q + 1, 0);
  // odometer over [0, n)^(q+1); the last coordinate runs fastest, which gives
  // lexicographic order
  while (true) {
    MeasurementSet u = open_of(scenario, tuple);
    if (!u.empty()) out.push_back(Simplex{tuple, u});
    std::size_t pos = q + 1;
    while (pos > 0) {
      --pos;
      if (++tuple[pos] < n) break;
      tuple[pos] = 0;
      if (pos == 0) return out;
    }
  }
}

Simplex face(const Scenario& scenario, const Simplex& sigma, std::size_t j) {
  if (sigma.contexts.size() < 2 || j >= sigma.contexts.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "face index " + std::to_string(j) + " out of range for a simplex of length " +
                                                std::to_string(sigma.contexts.size()));
  }
  Simplex out;
  out.contexts = sigma.contexts;
  out.contexts.erase(out.contexts.begin() + static_cast<std::ptrdiff_t>(j));
  out.open = open_of(scenario, out.contexts);
  return out;
}

namespace {

std::size_t encode(const std::vector<std::size_t>& tuple, std::size_t base) {
  std::size_t code = 0;
  for (std::size_t c : tuple) code = code * base + c;
  return code;
}

}  // namespace

Nerve::Nerve(const Scenario& scenario, std::size_t max_degree) : num_contexts_(scenario.num_contexts()) {
  for (std::size_t q = 0; q <= max_degree; ++q) {
    levels_.push_back(nerve(scenario, q));
    std::size_t slots = 1;
    for (std::size_t k = 0; k <= q; ++k) slots *= num_contexts_;
    std::vector<std::int64_t> table(slots, -1);
    const auto& lv = levels_.back();
    for (std::size_t i = 0; i < lv.size(); ++i) {
      table[encode(lv[i].contexts, num_contexts_)] = static_cast<std::int64_t>(i);
    }
    lookup_.push_back(std::move(table));
  }
}

const std::vector<Simplex>& Nerve::level(std::size_t q) const {
  if (q >= levels_.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "nerve level " + std::to_string(q) + " not materialized (max " + std::to_string(max_degree()) + ")");
  }
  return levels_[q];
}

std::optional<std::size_t> Nerve::index_of(const std::vector<std::size_t>& contexts) const {
  if (contexts.empty() || contexts.size() > levels_.size()) return std::nullopt;
  for (std::size_t c : contexts) {
    if (c >= num_contexts_) return std::nullopt;
  }
  std::int64_t pos = lookup_[contexts.size() - 1][encode(contexts, num_contexts_)];
  if (pos < 0) return std::nullopt;
  return static_cast<std::size_t>(pos);
}

std::size_t Nerve::face_index(std::size_t q, std::size_t index, std::size_t j) const {
  const auto& sigma = level(q).at(index);
  if (q == 0 || j > q) throw Error(ErrorCode::IndexOutOfRange, "face index out of range");
  std::vector<std::size_t> t = sigma.contexts;
  t.erase(t.begin() + static_cast<std::ptrdiff_t>(j));
  auto pos = index_of(t);
  CTXCOHOM_ASSERT(pos.has_value(), "face of a nerve simplex missing from the nerve");
  return *pos;
}

}  // namespace ctxcohom
