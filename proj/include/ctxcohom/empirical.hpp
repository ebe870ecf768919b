#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctxcohom/errors.hpp"
#include "ctxcohom/scenario.hpp"

namespace ctxcohom {

/// An assignment of outcomes to the measurements of `domain`. `values` has one
/// slot per measurement of the scenario; slots outside the domain hold -1.
/// Ordering is lexicographic on `values`, i.e. on the outcome tuple read in
/// canonical measurement order.
struct Section {
  MeasurementSet domain;
  std::vector<int> values;

  Section restrict_to(MeasurementSet u) const;
  bool operator==(const Section&) const = default;
  auto operator<=>(const Section& o) const {
    if (auto c = domain <=> o.domain; c != 0) return c;
    return values <=> o.values;
  }
};

/// Outcome labels concatenated in the order of `members`, e.g. "01".
std::string section_string(const Scenario& scenario, const Section& s, const std::vector<std::size_t>& members);
/// "(a1,b1)->(0,1)" style label in canonical order.
std::string section_label(const Scenario& scenario, const Section& s);

class SignallingError : public Error {
 public:
  SignallingError(const std::string& what, MeasurementSet open, std::size_t first, std::size_t second)
      : Error(ErrorCode::SignallingDetected, what), open_(open), first_(first), second_(second) {}
  MeasurementSet open() const { return open_; }
  std::size_t first_context() const { return first_; }
  std::size_t second_context() const { return second_; }

 private:
  MeasurementSet open_;
  std::size_t first_, second_;
};

struct LoadOptions {
  /// Check no-signalling on every subset beneath the cover rather than only on
  /// the opens the nerve produces.
  bool strict = false;
};

/// Possibilistic empirical model: for each context the set of possible
/// sections, sorted canonically. Immutable after load.
class EmpiricalModel {
 public:
  const Scenario& scenario() const { return scenario_; }
  const std::vector<Section>& support(std::size_t context) const { return support_.at(context); }
  const std::vector<std::vector<Section>>& supports() const { return support_; }
  std::size_t total_sections() const;

 private:
  friend EmpiricalModel load_model(Scenario, std::vector<std::vector<Section>>, const LoadOptions&);
  EmpiricalModel(Scenario s, std::vector<std::vector<Section>> sup) : scenario_(std::move(s)), support_(std::move(sup)) {}

  Scenario scenario_;
  std::vector<std::vector<Section>> support_;
};

/// Validates conditions 1-2 (nonempty supports, flasque beneath the cover).
/// Throws EmptyContextSupport, SignallingError or OutcomeOutOfRange.
EmpiricalModel load_model(Scenario scenario, std::vector<std::vector<Section>> table, const LoadOptions& options = {});

/// Builds a section on a context from outcome indices in context member order.
Section make_section(const Scenario& scenario, std::size_t context, const std::vector<int>& outcomes);

/// {s|_U : s in S(C)} for the first context C containing U. Throws
/// NotBeneathCover.
std::vector<Section> sections_at(const EmpiricalModel& model, MeasurementSet u);

/// Every compatible family, glued into an assignment on X.
std::vector<Section> global_sections(const EmpiricalModel& model);

struct SectionRef {
  std::size_t context;
  std::size_t index;  // into model.support(context)
  bool operator==(const SectionRef&) const = default;
  auto operator<=>(const SectionRef&) const = default;
};

struct LogicalClassification {
  std::vector<SectionRef> lc_sections;
  std::vector<Section> global_sections;
  bool is_lc = false;
  bool is_sc = false;
};

LogicalClassification classify_logical(const EmpiricalModel& model);

struct RandomModelOptions {
  double density = 0.6;
  int max_retries = 1000;
};

/// Deterministic in `seed`. Samples each context's support, prunes sections
/// that have no partner in an overlapping context until no-signalling holds,
/// and retries when a support empties. Throws GenerationFailed.
EmpiricalModel random_model(const Scenario& scenario, std::uint64_t seed, const RandomModelOptions& options = {});

}  // namespace ctxcohom
